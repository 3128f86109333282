//! Exact arithmetic substrate: scalar traits, big rationals, multiquadratic
//! number fields, finite fields, sparse polynomials, exact matrices, Smith
//! normal form, and finite quadratic forms.

pub mod finite;
pub mod fqf;
pub mod matrix;
pub mod multiquad;
pub mod poly;
pub mod rational;
pub mod snf;

pub use finite::{is_prime_u64, least_nonresidue, legendre_symbol, sqrt_mod, Fp, Fp2};
pub use fqf::Fqf;
pub use matrix::{mat_i64, symmetric_signature, Mat};
pub use multiquad::{Mq, QuadField};
pub use poly::{parse_poly, resultant, SparsePoly, UniPoly, MAX_VARS};
pub use rational::{parse_rat, rat, rat_int};
pub use snf::{nondegenerate_quotient_basis, smith_normal_form, unimodular_inverse, SnfResult};

use std::fmt::{Debug, Display};

/// Commutative ring scalar. The `ring_zero`/`ring_one` constructors take a
/// sample element so that types carrying runtime context (a modulus, a field
/// descriptor) can produce constants in the right structure.
pub trait Ring: Clone + PartialEq + Debug + Display + Send + Sync {
    fn ring_zero(&self) -> Self;
    fn ring_one(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Integer multiple of `ring_one` in the same structure as `self`.
    fn from_i64(&self, v: i64) -> Self {
        let one = self.ring_one();
        let mut acc = self.ring_zero();
        let mut k = v.unsigned_abs();
        let mut pow = one;
        // double-and-add keeps this cheap for the occasional large constant
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&pow);
            }
            k >>= 1;
            if k > 0 {
                pow = pow.add(&pow);
            }
        }
        if v < 0 {
            acc.neg()
        } else {
            acc
        }
    }
}

/// Ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.mul(&i))
    }
}
