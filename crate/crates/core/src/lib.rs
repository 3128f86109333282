//! Exact-arithmetic library for a family of K3 surfaces cut out by diagonal
//! quadrics: the Buchi systems X_n, a two-parameter Kummer family in P^5 with
//! its 32 lines, automorphisms, rank-four quadrics and elliptic fibrations,
//! the Picard/Mordell-Weil lattice computations at the special member
//! (t,s) = (-1,1), and point counts over finite fields.
//!
//! Everything is computed over exact domains: big rationals, multiquadratic
//! number fields Q(sqrt(d1), sqrt(d2)), and finite fields F_p / F_{p^2}.
//! There is no floating point anywhere, hence no tolerances: every check is
//! an exact identity.

pub mod arith;
pub mod buchi;
pub mod error;
pub mod exact;
pub mod kummer;
pub mod lattice;
pub mod report;

pub use error::{Error, Result};
