//! Big-rational helpers and the `Ring`/`Field` instances for the stock
//! arbitrary-precision integer and rational types.

use crate::error::{Error, Result};
use crate::exact::{Field, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rational n/d from machine integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from a machine integer.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Parse `"x"` or `"x/y"` with optional sign, e.g. `"-3/2"`.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if Zero::is_zero(&d) {
                return Err(Error::Parse(format!("zero denominator: {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from(n))
        }
    }
}

/// Exact integer square root when `n` is a perfect square.
pub fn sqrt_exact_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational square root when `q` is a square in Q.
pub fn sqrt_exact_rat(q: &BigRational) -> Option<BigRational> {
    let n = sqrt_exact_int(q.numer())?;
    let d = sqrt_exact_int(q.denom())?;
    Some(BigRational::new(n, d))
}

/// Squarefree part of a nonzero integer: the unique squarefree d with
/// n = d * m^2. Requires n to factor over primes below 10^6 up to one
/// remaining (probable) prime cofactor.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    if Zero::is_zero(n) {
        return Err(Error::Invalid("squarefree part of zero".into()));
    }
    let mut d = BigInt::one();
    if n.is_negative() {
        d = -d;
    }
    let mut m = n.abs();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &(&p * &p) <= &m && p <= limit {
        let mut e = 0u32;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            d *= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok(d);
    }
    if let Some(_r) = sqrt_exact_int(&m) {
        return Ok(d);
    }
    // m has no factor below 10^6 and is not a square; if it is prime it is a
    // squarefree cofactor, otherwise we cannot certify the answer.
    let m_u64: u64 = (&m)
        .try_into()
        .map_err(|_| Error::Invalid(format!("cannot factor {m} for squarefree part")))?;
    if crate::exact::finite::is_prime_u64(m_u64) {
        Ok(d * m)
    } else {
        Err(Error::Invalid(format!(
            "cannot factor {m} for squarefree part"
        )))
    }
}

/// Squarefree part of a rational: sign and squarefree content of n*d, so that
/// q = part * (square in Q).
pub fn squarefree_part_rat(q: &BigRational) -> Result<BigInt> {
    squarefree_part(&(q.numer() * q.denom()))
}

impl Ring for BigInt {
    fn ring_zero(&self) -> Self {
        BigInt::zero()
    }
    fn ring_one(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn from_i64(&self, v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Ring for BigRational {
    fn ring_zero(&self) -> Self {
        BigRational::zero()
    }
    fn ring_one(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn from_i64(&self, v: i64) -> Self {
        rat_int(v)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["-3/2", "5", "0", "7/3", "-12"] {
            let q = parse_rat(s).unwrap();
            assert_eq!(q.to_string(), s);
        }
        assert_eq!(parse_rat("4/6").unwrap().to_string(), "2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact_rat(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_exact_rat(&rat(2, 1)), None);
        assert_eq!(sqrt_exact_rat(&rat(-4, 1)), None);
        assert_eq!(sqrt_exact_rat(&rat(0, 1)), Some(rat(0, 1)));
    }

    #[test]
    fn squarefree_parts() {
        let cases = [(12, 3), (8, 2), (-18, -2), (1, 1), (49, 1), (30, 30)];
        for (n, want) in cases {
            assert_eq!(
                squarefree_part(&BigInt::from(n)).unwrap(),
                BigInt::from(want)
            );
        }
    }
}
