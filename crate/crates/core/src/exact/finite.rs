//! Prime fields F_p (p <= 2^31) and their quadratic extensions F_{p^2},
//! plus Legendre symbols and Tonelli-Shanks square roots.

use crate::error::{Error, Result};
use crate::exact::{Field, Ring};
use std::fmt;

/// Modular product on u64 via u128 intermediates.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular power a^e mod m.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    a %= m;
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for u64 (the listed witness set is exact for
/// all 64-bit integers).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol (a/p) in {-1, 0, 1} by Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i32> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p));
    }
    let ar = a.rem_euclid(p as i64) as u64;
    if ar == 0 {
        return Ok(0);
    }
    let e = pow_mod(ar, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Element of the prime field F_p. The modulus travels with the value so the
/// type needs no global state; binary operations insist the moduli agree.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
    v: u64,
}

impl Fp {
    /// Construct v mod p. `p` must be prime (callers constructing in hot
    /// loops should validate once and use `new_unchecked`).
    pub fn new(v: i64, p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Self::new_unchecked(v, p))
    }

    /// Construct v mod p without re-checking primality of p.
    pub fn new_unchecked(v: i64, p: u64) -> Self {
        Fp {
            p,
            v: v.rem_euclid(p as i64) as u64,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn pow(&self, e: u64) -> Self {
        Fp {
            p: self.p,
            v: pow_mod(self.v, e, self.p),
        }
    }

    fn check(&self, rhs: &Self) {
        assert_eq!(
            self.p, rhs.p,
            "mixed moduli {} and {} in F_p arithmetic",
            self.p, rhs.p
        );
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Ring for Fp {
    fn ring_zero(&self) -> Self {
        Fp { p: self.p, v: 0 }
    }
    fn ring_one(&self) -> Self {
        Fp {
            p: self.p,
            v: 1 % self.p,
        }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn neg(&self) -> Self {
        Fp {
            p: self.p,
            v: if self.v == 0 { 0 } else { self.p - self.v },
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let mut s = self.v + rhs.v;
        if s >= self.p {
            s -= self.p;
        }
        Fp { p: self.p, v: s }
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Fp {
            p: self.p,
            v: mul_mod(self.v, rhs.v, self.p),
        }
    }
    fn from_i64(&self, v: i64) -> Self {
        Fp::new_unchecked(v, self.p)
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(self.pow(self.p - 2))
        }
    }
}

/// Tonelli-Shanks square root in F_p (p an odd prime). Returns the canonical
/// representative min(r, p - r) when a is a square, `None` otherwise.
pub fn sqrt_mod(a: Fp) -> Option<Fp> {
    let p = a.modulus();
    let v = a.value();
    if v == 0 {
        return Some(a);
    }
    if legendre_symbol(v as i64, p).ok()? != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        pow_mod(v, (p + 1) / 4, p)
    } else {
        // full Tonelli-Shanks: write p - 1 = q * 2^s with q odd
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut z = 2u64;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s as u64;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(v, q, p);
        let mut r = pow_mod(v, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0u64;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    let r = r.min(p - r);
    Some(Fp::new_unchecked(r as i64, p))
}

/// Smallest positive quadratic non-residue mod p.
pub fn least_nonresidue(p: u64) -> Result<u64> {
    for d in 2..p {
        if legendre_symbol(d as i64, p)? == -1 {
            return Ok(d);
        }
    }
    Err(Error::NotOddPrime(p))
}

/// Element a + b*sqrt(d) of F_{p^2}, with d a fixed quadratic non-residue
/// mod p. Frobenius x -> x^p is (a, b) -> (a, -b).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    p: u64,
    d: u64,
    a: u64,
    b: u64,
}

impl Fp2 {
    /// Construct a + b*sqrt(d) in F_{p^2}. `d` must be a non-residue mod the
    /// odd prime p.
    pub fn new(a: i64, b: i64, d: u64, p: u64) -> Result<Self> {
        if legendre_symbol(d as i64, p)? != -1 {
            return Err(Error::Invalid(format!("{d} is a square mod {p}")));
        }
        Ok(Fp2 {
            p,
            d: d % p,
            a: a.rem_euclid(p as i64) as u64,
            b: b.rem_euclid(p as i64) as u64,
        })
    }

    /// Embed an F_p value using the given non-residue.
    pub fn from_fp(x: Fp, d: u64) -> Self {
        Fp2 {
            p: x.modulus(),
            d: d % x.modulus(),
            a: x.value(),
            b: 0,
        }
    }

    pub fn parts(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Frobenius conjugate a - b*sqrt(d).
    pub fn frobenius(&self) -> Self {
        Fp2 {
            b: if self.b == 0 { 0 } else { self.p - self.b },
            ..*self
        }
    }

    /// Norm to F_p: a^2 - d * b^2.
    pub fn norm(&self) -> Fp {
        let a2 = mul_mod(self.a, self.a, self.p);
        let db2 = mul_mod(self.d, mul_mod(self.b, self.b, self.p), self.p);
        let v = (a2 + self.p - db2) % self.p;
        Fp::new_unchecked(v as i64, self.p)
    }

    fn check(&self, rhs: &Self) {
        assert!(
            self.p == rhs.p && self.d == rhs.d,
            "mixed F_p2 structures: ({}, {}) vs ({}, {})",
            self.p,
            self.d,
            rhs.p,
            rhs.d
        );
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({}) (mod {})", self.a, self.b, self.d, self.p)
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Ring for Fp2 {
    fn ring_zero(&self) -> Self {
        Fp2 { a: 0, b: 0, ..*self }
    }
    fn ring_one(&self) -> Self {
        Fp2 {
            a: 1 % self.p,
            b: 0,
            ..*self
        }
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    fn neg(&self) -> Self {
        Fp2 {
            a: if self.a == 0 { 0 } else { self.p - self.a },
            b: if self.b == 0 { 0 } else { self.p - self.b },
            ..*self
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        Fp2 {
            a: (self.a + rhs.a) % self.p,
            b: (self.b + rhs.b) % self.p,
            ..*self
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs);
        // (a + b w)(a' + b' w) = (aa' + d bb') + (ab' + a'b) w,  w^2 = d
        let aa = mul_mod(self.a, rhs.a, self.p);
        let bb = mul_mod(self.b, rhs.b, self.p);
        let cross = (mul_mod(self.a, rhs.b, self.p) + mul_mod(self.b, rhs.a, self.p)) % self.p;
        Fp2 {
            a: (aa + mul_mod(self.d, bb, self.p)) % self.p,
            b: cross,
            ..*self
        }
    }
    fn from_i64(&self, v: i64) -> Self {
        Fp2 {
            a: v.rem_euclid(self.p as i64) as u64,
            b: 0,
            ..*self
        }
    }
}

impl Field for Fp2 {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/(a + bw) = (a - bw) / N(a + bw)
        let n = self.norm();
        let ninv = n.inv()?;
        let conj = self.frobenius();
        Some(Fp2 {
            a: mul_mod(conj.a, ninv.value(), self.p),
            b: mul_mod(conj.b, ninv.value(), self.p),
            ..*self
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(167));
        assert!(is_prime_u64(2237));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(2047)); // 23 * 89, a base-2 pseudoprime
        assert!(is_prime_u64((1 << 31) - 1));
    }

    #[test]
    fn legendre_basics() {
        assert_eq!(legendre_symbol(0, 5).unwrap(), 0);
        assert_eq!(legendre_symbol(2, 7).unwrap(), 1);
        assert_eq!(legendre_symbol(2, 5).unwrap(), -1);
        assert!(legendre_symbol(1, 6).is_err());
        assert!(legendre_symbol(1, 2).is_err());
    }

    #[test]
    fn sqrt_mod_matches_legendre() {
        for p in [3u64, 5, 7, 11, 13, 17, 97, 101, 193] {
            for a in 0..p.min(60) {
                let x = Fp::new_unchecked(a as i64, p);
                match sqrt_mod(x) {
                    Some(r) => {
                        assert_eq!(r.mul(&r), x);
                        assert!(r.value() <= p - r.value() || r.value() == 0);
                    }
                    None => assert_eq!(legendre_symbol(a as i64, p).unwrap(), -1),
                }
            }
        }
    }

    #[test]
    fn fp_field_axioms_smoke() {
        let p = 101;
        for a in [0i64, 1, 7, 55, 100] {
            let x = Fp::new(a, p).unwrap();
            if !x.is_zero() {
                let i = x.inv().unwrap();
                assert_eq!(x.mul(&i), x.ring_one());
            }
            assert_eq!(x.add(&x.neg()), x.ring_zero());
        }
    }

    #[test]
    fn fp2_norm_and_frobenius() {
        let p = 7;
        let d = least_nonresidue(p).unwrap();
        assert_eq!(d, 3);
        let x = Fp2::new(2, 5, d, p).unwrap();
        // norm is multiplicative and equals x * x^p
        let y = Fp2::new(4, 1, d, p).unwrap();
        let nxy = x.mul(&y).norm();
        assert_eq!(nxy, x.norm().mul(&y.norm()));
        let xfrob = x.mul(&x.frobenius());
        assert_eq!(xfrob.parts().1, 0);
        assert_eq!(xfrob.parts().0, x.norm().value());
        // inverse
        let i = x.inv().unwrap();
        assert_eq!(x.mul(&i), x.ring_one());
    }
}
