//! Multiquadratic number fields Q(sqrt(d1), sqrt(d2)) with at most two
//! generators, and their elements.
//!
//! An element is stored as 2^k rational coordinates on the basis
//! {1, sqrt(d1), sqrt(d2), sqrt(d1)*sqrt(d2)} indexed by generator subsets
//! (bitmask order). Generators are distinct squarefree integers other than
//! 0 and 1, pairwise multiplicatively independent, kept sorted. Mixed-field
//! operations embed both operands into the join field; joins needing more
//! than two generators are rejected.

use crate::error::{Error, Result};
use crate::exact::rational::{parse_rat, sqrt_exact_rat, squarefree_part, squarefree_part_rat};
use crate::exact::{Field, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Field descriptor: an ordered list of at most two generators d_i, meaning
/// Q(sqrt(d_1), ..., sqrt(d_k)).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct QuadField {
    gens: Vec<i64>,
}

impl QuadField {
    /// The rational field Q (no generators).
    pub fn rationals() -> Self {
        QuadField { gens: Vec::new() }
    }

    /// Q(sqrt(d)) for squarefree d not in {0, 1}.
    pub fn quadratic(d: i64) -> Result<Self> {
        Self::new(vec![d])
    }

    /// Build a field from generator candidates, validating the invariants.
    pub fn new(mut gens: Vec<i64>) -> Result<Self> {
        if gens.len() > 2 {
            return Err(Error::TooManyGenerators(gens.len()));
        }
        gens.sort_unstable();
        for &d in &gens {
            if d == 0 || d == 1 {
                return Err(Error::Invalid(format!("invalid field generator {d}")));
            }
            if squarefree_part(&BigInt::from(d))? != BigInt::from(d) {
                return Err(Error::Invalid(format!("generator {d} is not squarefree")));
            }
        }
        if gens.len() == 2 {
            if gens[0] == gens[1] {
                return Err(Error::Invalid(format!("repeated generator {}", gens[0])));
            }
            let prod = BigInt::from(gens[0]) * BigInt::from(gens[1]);
            if squarefree_part(&prod)?.is_one() {
                return Err(Error::Invalid(format!(
                    "generators {} and {} are multiplicatively dependent",
                    gens[0], gens[1]
                )));
            }
        }
        Ok(QuadField { gens })
    }

    pub fn generators(&self) -> &[i64] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// Basis dimension 2^k.
    pub fn dim(&self) -> usize {
        1 << self.gens.len()
    }

    /// If sqrt(d) lies in this field (d squarefree, not 0 or 1), return the
    /// basis mask m and rational c with sqrt(d) = c * B_m.
    fn locate_sqrt(&self, d: i64) -> Option<(usize, BigRational)> {
        for m in 1..self.dim() {
            let mut prod = BigInt::one();
            for (i, &g) in self.gens.iter().enumerate() {
                if m & (1 << i) != 0 {
                    prod *= BigInt::from(g);
                }
            }
            // B_m^2 = prod; sqrt(d) = B_m / c requires prod = c^2 * d
            if squarefree_part(&prod).ok()? == BigInt::from(d) {
                let c2 = BigRational::from(prod) / BigRational::from(BigInt::from(d));
                let c = sqrt_exact_rat(&c2)?;
                return Some((m, c.recip()));
            }
        }
        None
    }

    /// Smallest common overfield of `self` and `other` in this representation.
    pub fn join(&self, other: &QuadField) -> Result<QuadField> {
        if self == other {
            return Ok(self.clone());
        }
        let mut gens = self.gens.clone();
        for &d in &other.gens {
            let tentative = QuadField::new(gens.clone())?;
            if tentative.locate_sqrt(d).is_none() {
                gens.push(d);
            }
        }
        gens.sort_unstable();
        gens.dedup();
        if gens.len() > 2 {
            // one last chance: a 3-set {a, b, c} collapses when one member is
            // dependent on the other two
            for drop in 0..gens.len() {
                let mut sub: Vec<i64> = gens.clone();
                let d = sub.remove(drop);
                if sub.len() <= 2 {
                    if let Ok(f) = QuadField::new(sub) {
                        if f.locate_sqrt(d).is_some() {
                            return Ok(f);
                        }
                    }
                }
            }
            return Err(Error::TooManyGenerators(gens.len()));
        }
        QuadField::new(gens)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            write!(f, "Q")
        } else {
            let parts: Vec<String> = self.gens.iter().map(|d| format!("sqrt({d})")).collect();
            write!(f, "Q({})", parts.join(","))
        }
    }
}

/// Element of a multiquadratic field.
#[derive(Clone, Debug)]
pub struct Mq {
    field: QuadField,
    coords: Vec<BigRational>,
}

impl Mq {
    pub fn zero(field: &QuadField) -> Self {
        Mq {
            field: field.clone(),
            coords: vec![BigRational::zero(); field.dim()],
        }
    }

    /// A rational number as an element of Q.
    pub fn from_rat(q: BigRational) -> Self {
        Mq {
            field: QuadField::rationals(),
            coords: vec![q],
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Mq::from_rat(BigRational::from(BigInt::from(v)))
    }

    /// Element with given coordinates in the given field's basis.
    pub fn from_coords(field: &QuadField, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != field.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a field of dimension {}",
                coords.len(),
                field.dim()
            )));
        }
        Ok(Mq {
            field: field.clone(),
            coords,
        })
    }

    /// sqrt(d) for squarefree d, in the smallest field containing it.
    pub fn sqrt_int(d: i64) -> Result<Self> {
        let f = QuadField::quadratic(d)?;
        let mut coords = vec![BigRational::zero(); 2];
        coords[1] = BigRational::one();
        Ok(Mq { field: f, coords })
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Drop generators that the element does not use, and collapse onto a
    /// quadratic subfield when only the top basis element is used.
    pub fn reduced(&self) -> Mq {
        let k = self.field.num_generators();
        if k == 0 {
            return self.clone();
        }
        let mut used = vec![false; k];
        for (m, c) in self.coords.iter().enumerate() {
            if !Zero::is_zero(c) {
                for (i, u) in used.iter_mut().enumerate() {
                    if m & (1 << i) != 0 {
                        *u = true;
                    }
                }
            }
        }
        if used.iter().all(|&u| u) {
            if k == 2 {
                // support on {1, B3} lies in Q(sqrt(d1*d2))
                if Zero::is_zero(&self.coords[1]) && Zero::is_zero(&self.coords[2]) {
                    let prod = BigInt::from(self.field.gens[0]) * BigInt::from(self.field.gens[1]);
                    if let Ok(d) = squarefree_part(&prod) {
                        let d: i64 = (&d).try_into().unwrap_or(1);
                        if d != 1 {
                            if let Ok(sub) = QuadField::quadratic(d) {
                                if let Some((_m, c)) = sub.locate_sqrt_of_product(&prod) {
                                    // B3 = sqrt(prod) = c * sqrt(d)
                                    let coords =
                                        vec![self.coords[0].clone(), &self.coords[3] * &c];
                                    return Mq { field: sub, coords };
                                }
                            }
                        }
                    }
                }
            }
            return self.clone();
        }
        let kept: Vec<usize> = (0..k).filter(|&i| used[i]).collect();
        let gens: Vec<i64> = kept.iter().map(|&i| self.field.gens[i]).collect();
        let field = QuadField { gens };
        let mut coords = vec![BigRational::zero(); field.dim()];
        for (m, c) in self.coords.iter().enumerate() {
            if !Zero::is_zero(c) {
                let mut nm = 0usize;
                for (j, &i) in kept.iter().enumerate() {
                    if m & (1 << i) != 0 {
                        nm |= 1 << j;
                    }
                }
                coords[nm] = c.clone();
            }
        }
        Mq { field, coords }
    }

    /// Embed into a larger (or equal) field.
    pub fn embed(&self, target: &QuadField) -> Result<Mq> {
        if &self.field == target {
            return Ok(self.clone());
        }
        // image of each source generator's square root
        let mut gen_images = Vec::new();
        for &d in &self.field.gens {
            let (m, c) = target.locate_sqrt(d).ok_or_else(|| {
                Error::Invalid(format!("sqrt({d}) does not lie in {target}"))
            })?;
            let mut img = Mq::zero(target);
            img.coords[m] = c;
            gen_images.push(img);
        }
        let mut out = Mq::zero(target);
        for (m, c) in self.coords.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let mut term = Mq::zero(target);
            term.coords[0] = c.clone();
            for (i, img) in gen_images.iter().enumerate() {
                if m & (1 << i) != 0 {
                    term = term.mul(img);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Bring two elements into their common minimal field.
    pub fn promote(a: &Mq, b: &Mq) -> Result<(Mq, Mq)> {
        let ar = a.reduced();
        let br = b.reduced();
        if ar.field == br.field {
            return Ok((ar, br));
        }
        let f = ar.field.join(&br.field)?;
        Ok((ar.embed(&f)?, br.embed(&f)?))
    }

    /// Conjugation flipping the sign of sqrt(d_i) for each i in `mask`.
    pub fn conj(&self, mask: usize) -> Mq {
        let mut coords = self.coords.clone();
        for (m, c) in coords.iter_mut().enumerate() {
            if (m & mask).count_ones() % 2 == 1 {
                *c = -&*c;
            }
        }
        Mq {
            field: self.field.clone(),
            coords,
        }
    }

    /// Field norm down to Q: the product of all conjugates.
    pub fn norm(&self) -> BigRational {
        let mut prod = self.clone();
        for mask in 1..self.field.dim() {
            prod = prod.mul(&self.conj(mask));
        }
        debug_assert!(prod.coords.iter().skip(1).all(|c| Zero::is_zero(c)));
        prod.coords[0].clone()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| Zero::is_zero(c))
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn mul_rat(&self, q: &BigRational) -> Mq {
        Mq {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    /// Square root. For rational values the field may grow by one generator
    /// (e.g. sqrt of 8 is 2*sqrt(2)); for one-generator elements the root is
    /// searched inside the same field; otherwise `None`.
    pub fn sqrt(&self) -> Option<Mq> {
        let x = self.reduced();
        match x.field.num_generators() {
            0 => {
                let q = x.coords[0].clone();
                if Zero::is_zero(&q) {
                    return Some(x);
                }
                if let Some(r) = sqrt_exact_rat(&q) {
                    return Some(Mq::from_rat(r));
                }
                let d = squarefree_part_rat(&q).ok()?;
                let di: i64 = (&d).try_into().ok()?;
                // q = c^2 * d with c > 0 rational
                let c2 = q / BigRational::from(d);
                let c = sqrt_exact_rat(&c2)?;
                let f = QuadField::quadratic(di).ok()?;
                let mut coords = vec![BigRational::zero(); 2];
                coords[1] = c;
                Some(Mq { field: f, coords })
            }
            1 => {
                // solve (p + q sqrt(d))^2 = a + b sqrt(d), b != 0
                let d = BigRational::from(BigInt::from(x.field.gens[0]));
                let a = x.coords[0].clone();
                let b = x.coords[1].clone();
                let disc = &a * &a - &d * &b * &b;
                let s = sqrt_exact_rat(&disc)?;
                for sign in [1i64, -1] {
                    let t = (&a + BigRational::from(BigInt::from(sign)) * &s)
                        / BigRational::from(BigInt::from(2));
                    if let Some(p) = sqrt_exact_rat(&t) {
                        if !Zero::is_zero(&p) {
                            let q = &b / (BigRational::from(BigInt::from(2)) * &p);
                            let root = Mq {
                                field: x.field.clone(),
                                coords: vec![p, q],
                            };
                            if root.mul(&root) == x {
                                return Some(root);
                            }
                        }
                    }
                }
                None
            }
            _ => None,
        }
    }

    /// Serialize as `{"d": [...], "coords": ["...", ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let d: Vec<serde_json::Value> = self
            .field
            .gens
            .iter()
            .map(|&g| serde_json::Value::from(g))
            .collect();
        let coords: Vec<serde_json::Value> = self
            .coords
            .iter()
            .map(|c| serde_json::Value::from(c.to_string()))
            .collect();
        serde_json::json!({ "d": d, "coords": coords })
    }

    /// Parse the JSON encoding produced by `to_json`.
    pub fn from_json(v: &serde_json::Value) -> Result<Mq> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("field element must be a JSON object".into()))?;
        let d = obj
            .get("d")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing \"d\" array".into()))?;
        let gens: Vec<i64> = d
            .iter()
            .map(|x| {
                x.as_i64()
                    .ok_or_else(|| Error::Parse("generators must be integers".into()))
            })
            .collect::<Result<_>>()?;
        let field = QuadField::new(gens)?;
        let coords_json = obj
            .get("coords")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("missing \"coords\" array".into()))?;
        let coords: Vec<BigRational> = coords_json
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| Error::Parse("coords must be strings".into()))
                    .and_then(parse_rat)
            })
            .collect::<Result<_>>()?;
        Mq::from_coords(&field, coords)
    }

    /// Parse either a bare rational (`"-3/2"`) or the JSON field-element
    /// encoding.
    pub fn parse(s: &str) -> Result<Mq> {
        let s = s.trim();
        if s.starts_with('{') {
            let v: serde_json::Value =
                serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            Mq::from_json(&v)
        } else {
            Ok(Mq::from_rat(parse_rat(s)?))
        }
    }
}

impl PartialEq for Mq {
    fn eq(&self, other: &Self) -> bool {
        match Mq::promote(self, other) {
            Ok((a, b)) => a.coords == b.coords,
            Err(_) => false,
        }
    }
}

impl fmt::Display for Mq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.reduced();
        if x.coords.iter().all(|c| Zero::is_zero(c)) {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in x.coords.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let basis: Vec<String> = x
                .field
                .gens
                .iter()
                .enumerate()
                .filter(|(i, _)| m & (1 << i) != 0)
                .map(|(_, d)| format!("sqrt({d})"))
                .collect();
            let mag = c.abs();
            let sign = c.is_negative();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if basis.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", basis.join("*"))?;
            } else {
                write!(f, "{mag}*{}", basis.join("*"))?;
            }
        }
        Ok(())
    }
}

impl QuadField {
    /// Helper for `reduced`: find mask and scale with sqrt(prod) = c * B_m in
    /// this field given prod = (B_m)^2 candidates, i.e. locate sqrt of the
    /// integer `prod` allowing a rational multiplier.
    fn locate_sqrt_of_product(&self, prod: &BigInt) -> Option<(usize, BigRational)> {
        let d = squarefree_part(prod).ok()?;
        let di: i64 = (&d).try_into().ok()?;
        let (m, c) = self.locate_sqrt(di)?;
        // sqrt(d) = c * B_m and prod = k^2 d
        let k2 = BigRational::from(prod.clone()) / BigRational::from(d);
        let k = sqrt_exact_rat(&k2)?;
        Some((m, c * k))
    }
}

impl Ring for Mq {
    fn ring_zero(&self) -> Self {
        Mq::zero(&self.field)
    }
    fn ring_one(&self) -> Self {
        let mut x = Mq::zero(&self.field);
        x.coords[0] = BigRational::one();
        x
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| Zero::is_zero(c))
    }
    fn neg(&self) -> Self {
        Mq {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.field == rhs.field {
            return Mq {
                field: self.field.clone(),
                coords: self
                    .coords
                    .iter()
                    .zip(&rhs.coords)
                    .map(|(a, b)| a + b)
                    .collect(),
            };
        }
        let (a, b) = Mq::promote(self, rhs).expect("field join failed in addition");
        a.add(&b)
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.field == rhs.field {
            let k = self.field.dim();
            let mut coords = vec![BigRational::zero(); k];
            for (m, a) in self.coords.iter().enumerate() {
                if Zero::is_zero(a) {
                    continue;
                }
                for (n, b) in rhs.coords.iter().enumerate() {
                    if Zero::is_zero(b) {
                        continue;
                    }
                    // B_m * B_n = (prod of shared generators) * B_{m xor n}
                    let mut scale = BigInt::one();
                    for (i, &g) in self.field.gens.iter().enumerate() {
                        if m & n & (1 << i) != 0 {
                            scale *= BigInt::from(g);
                        }
                    }
                    coords[m ^ n] += a * b * BigRational::from(scale);
                }
            }
            return Mq {
                field: self.field.clone(),
                coords,
            };
        }
        let (a, b) = Mq::promote(self, rhs).expect("field join failed in multiplication");
        a.mul(&b)
    }
    fn from_i64(&self, v: i64) -> Self {
        let mut x = Mq::zero(&self.field);
        x.coords[0] = BigRational::from(BigInt::from(v));
        x
    }
}

impl Field for Mq {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let x = self.reduced();
        let mut cof = x.ring_one();
        for mask in 1..x.field.dim() {
            cof = cof.mul(&x.conj(mask));
        }
        let n = x.mul(&cof).to_rational()?;
        if Zero::is_zero(&n) {
            return None;
        }
        let inv = cof.mul_rat(&n.recip());
        inv.embed(&self.field).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn r2() -> Mq {
        Mq::sqrt_int(2).unwrap()
    }

    fn rm2() -> Mq {
        Mq::sqrt_int(-2).unwrap()
    }

    #[test]
    fn arithmetic_in_one_generator() {
        let x = r2().add(&Mq::from_i64(1)); // 1 + sqrt2
        let y = x.mul(&x); // 3 + 2 sqrt2
        assert_eq!(
            y,
            Mq::from_i64(3).add(&r2().mul_rat(&rat(2, 1)))
        );
        let inv = x.inv().unwrap();
        assert_eq!(x.mul(&inv), x.ring_one());
        // (1 + sqrt2)^-1 = sqrt2 - 1
        assert_eq!(inv, r2().sub(&Mq::from_i64(1)));
    }

    #[test]
    fn join_and_compositum() {
        let x = r2();
        let y = rm2();
        let p = x.mul(&y); // sqrt2 * sqrt(-2), square -4
        assert_eq!(p.field().num_generators(), 2);
        assert_eq!(p.mul(&p), Mq::from_i64(-4));
        // sqrt6 inside Q(sqrt2, sqrt3)
        let f23 = QuadField::new(vec![2, 3]).unwrap();
        let s6 = Mq::sqrt_int(6).unwrap().embed(&f23).unwrap();
        assert_eq!(s6.mul(&s6), Mq::from_i64(6));
        // and Q(sqrt2) join Q(sqrt6) collapses into two generators
        let j = QuadField::quadratic(2)
            .unwrap()
            .join(&QuadField::quadratic(6).unwrap())
            .unwrap();
        assert_eq!(j.num_generators(), 2);
        let s3 = Mq::sqrt_int(3).unwrap().embed(&j);
        assert!(s3.is_ok(), "sqrt3 must lie in Q(sqrt2, sqrt6)");
        let s3 = s3.unwrap();
        assert_eq!(s3.mul(&s3), Mq::from_i64(3));
    }

    #[test]
    fn join_rejects_three_independent_generators() {
        let f = QuadField::new(vec![2, 3]).unwrap();
        let g = QuadField::quadratic(5).unwrap();
        assert!(f.join(&g).is_err());
    }

    #[test]
    fn conjugation_fixes_exactly_the_rationals() {
        let f = QuadField::new(vec![-2, 2]).unwrap();
        let x = Mq::from_coords(&f, vec![rat(1, 2), rat(3, 1), rat(-1, 1), rat(2, 5)]).unwrap();
        for mask in 1..4 {
            assert_ne!(x.conj(mask), x);
        }
        let r = Mq::from_i64(7).embed(&f).unwrap();
        for mask in 0..4 {
            assert_eq!(r.conj(mask), r);
        }
    }

    #[test]
    fn norm_multiplicativity() {
        let f = QuadField::new(vec![-2, 3]).unwrap();
        let x = Mq::from_coords(&f, vec![rat(1, 1), rat(2, 1), rat(0, 1), rat(1, 3)]).unwrap();
        let y = Mq::from_coords(&f, vec![rat(-1, 2), rat(1, 1), rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn sqrt_cases() {
        // rational square
        assert_eq!(Mq::from_rat(rat(9, 4)).sqrt().unwrap(), Mq::from_rat(rat(3, 2)));
        // rational needing an extension: sqrt(8) = 2 sqrt2
        let s8 = Mq::from_i64(8).sqrt().unwrap();
        assert_eq!(s8, r2().mul_rat(&rat(2, 1)));
        // negative: sqrt(-8) = 2 sqrt(-2)
        let sm8 = Mq::from_i64(-8).sqrt().unwrap();
        assert_eq!(sm8, rm2().mul_rat(&rat(2, 1)));
        // inside Q(sqrt2): 3 + 2 sqrt2 = (1 + sqrt2)^2
        let x = Mq::from_i64(3).add(&r2().mul_rat(&rat(2, 1)));
        let r = x.sqrt().unwrap();
        assert_eq!(r.mul(&r), x);
        // non-square stays None
        assert!(r2().add(&Mq::from_i64(1)).sqrt().is_none());
    }

    #[test]
    fn reduction_spots_hidden_subfields() {
        // 1 + sqrt2*sqrt3 lives in Q(sqrt6)
        let f = QuadField::new(vec![2, 3]).unwrap();
        let x = Mq::from_coords(&f, vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)]).unwrap();
        let r = x.reduced();
        assert_eq!(r.field().generators(), &[6]);
        assert_eq!(r, x);
    }

    #[test]
    fn json_roundtrip() {
        let f = QuadField::quadratic(2).unwrap();
        let x = Mq::from_coords(&f, vec![rat(1, 1), rat(1, 2)]).unwrap();
        let j = x.to_json();
        assert_eq!(j.to_string(), r#"{"coords":["1","1/2"],"d":[2]}"#);
        assert_eq!(Mq::from_json(&j).unwrap(), x);
        assert_eq!(Mq::parse("-3/2").unwrap(), Mq::from_rat(rat(-3, 2)));
    }
}
