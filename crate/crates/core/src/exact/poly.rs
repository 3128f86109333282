//! Exact polynomials: sparse multivariate polynomials in up to twelve
//! variables with graded-lex term order, and dense univariate polynomials
//! over a field with gcd and resultants.

use crate::error::{Error, Result};
use crate::exact::matrix::Mat;
use crate::exact::rational::parse_rat;
use crate::exact::{Field, Ring};
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt::Write as _;

pub const MAX_VARS: usize = 12;

/// Exponent vector; entries beyond `nvars` stay zero.
pub type Exp = [u16; MAX_VARS];

/// Sparse multivariate polynomial. Terms are kept sorted in descending
/// graded-lex order with no zero coefficients, so equality is structural.
#[derive(Clone, PartialEq, Debug)]
pub struct SparsePoly<T: Ring> {
    nvars: usize,
    terms: Vec<(Exp, T)>,
}

fn grlex(a: &Exp, b: &Exp) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    // Graded order, ties broken with the last variable most significant so
    // quadric systems display with the highest-index coordinate leading.
    da.cmp(&db).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

impl<T: Ring> SparsePoly<T> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        SparsePoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push(([0; MAX_VARS], c));
        }
        p
    }

    /// The variable x_i (coefficient `one` must be supplied since scalars may
    /// carry runtime context).
    pub fn var(nvars: usize, i: usize, one: T) -> Self {
        Self::monomial(nvars, &{
            let mut e = [0u16; MAX_VARS];
            e[i] = 1;
            e
        }, one)
    }

    pub fn monomial(nvars: usize, exp: &Exp, c: T) -> Self {
        assert!(nvars <= MAX_VARS);
        assert!(exp[nvars..].iter().all(|&e| e == 0), "exponent out of range");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((*exp, c));
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Exp, T)>) -> Self {
        let mut p = SparsePoly { nvars, terms };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| grlex(&b.0, &a.0));
        let mut out: Vec<(Exp, T)> = Vec::with_capacity(self.terms.len());
        for (e, c) in self.terms.drain(..) {
            match out.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc = lc.add(&c);
                }
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exp, T)] {
        &self.terms
    }

    /// True iff the normalized polynomial has no terms; this is the
    /// "identically zero" test every symbolic identity reduces to.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .first()
            .map(|(e, _)| e.iter().map(|&x| x as u32).sum())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Self::from_terms(self.nvars, terms)
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0u16; MAX_VARS];
                for i in 0..MAX_VARS {
                    e[i] = ea[i]
                        .checked_add(eb[i])
                        .expect("exponent overflow in polynomial product");
                }
                terms.push((e, ca.mul(cb)));
            }
        }
        Self::from_terms(self.nvars, terms)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (*e, a.mul(c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let sample = self
            .terms
            .first()
            .map(|(_, c)| c.clone())
            .expect("pow of the zero polynomial needs a coefficient sample");
        let mut acc = Self::constant(self.nvars, sample.ring_one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluate at a point (one value per variable).
    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        assert!(!point.is_empty(), "evaluation needs at least one coordinate");
        let zero = point[0].ring_zero();
        let mut acc = zero;
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, p) in point.iter().enumerate() {
                for _ in 0..e[i] {
                    term = term.mul(p);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Substitute a polynomial for each variable.
    pub fn compose(&self, images: &[SparsePoly<T>]) -> SparsePoly<T> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let out_vars = images
            .first()
            .map(|p| p.nvars)
            .unwrap_or(self.nvars);
        assert!(images.iter().all(|p| p.nvars == out_vars));
        let mut acc = SparsePoly::zero(out_vars);
        for (e, c) in &self.terms {
            let mut term = SparsePoly::constant(out_vars, c.clone());
            for (i, img) in images.iter().enumerate() {
                if e[i] > 0 {
                    term = term.mul(&img.pow(e[i] as u32));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn map_coeffs<U: Ring>(&self, f: impl Fn(&T) -> U) -> SparsePoly<U> {
        SparsePoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (*e, f(c))).collect(),
        )
    }

    /// Render in the explicit-monomial text format, e.g.
    /// `x3^2 - 2*x2^2 + x1^2 - 2*x0^2` (terms appear in the canonical
    /// graded order, highest-index variable leading).
    pub fn to_text(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mut mon = String::new();
            for (i, name) in names.iter().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                if !mon.is_empty() {
                    mon.push('*');
                }
                if e[i] == 1 {
                    mon.push_str(name);
                } else {
                    let _ = write!(mon, "{name}^{}", e[i]);
                }
            }
            let mut cs = c.to_string();
            let neg = cs.starts_with('-');
            if neg {
                cs = cs[1..].to_string();
            }
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let needs_parens = cs.contains(' ');
            if mon.is_empty() {
                if needs_parens {
                    let _ = write!(out, "({cs})");
                } else {
                    out.push_str(&cs);
                }
            } else if cs == "1" && !needs_parens {
                out.push_str(&mon);
            } else if needs_parens {
                let _ = write!(out, "({cs})*{mon}");
            } else {
                let _ = write!(out, "{cs}*{mon}");
            }
        }
        out
    }
}

/// Parse the explicit-monomial text format over Q, e.g.
/// `x1^2 - 2*x2^2 + 7` with the given variable names.
pub fn parse_poly(text: &str, names: &[&str]) -> Result<SparsePoly<BigRational>> {
    let nvars = names.len();
    assert!(nvars <= MAX_VARS);
    let find = |tok: &str| names.iter().position(|n| *n == tok);
    let mut terms: Vec<(Exp, BigRational)> = Vec::new();

    // split into signed chunks at top-level + and -
    let mut chunks: Vec<(i32, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i32;
    let mut seen_any = false;
    for ch in text.chars() {
        match ch {
            '+' | '-' if seen_any && !cur.trim().is_empty() => {
                chunks.push((sign, cur.trim().to_string()));
                cur = String::new();
                sign = if ch == '-' { -1 } else { 1 };
            }
            '+' if cur.trim().is_empty() => {}
            '-' if cur.trim().is_empty() => sign = -sign,
            _ => {
                if !ch.is_whitespace() {
                    seen_any = true;
                }
                cur.push(ch);
            }
        }
    }
    if !cur.trim().is_empty() {
        chunks.push((sign, cur.trim().to_string()));
    }
    if chunks.is_empty() {
        return Ok(SparsePoly::zero(nvars));
    }

    for (sgn, chunk) in chunks {
        let mut coeff = BigRational::from_integer(sgn.into());
        let mut exp = [0u16; MAX_VARS];
        for factor in chunk.split('*') {
            let f = factor.trim();
            if f.is_empty() {
                return Err(Error::Parse(format!("empty factor in {chunk:?}")));
            }
            let (base, pow) = match f.split_once('^') {
                Some((b, p)) => {
                    let e: u16 = p
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?;
                    (b.trim(), e)
                }
                None => (f, 1),
            };
            if let Some(i) = find(base) {
                if i >= nvars {
                    return Err(Error::Parse(format!("unknown variable {base:?}")));
                }
                exp[i] += pow;
            } else {
                if pow != 1 {
                    return Err(Error::Parse(format!("cannot exponentiate {base:?}")));
                }
                coeff *= parse_rat(base)?;
            }
        }
        terms.push((exp, coeff));
    }
    Ok(SparsePoly::from_terms(nvars, terms))
}

/// Dense univariate polynomial over a field; coefficients ascending, no
/// trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<T: Field> {
    coeffs: Vec<T>,
}

impl<T: Field> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    /// Extract a univariate polynomial from a sparse one that uses only
    /// variable `var`.
    pub fn from_sparse(p: &SparsePoly<T>, var: usize) -> Result<Self> {
        let mut coeffs: Vec<T> = Vec::new();
        let zero = match p.terms().first() {
            Some((_, c)) => c.ring_zero(),
            None => return Ok(Self::zero()),
        };
        for (e, c) in p.terms() {
            for (i, &ei) in e.iter().enumerate() {
                if i != var && ei != 0 {
                    return Err(Error::Invalid(format!(
                        "polynomial is not univariate in variable {var}"
                    )));
                }
            }
            let d = e[var] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, zero.clone());
            }
            coeffs[d] = coeffs[d].add(c);
        }
        Ok(Self::new(coeffs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = x.ring_zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let zero = self.coeffs[0].ring_zero();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lead) => {
                let inv = lead.inv().expect("leading coefficient of nonzero poly");
                Self::new(self.coeffs.iter().map(|c| c.mul(&inv)).collect())
            }
        }
    }

    /// Euclidean remainder self mod rhs (rhs nonzero).
    pub fn rem(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let d = rhs.coeffs.len();
        let lead_inv = rhs.coeffs.last().unwrap().inv().unwrap();
        while r.len() >= d {
            let q = r.last().unwrap().mul(&lead_inv);
            let off = r.len() - d;
            for (i, b) in rhs.coeffs.iter().enumerate() {
                let t = r[off + i].sub(&q.mul(b));
                r[off + i] = t;
            }
            // the top coefficient is now exactly zero
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Multiplicity of the root `x` (0 when not a root).
    pub fn root_multiplicity(&self, x: &T) -> usize {
        let mut p = self.clone();
        let mut m = 0;
        // divide out (X - x) while it is a factor, via synthetic division
        while !p.is_zero() && p.eval(x).is_zero() {
            // exact division by the linear factor
            let mut q: Vec<T> = Vec::with_capacity(p.coeffs.len().saturating_sub(1));
            let mut carry = x.ring_zero();
            for c in p.coeffs.iter().rev() {
                carry = carry.mul(x).add(c);
                q.push(carry.clone());
            }
            q.pop(); // the final carry is the (zero) remainder
            q.reverse();
            p = UniPoly::new(q);
            m += 1;
        }
        m
    }
}

/// Resultant of two nonzero univariate polynomials, as the determinant of the
/// Sylvester matrix whose rows hold coefficients in ascending degree order
/// (f-rows first). With this layout Res(x - 1, x + 1) = -2.
pub fn resultant<T: Field>(f: &UniPoly<T>, g: &UniPoly<T>) -> Result<T> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Invalid("resultant of the zero polynomial".into()));
    }
    let m = f.degree().unwrap();
    let n = g.degree().unwrap();
    let one = f.coeffs()[0].ring_one();
    let zero = one.ring_zero();
    if m == 0 && n == 0 {
        return Ok(one);
    }
    let size = m + n;
    let mut mat = Mat::filled(size, size, zero.clone());
    for row in 0..n {
        for (j, c) in f.coeffs().iter().enumerate() {
            mat.set(row, row + j, c.clone());
        }
    }
    for row in 0..m {
        for (j, c) in g.coeffs().iter().enumerate() {
            mat.set(n + row, row + j, c.clone());
        }
    }
    mat.det_field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_int};

    fn x(i: usize, n: usize) -> SparsePoly<BigRational> {
        SparsePoly::var(n, i, rat_int(1))
    }

    #[test]
    fn binomial_identity_is_zero() {
        // (x + y)^2 - x^2 - 2xy - y^2 == 0
        let n = 2;
        let s = x(0, n).add(&x(1, n));
        let lhs = s.mul(&s);
        let rhs = x(0, n)
            .mul(&x(0, n))
            .add(&x(0, n).mul(&x(1, n)).scale(&rat_int(2)))
            .add(&x(1, n).mul(&x(1, n)));
        assert!(lhs.sub(&rhs).is_zero());
        assert!(!x(0, n).sub(&x(1, n)).is_zero());
    }

    #[test]
    fn text_format_roundtrip() {
        let names = ["x0", "x1", "x2", "x3"];
        let text = "x3^2 - 2*x2^2 + x1^2 - 2*x0^2";
        let p = parse_poly(text, &names).unwrap();
        // canonical order sorts by graded-lex descending
        assert_eq!(p.to_text(&names), "x3^2 - 2*x2^2 + x1^2 - 2*x0^2");
        let q = parse_poly("-2*x0^2 + x1^2 - 2*x2^2 + x3^2", &names).unwrap();
        assert_eq!(p, q);
        let c = parse_poly("-3/2", &names).unwrap();
        assert_eq!(c.to_text(&names), "-3/2");
    }

    #[test]
    fn compose_substitutes() {
        let names = ["x", "y"];
        let p = parse_poly("x^2 - y", &names).unwrap();
        // x -> t + 1, y -> t^2 + 2*t + 1 kills it
        let t1 = parse_poly("t + 1", &["t"]).unwrap();
        let t2 = parse_poly("t^2 + 2*t + 1", &["t"]).unwrap();
        assert!(p.compose(&[t1, t2]).is_zero());
    }

    #[test]
    fn eval_matches_compose() {
        let names = ["x", "y"];
        let p = parse_poly("3*x^2*y - 1/2*y^2 + 4", &names).unwrap();
        let v = p.eval(&[rat(2, 1), rat(-1, 3)]);
        assert_eq!(v, rat(-72 - 1, 18) + rat(4, 1)); // 3*4*(-1/3) - 1/2*1/9 + 4
    }

    #[test]
    fn unipoly_gcd_and_multiplicity() {
        // (x-1)^2 (x+2) vs (x-1)(x+3)
        let names = ["x"];
        let a = parse_poly("x^3 - 3*x + 2", &names).unwrap(); // (x-1)^2 (x+2)
        let b = parse_poly("x^2 + 2*x - 3", &names).unwrap(); // (x-1)(x+3)
        let ua = UniPoly::from_sparse(&a, 0).unwrap();
        let ub = UniPoly::from_sparse(&b, 0).unwrap();
        let g = ua.gcd(&ub);
        assert_eq!(g.degree(), Some(1));
        assert_eq!(ua.root_multiplicity(&rat_int(1)), 2);
        assert_eq!(ua.root_multiplicity(&rat_int(5)), 0);
    }

    #[test]
    fn resultant_convention() {
        let names = ["x"];
        let f = UniPoly::from_sparse(&parse_poly("x - 1", &names).unwrap(), 0).unwrap();
        let g = UniPoly::from_sparse(&parse_poly("x + 1", &names).unwrap(), 0).unwrap();
        assert_eq!(resultant(&f, &g).unwrap(), rat_int(-2));
        assert_eq!(resultant(&f, &f).unwrap(), rat_int(0));
        let h = UniPoly::from_sparse(&parse_poly("x^2 - 2", &names).unwrap(), 0).unwrap();
        assert_eq!(resultant(&h, &h).unwrap(), rat_int(0));
        assert!(resultant(&UniPoly::zero(), &f).is_err());
    }
}
