//! Diagonal quadric systems X_n in P^n: defining equations, the minor
//! determinant lemma for their coefficient matrix, smoothness analysis in
//! characteristic p, the lines on X_4 and X_5, triviality classification of
//! solutions, the plane-cubic parametrization checker for X_4, and the
//! explicit one-parameter family of rational points on X_5.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::{
    legendre_symbol, mat_i64, parse_poly, sqrt_mod, Field, Fp, Fp2, Mat, Ring,
    SparsePoly, rat_int,
};

/// Search bound cap for `integer_search`.
pub const SEARCH_BOUND_CAP: i64 = 10_000;

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Invalid(format!("need n >= 3, got {n}")));
    }
    Ok(())
}

/// The n-2 quadrics x_{i+2}^2 - 2 x_{i+1}^2 + x_i^2 - 2 x_0^2 for
/// i = 1..n-2, as polynomials in the n+1 coordinates x_0..x_n.
pub fn buchi_system(n: usize) -> Result<Vec<SparsePoly<BigRational>>> {
    check_n(n)?;
    if n + 1 > crate::exact::MAX_VARS {
        return Err(Error::Invalid(format!(
            "n = {n} needs {} variables, supported maximum is {}",
            n + 1,
            crate::exact::MAX_VARS
        )));
    }
    let nv = n + 1;
    let sq = |j: usize, c: i64| {
        let x = SparsePoly::var(nv, j, rat_int(1));
        x.mul(&x).scale(&rat_int(c))
    };
    Ok((1..=n - 2)
        .map(|i| {
            sq(i, 1)
                .add(&sq(i + 1, -2))
                .add(&sq(i + 2, 1))
                .add(&sq(0, -2))
        })
        .collect())
}

/// Coefficient matrix B_n of the system with respect to the squared
/// coordinates: shape (n-2) x (n+1), row i has -2 in column 0 and the
/// stencil 1, -2, 1 in columns i, i+1, i+2.
pub fn system_matrix(n: usize) -> Result<Mat<BigInt>> {
    check_n(n)?;
    Ok(Mat::from_fn(n - 2, n + 1, |r, c| {
        let i = r + 1;
        if c == 0 {
            BigInt::from(-2)
        } else if c == i || c == i + 2 {
            BigInt::one()
        } else if c == i + 1 {
            BigInt::from(-2)
        } else {
            BigInt::zero()
        }
    }))
}

/// Tridiagonal n x n matrix with -2 on the diagonal and 1 beside it
/// (the negated A-type Cartan matrix).
pub fn cartan_matrix(n: usize) -> Result<Mat<BigInt>> {
    check_n(n)?;
    Ok(Mat::from_fn(n, n, |r, c| {
        if r == c {
            BigInt::from(-2)
        } else if r.abs_diff(c) == 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }))
}

/// The matrices A_n and B_n together with the identities they satisfy:
/// det A_n = (-1)^n (n+1), the row relation (1,...,n) A_n = (0,...,0,-(n+1)),
/// and the rank of A_n mod 2 (which drops exactly when 2 divides n+1).
pub struct CartanData {
    pub a: Mat<BigInt>,
    pub b: Mat<BigInt>,
    pub det_a: BigInt,
    pub relation: Vec<BigInt>,
    pub rank_mod_2: usize,
}

pub fn cartan_data(n: usize) -> Result<CartanData> {
    let a = cartan_matrix(n)?;
    let b = system_matrix(n)?;
    let det_a = a.det_bareiss()?;
    let weights: Vec<BigInt> = (1..=n as i64).map(BigInt::from).collect();
    let relation: Vec<BigInt> = (0..n)
        .map(|c| (0..n).map(|r| &weights[r] * a.get(r, c)).sum())
        .collect();
    let f2 = Fp::new(0, 2)?;
    let a2 = Mat::from_fn(n, n, |r, c| {
        f2.from_i64(i64::try_from(a.get(r, c).clone()).expect("small entry"))
    });
    Ok(CartanData {
        rank_mod_2: a2.rank(),
        a,
        b,
        det_a,
        relation,
    })
}

fn check_minor_indices(n: usize, a: usize, b: usize, c: usize) -> Result<()> {
    check_n(n)?;
    if !(a < b && b < c && c <= n) {
        return Err(Error::Invalid(format!(
            "need 0 <= a < b < c <= n, got ({a},{b},{c}) with n = {n}"
        )));
    }
    Ok(())
}

/// Closed form for the determinant of B_n with columns a, b, c removed:
/// (-1)^(a+b+c) (a-b)(a-c)(b-c) when a >= 1, and (-1)^(b+c) (b-c) when a = 0.
pub fn minor_det_closed(n: usize, a: usize, b: usize, c: usize) -> Result<BigInt> {
    check_minor_indices(n, a, b, c)?;
    let (a, b, c) = (a as i64, b as i64, c as i64);
    let sign = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    let v = if a >= 1 {
        sign(a + b + c) * (a - b) * (a - c) * (b - c)
    } else {
        sign(b + c) * (b - c)
    };
    Ok(BigInt::from(v))
}

/// Determinant of B_n with columns a, b, c removed, by direct expansion.
pub fn minor_det_brute(n: usize, a: usize, b: usize, c: usize) -> Result<BigInt> {
    check_minor_indices(n, a, b, c)?;
    let bm = system_matrix(n)?;
    let keep: Vec<usize> = (0..=n).filter(|&j| j != a && j != b && j != c).collect();
    let rows: Vec<usize> = (0..n - 2).collect();
    bm.select(&rows, &keep).det_bareiss()
}

/// Value of each quadric at a point (x_0, ..., x_n); all zero iff the point
/// lies on X_n.
pub fn residuals(point: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = point.len().checked_sub(1).unwrap_or(0);
    check_n(n)?;
    let sq: Vec<BigRational> = point.iter().map(|x| x * x).collect();
    let two = rat_int(2);
    Ok((1..=n - 2)
        .map(|i| &sq[i] - &two * &sq[i + 1] + &sq[i + 2] - &two * &sq[0])
        .collect())
}

/// Outcome of the triviality test: a solution is trivial when its coordinate
/// squares match ((t+1)^2, ..., (t+n)^2) x_0^2 for a single rational shift t.
#[derive(Clone, Debug, PartialEq)]
pub struct Triviality {
    pub trivial: bool,
    pub shift: Option<BigRational>,
}

/// Classify a solution with x_0 != 0 by recovering the candidate shift
/// t = ((x_2/x_0)^2 - (x_1/x_0)^2 - 3)/2 and verifying (x_i/x_0)^2 = (t+i)^2
/// at every index. Sign changes and reversal are absorbed by the squares.
pub fn classify_point(point: &[BigRational]) -> Result<Triviality> {
    let n = point.len().checked_sub(1).unwrap_or(0);
    check_n(n)?;
    if !residuals(point)?.iter().all(|r| Zero::is_zero(r)) {
        return Err(Error::Invalid("point does not satisfy the system".into()));
    }
    if Zero::is_zero(&point[0]) {
        return Err(Error::Invalid(
            "point at infinity (x_0 = 0) is unclassified".into(),
        ));
    }
    let y: Vec<BigRational> = point.iter().map(|x| x / &point[0]).collect();
    let t = (&y[2] * &y[2] - &y[1] * &y[1] - rat_int(3)) / rat_int(2);
    let trivial = (1..=n).all(|i| {
        let u = &t + rat_int(i as i64);
        &y[i] * &y[i] == &u * &u
    });
    Ok(Triviality {
        shift: trivial.then_some(t),
        trivial,
    })
}

/// Independent triviality test that tries every sign vector in {+1,-1}^n,
/// reading the shift off the first coordinate. Used to cross-check
/// `classify_point`.
pub fn classify_by_signs(point: &[BigRational]) -> Result<Triviality> {
    let n = point.len().checked_sub(1).unwrap_or(0);
    check_n(n)?;
    if Zero::is_zero(&point[0]) {
        return Err(Error::Invalid(
            "point at infinity (x_0 = 0) is unclassified".into(),
        ));
    }
    let y: Vec<BigRational> = point.iter().map(|x| x / &point[0]).collect();
    for mask in 0u32..1 << n {
        let s = |i: usize| {
            if mask >> (i - 1) & 1 == 0 {
                rat_int(1)
            } else {
                rat_int(-1)
            }
        };
        let t = s(1) * &y[1] - rat_int(1);
        if (1..=n).all(|i| s(i) * &y[i] == &t + rat_int(i as i64)) {
            return Ok(Triviality {
                trivial: true,
                shift: Some(t),
            });
        }
    }
    Ok(Triviality {
        trivial: false,
        shift: None,
    })
}

/// Smoothness analysis of X_n over a field of characteristic p.
///
/// The verdict is derived from certificates, not asserted: the smooth case
/// checks that every maximal minor of the Jacobian coefficient matrix is a
/// nonzero multiple of a coordinate product and that no three coordinates
/// can vanish together on X_n; the singular case exhibits a witness point
/// with deficient Jacobian rank and verifies the coordinate congruence
/// x_{i+p}^2 = x_i^2 behind the component count 2^(n-p).
pub struct SmoothnessReport {
    pub n: usize,
    pub p: u64,
    pub smooth: bool,
    /// Number of irreducible components when singular.
    pub components: Option<u64>,
    /// Each component is a copy of X_m for this m (when singular).
    pub component_model: Option<usize>,
    pub witness_field: Option<String>,
    pub witness: Option<Vec<String>>,
    pub witness_jacobian_rank: Option<usize>,
    pub certificate: Vec<String>,
}

/// Row of the linear system expressing "coordinate t vanishes" in terms of
/// (x_0^2, x_1^2, x_2^2): for t = 0 the coordinate itself, for t >= 1 the
/// value (t-1)(t-2) x_0^2 - (t-2) x_1^2 + (t-1) x_2^2 of the square x_t^2.
fn vanish_row(t: usize) -> [i64; 3] {
    if t == 0 {
        [1, 0, 0]
    } else {
        let t = t as i64;
        [(t - 1) * (t - 2), -(t - 2), t - 1]
    }
}

fn mod_p(v: &BigInt, p: u64) -> BigInt {
    if p == 0 {
        v.clone()
    } else {
        v % BigInt::from(p)
    }
}

/// Square root of a base-field element inside F_{p^2} (p odd); always exists
/// because non-residues differ from residues by the generator d.
fn sqrt_in_fp2(a: Fp, d: u64) -> Fp2 {
    let p = a.modulus();
    if let Some(r) = sqrt_mod(a) {
        return Fp2::from_fp(r, d);
    }
    let dinv = Fp::new_unchecked(d as i64, p).inv().expect("nonzero generator");
    let r = sqrt_mod(a.mul(&dinv)).expect("a/d is a residue");
    Fp2::new(0, r.value() as i64, d, p).expect("valid parts")
}

pub fn smoothness_report(n: usize, p: u64) -> Result<SmoothnessReport> {
    check_n(n)?;
    if p != 0 && !crate::exact::is_prime_u64(p) {
        return Err(Error::Invalid(format!("characteristic {p} is not 0 or prime")));
    }
    let singular = p > 0 && (p as usize) < n;
    let mut certificate = Vec::new();
    if !singular {
        // Every maximal minor of the Jacobian is det(B restricted) times a
        // product of coordinates, so it suffices that all column-triple
        // determinants of B_n stay nonzero...
        for a in 0..=n - 2 {
            for b in a + 1..=n - 1 {
                for c in b + 1..=n {
                    let closed = minor_det_closed(n, a, b, c)?;
                    let brute = minor_det_brute(n, a, b, c)?;
                    if closed != brute {
                        return Err(Error::Inconsistent(format!(
                            "minor ({a},{b},{c}) closed form {closed} != brute {brute}"
                        )));
                    }
                    if Zero::is_zero(&mod_p(&closed, p)) {
                        return Err(Error::Inconsistent(format!(
                            "minor ({a},{b},{c}) vanishes in characteristic {p}"
                        )));
                    }
                }
            }
        }
        certificate.push(format!(
            "all {} column-triple minors of the coefficient matrix are nonzero",
            (n + 1) * n * (n - 1) / 6
        ));
        // ... and that no three coordinates vanish simultaneously on X_n:
        // each vanishing triple forces the zero vector through a nonsingular
        // 3x3 system in (x_0^2, x_1^2, x_2^2).
        for a in 0..=n - 2 {
            for b in a + 1..=n - 1 {
                for c in b + 1..=n {
                    let m = mat_i64(&[&vanish_row(a), &vanish_row(b), &vanish_row(c)]);
                    if Zero::is_zero(&mod_p(&m.det_bareiss()?, p)) {
                        return Err(Error::Inconsistent(format!(
                            "vanishing system for coordinates ({a},{b},{c}) is singular mod {p}"
                        )));
                    }
                }
            }
        }
        certificate.push(
            "no three coordinates vanish simultaneously on the surface".into(),
        );
        return Ok(SmoothnessReport {
            n,
            p,
            smooth: true,
            components: None,
            component_model: None,
            witness_field: None,
            witness: None,
            witness_jacobian_rank: None,
            certificate,
        });
    }

    // Singular case 0 < p < n. The squares x_i^2 are values of one quadratic
    // f, so f(i+p) = f(i) mod p splits off a sign choice for each index
    // above p; verify the congruence identically in (i, x_0^2, x_1^2, x_2^2).
    let f = |shift: i64| {
        // f(X+shift) in variables (X, u, v, w).
        let x = SparsePoly::var(4, 0, rat_int(1))
            .add(&SparsePoly::constant(4, rat_int(shift)));
        let u = SparsePoly::var(4, 1, rat_int(1));
        let v = SparsePoly::var(4, 2, rat_int(1));
        let w = SparsePoly::var(4, 3, rat_int(1));
        let c1 = SparsePoly::constant(4, rat_int(1));
        let c2 = SparsePoly::constant(4, rat_int(2));
        x.sub(&c1)
            .mul(&x.sub(&c2))
            .mul(&u)
            .sub(&x.sub(&c2).mul(&v))
            .add(&x.sub(&c1).mul(&w))
    };
    let diff = f(p as i64).sub(&f(0));
    let pp = BigInt::from(p);
    for (_, coeff) in diff.terms() {
        if !Zero::is_zero(&(coeff.numer() % &pp)) {
            return Err(Error::Inconsistent(format!(
                "square congruence fails mod {p}: coefficient {coeff}"
            )));
        }
    }
    certificate.push(format!(
        "x_(i+{p})^2 = x_i^2 holds identically mod {p}, one sign per index above {p}"
    ));
    let components = 1u64 << (n - p as usize);

    // Witness singular point. In characteristic 2 the Jacobian vanishes
    // identically and (1:0:...:0) lies on the surface; for odd p take
    // x_0 = 1, x_i = sqrt(i^2 - i) over F_p or F_{p^2}.
    let (field_name, coords_disp, rank) = if p == 2 {
        let f2 = Fp::new(0, 2)?;
        let coords: Vec<Fp> = (0..=n)
            .map(|i| if i == 0 { f2.ring_one() } else { f2.ring_zero() })
            .collect();
        verify_on_system(n, &coords)?;
        let jac = jacobian_at(n, &coords);
        ("F_2".to_string(), coords.iter().map(|c| c.to_string()).collect(), jac.rank())
    } else {
        let fp = Fp::new(0, p)?;
        let values: Vec<Fp> = (0..=n)
            .map(|i| {
                let i = i as i64;
                fp.from_i64(if i == 0 { 1 } else { i * i - i })
            })
            .collect();
        if values.iter().all(|v| v.is_zero() || sqrt_mod(*v).is_some()) {
            let coords: Vec<Fp> = values
                .iter()
                .map(|v| if v.is_zero() { *v } else { sqrt_mod(*v).unwrap() })
                .collect();
            verify_on_system(n, &coords)?;
            let jac = jacobian_at(n, &coords);
            (format!("F_{p}"), coords.iter().map(|c| c.to_string()).collect(), jac.rank())
        } else {
            let d = crate::exact::least_nonresidue(p)?;
            let coords: Vec<Fp2> = values.iter().map(|&v| sqrt_in_fp2(v, d)).collect();
            verify_on_system(n, &coords)?;
            let jac = jacobian_at(n, &coords);
            (format!("F_{p}^2"), coords.iter().map(|c| c.to_string()).collect(), jac.rank())
        }
    };
    if rank >= n - 2 {
        return Err(Error::Inconsistent(format!(
            "witness Jacobian rank {rank} is not deficient for n = {n}"
        )));
    }
    certificate.push(format!(
        "witness over {field_name} has Jacobian rank {rank} < {}",
        n - 2
    ));
    Ok(SmoothnessReport {
        n,
        p,
        smooth: false,
        components: Some(components),
        component_model: Some(p as usize),
        witness_field: Some(field_name),
        witness: Some(coords_disp),
        witness_jacobian_rank: Some(rank),
        certificate,
    })
}

fn verify_on_system<T: Field>(n: usize, coords: &[T]) -> Result<()> {
    for i in 1..=n - 2 {
        let sq = |j: usize| coords[j].mul(&coords[j]);
        let r = sq(i)
            .add(&sq(i + 1).mul(&coords[0].from_i64(-2)))
            .add(&sq(i + 2))
            .add(&sq(0).mul(&coords[0].from_i64(-2)));
        if !r.is_zero() {
            return Err(Error::Inconsistent(format!("witness off the surface at quadric {i}")));
        }
    }
    Ok(())
}

/// Jacobian of the system at a point, as 2 B_n diag(x).
fn jacobian_at<T: Field>(n: usize, coords: &[T]) -> Mat<T> {
    let b = system_matrix(n).expect("valid n");
    Mat::from_fn(n - 2, n + 1, |r, c| {
        let e = i64::try_from(b.get(r, c).clone()).expect("small entry");
        coords[c].from_i64(2 * e).mul(&coords[c])
    })
}

/// A line on X_n in the chart x_0 = 1: coordinates (1, e_1 (t+1), ...,
/// e_n (t+n)) for a sign vector e. These are all lines of X_4 and X_5.
pub struct BuchiLine {
    pub signs: Vec<i8>,
    /// Coordinates as polynomials in the single parameter t.
    pub coords: Vec<SparsePoly<BigRational>>,
}

/// The 2^(n-1) ... 2^n sign-vector lines in the chart x_0 = 1; there are
/// 2^n of them (global negation is not an affine symmetry), matching the
/// known counts 16 on X_4 and 32 on X_5.
pub fn lines(n: usize) -> Result<Vec<BuchiLine>> {
    check_n(n)?;
    if n > 16 {
        return Err(Error::Invalid(format!("line enumeration capped at n = 16, got {n}")));
    }
    let t = SparsePoly::var(1, 0, rat_int(1));
    Ok((0u32..1 << n)
        .map(|mask| {
            let signs: Vec<i8> = (0..n)
                .map(|i| if mask >> i & 1 == 0 { 1 } else { -1 })
                .collect();
            let mut coords = vec![SparsePoly::constant(1, rat_int(1))];
            for (i, &s) in signs.iter().enumerate() {
                let shifted = t.add(&SparsePoly::constant(1, rat_int(i as i64 + 1)));
                coords.push(shifted.scale(&rat_int(s as i64)));
            }
            BuchiLine { signs, coords }
        })
        .collect())
}

const X4_CUBICS: [&str; 5] = [
    "-2*a^2*b - 6*a*b^2 - 3*a^2*c + 9*b^2*c + 9*a*c^2 + 9*b*c^2",
    "-12*a*b^2 + 3*a^2*c - 18*a*b*c + 9*b^2*c - 18*a*c^2",
    "2*a^2*b - 6*a*b^2 - 24*a*b*c - 9*a*c^2 + 9*b*c^2",
    "-4*a^2*b - 3*a^2*c + 6*a*b*c - 9*b^2*c - 18*b*c^2",
    "-6*a^2*b - 6*a*b^2 - 6*a^2*c - 18*b^2*c + 9*a*c^2 + 27*b*c^2",
];

/// The recorded five plane cubics (in a, b, c) proposed as a parametrization
/// of X_4. Shipped as data for `x4_param_check`; the checker decides whether
/// they actually work.
pub fn x4_cubics() -> Vec<SparsePoly<BigRational>> {
    X4_CUBICS
        .iter()
        .map(|s| parse_poly(s, &["a", "b", "c"]).expect("valid cubic table"))
        .collect()
}

/// The five points the cubic system is required to pass through.
pub fn x4_base_points() -> Vec<[i64; 3]> {
    vec![[1, 0, 0], [0, 1, 0], [0, 0, 1], [3, -3, 2], [3, -1, 1]]
}

pub struct X4Sample {
    pub abc: [BigRational; 3],
    pub image: Vec<BigRational>,
    pub residuals: Vec<BigRational>,
}

pub struct X4Check {
    /// Cubic values at each base point (row per point).
    pub base_point_values: Vec<Vec<BigRational>>,
    /// Whether every base point is a common zero of all five cubics.
    pub base_points_ok: bool,
    /// The two quadrics of X_4 composed with the map, as polynomials in
    /// (a, b, c).
    pub residual_polys: Vec<SparsePoly<BigRational>>,
    /// Per-quadric verdict: residual identically zero.
    pub identically_zero: Vec<bool>,
    pub samples: Vec<X4Sample>,
}

/// Evaluate a cubic table (default: the recorded one) as a candidate
/// parametrization of X_4: base-point membership, symbolic residuals of both
/// quadrics under the map, and sample evaluations.
pub fn x4_param_check(
    table: Option<Vec<SparsePoly<BigRational>>>,
    samples: &[[i64; 3]],
) -> Result<X4Check> {
    let cubics = table.unwrap_or_else(x4_cubics);
    if cubics.len() != 5 || cubics.iter().any(|c| c.nvars() != 3) {
        return Err(Error::Invalid("expected five cubics in three variables".into()));
    }
    let base_point_values: Vec<Vec<BigRational>> = x4_base_points()
        .iter()
        .map(|pt| {
            let at: Vec<BigRational> = pt.iter().map(|&v| rat_int(v)).collect();
            cubics.iter().map(|c| c.eval(&at)).collect()
        })
        .collect();
    let base_points_ok = base_point_values
        .iter()
        .all(|row| row.iter().all(|v| Zero::is_zero(v)));
    let residual_polys: Vec<SparsePoly<BigRational>> = buchi_system(4)?
        .iter()
        .map(|q| q.compose(&cubics))
        .collect();
    let identically_zero: Vec<bool> = residual_polys.iter().map(|r| r.is_zero()).collect();
    let default_samples: Vec<[i64; 3]> = vec![
        [1, 1, 0],
        [1, 1, 1],
        [1, 2, 1],
        [2, 1, 1],
        [1, 1, 2],
        [2, 3, 1],
    ];
    let chosen = if samples.is_empty() { &default_samples } else { samples };
    let samples = chosen
        .iter()
        .map(|pt| {
            let at: Vec<BigRational> = pt.iter().map(|&v| rat_int(v)).collect();
            let image: Vec<BigRational> = cubics.iter().map(|c| c.eval(&at)).collect();
            let residuals = residuals(&image)?;
            Ok(X4Sample {
                abc: [at[0].clone(), at[1].clone(), at[2].clone()],
                image,
                residuals,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(X4Check {
        base_point_values,
        base_points_ok,
        residual_polys,
        identically_zero,
        samples,
    })
}

fn poly1(coeffs: &[i64]) -> SparsePoly<BigRational> {
    coeffs
        .iter()
        .enumerate()
        .fold(SparsePoly::zero(1), |acc, (k, &c)| {
            let mut e = [0u16; crate::exact::MAX_VARS];
            e[0] = k as u16;
            acc.add(&SparsePoly::monomial(1, &e, rat_int(c)))
        })
}

/// The one-parameter family of rational points on X_5, as six polynomials
/// in a (coordinates x_0..x_5). The residuals vanish identically in a.
pub fn family_polynomials() -> Vec<SparsePoly<BigRational>> {
    vec![
        poly1(&[-1, 0, 5, 0, 12]),
        poly1(&[2, 2, -2, 22, 8, 8]),
        poly1(&[-1, -2, -11, 2, -4, -8]),
        poly1(&[0, -6, 0, -10, 0, 8]),
        poly1(&[-1, 2, -11, -2, -4, 8]),
        poly1(&[2, -2, -2, -22, 8, -8]),
    ]
}

/// Evaluate the solution family at a rational parameter value.
pub fn family_point(alpha: &BigRational) -> Vec<BigRational> {
    let at = [alpha.clone()];
    family_polynomials().iter().map(|p| p.eval(&at)).collect()
}

/// Section of infinite order used as Mordell-Weil origin on the fibers of
/// the minus fibration: the line with sign pattern (+,-,+,+,-) at shift
/// t = -2a - 3, coordinates ordered (x_0, ..., x_5).
pub fn section_o() -> Vec<SparsePoly<BigRational>> {
    vec![
        poly1(&[1]),
        poly1(&[-2, -2]),
        poly1(&[1, 2]),
        poly1(&[0, -2]),
        poly1(&[1, -2]),
        poly1(&[-2, 2]),
    ]
}

/// Generator of the free part of the Mordell-Weil group: the line with sign
/// pattern (-,+,-,-,+) at the same shift, coordinates ordered (x_0, ..., x_5).
pub fn section_q() -> Vec<SparsePoly<BigRational>> {
    vec![
        poly1(&[1]),
        poly1(&[2, 2]),
        poly1(&[-1, -2]),
        poly1(&[0, 2]),
        poly1(&[-1, 2]),
        poly1(&[2, -2]),
    ]
}

/// Check the fiber-parameter identity x_4 - x_2 = a (x_1 + x_5) for a curve
/// given by six coordinate polynomials in a.
pub fn fiber_parameter_identity(coords: &[SparsePoly<BigRational>]) -> bool {
    if coords.len() != 6 {
        return false;
    }
    let a = SparsePoly::var(1, 0, rat_int(1));
    coords[4].sub(&coords[2]).sub(&a.mul(&coords[1].add(&coords[5]))).is_zero()
}

/// An integral solution found by `integer_search`, with its classification.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SearchHit {
    pub coords: Vec<i64>,
    pub trivial: bool,
}

/// Enumerate all solutions with x_0 = 1 and |x_i| <= bound. The outer loop
/// runs over (|x_1|, |x_2|); each further square is forced by the recurrence
/// x_{i+2}^2 = 2 x_{i+1}^2 - x_i^2 + 2, leaving only sign choices.
pub fn integer_search(n: usize, bound: i64) -> Result<Vec<SearchHit>> {
    check_n(n)?;
    if bound < 1 || bound > SEARCH_BOUND_CAP {
        return Err(Error::BoundExceeded {
            bound: bound.unsigned_abs(),
            cap: SEARCH_BOUND_CAP as u64,
        });
    }
    let canonical: BTreeSet<Vec<i64>> = (0..=bound)
        .into_par_iter()
        .flat_map_iter(|x1| {
            let mut found = Vec::new();
            for x2 in 0..=bound {
                extend_tail(n, bound, &mut vec![1, x1, x2], &mut found);
            }
            found
        })
        .collect();
    // Solutions are stable under flipping any coordinate sign; the search
    // fixes x_1, x_2 >= 0, so emit the mirrored variants explicitly.
    let mut all = BTreeSet::new();
    for sol in canonical {
        for mask in 0..4u8 {
            let mut v = sol.clone();
            if mask & 1 != 0 {
                v[1] = -v[1];
            }
            if mask & 2 != 0 {
                v[2] = -v[2];
            }
            all.insert(v);
        }
    }
    Ok(all
        .into_iter()
        .map(|coords| {
            let rats: Vec<BigRational> = coords.iter().map(|&v| rat_int(v)).collect();
            let trivial = classify_point(&rats).map(|t| t.trivial).unwrap_or(false);
            SearchHit { coords, trivial }
        })
        .collect())
}

fn extend_tail(n: usize, bound: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == n + 1 {
        out.push(prefix.clone());
        return;
    }
    let k = prefix.len();
    let (a, b) = (prefix[k - 2] as i128, prefix[k - 1] as i128);
    let v = 2 * b * b - a * a + 2;
    if v < 0 {
        return;
    }
    let r = (v as u128).isqrt() as i128;
    if r * r != v || r > bound as i128 {
        return;
    }
    let r = r as i64;
    prefix.push(r);
    extend_tail(n, bound, prefix, out);
    prefix.pop();
    if r != 0 {
        prefix.push(-r);
        extend_tail(n, bound, prefix, out);
        prefix.pop();
    }
}

/// Legendre-symbol helper re-exported for witness searches in reports.
pub fn is_square_mod(a: i64, p: u64) -> Result<bool> {
    Ok(legendre_symbol(a, p)? >= 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rat;

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn system_shape_and_matrix() {
        assert_eq!(buchi_system(3).unwrap().len(), 1);
        assert_eq!(buchi_system(5).unwrap().len(), 3);
        let b = system_matrix(5).unwrap();
        assert_eq!((b.rows(), b.cols()), (3, 6));
        assert!(buchi_system(2).is_err());
    }

    #[test]
    fn minor_examples_and_sweep() {
        assert_eq!(minor_det_closed(5, 1, 2, 5).unwrap(), BigInt::from(-12));
        assert_eq!(minor_det_closed(5, 0, 1, 2).unwrap(), BigInt::from(1));
        assert_eq!(minor_det_closed(4, 1, 2, 3).unwrap(), BigInt::from(-2));
        for n in 3..=6 {
            for a in 0..=n - 2 {
                for b in a + 1..=n - 1 {
                    for c in b + 1..=n {
                        assert_eq!(
                            minor_det_closed(n, a, b, c).unwrap(),
                            minor_det_brute(n, a, b, c).unwrap(),
                            "minor ({n},{a},{b},{c})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cartan_identities() {
        for n in 3..=8 {
            let data = cartan_data(n).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(data.det_a, BigInt::from(sign * (n as i64 + 1)));
            let mut expected = vec![BigInt::zero(); n];
            expected[n - 1] = BigInt::from(-(n as i64 + 1));
            assert_eq!(data.relation, expected);
        }
        assert_eq!(cartan_data(5).unwrap().rank_mod_2, 4);
        assert_eq!(cartan_data(4).unwrap().rank_mod_2, 4);
    }

    #[test]
    fn residual_examples() {
        assert!(residuals(&rats(&[1, 1, 2, 3, 4, 5])).unwrap().iter().all(|r| Zero::is_zero(r)));
        assert_eq!(
            residuals(&rats(&[1, 1, 1, 1, 1, 1])).unwrap(),
            rats(&[-2, -2, -2])
        );
        assert!(residuals(&rats(&[16, 40, -24, -8, -8, -24]))
            .unwrap()
            .iter()
            .all(|r| Zero::is_zero(r)));
    }

    #[test]
    fn triviality_classification() {
        let t = classify_point(&rats(&[1, 1, 2, 3, 4, 5])).unwrap();
        assert!(t.trivial);
        assert_eq!(t.shift.unwrap(), rat_int(0));
        let t = classify_point(&rats(&[16, 40, -24, -8, -8, -24])).unwrap();
        assert!(t.trivial);
        assert_eq!(t.shift.unwrap(), parse_rat("-7/2").unwrap());
        let t = classify_point(&rats(&[211, 558, -353, 164, 135, -314])).unwrap();
        assert!(!t.trivial);
        assert!(classify_point(&rats(&[0, 1, 2, 3, 4, 5])).is_err());
    }

    #[test]
    fn sign_oracle_agrees() {
        for pt in [
            vec![1, 1, 2, 3, 4, 5],
            vec![1, -1, 2, -3, 4, 5],
            vec![16, 40, -24, -8, -8, -24],
            vec![211, 558, -353, 164, 135, -314],
        ] {
            let p = rats(&pt);
            assert_eq!(
                classify_point(&p).unwrap().trivial,
                classify_by_signs(&p).unwrap().trivial,
                "{pt:?}"
            );
        }
    }

    #[test]
    fn smoothness_verdicts() {
        assert!(smoothness_report(5, 0).unwrap().smooth);
        assert!(smoothness_report(5, 5).unwrap().smooth);
        assert!(smoothness_report(5, 7).unwrap().smooth);
        let r = smoothness_report(5, 3).unwrap();
        assert!(!r.smooth);
        assert_eq!(r.components, Some(4));
        assert_eq!(r.component_model, Some(3));
        assert!(r.witness_jacobian_rank.unwrap() < 3);
        let r = smoothness_report(4, 2).unwrap();
        assert!(!r.smooth);
        assert_eq!(r.components, Some(4));
        assert!(smoothness_report(5, 4).is_err());
    }

    #[test]
    fn line_counts_and_membership() {
        assert_eq!(lines(4).unwrap().len(), 16);
        let ls = lines(5).unwrap();
        assert_eq!(ls.len(), 32);
        let sys = buchi_system(5).unwrap();
        for line in &ls {
            for q in &sys {
                assert!(q.compose(&line.coords).is_zero());
            }
        }
    }

    #[test]
    fn x4_checker_records_failures() {
        let check = x4_param_check(None, &[]).unwrap();
        // The three coordinate base points are common zeros; the last cubic
        // misses the remaining two.
        for row in &check.base_point_values[..3] {
            assert!(row.iter().all(|v| Zero::is_zero(v)));
        }
        assert!(!check.base_points_ok);
        assert_eq!(check.base_point_values[3][4], rat_int(-648));
        assert_eq!(check.base_point_values[4][4], rat_int(-36));
        assert_eq!(check.identically_zero, vec![true, false]);
        let s0 = &check.samples[0];
        assert_eq!(s0.image, rats(&[-8, -12, -4, -4, -12]));
        assert!(s0.residuals.iter().all(|r| Zero::is_zero(r)));
        let s1 = &check.samples[1];
        assert_eq!(s1.image, rats(&[16, -36, -28, -28, 0]));
        assert_eq!(s1.residuals, rats(&[0, -1296]));
    }

    #[test]
    fn family_is_a_solution_curve() {
        assert_eq!(family_point(&rat_int(1)), rats(&[16, 40, -24, -8, -8, -24]));
        assert_eq!(
            family_point(&rat_int(2)),
            rats(&[211, 558, -353, 164, 135, -314])
        );
        let fam = family_polynomials();
        for q in &buchi_system(5).unwrap() {
            assert!(q.compose(&fam).is_zero());
        }
        assert!(fiber_parameter_identity(&fam));
    }

    #[test]
    fn sections_are_lines_on_the_surface() {
        for sec in [section_o(), section_q()] {
            for q in &buchi_system(5).unwrap() {
                assert!(q.compose(&sec).is_zero());
            }
            assert!(fiber_parameter_identity(&sec));
        }
        // Both sections are sign-vector lines at shift t = -2a - 3.
        let shift = poly1(&[-3, -2]);
        let o = section_o();
        for (i, &s) in [1i64, -1, 1, 1, -1].iter().enumerate() {
            let expect = shift
                .add(&SparsePoly::constant(1, rat_int(i as i64 + 1)))
                .scale(&rat_int(s));
            assert_eq!(o[i + 1], expect);
        }
        let q = section_q();
        for (i, &s) in [-1i64, 1, -1, -1, 1].iter().enumerate() {
            let expect = shift
                .add(&SparsePoly::constant(1, rat_int(i as i64 + 1)))
                .scale(&rat_int(s));
            assert_eq!(q[i + 1], expect);
        }
    }

    #[test]
    fn search_finds_known_solutions() {
        let hits = integer_search(5, 10).unwrap();
        let plain: Vec<i64> = vec![1, 1, 2, 3, 4, 5];
        assert!(hits.iter().any(|h| h.coords == plain));
        assert!(hits.iter().any(|h| h.coords == vec![1, -1, 2, 3, 4, 5]));
        assert!(hits.iter().all(|h| h.trivial));
        let hits = integer_search(4, 40).unwrap();
        let nontrivial: Vec<_> = hits.iter().filter(|h| !h.trivial).collect();
        assert!(!nontrivial.is_empty());
        assert!(nontrivial.iter().any(|h| h.coords == vec![1, 6, 23, 32, 39]));
        assert!(integer_search(5, 100_000).is_err());
    }
}
