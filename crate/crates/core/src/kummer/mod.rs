//! Two-parameter family of Kummer K3 surfaces in P^5 cut out by three
//! diagonal quadrics with coefficients in Q(t,s). The member at
//! (t,s) = (-1,1) is the Buchi surface X_5.
//!
//! Everything in this module works with two parallel representations of the
//! quadric net: a numeric 3x6 diagonal-coefficient matrix over a
//! multiquadratic field (for a concrete parameter point) and a symbolic one
//! with entries in Q[t,s] (for identities that hold across the family).

pub mod auts;
pub mod fibers;
pub mod genus2;
pub mod lines;
pub mod quadrics;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{Field, Mat, Mq, QuadField, Ring, SparsePoly};

/// Variable layout of the shared symbolic ring: x0..x5, then t, s, and the
/// line parameter u.
pub const NVARS: usize = 9;
/// Index of t in the symbolic ring.
pub const TVAR: usize = 6;
/// Index of s in the symbolic ring.
pub const SVAR: usize = 7;
/// Index of the line parameter u in the symbolic ring.
pub const UVAR: usize = 8;

/// Display names matching the symbolic variable layout.
pub const VAR_NAMES: [&str; NVARS] = ["x0", "x1", "x2", "x3", "x4", "x5", "t", "s", "u"];

/// A parameter point (t,s) of the family, with the derived quantities
/// gamma_1 = 2s^2-1, gamma_2 = t-s, gamma_3 = 2ts-1, gamma_4 = 2t^2-1
/// cached. The surface is smooth exactly when s*t*g1*g2*g3*g4 != 0; the
/// constructor records the verdict instead of failing, so that singular
/// parameter points can still be inspected.
#[derive(Clone, Debug)]
pub struct FamilyParams {
    t: Mq,
    s: Mq,
    gammas: [Mq; 4],
    smoothness_scalar: Mq,
}

impl FamilyParams {
    pub fn new(t: Mq, s: Mq) -> Result<Self> {
        let (t, s) = Mq::promote(&t, &s)?;
        let one = t.ring_one();
        let two = t.from_i64(2);
        let g1 = two.mul(&s).mul(&s).sub(&one);
        let g2 = t.sub(&s);
        let g3 = two.mul(&t).mul(&s).sub(&one);
        let g4 = two.mul(&t).mul(&t).sub(&one);
        let scalar = s.mul(&t).mul(&g1).mul(&g2).mul(&g3).mul(&g4);
        Ok(FamilyParams {
            t,
            s,
            gammas: [g1, g2, g3, g4],
            smoothness_scalar: scalar,
        })
    }

    pub fn from_rationals(t: BigRational, s: BigRational) -> Result<Self> {
        FamilyParams::new(Mq::from_rat(t), Mq::from_rat(s))
    }

    pub fn from_i64(t: i64, s: i64) -> Result<Self> {
        FamilyParams::new(Mq::from_i64(t), Mq::from_i64(s))
    }

    pub fn t(&self) -> &Mq {
        &self.t
    }

    pub fn s(&self) -> &Mq {
        &self.s
    }

    /// gamma_i for i in 1..=4.
    pub fn gamma(&self, i: usize) -> &Mq {
        &self.gammas[i - 1]
    }

    /// The product s*t*g1*g2*g3*g4 whose non-vanishing certifies smoothness.
    pub fn smoothness_scalar(&self) -> &Mq {
        &self.smoothness_scalar
    }

    pub fn is_smooth(&self) -> bool {
        !Ring::is_zero(&self.smoothness_scalar)
    }

    /// Error out on singular parameters, naming the vanishing factor.
    pub fn require_smooth(&self) -> Result<()> {
        if self.is_smooth() {
            return Ok(());
        }
        let mut vanishing = Vec::new();
        if Ring::is_zero(&self.t) {
            vanishing.push("t".to_string());
        }
        if Ring::is_zero(&self.s) {
            vanishing.push("s".to_string());
        }
        for (i, g) in self.gammas.iter().enumerate() {
            if Ring::is_zero(g) {
                vanishing.push(format!("gamma_{}", i + 1));
            }
        }
        Err(Error::SingularParameters(format!(
            "(t,s) = ({}, {}): {} = 0",
            self.t,
            self.s,
            vanishing.join(", ")
        )))
    }

    /// The smallest multiquadratic field containing t and s.
    pub fn field(&self) -> &QuadField {
        self.t.field()
    }

    fn zero(&self) -> Mq {
        self.t.ring_zero()
    }

    fn int(&self, v: i64) -> Mq {
        self.t.from_i64(v)
    }

    /// The 3x6 matrix of coefficients of x_m^2 in the three quadrics cutting
    /// out the surface, rows in the displayed order.
    pub fn diagonal_matrix(&self) -> Mat<Mq> {
        let rows = self.diagonal_rows();
        Mat::from_rows(rows.into_iter().map(|r| r.to_vec()).collect())
    }

    /// Same data as `diagonal_matrix`, as three arrays of six coefficients.
    pub fn diagonal_rows(&self) -> [[Mq; 6]; 3] {
        let t = &self.t;
        let s = &self.s;
        let [g1, g2, _, g4] = &self.gammas;
        let two = self.int(2);
        let o = self.zero();
        let row1 = [
            two.mul(g4).neg(),
            self.int(1),
            two.mul(t).mul(t).neg(),
            g4.clone(),
            o.clone(),
            o.clone(),
        ];
        let row2 = [
            g2.clone(),
            o.clone(),
            t.mul(t).mul(s),
            t.mul(s).mul(g2).neg(),
            t.mul(s).mul(s).neg(),
            o.clone(),
        ];
        let row3 = [
            two.mul(g1).neg(),
            o.clone(),
            o,
            g1.clone(),
            two.mul(s).mul(s).neg(),
            self.int(1),
        ];
        [row1, row2, row3]
    }

    /// The three quadrics as polynomials in x0..x5 with coefficients in the
    /// parameter field.
    pub fn klein_system(&self) -> Vec<SparsePoly<Mq>> {
        let one = self.int(1);
        self.diagonal_rows()
            .iter()
            .map(|row| {
                let mut q = SparsePoly::zero(6);
                for (m, c) in row.iter().enumerate() {
                    if Ring::is_zero(c) {
                        continue;
                    }
                    let x = SparsePoly::var(6, m, one.clone());
                    q = q.add(&x.mul(&x).scale(c));
                }
                q
            })
            .collect()
    }

    /// The quadrics with rational coefficients, available when (t,s) is a
    /// rational point.
    pub fn klein_system_rational(&self) -> Result<Vec<SparsePoly<BigRational>>> {
        if !self.t.is_rational() || !self.s.is_rational() {
            return Err(Error::Invalid(
                "parameters are irrational; the system has no rational form".into(),
            ));
        }
        Ok(self
            .klein_system()
            .iter()
            .map(|q| q.map_coeffs(|c| c.to_rational().expect("rational coefficient")))
            .collect())
    }
}

fn sym_int(v: i64) -> SparsePoly<BigRational> {
    SparsePoly::constant(NVARS, BigRational::from_integer(v.into()))
}

fn sym_var(i: usize) -> SparsePoly<BigRational> {
    SparsePoly::var(NVARS, i, num_traits::One::one())
}

/// t, s as elements of the shared symbolic ring.
pub fn sym_ts() -> (SparsePoly<BigRational>, SparsePoly<BigRational>) {
    (sym_var(TVAR), sym_var(SVAR))
}

/// gamma_1..gamma_4 as polynomials in Q[t,s].
pub fn gammas_symbolic() -> [SparsePoly<BigRational>; 4] {
    let (t, s) = sym_ts();
    let two = sym_int(2);
    let one = sym_int(1);
    [
        two.mul(&s).mul(&s).sub(&one),
        t.sub(&s),
        two.mul(&t).mul(&s).sub(&one),
        two.mul(&t).mul(&t).sub(&one),
    ]
}

/// The 3x6 diagonal-coefficient matrix with entries in Q[t,s].
pub fn diagonal_matrix_symbolic() -> Vec<Vec<SparsePoly<BigRational>>> {
    let (t, s) = sym_ts();
    let [g1, g2, _, g4] = gammas_symbolic();
    let two = sym_int(2);
    let zero = SparsePoly::zero(NVARS);
    vec![
        vec![
            two.mul(&g4).neg(),
            sym_int(1),
            two.mul(&t).mul(&t).neg(),
            g4.clone(),
            zero.clone(),
            zero.clone(),
        ],
        vec![
            g2.clone(),
            zero.clone(),
            t.mul(&t).mul(&s),
            t.mul(&s).mul(&g2).neg(),
            t.mul(&s).mul(&s).neg(),
            zero.clone(),
        ],
        vec![
            two.mul(&g1).neg(),
            zero.clone(),
            zero,
            g1,
            two.mul(&s).mul(&s).neg(),
            sym_int(1),
        ],
    ]
}

/// The three quadrics of the family as polynomials in x0..x5, t, s.
pub fn klein_system_symbolic() -> Vec<SparsePoly<BigRational>> {
    diagonal_matrix_symbolic()
        .iter()
        .map(|row| {
            let mut q = SparsePoly::zero(NVARS);
            for (m, c) in row.iter().enumerate() {
                let x = sym_var(m);
                q = q.add(&x.mul(&x).mul(c));
            }
            q
        })
        .collect()
}

/// Determinant of a small matrix of polynomials by cofactor expansion.
pub(crate) fn poly_det(m: &[Vec<SparsePoly<BigRational>>]) -> SparsePoly<BigRational> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = SparsePoly::zero(m[0][0].nvars());
    for (j, pivot) in m[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Vec<Vec<SparsePoly<BigRational>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = pivot.mul(&poly_det(&minor));
        det = if j % 2 == 0 { det.add(&term) } else { det.sub(&term) };
    }
    det
}

/// Coefficient of p at the given x-exponent pattern (variables 0..5), as a
/// polynomial in the remaining variables.
fn coeff_at_x(p: &SparsePoly<BigRational>, xpart: &[u16; 6]) -> SparsePoly<BigRational> {
    let terms = p
        .terms()
        .iter()
        .filter(|(e, _)| e[..6] == xpart[..])
        .map(|(e, c)| {
            let mut rest = *e;
            rest[..6].fill(0);
            (rest, c.clone())
        })
        .collect();
    SparsePoly::from_terms(p.nvars(), terms)
}

/// Whether p and q agree up to a nonzero factor in the fraction field
/// Q(t,s): cross-multiplication by the coefficient polynomials of a shared
/// x-monomial.
pub fn proportional_over_ts(p: &SparsePoly<BigRational>, q: &SparsePoly<BigRational>) -> bool {
    if p.is_zero() || q.is_zero() {
        return p.is_zero() && q.is_zero();
    }
    let mut xpart = [0u16; 6];
    xpart.copy_from_slice(&q.terms()[0].0[..6]);
    let cq = coeff_at_x(q, &xpart);
    let cp = coeff_at_x(p, &xpart);
    if cp.is_zero() {
        return false;
    }
    p.mul(&cq) == q.mul(&cp)
}

/// The scalar a with p = a*q, when the two polynomials over the parameter
/// field are proportional.
pub fn proportional_scalar_mq(p: &SparsePoly<Mq>, q: &SparsePoly<Mq>) -> Option<Mq> {
    if q.is_zero() {
        return if p.is_zero() {
            Some(Mq::from_i64(0))
        } else {
            None
        };
    }
    let (e0, c0) = &q.terms()[0];
    let m0 = p
        .terms()
        .iter()
        .find(|(e, _)| e == e0)
        .map(|(_, c)| c.clone())?;
    let a = m0.mul(&c0.inv()?);
    if *p == q.scale(&a) {
        Some(a)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::buchi::buchi_system;
    use crate::exact::rat;

    fn at(t: i64, s: i64) -> FamilyParams {
        FamilyParams::from_i64(t, s).unwrap()
    }

    #[test]
    fn gamma_values_at_the_buchi_member() {
        let p = at(-1, 1);
        let g: Vec<i64> = (1..=4)
            .map(|i| {
                let q = p.gamma(i).to_rational().unwrap();
                assert!(q.is_integer());
                i64::try_from(q.to_integer()).unwrap()
            })
            .collect();
        assert_eq!(g, vec![1, -2, -3, 1]);
        assert_eq!(p.smoothness_scalar().to_rational().unwrap(), rat(-6, 1));
        assert!(p.is_smooth());
        p.require_smooth().unwrap();
    }

    #[test]
    fn singular_parameters_are_flagged_not_fatal() {
        let p = at(1, 1);
        assert!(!p.is_smooth());
        let err = p.require_smooth().unwrap_err().to_string();
        assert!(err.contains("gamma_2"), "{err}");
        assert!(!at(0, 1).is_smooth());
        assert!(at(2, 3).is_smooth());
    }

    #[test]
    fn buchi_member_matches_x5_up_to_equation_scalars() {
        let system = at(-1, 1).klein_system_rational().unwrap();
        let x5 = buchi_system(5).unwrap();
        assert_eq!(system.len(), x5.len());
        // the family's three quadrics are scalar multiples of the X_5 ones,
        // in order
        let expected = [rat(1, 1), rat(1, 1), rat(1, 1)];
        for ((ours, theirs), scale) in system.iter().zip(&x5).zip(&expected) {
            assert_eq!(*ours, theirs.scale(scale), "{}", ours.to_text(&VAR_NAMES));
        }
    }

    #[test]
    fn symbolic_system_specializes_to_the_numeric_one() {
        for (t, s) in [(-1i64, 1i64), (2, 3), (5, -7)] {
            let p = at(t, s);
            let numeric = p.klein_system_rational().unwrap();
            let point: Vec<BigRational> = [0, 0, 0, 0, 0, 0, t, s, 0]
                .iter()
                .map(|v| rat(*v, 1))
                .collect();
            for (sym, num) in klein_system_symbolic().iter().zip(&numeric) {
                // substitute the values of t and s, keeping x0..x5 formal
                let spec = sym.compose(
                    &(0..NVARS)
                        .map(|i| {
                            if i == TVAR || i == SVAR {
                                SparsePoly::constant(6, point[i].clone())
                            } else if i < 6 {
                                SparsePoly::var(6, i, rat(1, 1))
                            } else {
                                SparsePoly::zero(6)
                            }
                        })
                        .collect::<Vec<_>>(),
                );
                assert_eq!(spec, *num);
            }
        }
    }

    #[test]
    fn proportionality_test_detects_scaling_by_ts_polynomials() {
        let (t, s) = sym_ts();
        let x1 = sym_var(1);
        let x2 = sym_var(2);
        let p = x1.mul(&x1).sub(&x2.mul(&x2).mul(&t));
        let scale = t.mul(&s).add(&s);
        assert!(proportional_over_ts(&p.mul(&scale), &p));
        assert!(proportional_over_ts(&p, &p));
        let other = x1.mul(&x1).sub(&x2.mul(&x2).mul(&s));
        assert!(!proportional_over_ts(&p, &other));
    }

    #[test]
    fn mq_proportionality_returns_the_scalar() {
        let p = at(-1, 1);
        let sys = p.klein_system();
        let c = Mq::from_i64(-3);
        let scaled = sys[0].scale(&c);
        assert_eq!(proportional_scalar_mq(&scaled, &sys[0]), Some(c));
        assert_eq!(proportional_scalar_mq(&sys[0], &sys[1]), None);
    }
}
