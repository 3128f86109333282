//! Genus-2 curve attached to a family member and its two elliptic
//! quotients.
//!
//! The curve is y^2 = x(x - 2t)(x - 2s)(x - 1/t)(x - 1/s). The involution
//! x -> 2/x swaps the finite branch points in pairs and fixes x = +-sqrt(2),
//! so pushing down along x + 2/x yields two elliptic curves over the
//! ground field extended by sqrt(2), with branch points
//! {-+2sqrt(2), 2t + 1/t, 2s + 1/s}. Their j-invariants are computed
//! exactly, together with rationality and integrality verdicts.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Field, Mq, Ring};

use super::FamilyParams;

/// One elliptic quotient: three branch points, the cross-ratio parameter,
/// and the j-invariant with exactness flags.
#[derive(Clone, Debug)]
pub struct EllipticPiece {
    /// branch points (first the fixed point -+2sqrt(2), then the two images
    /// of the finite branch pairs)
    pub roots: [Mq; 3],
    /// lambda = (e3 - e1) / (e2 - e1)
    pub lambda: Mq,
    pub j: Mq,
    pub j_is_rational: bool,
    pub j_is_rational_integer: bool,
    pub j_is_algebraic_integer: bool,
}

impl EllipticPiece {
    /// Monic cubic with the three branch points as roots, constant term
    /// first.
    pub fn cubic(&self) -> Vec<Mq> {
        monic_from_roots(&self.roots)
    }
}

/// The quintic model and both elliptic quotients.
#[derive(Clone, Debug)]
pub struct Genus2Data {
    /// finite branch points 0, 2t, 2s, 1/t, 1/s
    pub roots: [Mq; 5],
    /// the quotient with branch point -2sqrt(2), then the one with
    /// +2sqrt(2)
    pub pieces: [EllipticPiece; 2],
}

impl Genus2Data {
    /// Monic quintic with the finite branch points as roots, constant term
    /// first.
    pub fn quintic(&self) -> Vec<Mq> {
        monic_from_roots(&self.roots)
    }
}

/// Coefficients (constant first) of the monic polynomial with the given
/// roots.
fn monic_from_roots(roots: &[Mq]) -> Vec<Mq> {
    let one = roots[0].ring_one();
    let zero = roots[0].ring_zero();
    let mut coeffs = vec![one];
    for r in roots {
        let mut next = vec![zero.clone(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&r.mul(c));
        }
        coeffs = next;
    }
    coeffs
}

/// j-invariant of the double cover branched over 0, 1, infinity and
/// lambda.
fn j_from_lambda(lambda: &Mq) -> Result<Mq> {
    let one = lambda.ring_one();
    let n = lambda.mul(lambda).sub(lambda).add(&one);
    let d = lambda.mul(lambda).mul(&lambda.sub(&one)).mul(&lambda.sub(&one));
    let inv = d
        .inv()
        .ok_or_else(|| Error::Invalid("degenerate cross-ratio".to_string()))?;
    Ok(n.mul(&n).mul(&n).mul(&inv).mul_rat(&BigRational::from_integer(256.into())))
}

/// Product of (X - conjugate) over the Galois orbit, as rational
/// coefficients, constant first. Integrality of all of them certifies an
/// algebraic integer.
fn conjugate_polynomial(x: &Mq) -> Result<Vec<BigRational>> {
    let r = x.reduced();
    let k = r.field().num_generators();
    let conjugates: Vec<Mq> = (0..1usize << k).map(|mask| r.conj(mask)).collect();
    let coeffs = monic_from_roots(&conjugates);
    coeffs
        .iter()
        .map(|c| {
            c.to_rational()
                .ok_or_else(|| Error::Inconsistent("conjugate product is not rational".into()))
        })
        .collect()
}

fn is_rational_integer(q: &BigRational) -> bool {
    Zero::is_zero(&(q - q.trunc()))
}

/// Build the genus-2 data at a smooth parameter point. Smoothness of the
/// family member is exactly what keeps the five branch points distinct and
/// both cross-ratios away from 0 and 1.
pub fn genus2_data(params: &FamilyParams) -> Result<Genus2Data> {
    params.require_smooth()?;
    let sqrt2 = Mq::sqrt_int(2)?;
    let (t, _) = Mq::promote(params.t(), &sqrt2)?;
    let (s, sqrt2) = Mq::promote(params.s(), &sqrt2)?;
    let zero = t.ring_zero();
    let two = t.from_i64(2);
    let t_inv = t.inv().expect("t != 0 at a smooth point");
    let s_inv = s.inv().expect("s != 0 at a smooth point");
    let roots = [
        zero,
        two.mul(&t),
        two.mul(&s),
        t_inv.clone(),
        s_inv.clone(),
    ];
    let r1 = two.mul(&t).add(&t_inv);
    let r2 = two.mul(&s).add(&s_inv);
    let fixed = two.mul(&sqrt2);

    let piece = |e1: Mq| -> Result<EllipticPiece> {
        let num = r2.sub(&e1);
        let den = r1.sub(&e1);
        let lambda = num
            .mul(&den.inv().ok_or_else(|| {
                Error::Inconsistent("coincident branch points on a quotient".into())
            })?);
        let j = j_from_lambda(&lambda)?;
        let j_is_rational = j.is_rational();
        let j_is_rational_integer = j
            .to_rational()
            .map(|q| is_rational_integer(&q))
            .unwrap_or(false);
        let char_poly = conjugate_polynomial(&j)?;
        let j_is_algebraic_integer = char_poly.iter().all(is_rational_integer);
        Ok(EllipticPiece {
            roots: [e1, r1.clone(), r2.clone()],
            lambda,
            j,
            j_is_rational,
            j_is_rational_integer,
            j_is_algebraic_integer,
        })
    };

    Ok(Genus2Data {
        roots,
        pieces: [piece(fixed.neg())?, piece(fixed)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_bigint::BigInt;

    fn rational_j_set(data: &Genus2Data) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = data
            .pieces
            .iter()
            .map(|p| p.j.to_rational().expect("rational j"))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn buchi_member_quintic_and_j() {
        let data = genus2_data(&FamilyParams::from_i64(-1, 1).unwrap()).unwrap();
        // x(x-(-2))(x-2)(x-(-1))(x-1) = x^5 - 5x^3 + 4x
        let quintic: Vec<BigRational> = data
            .quintic()
            .iter()
            .map(|c| c.to_rational().unwrap())
            .collect();
        assert_eq!(
            quintic,
            vec![rat(0, 1), rat(4, 1), rat(0, 1), rat(-5, 1), rat(0, 1), rat(1, 1)]
        );
        // both quotients have branch points {-+2sqrt2, -3, 3} and the same
        // rational, non-integral j = 2744000/9
        for p in &data.pieces {
            assert_eq!(p.roots[1].to_rational().unwrap(), rat(-3, 1));
            assert_eq!(p.roots[2].to_rational().unwrap(), rat(3, 1));
            assert!(p.j_is_rational);
            assert!(!p.j_is_rational_integer);
            assert!(!p.j_is_algebraic_integer);
        }
        assert_eq!(
            rational_j_set(&data),
            vec![rat(2744000, 9), rat(2744000, 9)]
        );
    }

    #[test]
    fn lambda_at_the_buchi_member() {
        let data = genus2_data(&FamilyParams::from_i64(-1, 1).unwrap()).unwrap();
        // lambda = -(3 + 2 sqrt2)^2 = -17 - 12 sqrt2 on the first piece
        let sqrt2 = Mq::sqrt_int(2).unwrap();
        let expected = sqrt2
            .from_i64(-17)
            .sub(&sqrt2.from_i64(12).mul(&sqrt2));
        assert_eq!(data.pieces[0].lambda, expected);
    }

    #[test]
    fn second_sample_member_j_values() {
        // (t, s) = (2 sqrt2, sqrt2 / 3): branch points 17 sqrt2 / 4 and
        // 13 sqrt2 / 6, cross-ratios 2/3 and 2/27
        let sqrt2 = Mq::sqrt_int(2).unwrap();
        let t = sqrt2.from_i64(2).mul(&sqrt2);
        let s = sqrt2.mul_rat(&BigRational::new(1.into(), 3.into()));
        let data = genus2_data(&FamilyParams::new(t, s).unwrap()).unwrap();
        assert_eq!(data.pieces[0].lambda.to_rational().unwrap(), rat(2, 3));
        assert_eq!(data.pieces[1].lambda.to_rational().unwrap(), rat(2, 27));
        // the two j-invariants as an unordered set
        let pow = |b: i64, e: u32| BigInt::from(b).pow(e);
        let j_small = BigRational::new(pow(2, 6) * pow(7, 3), pow(3, 2));
        let j_large = BigRational::new(pow(2, 6) * pow(7, 3) * pow(97, 3), pow(3, 6) * pow(5, 4));
        let mut expected = vec![j_small, j_large];
        expected.sort();
        assert_eq!(rational_j_set(&data), expected);
        for p in &data.pieces {
            assert!(p.j_is_rational);
            assert!(!p.j_is_rational_integer);
        }
    }

    #[test]
    fn irrational_j_flags_are_consistent() {
        let data = genus2_data(&FamilyParams::from_i64(2, 3).unwrap()).unwrap();
        for p in &data.pieces {
            assert!(!p.j_is_rational);
            assert!(!p.j_is_rational_integer);
            // the conjugate-product certificate must agree with itself when
            // recomputed
            let again = conjugate_polynomial(&p.j).unwrap();
            assert_eq!(
                again.iter().all(is_rational_integer),
                p.j_is_algebraic_integer
            );
        }
    }

    #[test]
    fn cubic_coefficients_expand_the_branch_points() {
        let data = genus2_data(&FamilyParams::from_i64(-1, 1).unwrap()).unwrap();
        let cubic = data.pieces[0].cubic();
        assert_eq!(cubic.len(), 4);
        // evaluating at each branch point gives zero
        for root in &data.pieces[0].roots {
            let mut acc = root.ring_zero();
            let mut pow = root.ring_one();
            for c in &cubic {
                acc = acc.add(&c.mul(&pow));
                pow = pow.mul(root);
            }
            assert!(Ring::is_zero(&acc));
        }
    }

    #[test]
    fn singular_parameters_are_rejected() {
        assert!(genus2_data(&FamilyParams::from_i64(1, 1).unwrap()).is_err());
    }
}
