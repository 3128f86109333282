//! Intersection theory on the distinguished member: the 34 generating
//! curve classes (32 lines plus the two conics C1 and C2), their Gram
//! matrix, and the lattice computations built on it.

pub mod invariants;
pub mod mw;
pub mod tables;

use crate::error::{Error, Result};
use crate::exact::Mat;
use crate::kummer::fibers::{
    c1, c2, conic_conic_intersection, conic_line_intersection, distinguished_member, ConicCurve,
};
use crate::kummer::lines::{line_name, lines, masks_adjacent, FamilyLine};
use num_bigint::BigInt;

/// Number of generating classes: 32 lines, then C1, then C2.
pub const CLASS_COUNT: usize = 34;

/// One of the 34 generating curve classes, in the canonical ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveClassId {
    /// A line, by its canonical sign-subset mask (0..31).
    Line { mask: u8 },
    /// The conic C1 over the field of sqrt(2).
    ConicOne,
    /// The conic C2 over the field of sqrt(-2).
    ConicTwo,
}

impl CurveClassId {
    /// Index into the canonical ordering of the 34 generators.
    pub fn index(&self) -> usize {
        match self {
            CurveClassId::Line { mask } => *mask as usize,
            CurveClassId::ConicOne => 32,
            CurveClassId::ConicTwo => 33,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            0..=31 => Ok(CurveClassId::Line { mask: i as u8 }),
            32 => Ok(CurveClassId::ConicOne),
            33 => Ok(CurveClassId::ConicTwo),
            _ => Err(Error::Invalid(format!("class index {i} out of range"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            CurveClassId::Line { mask } => line_name(*mask),
            CurveClassId::ConicOne => "C1".into(),
            CurveClassId::ConicTwo => "C2".into(),
        }
    }
}

/// Labels of the 34 classes in Gram order.
pub fn class_labels() -> Vec<String> {
    (0..CLASS_COUNT)
        .map(|i| CurveClassId::from_index(i).expect("in range").label())
        .collect()
}

struct ClassData {
    lines: Vec<FamilyLine>,
    c1: ConicCurve,
    c2: ConicCurve,
}

fn class_data() -> Result<ClassData> {
    Ok(ClassData {
        lines: lines(&distinguished_member())?,
        c1: c1()?,
        c2: c2()?,
    })
}

fn pair_with_data(data: &ClassData, a: &CurveClassId, b: &CurveClassId) -> Result<i64> {
    if a == b {
        // irreducible rational curve on a K3 surface
        return Ok(-2);
    }
    let conic = |id: &CurveClassId| match id {
        CurveClassId::ConicOne => Some(&data.c1),
        CurveClassId::ConicTwo => Some(&data.c2),
        CurveClassId::Line { .. } => None,
    };
    match (a, b) {
        (CurveClassId::Line { mask: m }, CurveClassId::Line { mask: n }) => {
            Ok(if masks_adjacent(*m, *n) { 1 } else { 0 })
        }
        (CurveClassId::Line { mask }, other) | (other, CurveClassId::Line { mask }) => {
            let c = conic(other).expect("non-line class is a conic");
            Ok(conic_line_intersection(c, &data.lines[*mask as usize])? as i64)
        }
        (x, y) => {
            let cx = conic(x).expect("conic class");
            let cy = conic(y).expect("conic class");
            Ok(conic_conic_intersection(cx, cy)? as i64)
        }
    }
}

/// Intersection number of two generating classes at the distinguished
/// member. Distinct lines meet in 0 or 1 points, conic pairings are
/// scheme lengths, and every class has self-intersection -2.
pub fn intersection_number(a: &CurveClassId, b: &CurveClassId) -> Result<i64> {
    let data = class_data()?;
    pair_with_data(&data, a, b)
}

/// The 34x34 Gram matrix of the generating classes in canonical order.
pub fn picard_gram() -> Result<Mat<BigInt>> {
    let data = class_data()?;
    let ids: Vec<CurveClassId> = (0..CLASS_COUNT)
        .map(|i| CurveClassId::from_index(i).expect("in range"))
        .collect();
    let mut g = Mat::filled(CLASS_COUNT, CLASS_COUNT, BigInt::from(0));
    for i in 0..CLASS_COUNT {
        for j in i..CLASS_COUNT {
            let v = BigInt::from(pair_with_data(&data, &ids[i], &ids[j])?);
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{smith_normal_form, symmetric_signature};
    use num_traits::Zero;

    #[test]
    fn gram_diagonal_and_valence() {
        let g = picard_gram().unwrap();
        assert!(g.is_symmetric());
        for i in 0..CLASS_COUNT {
            assert_eq!(g.get(i, i), &BigInt::from(-2));
        }
        // each line meets exactly 6 other lines
        for i in 0..32 {
            let ones = (0..32)
                .filter(|&j| j != i && g.get(i, j) == &BigInt::from(1))
                .count();
            assert_eq!(ones, 6, "line {i}");
        }
    }

    #[test]
    fn gram_rank_signature_and_divisors() {
        let g = picard_gram().unwrap();
        assert_eq!(g.to_rational().rank(), 19);
        let (np, nm, nz) = symmetric_signature(&g.to_rational()).unwrap();
        assert_eq!((np, nm, nz), (1, 18, 15));
        let snf = smith_normal_form(&g);
        let nonzero: Vec<&BigInt> = snf.factors().iter().filter(|d| !d.is_zero()).collect();
        assert_eq!(nonzero.len(), 19);
        let product: BigInt = nonzero.into_iter().product();
        assert_eq!(product, BigInt::from(64));
    }

    #[test]
    fn sample_intersection_numbers() {
        let ell = CurveClassId::Line { mask: 0 };
        let s0_ell = CurveClassId::Line { mask: 1 };
        let s01_ell = CurveClassId::Line { mask: 3 };
        assert_eq!(intersection_number(&ell, &s0_ell).unwrap(), 1);
        assert_eq!(intersection_number(&ell, &s01_ell).unwrap(), 0);
        assert_eq!(intersection_number(&ell, &ell).unwrap(), -2);
        assert_eq!(
            intersection_number(&CurveClassId::ConicOne, &CurveClassId::ConicOne).unwrap(),
            -2
        );
        assert_eq!(
            intersection_number(&CurveClassId::ConicOne, &CurveClassId::ConicTwo).unwrap(),
            0
        );
    }

    #[test]
    fn labels_are_distinct() {
        let labels = class_labels();
        assert_eq!(labels.len(), 34);
        let set: std::collections::BTreeSet<&String> = labels.iter().collect();
        assert_eq!(set.len(), 34);
        assert_eq!(labels[0], "ell");
        assert_eq!(labels[32], "C1");
        assert_eq!(labels[33], "C2");
    }
}
