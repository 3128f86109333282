//! Splitting of the 4-division polynomial of the marked elliptic curve:
//! the printed quartic factors completely over Q(sqrt2, sqrt3), and the
//! companion quadratics split over Q(sqrt2) and Q(sqrt-2).

use crate::error::{Error, Result};
use crate::exact::{rat_int, Mq, Ring};
use num_rational::BigRational;

/// Ascending coefficients of the printed quartic
/// x^4 - 16x^3 - 12x^2 + 32x + 4.
pub fn quartic_coefficients() -> Vec<BigRational> {
    [4, 32, -12, -16, 1].iter().map(|&c| rat_int(c)).collect()
}

/// The four printed roots 4 + 2 sqrt3 +- (2 sqrt6 + 3 sqrt2) and
/// 4 - 2 sqrt3 +- (2 sqrt6 - 3 sqrt2), all in Q(sqrt2, sqrt3).
pub fn quartic_roots() -> Result<Vec<Mq>> {
    let (s2, s3) = Mq::promote(&Mq::sqrt_int(2)?, &Mq::sqrt_int(3)?)?;
    let s6 = s2.mul(&s3);
    let four = s2.from_i64(4);
    let two = s2.from_i64(2);
    let three = s2.from_i64(3);
    let a = s3.mul(&two);
    let b = s6.mul(&two).add(&s2.mul(&three));
    let c = s6.mul(&two).sub(&s2.mul(&three));
    Ok(vec![
        four.add(&a).add(&b),
        four.add(&a).sub(&b),
        four.sub(&a).add(&c),
        four.sub(&a).sub(&c),
    ])
}

/// Monic polynomial with the given roots, ascending coefficients.
fn monic_from_roots(roots: &[Mq]) -> Vec<Mq> {
    let zero = roots[0].ring_zero();
    let mut coeffs = vec![roots[0].ring_one()];
    for r in roots {
        let mut next = vec![zero.clone(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(r));
        }
        coeffs = next;
    }
    coeffs
}

fn rational_coeffs(coeffs: &[Mq]) -> Option<Vec<BigRational>> {
    coeffs.iter().map(|c| c.to_rational()).collect()
}

/// Outcome of the splitting verification.
#[derive(Clone, Debug)]
pub struct K4Report {
    /// prod (x - r_i) minus the printed quartic vanishes in Q(sqrt2, sqrt3)
    pub expansion_matches: bool,
    pub root_sum: BigRational,
    pub root_product: BigRational,
    /// the root pairs (r1, r2) and (r3, r4) multiply to quadratics with
    /// coefficients in Q(sqrt3)
    pub pair_factors_lie_in_sqrt3: bool,
    /// x^2 - 8x - 2 splits over Q(sqrt2)
    pub first_companion_splits: bool,
    /// x^2 + 2 splits over Q(sqrt-2)
    pub second_companion_splits: bool,
}

impl K4Report {
    pub fn all_checks_pass(&self) -> bool {
        self.expansion_matches
            && self.root_sum == rat_int(16)
            && self.root_product == rat_int(4)
            && self.pair_factors_lie_in_sqrt3
            && self.first_companion_splits
            && self.second_companion_splits
    }
}

fn fixed_by_negating(x: &Mq, generator: i64) -> Result<bool> {
    let gens = x.field().generators();
    if x.is_rational() {
        return Ok(true);
    }
    let idx = gens
        .iter()
        .position(|&g| g == generator)
        .ok_or_else(|| Error::Invalid(format!("{generator} is not a field generator")))?;
    Ok(x.conj(1 << idx) == *x)
}

/// Verify the printed quartic against its printed roots and check the
/// companion quadratics of the 4-division polynomial.
pub fn k4_splitting_check() -> Result<K4Report> {
    let roots = quartic_roots()?;
    let expansion = monic_from_roots(&roots);
    let expansion_matches = match rational_coeffs(&expansion) {
        Some(coeffs) => coeffs == quartic_coefficients(),
        None => false,
    };

    let zero = roots[0].ring_zero();
    let sum = roots.iter().fold(zero.clone(), |acc, r| acc.add(r));
    let product = roots.iter().fold(roots[0].ring_one(), |acc, r| acc.mul(r));
    let root_sum = sum
        .to_rational()
        .ok_or_else(|| Error::Inconsistent("irrational root sum".into()))?;
    let root_product = product
        .to_rational()
        .ok_or_else(|| Error::Inconsistent("irrational root product".into()))?;

    // grouping the printed +- pairs gives quadratics fixed by sqrt2 -> -sqrt2
    let mut pair_factors_lie_in_sqrt3 = true;
    for pair in [[&roots[0], &roots[1]], [&roots[2], &roots[3]]] {
        let factor = monic_from_roots(&[pair[0].clone(), pair[1].clone()]);
        for coeff in &factor {
            if !fixed_by_negating(coeff, 2)? {
                pair_factors_lie_in_sqrt3 = false;
            }
        }
    }

    // x^2 - 8x - 2 = (x - 4 - 3 sqrt2)(x - 4 + 3 sqrt2)
    let s2 = Mq::sqrt_int(2)?;
    let four = s2.from_i64(4);
    let triple = s2.mul(&s2.from_i64(3));
    let first = monic_from_roots(&[four.add(&triple), four.sub(&triple)]);
    let first_companion_splits =
        rational_coeffs(&first) == Some(vec![rat_int(-2), rat_int(-8), rat_int(1)]);

    // x^2 + 2 = (x - sqrt-2)(x + sqrt-2)
    let sm2 = Mq::sqrt_int(-2)?;
    let second = monic_from_roots(&[sm2.clone(), sm2.neg()]);
    let second_companion_splits =
        rational_coeffs(&second) == Some(vec![rat_int(2), rat_int(0), rat_int(1)]);

    Ok(K4Report {
        expansion_matches,
        root_sum,
        root_product,
        pair_factors_lie_in_sqrt3,
        first_companion_splits,
        second_companion_splits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_matches_its_roots() {
        let report = k4_splitting_check().unwrap();
        assert!(report.expansion_matches);
        assert_eq!(report.root_sum, rat_int(16));
        assert_eq!(report.root_product, rat_int(4));
    }

    #[test]
    fn printed_pairs_factor_over_sqrt3() {
        let report = k4_splitting_check().unwrap();
        assert!(report.pair_factors_lie_in_sqrt3);
    }

    #[test]
    fn companion_quadratics_split() {
        let report = k4_splitting_check().unwrap();
        assert!(report.first_companion_splits);
        assert!(report.second_companion_splits);
        assert!(report.all_checks_pass());
    }

    #[test]
    fn roots_are_genuinely_irrational() {
        for r in quartic_roots().unwrap() {
            assert!(!r.is_rational());
        }
    }
}
