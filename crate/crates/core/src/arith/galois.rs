//! The mod-8 matrix group generated by the four Frobenius matrices:
//! closure, index in GL2(Z/8), solvability, and the trace-zero census.

use crate::error::{Error, Result};
use std::collections::BTreeSet;

const MOD: u64 = 8;

/// 2x2 matrix over Z/8, row major.
pub type Mat8 = [u64; 4];

fn mul(x: Mat8, y: Mat8) -> Mat8 {
    [
        (x[0] * y[0] + x[1] * y[2]) % MOD,
        (x[0] * y[1] + x[1] * y[3]) % MOD,
        (x[2] * y[0] + x[3] * y[2]) % MOD,
        (x[2] * y[1] + x[3] * y[3]) % MOD,
    ]
}

fn det(m: Mat8) -> u64 {
    (m[0] * m[3] + MOD * MOD - m[1] * m[2]) % MOD
}

fn trace(m: Mat8) -> u64 {
    (m[0] + m[3]) % MOD
}

const IDENTITY: Mat8 = [1, 0, 0, 1];

/// Inverse of a matrix with unit determinant; odd units mod 8 are their
/// own inverses, so the adjugate needs only one extra scaling.
fn inverse(m: Mat8) -> Result<Mat8> {
    let d = det(m);
    if d % 2 == 0 {
        return Err(Error::NotInvertible);
    }
    let adj = [m[3], (MOD - m[1]) % MOD, (MOD - m[2]) % MOD, m[0]];
    Ok(adj.map(|e| e * d % MOD))
}

/// Subgroup generated by a list of unit matrices, as a sorted set.
fn closure(generators: &[Mat8]) -> Result<BTreeSet<Mat8>> {
    for &g in generators {
        if det(g) % 2 == 0 {
            return Err(Error::NotInvertible);
        }
    }
    let mut seen: BTreeSet<Mat8> = BTreeSet::new();
    let mut frontier = vec![IDENTITY];
    seen.insert(IDENTITY);
    while let Some(m) = frontier.pop() {
        for &g in generators {
            let next = mul(m, g);
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    Ok(seen)
}

fn gl2_mod8_order() -> usize {
    (0u64..MOD.pow(4))
        .filter(|&code| {
            let m = [
                code % MOD,
                code / MOD % MOD,
                code / (MOD * MOD) % MOD,
                code / (MOD * MOD * MOD) % MOD,
            ];
            det(m) % 2 == 1
        })
        .count()
}

/// Derived series of a finite matrix group; returns the subgroup sizes
/// down to (and including) the first repetition or the trivial group.
fn derived_series(group: &BTreeSet<Mat8>) -> Result<Vec<usize>> {
    let mut sizes = vec![group.len()];
    let mut current = group.clone();
    loop {
        let mut commutators: Vec<Mat8> = Vec::new();
        for &g in &current {
            for &h in &current {
                let c = mul(mul(g, h), mul(inverse(g)?, inverse(h)?));
                commutators.push(c);
            }
        }
        commutators.sort_unstable();
        commutators.dedup();
        let next = closure(&commutators)?;
        let stalled = next.len() == *sizes.last().expect("nonempty");
        sizes.push(next.len());
        if next.len() == 1 || stalled {
            return Ok(sizes);
        }
        current = next;
    }
}

/// Everything the group analysis produces.
#[derive(Clone, Debug)]
pub struct GaloisImageReport {
    pub generators: [Mat8; 4],
    pub order: usize,
    pub gl2_order: usize,
    pub index: usize,
    pub solvable: bool,
    pub derived_sizes: Vec<usize>,
    pub trace_zero_count: usize,
    /// sorted determinant multiset of the trace-zero elements
    pub trace_zero_dets: Vec<u64>,
}

/// The four printed generator matrices mod 8.
pub fn image_generators() -> [Mat8; 4] {
    [[4, 3, 1, 4], [2, 1, 1, 2], [3, 6, 2, 7], [1, 2, 6, 3]]
}

/// Close the four generators inside GL2(Z/8) and report order, index,
/// solvability and the trace-zero census.
pub fn galois_image_report() -> Result<GaloisImageReport> {
    let generators = image_generators();
    let group = closure(&generators)?;
    let order = group.len();
    let gl2_order = gl2_mod8_order();
    if gl2_order % order != 0 {
        return Err(Error::Inconsistent(format!(
            "subgroup order {order} does not divide {gl2_order}"
        )));
    }
    let index = gl2_order / order;
    let derived_sizes = derived_series(&group)?;
    let solvable = *derived_sizes.last().expect("nonempty") == 1;
    let mut trace_zero_dets: Vec<u64> = group
        .iter()
        .filter(|&&m| trace(m) == 0)
        .map(|&m| det(m))
        .collect();
    trace_zero_dets.sort_unstable();
    Ok(GaloisImageReport {
        generators,
        order,
        gl2_order,
        index,
        solvable,
        derived_sizes,
        trace_zero_count: trace_zero_dets.len(),
        trace_zero_dets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_determinants_are_units() {
        let dets: Vec<u64> = image_generators().iter().map(|&g| det(g)).collect();
        assert_eq!(dets, vec![5, 3, 1, 7]);
    }

    #[test]
    fn closure_has_order_sixty_four() {
        let report = galois_image_report().unwrap();
        assert_eq!(report.order, 64);
        assert_eq!(report.gl2_order, 1536);
        assert_eq!(report.index, 24);
        assert_eq!(report.order * report.index, report.gl2_order);
    }

    #[test]
    fn group_is_solvable() {
        let report = galois_image_report().unwrap();
        assert!(report.solvable);
        assert!(report.derived_sizes.len() >= 2);
        assert_eq!(*report.derived_sizes.last().unwrap(), 1);
    }

    #[test]
    fn trace_zero_census() {
        let report = galois_image_report().unwrap();
        assert_eq!(report.trace_zero_count, 16);
        assert!(report.trace_zero_dets.iter().all(|&d| d == 5 || d == 7));
    }

    #[test]
    fn closure_contains_inverses() {
        let group = closure(&image_generators()).unwrap();
        for &m in &group {
            assert!(group.contains(&inverse(m).unwrap()));
        }
    }

    #[test]
    fn singular_generators_are_rejected() {
        assert!(closure(&[[2, 0, 0, 2]]).is_err());
    }
}
