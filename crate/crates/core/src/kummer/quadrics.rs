//! Rank-four diagonal quadrics through a family member.
//!
//! The defining system is diagonal in the squared coordinates, so for every
//! pair of coordinates there is (up to scale) a unique linear combination of
//! the three equations in which that pair drops out. Each of the 15 results
//! is diagonal of rank exactly four. This module computes them numerically
//! and symbolically, checks them against a hand-derived reference table, and
//! certifies that no combination can drop to rank three by evaluating all
//! twenty 3x3 minors of the coefficient matrix.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{Mq, Ring, SparsePoly};

use super::{diagonal_matrix_symbolic, gammas_symbolic, sym_ts, FamilyParams, NVARS};

/// Coordinate pairs in the order the reference table lists its rows.
pub const ELIMINATION_PAIRS: [(usize, usize); 15] = [
    (0, 3),
    (2, 4),
    (1, 5),
    (4, 5),
    (3, 5),
    (0, 4),
    (1, 2),
    (1, 3),
    (0, 2),
    (2, 5),
    (3, 4),
    (0, 5),
    (1, 4),
    (2, 3),
    (0, 1),
];

/// One diagonal quadric vanishing on the surface, with a chosen coordinate
/// pair eliminated.
#[derive(Clone, Debug)]
pub struct RankFourQuadric {
    omitted: (usize, usize),
    coeffs: [Mq; 6],
}

impl RankFourQuadric {
    /// The pair of coordinates that does not appear.
    pub fn omitted(&self) -> (usize, usize) {
        self.omitted
    }

    /// Diagonal coefficients on x0^2 .. x5^2.
    pub fn coeffs(&self) -> &[Mq; 6] {
        &self.coeffs
    }

    /// Number of nonzero diagonal coefficients.
    pub fn rank(&self) -> usize {
        self.coeffs.iter().filter(|c| !Ring::is_zero(*c)).count()
    }

    pub fn is_rank_four(&self) -> bool {
        self.rank() == 4
    }

    /// Coefficients rescaled so the lowest-index nonzero one equals 1.
    pub fn normalized_coeffs(&self) -> [Mq; 6] {
        let lead = self
            .coeffs
            .iter()
            .find(|c| !Ring::is_zero(*c))
            .expect("a rank-four quadric has a nonzero coefficient");
        let inv = crate::exact::Field::inv(lead).expect("nonzero leading coefficient");
        std::array::from_fn(|i| self.coeffs[i].mul(&inv))
    }
}

/// Full rank-four report for one parameter point.
#[derive(Clone, Debug)]
pub struct Rank4Analysis {
    /// the 15 eliminations, in `ELIMINATION_PAIRS` order
    pub quadrics: Vec<RankFourQuadric>,
    /// det of the coefficient columns (a, b, c), for every a < b < c
    pub obstruction_dets: Vec<((usize, usize, usize), Mq)>,
}

impl Rank4Analysis {
    pub fn all_rank_four(&self) -> bool {
        self.quadrics.iter().all(RankFourQuadric::is_rank_four)
    }

    pub fn all_obstructions_nonzero(&self) -> bool {
        self.obstruction_dets.iter().all(|(_, d)| !Ring::is_zero(d))
    }
}

macro_rules! cross3 {
    ($a:expr, $b:expr) => {{
        let (a, b) = ($a, $b);
        [
            a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
            a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
            a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
        ]
    }};
}

// Mq and SparsePoly expose the same arithmetic method names but share no
// trait (a polynomial cannot make a `one` out of thin air), hence the macro
// rather than a generic function.
macro_rules! eliminate_pair_impl {
    ($rows:expr, $i:expr, $j:expr, $ty:ty) => {{
        let rows = $rows;
        let (i, j) = ($i, $j);
        let col = |k: usize| -> [$ty; 3] { std::array::from_fn(|r| rows[r][k].clone()) };
        let lambda = cross3!(&col(i), &col(j));
        let coeffs: [$ty; 6] = std::array::from_fn(|m| {
            lambda[0]
                .mul(&rows[0][m])
                .add(&lambda[1].mul(&rows[1][m]))
                .add(&lambda[2].mul(&rows[2][m]))
        });
        if !coeffs[i].is_zero() || !coeffs[j].is_zero() {
            Err(Error::Inconsistent(format!(
                "elimination of the pair ({i}, {j}) left it in the result"
            )))
        } else if coeffs.iter().all(|c| c.is_zero()) {
            Err(Error::Inconsistent(format!(
                "coefficient columns {i} and {j} are dependent"
            )))
        } else {
            Ok(coeffs)
        }
    }};
}

fn eliminate_pair(rows: &[[Mq; 6]; 3], i: usize, j: usize) -> Result<[Mq; 6]> {
    eliminate_pair_impl!(rows, i, j, Mq)
}

fn eliminate_pair_symbolic(
    rows: &[[SparsePoly<BigRational>; 6]; 3],
    i: usize,
    j: usize,
) -> Result<[SparsePoly<BigRational>; 6]> {
    eliminate_pair_impl!(rows, i, j, SparsePoly<BigRational>)
}

fn det3(rows: &[[Mq; 6]; 3], cols: (usize, usize, usize)) -> Mq {
    let (a, b, c) = cols;
    let col = |k: usize| -> [Mq; 3] { std::array::from_fn(|r| rows[r][k].clone()) };
    let (ca, cb, cc) = (col(a), col(b), col(c));
    let l = cross3!(&ca, &cb);
    l[0].mul(&cc[0]).add(&l[1].mul(&cc[1])).add(&l[2].mul(&cc[2]))
}

fn column_triples() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(20);
    for a in 0..6 {
        for b in (a + 1)..6 {
            for c in (b + 1)..6 {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Eliminate every coordinate pair at a smooth parameter point and evaluate
/// all twenty rank-three obstruction determinants.
pub fn rank4_analysis(params: &FamilyParams) -> Result<Rank4Analysis> {
    params.require_smooth()?;
    let rows = params.diagonal_rows();
    let quadrics = ELIMINATION_PAIRS
        .iter()
        .map(|&(i, j)| {
            Ok(RankFourQuadric {
                omitted: (i, j),
                coeffs: eliminate_pair(&rows, i, j)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let obstruction_dets = column_triples()
        .into_iter()
        .map(|t| (t, det3(&rows, t)))
        .collect();
    Ok(Rank4Analysis {
        quadrics,
        obstruction_dets,
    })
}

/// Whether zeroing the coordinates (a, b, c) forces the other three to
/// vanish, for every triple. A `true` entry certifies that the surface
/// misses the corresponding coordinate plane.
pub fn coordinate_triple_checks(
    params: &FamilyParams,
) -> Result<Vec<((usize, usize, usize), bool)>> {
    params.require_smooth()?;
    let rows = params.diagonal_rows();
    Ok(column_triples()
        .into_iter()
        .map(|zeroed| {
            let rest: Vec<usize> = (0..6)
                .filter(|k| *k != zeroed.0 && *k != zeroed.1 && *k != zeroed.2)
                .collect();
            let d = det3(&rows, (rest[0], rest[1], rest[2]));
            (zeroed, !Ring::is_zero(&d))
        })
        .collect())
}

fn symbolic_rows() -> [[SparsePoly<BigRational>; 6]; 3] {
    let m = diagonal_matrix_symbolic();
    std::array::from_fn(|r| std::array::from_fn(|c| m[r][c].clone()))
}

/// Quadric polynomial from diagonal coefficients: sum of coeff * x_m^2.
fn diagonal_to_poly(coeffs: &[SparsePoly<BigRational>; 6]) -> SparsePoly<BigRational> {
    let mut acc = SparsePoly::zero(NVARS);
    for (m, c) in coeffs.iter().enumerate() {
        let x = SparsePoly::var(NVARS, m, BigRational::one());
        acc = acc.add(&c.mul(&x).mul(&x));
    }
    acc
}

/// The 15 eliminations carried out with (t, s) kept formal, as quadric
/// polynomials.
pub fn elimination_symbolic() -> Vec<((usize, usize), SparsePoly<BigRational>)> {
    let rows = symbolic_rows();
    ELIMINATION_PAIRS
        .iter()
        .map(|&(i, j)| {
            let coeffs = eliminate_pair_symbolic(&rows, i, j)
                .expect("symbolic elimination is never degenerate");
            ((i, j), diagonal_to_poly(&coeffs))
        })
        .collect()
}

struct TableTerm {
    var: usize,
    coeff: i64,
    t_pow: u32,
    s_pow: u32,
    gammas: &'static [usize],
}

const fn term(
    var: usize,
    coeff: i64,
    t_pow: u32,
    s_pow: u32,
    gammas: &'static [usize],
) -> TableTerm {
    TableTerm {
        var,
        coeff,
        t_pow,
        s_pow,
        gammas,
    }
}

/// Hand-derived reference eliminations, one row per pair in
/// `ELIMINATION_PAIRS` order. Each row lists the diagonal coefficients as
/// integer * t^a * s^b * (product of the cached smoothness factors).
const REFERENCE_TABLE: [[TableTerm; 4]; 15] = [
    [
        term(1, 1, 0, 0, &[1]),
        term(2, -2, 2, 0, &[1]),
        term(4, 2, 0, 2, &[4]),
        term(5, -1, 0, 0, &[4]),
    ],
    [
        term(1, 1, 0, 1, &[]),
        term(3, 1, 0, 0, &[2]),
        term(5, -1, 1, 0, &[]),
        term(0, -4, 1, 1, &[2]),
    ],
    [
        term(2, 1, 2, 1, &[]),
        term(3, -1, 1, 1, &[2]),
        term(4, -1, 1, 2, &[]),
        term(0, 1, 0, 0, &[2]),
    ],
    [
        term(1, 1, 0, 0, &[]),
        term(2, -2, 2, 0, &[]),
        term(3, 1, 0, 0, &[4]),
        term(0, -2, 0, 0, &[4]),
    ],
    [
        term(1, 1, 1, 1, &[2]),
        term(2, 1, 2, 1, &[3]),
        term(4, -1, 1, 2, &[4]),
        term(0, -1, 0, 0, &[2, 3, 4]),
    ],
    [
        term(1, 1, 0, 1, &[3]),
        term(2, 4, 3, 1, &[2]),
        term(3, -1, 0, 0, &[2, 3, 4]),
        term(5, -1, 1, 0, &[4]),
    ],
    [
        term(3, 1, 0, 0, &[1]),
        term(4, -2, 0, 2, &[]),
        term(5, 1, 0, 0, &[]),
        term(0, -2, 0, 0, &[1]),
    ],
    [
        term(2, 1, 2, 1, &[1]),
        term(4, -1, 1, 2, &[3]),
        term(5, 1, 1, 1, &[2]),
        term(0, -1, 0, 0, &[1, 2, 3]),
    ],
    [
        term(1, 1, 0, 1, &[1]),
        term(3, -1, 0, 0, &[1, 2, 3]),
        term(4, 4, 1, 3, &[2]),
        term(5, -1, 1, 0, &[3]),
    ],
    [
        term(1, 1, 0, 1, &[]),
        term(3, 1, 0, 1, &[3]),
        term(4, -2, 1, 2, &[]),
        term(0, -2, 1, 0, &[3]),
    ],
    [
        term(1, 1, 1, 0, &[3]),
        term(2, 2, 2, 0, &[2]),
        term(5, -1, 1, 0, &[4]),
        term(0, -2, 0, 0, &[2, 3, 4]),
    ],
    [
        term(1, 1, 0, 0, &[2]),
        term(2, 2, 3, 0, &[3]),
        term(3, -1, 0, 0, &[2, 3, 4]),
        term(4, -2, 1, 2, &[4]),
    ],
    [
        term(2, 2, 2, 1, &[]),
        term(3, -1, 1, 0, &[3]),
        term(5, -1, 1, 0, &[]),
        term(0, 2, 0, 1, &[3]),
    ],
    [
        term(1, 1, 0, 1, &[1]),
        term(4, 2, 0, 2, &[2]),
        term(5, -1, 0, 1, &[3]),
        term(0, -2, 0, 0, &[1, 2, 3]),
    ],
    [
        term(2, 2, 2, 1, &[1]),
        term(3, -1, 0, 0, &[1, 2, 3]),
        term(4, -2, 0, 3, &[3]),
        term(5, 1, 0, 0, &[2]),
    ],
];

/// The reference table as quadric polynomials, keyed by omitted pair.
pub fn reference_quadrics() -> Vec<((usize, usize), SparsePoly<BigRational>)> {
    let (t, s) = sym_ts();
    let gs = gammas_symbolic();
    REFERENCE_TABLE
        .iter()
        .zip(ELIMINATION_PAIRS.iter())
        .map(|(row, &pair)| {
            let mut acc = SparsePoly::zero(NVARS);
            for tm in row {
                let mut c = SparsePoly::constant(NVARS, BigRational::from_integer(tm.coeff.into()));
                for _ in 0..tm.t_pow {
                    c = c.mul(&t);
                }
                for _ in 0..tm.s_pow {
                    c = c.mul(&s);
                }
                for &g in tm.gammas {
                    c = c.mul(&gs[g - 1]);
                }
                let x = SparsePoly::var(NVARS, tm.var, BigRational::one());
                acc = acc.add(&c.mul(&x).mul(&x));
            }
            (pair, acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::kummer::proportional_over_ts;

    #[test]
    fn symbolic_eliminations_match_the_reference_table() {
        let computed = elimination_symbolic();
        let reference = reference_quadrics();
        for ((pc, qc), (pr, qr)) in computed.iter().zip(reference.iter()) {
            assert_eq!(pc, pr);
            assert!(
                proportional_over_ts(qc, qr),
                "pair {pc:?} disagrees with the reference row"
            );
        }
    }

    #[test]
    fn mismatched_rows_are_not_proportional() {
        let computed = elimination_symbolic();
        let reference = reference_quadrics();
        assert!(!proportional_over_ts(&computed[0].1, &reference[1].1));
    }

    #[test]
    fn first_row_at_the_buchi_member() {
        let params = FamilyParams::from_i64(-1, 1).unwrap();
        let analysis = rank4_analysis(&params).unwrap();
        let q = &analysis.quadrics[0];
        assert_eq!(q.omitted(), (0, 3));
        let coeffs = q.normalized_coeffs();
        let values: Vec<BigRational> = coeffs
            .iter()
            .map(|c| c.to_rational().unwrap())
            .collect();
        assert_eq!(
            values,
            vec![rat(0, 1), rat(1, 1), rat(-2, 1), rat(0, 1), rat(2, 1), rat(-1, 1)]
        );
    }

    #[test]
    fn every_elimination_has_rank_exactly_four() {
        for (t, s) in [(-1, 1), (2, 3), (3, 5)] {
            let analysis = rank4_analysis(&FamilyParams::from_i64(t, s).unwrap()).unwrap();
            assert!(analysis.all_rank_four(), "params ({t}, {s})");
        }
    }

    #[test]
    fn obstruction_determinants_are_nonzero_at_sample_members() {
        for (t, s) in [(-1, 1), (2, 3)] {
            let analysis = rank4_analysis(&FamilyParams::from_i64(t, s).unwrap()).unwrap();
            assert_eq!(analysis.obstruction_dets.len(), 20);
            assert!(analysis.all_obstructions_nonzero(), "params ({t}, {s})");
        }
    }

    #[test]
    fn zeroing_any_three_coordinates_is_impossible_on_the_surface() {
        let params = FamilyParams::from_i64(-1, 1).unwrap();
        let checks = coordinate_triple_checks(&params).unwrap();
        assert_eq!(checks.len(), 20);
        assert!(checks.iter().all(|(_, empty)| *empty));
    }

    #[test]
    fn singular_parameters_are_rejected() {
        assert!(rank4_analysis(&FamilyParams::from_i64(0, 1).unwrap()).is_err());
    }
}
