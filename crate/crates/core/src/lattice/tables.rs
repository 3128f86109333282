//! The Jacobian-side Neron-Severi tables and the discriminant-form chain
//! from them to the Kummer-side Picard lattices.
//!
//! For each symmetry class the generic transcendental data is pinned down
//! by a small lattice spanned by four elliptic classes and the theta
//! class. Those generator sets and their pairings are hardcoded here; the
//! code expands each Gram matrix, matches it against the reference
//! lattice, then runs the chain: embed the reference primitively into
//! U^3, take the orthogonal complement T, double it, and compare the
//! resulting invariants with the big reference lattice of the Kummer
//! side.

use crate::error::{Error, Result};
use crate::exact::{smith_normal_form, Mat};
use crate::kummer::auts::SymmetryClass;
use crate::lattice::invariants::{lattice_invariants, reference_lattice, LatticeInvariants};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Pairing matrix of the four elliptic classes (e_t, e_st, e_ht, e_rt).
/// The (2,3) entry distinguishes the two largest symmetry classes.
fn elliptic_pairing(m: i64) -> Mat<BigRational> {
    let rows = [
        [0i64, 4, 2, 1],
        [4, 0, 2, 3],
        [2, 2, 0, m],
        [1, 3, m, 0],
    ];
    Mat::from_fn(4, 4, |i, j| BigRational::from(BigInt::from(rows[i][j])))
}

/// Generators of the five small lattices, as rational combinations of
/// (e_t, e_st, e_ht, e_rt). The theta class is (e_t + e_st)/2.
fn case_generators(case: SymmetryClass) -> (Vec<Vec<BigRational>>, i64) {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let v = |coords: [(i64, i64); 4]| -> Vec<BigRational> {
        coords.iter().map(|&(n, d)| r(n, d)).collect()
    };
    // theta = (1/2, 1/2, 0, 0)
    match case {
        SymmetryClass::V4 => (
            vec![
                v([(1, 2), (-1, 2), (0, 1), (0, 1)]), // (e_t - e_st)/2
                v([(1, 2), (1, 2), (0, 1), (0, 1)]),  // theta
            ],
            2,
        ),
        SymmetryClass::D4 => (
            vec![
                v([(1, 1), (0, 1), (0, 1), (0, 1)]),   // e_t
                v([(0, 1), (0, 1), (1, 1), (0, 1)]),   // e_ht
                v([(-1, 2), (1, 2), (-1, 1), (0, 1)]), // theta - e_t - e_ht
            ],
            2,
        ),
        SymmetryClass::D6 => (
            vec![
                v([(1, 1), (0, 1), (0, 1), (0, 1)]),    // e_t
                v([(0, 1), (0, 1), (0, 1), (1, 1)]),    // e_rt
                v([(-3, 2), (1, 2), (0, 1), (-2, 1)]),  // theta - 2 e_t - 2 e_rt
            ],
            2,
        ),
        SymmetryClass::TwoD6 => (
            vec![
                v([(1, 1), (0, 1), (0, 1), (0, 1)]),   // e_t
                v([(0, 1), (0, 1), (0, 1), (1, 1)]),   // e_rt
                v([(1, 2), (1, 2), (-1, 1), (0, 1)]),  // theta - e_ht
                v([(-3, 2), (1, 2), (0, 1), (-2, 1)]), // theta - 2 e_t - 2 e_rt
            ],
            2,
        ),
        SymmetryClass::S4Tilde => (
            vec![
                v([(1, 1), (0, 1), (0, 1), (0, 1)]),   // e_t
                v([(0, 1), (0, 1), (0, 1), (1, 1)]),   // e_rt
                v([(-1, 2), (1, 2), (-1, 1), (0, 1)]), // theta - e_t - e_ht
                v([(1, 1), (0, 1), (-1, 1), (2, 1)]),  // e_t - e_ht + 2 e_rt
            ],
            1,
        ),
    }
}

/// Name of the small reference lattice attached to each symmetry class.
pub fn jacobian_lattice_name(case: SymmetryClass) -> &'static str {
    match case {
        SymmetryClass::V4 => "(2)+(-2)",
        SymmetryClass::D4 => "U(2)+(-2)",
        SymmetryClass::D6 => "U+(-6)",
        SymmetryClass::TwoD6 => "U+(-2)+(-6)",
        SymmetryClass::S4Tilde => "U+(-2)+(-4)",
    }
}

/// Name of the big reference lattice on the Kummer side.
pub fn kummer_lattice_name(case: SymmetryClass) -> &'static str {
    match case {
        SymmetryClass::V4 => "U(2)+E8+D7+(-4)",
        SymmetryClass::D4 => "U(4)+E8+E8+(-4)",
        SymmetryClass::D6 => "U(2)+E8+E8+(-12)",
        SymmetryClass::TwoD6 => "U+E8+E8+(-4)+(-12)",
        SymmetryClass::S4Tilde => "U+E8+E8+(-4)+(-8)",
    }
}

/// One row of the table check: the Gram expanded from the stated
/// generators, compared with the reference lattice at invariant level.
#[derive(Clone, Debug)]
pub struct NsTableEntry {
    pub case: SymmetryClass,
    pub gram: Mat<BigInt>,
    pub invariants: LatticeInvariants,
    pub reference_name: &'static str,
    pub matches_reference: bool,
}

fn expand_case_gram(case: SymmetryClass) -> Result<Mat<BigInt>> {
    let (gens, m) = case_generators(case);
    let pairing = elliptic_pairing(m);
    let n = gens.len();
    let mut out = Mat::filled(n, n, BigInt::zero());
    for i in 0..n {
        let gv = pairing.mul_vec(&gens[i]);
        for j in 0..n {
            let val: BigRational = gens[j]
                .iter()
                .zip(&gv)
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b);
            if !val.is_integer() {
                return Err(Error::Inconsistent(format!(
                    "non-integral pairing in case {case:?}"
                )));
            }
            out.set(j, i, val.to_integer());
        }
    }
    Ok(out)
}

/// Expand and verify all five table rows.
pub fn ns_tables_check() -> Result<Vec<NsTableEntry>> {
    let cases = [
        SymmetryClass::V4,
        SymmetryClass::D4,
        SymmetryClass::D6,
        SymmetryClass::TwoD6,
        SymmetryClass::S4Tilde,
    ];
    let mut out = Vec::with_capacity(5);
    for case in cases {
        let gram = expand_case_gram(case)?;
        let invariants = lattice_invariants(&gram)?;
        let reference_name = jacobian_lattice_name(case);
        let reference = lattice_invariants(&reference_lattice(reference_name)?)?;
        let matches_reference = invariants.matches(&reference)?;
        out.push(NsTableEntry {
            case,
            gram,
            invariants,
            reference_name,
            matches_reference,
        });
    }
    Ok(out)
}

/// Primitive embedding of each small lattice into U^3, with basis
/// (e1, f1, e2, f2, e3, f3).
fn embedding_rows(case: SymmetryClass) -> Vec<Vec<i64>> {
    match case {
        SymmetryClass::V4 => vec![
            vec![1, 1, 0, 0, 0, 0],  // e1 + f1
            vec![0, 0, 1, -1, 0, 0], // e2 - f2
        ],
        SymmetryClass::D4 => vec![
            vec![1, 0, 1, 0, 0, 0],  // e1 + e2
            vec![0, 1, 0, 1, 0, 0],  // f1 + f2
            vec![0, 0, 0, 0, 1, -1], // e3 - f3
        ],
        SymmetryClass::D6 => vec![
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0],
            vec![0, 0, 1, -3, 0, 0], // e2 - 3 f2
        ],
        SymmetryClass::TwoD6 => vec![
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0],
            vec![0, 0, 1, -1, 0, 0],
            vec![0, 0, 0, 0, 1, -3], // e3 - 3 f3
        ],
        SymmetryClass::S4Tilde => vec![
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0],
            vec![0, 0, 1, -1, 0, 0],
            vec![0, 0, 0, 0, 1, -2], // e3 - 2 f3
        ],
    }
}

fn u3_gram() -> Mat<BigInt> {
    let mut m = Mat::filled(6, 6, BigInt::zero());
    for k in 0..3 {
        m.set(2 * k, 2 * k + 1, BigInt::one());
        m.set(2 * k + 1, 2 * k, BigInt::one());
    }
    m
}

/// Saturated integer kernel of an integer matrix (applied to column
/// vectors): the last columns of the Smith V factor.
fn integral_kernel(a: &Mat<BigInt>) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    (rank..a.cols()).map(|j| snf.v().col(j)).collect()
}

/// Full chain report for one symmetry class.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub case: SymmetryClass,
    /// the embedded copy of the small lattice reproduces its Gram
    pub embedding_gram_ok: bool,
    /// the embedding is primitive in U^3
    pub embedding_primitive: bool,
    /// invariants of the orthogonal complement T
    pub complement: LatticeInvariants,
    /// disc(T) is minus the disc of the small lattice
    pub complement_disc_is_negated: bool,
    /// predicted invariants of the doubled complement T(2)
    pub doubled: LatticeInvariants,
    pub kummer_reference_name: &'static str,
    /// the big reference lattice has rank 16 + r, signature (1, 15 + r),
    /// and discriminant form minus that of T(2)
    pub kummer_reference_matches: bool,
}

impl ChainReport {
    pub fn all_checks_pass(&self) -> bool {
        self.embedding_gram_ok
            && self.embedding_primitive
            && self.complement_disc_is_negated
            && self.kummer_reference_matches
    }
}

/// Run the discriminant-form chain for one symmetry class.
pub fn kummer_chain(case: SymmetryClass) -> Result<ChainReport> {
    let small = reference_lattice(jacobian_lattice_name(case))?;
    let r = small.rows();
    if !(2..=4).contains(&r) {
        return Err(Error::Invalid(format!("rank {r} out of range for the chain")));
    }
    let ambient = u3_gram();
    let rows = embedding_rows(case);
    let m = Mat::from_fn(r, 6, |i, j| BigInt::from(rows[i][j]));

    let embedded_gram = m.matmul(&ambient).matmul(&m.transpose());
    let embedding_gram_ok = embedded_gram == small;

    // primitive iff the Smith factors of the embedding matrix are all 1
    let embedding_primitive = {
        let snf = smith_normal_form(&m);
        snf.rank() == r && snf.factors().iter().take(r).all(|d| d.is_one())
    };

    // orthogonal complement: kernel of x -> (x . embedded rows)
    let pairings = m.matmul(&ambient); // r x 6
    let kernel = integral_kernel(&pairings);
    if kernel.len() != 6 - r {
        return Err(Error::Inconsistent(format!(
            "complement rank {} instead of {}",
            kernel.len(),
            6 - r
        )));
    }
    let c = Mat::from_rows(kernel);
    let complement_gram = c.matmul(&ambient).matmul(&c.transpose());
    let complement = lattice_invariants(&complement_gram)?;
    if complement.signature != (2, 4 - r) {
        return Err(Error::Inconsistent(format!(
            "complement signature {:?} in case {case:?}",
            complement.signature
        )));
    }
    let small_inv = lattice_invariants(&small)?;
    let complement_disc_is_negated = complement.disc.is_isomorphic(&small_inv.disc.neg())?;

    let doubled_gram = complement_gram.map(|x| x * BigInt::from(2));
    let doubled = lattice_invariants(&doubled_gram)?;

    let kummer_reference_name = kummer_lattice_name(case);
    let kummer_ref = lattice_invariants(&reference_lattice(kummer_reference_name)?)?;
    let kummer_reference_matches = kummer_ref.rank == 16 + r
        && kummer_ref.signature == (1, 15 + r)
        && kummer_ref.disc.is_isomorphic(&doubled.disc.neg())?;

    Ok(ChainReport {
        case,
        embedding_gram_ok,
        embedding_primitive,
        complement,
        complement_disc_is_negated,
        doubled,
        kummer_reference_name,
        kummer_reference_matches,
    })
}

/// All five chain rows.
pub fn kummer_chain_all() -> Result<Vec<ChainReport>> {
    [
        SymmetryClass::V4,
        SymmetryClass::D4,
        SymmetryClass::D6,
        SymmetryClass::TwoD6,
        SymmetryClass::S4Tilde,
    ]
    .into_iter()
    .map(kummer_chain)
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::mat_i64;

    #[test]
    fn table_rows_match_their_references() {
        let entries = ns_tables_check().unwrap();
        assert_eq!(entries.len(), 5);
        for e in &entries {
            assert!(e.matches_reference, "case {:?}", e.case);
        }
    }

    #[test]
    fn expanded_grams_have_the_stated_shapes() {
        let entries = ns_tables_check().unwrap();
        // smallest case: diag(-2, 2)
        assert_eq!(entries[0].gram, mat_i64(&[&[-2, 0], &[0, 2]]));
        // second case: U(2) + (-2)
        assert_eq!(
            entries[1].gram,
            mat_i64(&[&[0, 2, 0], &[2, 0, 0], &[0, 0, -2]])
        );
        // third case: U + (-6)
        assert_eq!(
            entries[2].gram,
            mat_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -6]])
        );
        // fifth case: U + (-2) + (-4)
        assert_eq!(
            entries[4].gram,
            mat_i64(&[
                &[0, 1, 0, 0],
                &[1, 0, 0, 0],
                &[0, 0, -2, 0],
                &[0, 0, 0, -4]
            ])
        );
    }

    #[test]
    fn chain_passes_for_all_cases() {
        for report in kummer_chain_all().unwrap() {
            assert!(report.embedding_gram_ok, "case {:?}", report.case);
            assert!(report.embedding_primitive, "case {:?}", report.case);
            assert!(report.complement_disc_is_negated, "case {:?}", report.case);
            assert!(report.kummer_reference_matches, "case {:?}", report.case);
            assert!(report.all_checks_pass());
        }
    }

    #[test]
    fn chain_invariant_details() {
        let report = kummer_chain(SymmetryClass::D4).unwrap();
        assert_eq!(report.complement.rank, 3);
        assert_eq!(report.complement.signature, (2, 1));
        assert_eq!(report.complement.det_abs, BigInt::from(8));
        assert_eq!(report.doubled.det_abs, BigInt::from(64));
        let report = kummer_chain(SymmetryClass::V4).unwrap();
        assert_eq!(report.complement.rank, 4);
        assert_eq!(report.complement.signature, (2, 2));
    }

    #[test]
    fn doubling_scales_the_discriminant() {
        // complement of the D6 case is U + (6); doubling gives U(2) + (12)
        let report = kummer_chain(SymmetryClass::D6).unwrap();
        assert_eq!(report.complement.det_abs, BigInt::from(6));
        assert_eq!(report.doubled.det_abs, BigInt::from(6 * 8));
    }
}
