//! Lattice invariants (rank, determinant, signature, discriminant form)
//! and the catalog of reference lattices used by the tables.

use crate::error::{Error, Result};
use crate::exact::{
    nondegenerate_quotient_basis, smith_normal_form, symmetric_signature, Fqf, Mat,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Invariant package of an even symmetric integer Gram matrix. Degenerate
/// matrices are reduced to their nondegenerate quotient first, so the
/// invariants describe the image lattice.
#[derive(Clone, Debug)]
pub struct LatticeInvariants {
    pub rank: usize,
    /// |det| of the nondegenerate quotient Gram
    pub det_abs: BigInt,
    /// inertia (n_plus, n_minus) of the quotient
    pub signature: (usize, usize),
    /// nontrivial Smith factors of the quotient Gram
    pub elementary_divisors: Vec<BigInt>,
    pub disc: Fqf,
}

impl LatticeInvariants {
    /// Rank, signature, and discriminant form all agree.
    pub fn matches(&self, other: &LatticeInvariants) -> Result<bool> {
        Ok(self.rank == other.rank
            && self.signature == other.signature
            && self.det_abs == other.det_abs
            && self.disc.is_isomorphic(&other.disc)?)
    }
}

/// Compute the invariants of a symmetric integer Gram matrix.
pub fn lattice_invariants(g: &Mat<BigInt>) -> Result<LatticeInvariants> {
    if !g.is_symmetric() {
        return Err(Error::Invalid("Gram matrix is not symmetric".into()));
    }
    let basis = nondegenerate_quotient_basis(g)?;
    let rank = basis.len();
    let q = Mat::from_rows(basis);
    let gq = q.matmul(g).matmul(&q.transpose());
    let det = gq.det_bareiss()?;
    if det.is_zero() {
        return Err(Error::Inconsistent(
            "quotient Gram is singular despite saturation".into(),
        ));
    }
    let (np, nm, nz) = symmetric_signature(&gq.to_rational())?;
    if nz != 0 {
        return Err(Error::Inconsistent("nonzero kernel after quotient".into()));
    }
    let elementary_divisors: Vec<BigInt> = smith_normal_form(&gq)
        .factors()
        .iter()
        .filter(|d| *d > &BigInt::one())
        .cloned()
        .collect();
    let disc = Fqf::from_gram(&gq)?;
    Ok(LatticeInvariants {
        rank,
        det_abs: det.abs(),
        signature: (np, nm),
        elementary_divisors,
        disc,
    })
}

fn block_diagonal(blocks: Vec<Mat<BigInt>>) -> Mat<BigInt> {
    let n: usize = blocks.iter().map(Mat::rows).sum();
    let mut out = Mat::filled(n, n, BigInt::zero());
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(off + i, off + j, b.get(i, j).clone());
            }
        }
        off += b.rows();
    }
    out
}

fn hyperbolic(scale: i64) -> Mat<BigInt> {
    let mut m = Mat::filled(2, 2, BigInt::zero());
    m.set(0, 1, BigInt::from(scale));
    m.set(1, 0, BigInt::from(scale));
    m
}

/// Negative definite E8: the usual Cartan matrix with all signs flipped.
/// Chain of seven nodes with the eighth attached to the third.
fn e8_negative() -> Mat<BigInt> {
    let edges = [(0usize, 1usize), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
    let mut m = Mat::filled(8, 8, BigInt::zero());
    for i in 0..8 {
        m.set(i, i, BigInt::from(-2));
    }
    for (a, b) in edges {
        m.set(a, b, BigInt::one());
        m.set(b, a, BigInt::one());
    }
    m
}

/// Negative definite D7: chain of five nodes with two more attached to the
/// last chain node.
fn d7_negative() -> Mat<BigInt> {
    let edges = [(0usize, 1usize), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6)];
    let mut m = Mat::filled(7, 7, BigInt::zero());
    for i in 0..7 {
        m.set(i, i, BigInt::from(-2));
    }
    for (a, b) in edges {
        m.set(a, b, BigInt::one());
        m.set(b, a, BigInt::one());
    }
    m
}

fn single_block(name: &str) -> Result<Mat<BigInt>> {
    let name = name.trim();
    if name == "U" {
        return Ok(hyperbolic(1));
    }
    if name == "E8" {
        return Ok(e8_negative());
    }
    if name == "D7" {
        return Ok(d7_negative());
    }
    if let Some(inner) = name.strip_prefix("U(").and_then(|r| r.strip_suffix(')')) {
        let k: i64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::UnknownLattice(name.into()))?;
        if k == 0 {
            return Err(Error::UnknownLattice(name.into()));
        }
        return Ok(hyperbolic(k));
    }
    if let Some(inner) = name.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let k: i64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::UnknownLattice(name.into()))?;
        if k == 0 || k % 2 != 0 {
            return Err(Error::UnknownLattice(name.into()));
        }
        let mut m = Mat::filled(1, 1, BigInt::zero());
        m.set(0, 0, BigInt::from(k));
        return Ok(m);
    }
    Err(Error::UnknownLattice(name.into()))
}

/// Gram matrix of a reference lattice given as a sum of catalog blocks,
/// e.g. "U(4)+(-4)+E8+E8". Blocks: U, U(k), E8, D7, and rank-one (k) with
/// k even; E8 and D7 are negative definite.
pub fn reference_lattice(name: &str) -> Result<Mat<BigInt>> {
    let blocks: Result<Vec<Mat<BigInt>>> = name.split('+').map(single_block).collect();
    let blocks = blocks?;
    if blocks.is_empty() {
        return Err(Error::UnknownLattice(name.into()));
    }
    Ok(block_diagonal(blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::mat_i64;
    use crate::lattice::picard_gram;

    #[test]
    fn catalog_determinants() {
        assert_eq!(
            reference_lattice("U").unwrap().det_bareiss().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            reference_lattice("U(2)").unwrap().det_bareiss().unwrap(),
            BigInt::from(-4)
        );
        assert_eq!(
            reference_lattice("E8").unwrap().det_bareiss().unwrap(),
            BigInt::one()
        );
        assert_eq!(
            reference_lattice("D7")
                .unwrap()
                .det_bareiss()
                .unwrap()
                .abs(),
            BigInt::from(4)
        );
    }

    #[test]
    fn catalog_signatures() {
        let (np, nm, _) =
            symmetric_signature(&reference_lattice("E8").unwrap().to_rational()).unwrap();
        assert_eq!((np, nm), (0, 8));
        let (np, nm, _) =
            symmetric_signature(&reference_lattice("U(4)").unwrap().to_rational()).unwrap();
        assert_eq!((np, nm), (1, 1));
        let (np, nm, _) =
            symmetric_signature(&reference_lattice("D7").unwrap().to_rational()).unwrap();
        assert_eq!((np, nm), (0, 7));
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(reference_lattice("A2").is_err());
        assert!(reference_lattice("(3)").is_err());
        assert!(reference_lattice("U(0)").is_err());
        assert!(reference_lattice("").is_err());
    }

    #[test]
    fn hyperbolic_sum_invariants() {
        let inv = lattice_invariants(&reference_lattice("U+(-6)").unwrap()).unwrap();
        assert_eq!(inv.rank, 3);
        assert_eq!(inv.det_abs, BigInt::from(6));
        assert_eq!(inv.signature, (1, 2));
        assert_eq!(inv.disc.group_order(), 6);
    }

    #[test]
    fn degenerate_input_reduces_to_quotient() {
        // rank-one quotient (2) padded with a null row
        let g = mat_i64(&[&[2, 0], &[0, 0]]);
        let inv = lattice_invariants(&g).unwrap();
        assert_eq!(inv.rank, 1);
        assert_eq!(inv.det_abs, BigInt::from(2));
        assert_eq!(inv.signature, (1, 0));
    }

    #[test]
    fn picard_invariants_match_the_reference_assembly() {
        let g = picard_gram().unwrap();
        let inv = lattice_invariants(&g).unwrap();
        assert_eq!(inv.rank, 19);
        assert_eq!(inv.signature, (1, 18));
        assert_eq!(inv.det_abs, BigInt::from(64));
        assert_eq!(
            inv.elementary_divisors,
            vec![BigInt::from(4), BigInt::from(4), BigInt::from(4)]
        );
        let reference =
            lattice_invariants(&reference_lattice("U(4)+(-4)+E8+E8").unwrap()).unwrap();
        assert!(inv.matches(&reference).unwrap());
    }

    #[test]
    fn opposite_rank_one_forms_differ() {
        let plus = lattice_invariants(&mat_i64(&[&[2]])).unwrap();
        let minus = lattice_invariants(&mat_i64(&[&[-2]])).unwrap();
        assert!(!plus.disc.is_isomorphic(&minus.disc).unwrap());
    }
}
