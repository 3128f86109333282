//! The 32 lines of a family member and their intersection graph.
//!
//! Lines are labelled by subsets P of {0,..,5} modulo complementation: the
//! base line has coordinates (ts, tsu, tsu - s*g4, tsu - 2t^2 s, tsu - t*g3,
//! tsu - 2ts*g2) as functions of the parameter u, and the line for P flips
//! the signs of the coordinates with index in P. Canonical representatives
//! avoid index 5, so labels run over the masks 0..31.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{Mat, Mq, Ring, SparsePoly};

use super::{
    gammas_symbolic, klein_system_symbolic, sym_ts, FamilyParams, NVARS, SVAR, TVAR, UVAR,
};

/// One of the 32 lines, as the pair of points spanning it: the coordinate
/// functions are span.0 + u * span.1.
#[derive(Clone, Debug)]
pub struct FamilyLine {
    mask: u8,
    span: ([Mq; 6], [Mq; 6]),
}

impl FamilyLine {
    /// Canonical subset label (a bitmask over coordinate indices, bit 5
    /// clear).
    pub fn mask(&self) -> u8 {
        self.mask
    }

    /// Name in sign-change notation: "ell" for the base line, otherwise
    /// "s013" for the image under the sign change at indices 0, 1, 3.
    pub fn name(&self) -> String {
        line_name(self.mask)
    }

    /// The two spanning points (the line is span.0 + u*span.1).
    pub fn span(&self) -> (&[Mq; 6], &[Mq; 6]) {
        (&self.span.0, &self.span.1)
    }

    /// Parity of the subset label; constant on the complementation class.
    pub fn parity(&self) -> u8 {
        (self.mask.count_ones() % 2) as u8
    }

    /// Coordinates at a given value of the parameter.
    pub fn point_at(&self, u: &Mq) -> [Mq; 6] {
        std::array::from_fn(|i| self.span.0[i].add(&u.mul(&self.span.1[i])))
    }

    /// Four independent linear forms vanishing on the line.
    pub fn vanishing_forms(&self) -> Result<Vec<Vec<Mq>>> {
        let m = Mat::from_rows(vec![self.span.0.to_vec(), self.span.1.to_vec()]);
        let forms = m.nullspace();
        if forms.len() != 4 {
            return Err(Error::Inconsistent(format!(
                "line {} spans a {}-codimensional locus",
                self.name(),
                forms.len()
            )));
        }
        Ok(forms)
    }
}

/// Label for the subset class of P, using the representative avoiding
/// index 5.
pub fn line_name(mask: u8) -> String {
    if mask == 0 {
        return "ell".to_string();
    }
    let digits: String = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| i.to_string()).collect();
    format!("s{digits}")
}

/// Canonical representative of {mask, complement}.
pub fn canonical_mask(mask: u8) -> u8 {
    let m = mask & 0x3f;
    m.min(0x3f ^ m)
}

/// The base line of the family as six symbolic coordinates, polynomial in
/// (t, s, u).
pub fn base_line_symbolic() -> [SparsePoly<BigRational>; 6] {
    let (t, s) = sym_ts();
    let u = SparsePoly::var(NVARS, UVAR, BigRational::one());
    let [_, g2, g3, g4] = gammas_symbolic();
    let ts = t.mul(&s);
    let tsu = ts.mul(&u);
    let two = SparsePoly::constant(NVARS, BigRational::from_integer(2.into()));
    [
        ts.clone(),
        tsu.clone(),
        tsu.sub(&s.mul(&g4)),
        tsu.sub(&two.mul(&t).mul(&t).mul(&s)),
        tsu.sub(&t.mul(&g3)),
        tsu.sub(&two.mul(&ts).mul(&g2)),
    ]
}

/// Substitute the line for subset `mask` into every family quadric and
/// return the residuals, which vanish identically in (t, s, u) for each of
/// the 32 lines.
pub fn line_residuals_symbolic(mask: u8) -> Vec<SparsePoly<BigRational>> {
    let base = base_line_symbolic();
    let mut images: Vec<SparsePoly<BigRational>> = Vec::with_capacity(NVARS);
    for (i, c) in base.iter().enumerate() {
        if mask >> i & 1 == 1 {
            images.push(c.neg());
        } else {
            images.push(c.clone());
        }
    }
    images.push(SparsePoly::var(NVARS, TVAR, BigRational::one()));
    images.push(SparsePoly::var(NVARS, SVAR, BigRational::one()));
    images.push(SparsePoly::var(NVARS, UVAR, BigRational::one()));
    klein_system_symbolic()
        .iter()
        .map(|q| q.compose(&images))
        .collect()
}

/// The 32 lines at a smooth parameter point, ordered by canonical mask.
pub fn lines(params: &FamilyParams) -> Result<Vec<FamilyLine>> {
    params.require_smooth()?;
    let t = params.t();
    let s = params.s();
    let g2 = params.gamma(2);
    let g3 = params.gamma(3);
    let g4 = params.gamma(4);
    let two = t.from_i64(2);
    let ts = t.mul(s);
    // constant part (u = 0) and the u-direction of the base line
    let base0 = [
        ts.clone(),
        ts.ring_zero(),
        s.mul(g4).neg(),
        two.mul(t).mul(t).mul(s).neg(),
        t.mul(g3).neg(),
        two.mul(&ts).mul(g2).neg(),
    ];
    let base1 = [
        ts.ring_zero(),
        ts.clone(),
        ts.clone(),
        ts.clone(),
        ts.clone(),
        ts.clone(),
    ];
    Ok((0u8..32)
        .map(|mask| {
            let flip = |coords: &[Mq; 6]| -> [Mq; 6] {
                std::array::from_fn(|i| {
                    if mask >> i & 1 == 1 {
                        coords[i].neg()
                    } else {
                        coords[i].clone()
                    }
                })
            };
            FamilyLine {
                mask,
                span: (flip(&base0), flip(&base1)),
            }
        })
        .collect())
}

/// Whether two subset classes differ by a single sign change.
pub fn masks_adjacent(a: u8, b: u8) -> bool {
    let d = (a ^ b) & 0x3f;
    d.count_ones() == 1 || d.count_ones() == 5
}

/// Whether two lines meet, decided by the rank of their stacked spans.
pub fn lines_meet(a: &FamilyLine, b: &FamilyLine) -> bool {
    let m = Mat::from_rows(vec![
        a.span.0.to_vec(),
        a.span.1.to_vec(),
        b.span.0.to_vec(),
        b.span.1.to_vec(),
    ]);
    m.rank() <= 3
}

/// Intersection graph of the 32 lines.
#[derive(Clone, Debug)]
pub struct LineGraph {
    /// adjacency[i][j] for the lines with canonical masks i and j
    pub adjacency: Vec<Vec<bool>>,
    /// sizes of the even- and odd-parity classes
    pub bipartition: (usize, usize),
    /// common vertex degree, if the graph is regular
    pub regular_degree: Option<usize>,
    pub connected: bool,
    /// whether every edge joins the two parity classes
    pub bipartite_by_parity: bool,
    /// whether geometric rank-based adjacency agrees with the single-sign
    /// -change rule for every pair
    pub rule_agrees_with_geometry: bool,
    /// number of lines on each hyperplane x1 +/- x5 +/- 2*g2*x0 = 0,
    /// keyed by the two sign choices
    pub hyperplane_counts: [usize; 4],
}

/// Build the intersection graph at a smooth parameter point, checking the
/// combinatorial adjacency rule against the geometric one.
pub fn line_graph(params: &FamilyParams) -> Result<LineGraph> {
    let ls = lines(params)?;
    let n = ls.len();
    let mut adjacency = vec![vec![false; n]; n];
    let mut rule_ok = true;
    for i in 0..n {
        for j in (i + 1)..n {
            let geometric = lines_meet(&ls[i], &ls[j]);
            let rule = masks_adjacent(ls[i].mask, ls[j].mask);
            if geometric != rule {
                rule_ok = false;
            }
            adjacency[i][j] = geometric;
            adjacency[j][i] = geometric;
        }
    }
    let even = ls.iter().filter(|l| l.parity() == 0).count();
    let degrees: Vec<usize> = adjacency
        .iter()
        .map(|row| row.iter().filter(|&&e| e).count())
        .collect();
    let regular_degree = if degrees.windows(2).all(|w| w[0] == w[1]) {
        degrees.first().copied()
    } else {
        None
    };
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for (w, &e) in adjacency[v].iter().enumerate() {
            if e && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    let connected = seen.iter().all(|&v| v);
    let bipartite = (0..n).all(|i| {
        (0..n).all(|j| !adjacency[i][j] || ls[i].parity() != ls[j].parity())
    });

    // the four hyperplanes x1 + e5*x5 + e0*2*g2*x0
    let g2 = params.gamma(2);
    let two_g2 = g2.add(g2);
    let mut hyperplane_counts = [0usize; 4];
    for (k, (e5, e0)) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)].iter().enumerate() {
        let form = |p: &[Mq; 6]| -> Mq {
            let s5 = p[5].mul(&p[5].from_i64(*e5));
            let s0 = p[0].mul(&two_g2).mul(&p[0].from_i64(*e0));
            p[1].add(&s5).add(&s0)
        };
        hyperplane_counts[k] = ls
            .iter()
            .filter(|l| Ring::is_zero(&form(&l.span.0)) && Ring::is_zero(&form(&l.span.1)))
            .count();
    }

    Ok(LineGraph {
        adjacency,
        bipartition: (even, n - even),
        regular_degree,
        connected,
        bipartite_by_parity: bipartite,
        rule_agrees_with_geometry: rule_ok,
        hyperplane_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Field};

    fn buchi_member() -> FamilyParams {
        FamilyParams::from_i64(-1, 1).unwrap()
    }

    #[test]
    fn every_line_satisfies_the_family_equations_symbolically() {
        for mask in 0u8..32 {
            for r in line_residuals_symbolic(mask) {
                assert!(r.is_zero(), "mask {mask}: residual {:?}", r.terms().len());
            }
        }
    }

    #[test]
    fn base_line_at_the_buchi_member_is_the_arithmetic_progression() {
        let ls = lines(&buchi_member()).unwrap();
        let ell = &ls[0];
        // coordinates are proportional to (1, u, u+1, u+2, u+3, u+4)
        let u = Mq::from_i64(7);
        let p = ell.point_at(&u);
        let scale = p[0].inv().unwrap();
        let values: Vec<BigRational> = p
            .iter()
            .map(|c| c.mul(&scale).to_rational().unwrap())
            .collect();
        assert_eq!(
            values,
            vec![rat(1, 1), rat(7, 1), rat(8, 1), rat(9, 1), rat(10, 1), rat(11, 1)]
        );
    }

    #[test]
    fn graph_is_connected_bipartite_and_six_regular() {
        for (t, s) in [(-1, 1), (2, 3)] {
            let g = line_graph(&FamilyParams::from_i64(t, s).unwrap()).unwrap();
            assert_eq!(g.bipartition, (16, 16));
            assert_eq!(g.regular_degree, Some(6));
            assert!(g.connected);
            assert!(g.bipartite_by_parity);
            assert!(g.rule_agrees_with_geometry);
        }
    }

    #[test]
    fn adjacency_examples() {
        // ell meets its single sign changes but not the double ones
        assert!(masks_adjacent(0b000000, 0b000001));
        assert!(!masks_adjacent(0b000000, 0b000011));
        // complement handling: s0 vs the complement class of a five-set
        assert!(masks_adjacent(0b000001, canonical_mask(0b111110 ^ 0b000100)));
    }

    #[test]
    fn each_hyperplane_contains_eight_lines() {
        for (t, s) in [(-1, 1), (2, 3), (3, 5)] {
            let g = line_graph(&FamilyParams::from_i64(t, s).unwrap()).unwrap();
            assert_eq!(g.hyperplane_counts, [8, 8, 8, 8]);
        }
    }

    #[test]
    fn adjacency_is_sigma_invariant() {
        // relabelling by any sign change induces a graph automorphism
        let g = line_graph(&buchi_member()).unwrap();
        for q in 0u8..64 {
            for i in 0u8..32 {
                for j in 0u8..32 {
                    let qi = canonical_mask(i ^ q);
                    let qj = canonical_mask(j ^ q);
                    assert_eq!(
                        g.adjacency[i as usize][j as usize],
                        g.adjacency[qi as usize][qj as usize]
                    );
                }
            }
        }
    }

    #[test]
    fn singular_parameters_are_rejected() {
        let p = FamilyParams::from_i64(1, 1).unwrap();
        assert!(lines(&p).is_err());
    }
}
