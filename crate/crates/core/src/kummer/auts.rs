//! Automorphism search and special-locus classification.
//!
//! Every member of the family is preserved by the 32 even sign changes of
//! the coordinates. Further automorphisms of the ambient net that act by
//! signed permutation matrices are found by brute force: for each of the
//! 720 permutations, asking that the permuted-and-rescaled equations stay
//! inside the net is a linear condition on the squares of the scaling
//! factors, so one nullspace computation per permutation covers all of its
//! 2^6/2 = 32 projective sign classes at once (23040 candidates in total).
//! The locus classifier places a parameter point on the curves and points
//! in the (t,s)-plane where the group is larger than generic.

use num_rational::BigRational;

use crate::error::Result;
use crate::exact::{Mat, Mq, QuadField, Ring, SparsePoly};

use super::{
    diagonal_matrix_symbolic, poly_det, sym_int, sym_ts, FamilyParams, NVARS,
};

/// A permutation of the six coordinates together with the ray of squared
/// scaling factors that puts the permuted equations back into the net.
#[derive(Clone, Debug)]
pub struct ValidPerm {
    /// coordinate i is sent to coordinate perm[i]
    pub perm: [usize; 6],
    /// squared scalings, normalized so the first entry is 1
    pub ray: [Mq; 6],
    /// whether every ray entry is a square in the parameter field, when the
    /// field arithmetic can decide this (two-generator entries cannot be
    /// searched exhaustively)
    pub squares_in_field: Option<bool>,
}

/// Outcome of the signed-permutation search at one parameter point.
#[derive(Clone, Debug)]
pub struct AutReport {
    /// permutations times projective sign classes
    pub candidates_scanned: usize,
    /// the permutations admitting a compatible scaling ray
    pub valid: Vec<ValidPerm>,
    /// 32 sign classes for each valid permutation
    pub order: usize,
    /// the identity permutation carries the all-ones ray, so the sign
    /// changes themselves are present
    pub contains_sign_changes: bool,
    /// the full multiplication table of (perm, ray) pairs closes
    pub closed_under_composition: bool,
    /// a minimal generating subset of the valid permutations
    pub generator_perms: Vec<[usize; 6]>,
    /// orbits of the valid permutations on the coordinate indices
    pub coordinate_orbits: Vec<Vec<usize>>,
}

fn permutations6() -> Vec<[usize; 6]> {
    let mut out = Vec::with_capacity(720);
    let mut items: Vec<usize> = (0..6).collect();
    fn rec(k: usize, items: &mut Vec<usize>, out: &mut Vec<[usize; 6]>) {
        if k == items.len() {
            out.push(std::array::from_fn(|i| items[i]));
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(k + 1, items, out);
            items.swap(k, i);
        }
    }
    rec(0, &mut items, &mut out);
    out
}

/// Apply a, then b.
fn compose(a: &[usize; 6], b: &[usize; 6]) -> [usize; 6] {
    std::array::from_fn(|i| b[a[i]])
}

const IDENTITY: [usize; 6] = [0, 1, 2, 3, 4, 5];

/// Solve for the squared-scaling ray of one permutation: the transformed
/// equations lie in the net iff they are orthogonal to the kernel of the
/// coefficient matrix, nine linear conditions on the six squares.
fn ray_for_perm(
    rows: &[[Mq; 6]; 3],
    kernel: &[Vec<Mq>],
    perm: &[usize; 6],
) -> Option<[Mq; 6]> {
    let mut constraints: Vec<Vec<Mq>> = Vec::with_capacity(9);
    for d in rows {
        for n in kernel {
            constraints.push((0..6).map(|i| d[i].mul(&n[perm[i]])).collect());
        }
    }
    let basis = Mat::from_rows(constraints).nullspace();
    if basis.len() != 1 {
        return None;
    }
    let ray = &basis[0];
    if ray.iter().any(Ring::is_zero) {
        return None;
    }
    let inv = crate::exact::Field::inv(&ray[0]).expect("nonzero entry");
    Some(std::array::from_fn(|i| ray[i].mul(&inv)))
}

fn proportional_rays(a: &[Mq; 6], b: &[Mq; 6]) -> bool {
    (0..6).all(|i| {
        (0..6).all(|j| a[i].mul(&b[j]) == a[j].mul(&b[i]))
    })
}

/// Square test within the parameter field, where the arithmetic permits.
fn square_in_field(u: &Mq, field: &QuadField) -> Option<bool> {
    let r = u.reduced();
    if r.is_rational() {
        // the root lands in Q(sqrt(d)); compare d against the (at most
        // three) quadratic subfields of the parameter field
        let root = r.sqrt()?;
        if root.is_rational() {
            return Some(true);
        }
        let d = root.field().generators()[0];
        let gens = field.generators().to_vec();
        let mut subfields = gens.clone();
        if let [a, b] = gens[..] {
            let mut prod = a * b;
            let mut k = 2i64;
            while k * k <= prod.abs() {
                while prod % (k * k) == 0 {
                    prod /= k * k;
                }
                k += 1;
            }
            subfields.push(prod);
        }
        return Some(subfields.contains(&d));
    }
    if r.field().num_generators() == 1 && field.num_generators() == 1 {
        return Some(r.sqrt().is_some());
    }
    None
}

fn ray_squares(ray: &[Mq; 6], field: &QuadField) -> Option<bool> {
    let mut all = true;
    for u in ray {
        match square_in_field(u, field) {
            Some(true) => {}
            Some(false) => all = false,
            None => return None,
        }
    }
    Some(all)
}

/// Subgroup of S6 generated by a set, as a sorted list.
fn span_of(perms: &[[usize; 6]]) -> Vec<[usize; 6]> {
    let mut seen = vec![IDENTITY];
    let mut frontier = vec![IDENTITY];
    while let Some(p) = frontier.pop() {
        for g in perms {
            let q = compose(&p, g);
            if !seen.contains(&q) {
                seen.push(q);
                frontier.push(q);
            }
        }
    }
    seen.sort();
    seen
}

/// Brute-force search over the 23040 projective signed-permutation
/// candidates at a smooth parameter point.
pub fn automorphism_bruteforce(params: &FamilyParams) -> Result<AutReport> {
    params.require_smooth()?;
    let rows = params.diagonal_rows();
    let kernel = params.diagonal_matrix().nullspace();
    let field = params.field().clone();

    let mut valid: Vec<ValidPerm> = Vec::new();
    for perm in permutations6() {
        if let Some(ray) = ray_for_perm(&rows, &kernel, &perm) {
            let squares_in_field = ray_squares(&ray, &field);
            valid.push(ValidPerm {
                perm,
                ray,
                squares_in_field,
            });
        }
    }

    let contains_sign_changes = valid.iter().any(|v| {
        v.perm == IDENTITY && v.ray.iter().all(|u| u == &v.ray[0])
    });

    // composing (perm a, ray u) then (perm b, ray w) gives perm b after a
    // with ray u_i * w_{a(i)}; the table closes iff each such product is on
    // the valid list with a proportional ray
    let closed_under_composition = valid.iter().all(|a| {
        valid.iter().all(|b| {
            let p = compose(&a.perm, &b.perm);
            let ray: [Mq; 6] = std::array::from_fn(|i| a.ray[i].mul(&b.ray[a.perm[i]]));
            valid
                .iter()
                .find(|v| v.perm == p)
                .is_some_and(|v| proportional_rays(&ray, &v.ray))
        })
    });

    let mut generator_perms: Vec<[usize; 6]> = Vec::new();
    {
        let mut have = span_of(&[]);
        for v in &valid {
            if v.perm == IDENTITY || have.binary_search(&v.perm).is_ok() {
                continue;
            }
            generator_perms.push(v.perm);
            have = span_of(&generator_perms);
        }
    }

    let mut coordinate_orbits: Vec<Vec<usize>> = Vec::new();
    {
        let mut assigned = [usize::MAX; 6];
        for start in 0..6 {
            if assigned[start] != usize::MAX {
                continue;
            }
            let id = coordinate_orbits.len();
            let mut orbit = vec![start];
            assigned[start] = id;
            let mut k = 0;
            while k < orbit.len() {
                let i = orbit[k];
                for v in &valid {
                    let j = v.perm[i];
                    if assigned[j] == usize::MAX {
                        assigned[j] = id;
                        orbit.push(j);
                    }
                }
                k += 1;
            }
            orbit.sort();
            coordinate_orbits.push(orbit);
        }
    }

    Ok(AutReport {
        candidates_scanned: 720 * 32,
        order: 32 * valid.len(),
        valid,
        contains_sign_changes,
        closed_under_composition,
        generator_perms,
        coordinate_orbits,
    })
}

/// The family-wide involution that swaps the coordinate pairs (0,3), (1,2),
/// (4,5) with scalings depending on (t, s): targets and scaling factors of
/// a monomial substitution.
pub fn twist_map_symbolic() -> ([usize; 6], [SparsePoly<BigRational>; 6]) {
    let (t, s) = sym_ts();
    let two = sym_int(2);
    let ts = t.mul(&s);
    (
        [3, 2, 1, 0, 5, 4],
        [
            ts.clone(),
            two.mul(&t).mul(&ts),
            s.clone(),
            two.mul(&ts),
            t.clone(),
            two.mul(&ts).mul(&s),
        ],
    )
}

/// The symmetry reversing the order of the last five coordinates. With
/// unit scalings it preserves the net only where gamma_1 = gamma_4 and
/// t^2 = s^2, so unlike the twist it belongs to the t + s = 0 locus rather
/// than to the whole family.
pub fn reversal_map() -> ([usize; 6], [SparsePoly<BigRational>; 6]) {
    (
        [0, 5, 4, 3, 2, 1],
        std::array::from_fn(|_| sym_int(1)),
    )
}

/// Check that a monomial substitution maps the net into itself identically
/// in (t, s): each transformed equation stacked on the coefficient matrix
/// must keep rank 3, i.e. all fifteen 4x4 minors vanish as polynomials.
pub fn preserves_net_symbolic(
    targets: &[usize; 6],
    coeffs: &[SparsePoly<BigRational>; 6],
) -> bool {
    let m = diagonal_matrix_symbolic();
    for row in &m {
        let mut image = vec![SparsePoly::zero(NVARS); 6];
        for i in 0..6 {
            let c2 = coeffs[i].mul(&coeffs[i]);
            image[targets[i]] = image[targets[i]].add(&row[i].mul(&c2));
        }
        let mut stacked = m.clone();
        stacked.push(image);
        for a in 0..6 {
            for b in (a + 1)..6 {
                for c in (b + 1)..6 {
                    for d in (c + 1)..6 {
                        let cols = [a, b, c, d];
                        let sub: Vec<Vec<SparsePoly<BigRational>>> = stacked
                            .iter()
                            .map(|r| cols.iter().map(|&k| r[k].clone()).collect())
                            .collect();
                        if !poly_det(&sub).is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Symmetry type of a parameter point, ordered from generic to most
/// special.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryClass {
    /// generic member: sign changes and the two family-wide symmetries
    V4,
    /// on the curve (t+s)(2ts+1) = 0
    D4,
    /// on one of the four degree-four curves
    D6,
    /// one of eight special points over Q(sqrt(6))
    TwoD6,
    /// one of eight special points over Q(i)
    S4Tilde,
}

/// Signed-permutation group order predicted for each symmetry class.
pub fn expected_aut_order(class: SymmetryClass) -> usize {
    match class {
        SymmetryClass::V4 => 64,
        SymmetryClass::D4 => 128,
        SymmetryClass::D6 => 192,
        SymmetryClass::TwoD6 => 384,
        SymmetryClass::S4Tilde => 768,
    }
}

/// The two factors cutting out the D4 locus.
pub fn d4_factor_values(params: &FamilyParams) -> [Mq; 2] {
    let t = params.t();
    let s = params.s();
    let one = t.ring_one();
    let two = t.from_i64(2);
    [t.add(s), two.mul(t).mul(s).add(&one)]
}

/// The four quartic factors cutting out the D6 locus.
pub fn d6_factor_values(params: &FamilyParams) -> [Mq; 4] {
    let t = params.t();
    let s = params.s();
    let one = t.ring_one();
    let two = t.from_i64(2);
    let half = one.mul_rat(&BigRational::new(1.into(), 2.into()));
    let t2 = t.mul(t);
    let s2 = s.mul(s);
    let ts = t.mul(s);
    let t2s2 = t2.mul(&s2);
    [
        t2.sub(&ts).add(&s2).sub(&half),
        two.mul(&two).mul(&t2s2).sub(&two.mul(&ts)).sub(&two.mul(&t2)).add(&one),
        two.mul(&two).mul(&t2s2).sub(&two.mul(&ts)).sub(&two.mul(&s2)).add(&one),
        two.mul(&t2s2).sub(&t2).add(&ts).sub(&s2),
    ]
}

fn special_points(d: i64) -> Result<Vec<(Mq, Mq)>> {
    let g = Mq::sqrt_int(d)?;
    let half = BigRational::new(1.into(), 2.into());
    let sixth = BigRational::new(1.into(), 6.into());
    let mut pts: Vec<(Mq, Mq)> = Vec::new();
    if d == 6 {
        let h = g.mul_rat(&half);
        let x = g.mul_rat(&sixth);
        let base = [
            (h.neg(), x.clone()),
            (x.clone(), x.neg()),
            (h.clone(), h.neg()),
            (x.clone(), h.neg()),
        ];
        for (a, b) in base {
            pts.push((a.neg(), b.neg()));
            pts.push((a, b));
        }
    } else {
        // d = -1: the eight points with coordinates (+-1 +- i)/2
        let one = g.ring_one();
        let ip = g.add(&one).mul_rat(&half);
        let im = g.sub(&one).mul_rat(&half);
        let base = [
            (im.clone(), im.neg()),
            (im.clone(), ip.clone()),
            (ip.clone(), ip.neg()),
            (ip.clone(), im.clone()),
        ];
        for (a, b) in base {
            pts.push((a.neg(), b.neg()));
            pts.push((a, b));
        }
    }
    Ok(pts)
}

/// Classify a parameter point by the most special locus containing it.
pub fn locus_classify(params: &FamilyParams) -> Result<SymmetryClass> {
    let t = params.t();
    let s = params.s();
    for (a, b) in special_points(-1)? {
        if t == &a && s == &b {
            return Ok(SymmetryClass::S4Tilde);
        }
    }
    for (a, b) in special_points(6)? {
        if t == &a && s == &b {
            return Ok(SymmetryClass::TwoD6);
        }
    }
    if d6_factor_values(params).iter().any(Ring::is_zero) {
        return Ok(SymmetryClass::D6);
    }
    if d4_factor_values(params).iter().any(Ring::is_zero) {
        return Ok(SymmetryClass::D4);
    }
    Ok(SymmetryClass::V4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn buchi_member_has_order_128() {
        let report =
            automorphism_bruteforce(&FamilyParams::from_i64(-1, 1).unwrap()).unwrap();
        assert_eq!(report.candidates_scanned, 23040);
        assert_eq!(report.valid.len(), 4);
        assert_eq!(report.order, 128);
        assert!(report.contains_sign_changes);
        assert!(report.closed_under_composition);
        let perms: Vec<[usize; 6]> = report.valid.iter().map(|v| v.perm).collect();
        assert!(perms.contains(&IDENTITY));
        assert!(perms.contains(&[0, 5, 4, 3, 2, 1]));
        assert!(perms.contains(&[3, 2, 1, 0, 5, 4]));
        assert!(perms.contains(&[3, 4, 5, 0, 1, 2]));
    }

    #[test]
    fn twist_ray_specializes_correctly() {
        // at (-1,1) the twist scalings are (-1,2,1,-2,-1,-2), squares
        // (1,4,1,4,1,4)
        let report =
            automorphism_bruteforce(&FamilyParams::from_i64(-1, 1).unwrap()).unwrap();
        let twist = report
            .valid
            .iter()
            .find(|v| v.perm == [3, 2, 1, 0, 5, 4])
            .unwrap();
        let expected = [1, 4, 1, 4, 1, 4].map(|v| rat(v, 1));
        for (u, e) in twist.ray.iter().zip(expected.iter()) {
            assert_eq!(&u.to_rational().unwrap(), e);
        }
        assert_eq!(twist.squares_in_field, Some(true));
    }

    #[test]
    fn generic_member_has_order_64() {
        let report =
            automorphism_bruteforce(&FamilyParams::from_i64(2, 3).unwrap()).unwrap();
        assert_eq!(report.valid.len(), 2);
        assert_eq!(report.order, 64);
        assert!(report.contains_sign_changes);
        assert!(report.closed_under_composition);
    }

    #[test]
    fn family_symmetries_preserve_the_net_identically() {
        let (tt, tc) = twist_map_symbolic();
        assert!(preserves_net_symbolic(&tt, &tc));
        // the reversal is a symmetry of the t + s = 0 locus only, so the
        // family-wide check must reject it
        let (rt, rc) = reversal_map();
        assert!(!preserves_net_symbolic(&rt, &rc));
        // and a plain transposition is never a symmetry
        let bad = [1, 0, 2, 3, 4, 5];
        let ones = std::array::from_fn(|_| sym_int(1));
        assert!(!preserves_net_symbolic(&bad, &ones));
    }

    #[test]
    fn locus_classification_of_sample_points() {
        assert_eq!(
            locus_classify(&FamilyParams::from_i64(-1, 1).unwrap()).unwrap(),
            SymmetryClass::D4
        );
        assert_eq!(
            locus_classify(&FamilyParams::from_i64(2, 3).unwrap()).unwrap(),
            SymmetryClass::V4
        );
        // a point on the curve 4t^2s^2 - 2ts - 2t^2 + 1 = 0 over Q(sqrt(5))
        let r5 = Mq::sqrt_int(5).unwrap();
        let quarter = BigRational::new(1.into(), 4.into());
        let s = r5.add(&r5.ring_one()).mul_rat(&quarter);
        let p = FamilyParams::new(Mq::from_i64(1), s).unwrap();
        assert_eq!(locus_classify(&p).unwrap(), SymmetryClass::D6);
        // the Q(sqrt(6)) points
        let pts = special_points(6).unwrap();
        let p = FamilyParams::new(pts[1].0.clone(), pts[1].1.clone()).unwrap();
        assert_eq!(locus_classify(&p).unwrap(), SymmetryClass::TwoD6);
        // the Q(i) points
        let pts = special_points(-1).unwrap();
        let p = FamilyParams::new(pts[0].0.clone(), pts[0].1.clone()).unwrap();
        assert_eq!(locus_classify(&p).unwrap(), SymmetryClass::S4Tilde);
    }

    #[test]
    fn expected_orders_match_bruteforce_at_rational_points() {
        for (t, s) in [(-1, 1), (2, 3)] {
            let params = FamilyParams::from_i64(t, s).unwrap();
            let class = locus_classify(&params).unwrap();
            let report = automorphism_bruteforce(&params).unwrap();
            assert_eq!(report.order, expected_aut_order(class), "params ({t}, {s})");
        }
    }

    #[test]
    fn d6_factors_at_the_off_locus_point() {
        // the point (1/sqrt(-2) - sqrt(2), sqrt(-2)): all four factors are
        // nonzero, so the classifier reports the generic class
        let r2 = Mq::sqrt_int(2).unwrap();
        let rm2 = Mq::sqrt_int(-2).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        let t = rm2.mul_rat(&half).neg().sub(&r2);
        let s = rm2.clone();
        let p = FamilyParams::new(t, s).unwrap();
        let g = r2.mul(&rm2);
        let two_g = g.add(&g);
        let f = d6_factor_values(&p);
        assert_eq!(f[0], g.from_i64(-2).add(&two_g));
        assert_eq!(f[1], g.from_i64(-16).sub(&g.from_i64(8).mul(&g)));
        assert!(f.iter().all(|v| !Ring::is_zero(v)));
        assert_eq!(locus_classify(&p).unwrap(), SymmetryClass::V4);
    }
}
