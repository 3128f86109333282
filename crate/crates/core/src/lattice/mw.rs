//! Shioda-Tate bookkeeping and Mordell-Weil groups of the two pencils at
//! the distinguished member.
//!
//! The Picard lattice is presented by the 34 generating classes; the
//! trivial lattice of a pencil (zero section, fiber class, non-identity
//! fiber components) is expressed in a basis of the nondegenerate
//! quotient, and the Mordell-Weil group is read off the Smith form of the
//! quotient presentation. Fiber components that are not among the 34
//! generators (the conjugate conics) are solved for through their
//! intersection vectors against the generators.

use crate::error::{Error, Result};
use crate::exact::{nondegenerate_quotient_basis, smith_normal_form, Mat};
use crate::kummer::fibers::{
    c1, c2, conic_conic_intersection, conic_inventory, conic_line_intersection,
    distinguished_member, fiber_decomposition, special_bases, FiberComponent, Fibration,
    FibrationKind, KodairaLabel,
};
use crate::kummer::lines::{lines, FamilyLine};
use crate::lattice::{picard_gram, CLASS_COUNT};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The Shioda-Tate rank formula: Picard rank minus two minus the number of
/// non-identity fiber components, with an I_n fiber contributing n - 1.
pub fn shioda_tate(rho: usize, fiber_types: &[usize]) -> Result<usize> {
    if rho < 2 {
        return Err(Error::Invalid("Picard rank below 2".into()));
    }
    if fiber_types.iter().any(|&n| n == 0) {
        return Err(Error::Invalid("fiber type I_0 is not singular".into()));
    }
    let drop: usize = 2 + fiber_types.iter().map(|&n| n - 1).sum::<usize>();
    if drop > rho {
        return Err(Error::Inconsistent(format!(
            "trivial lattice rank {drop} exceeds Picard rank {rho}"
        )));
    }
    Ok(rho - drop)
}

/// The zero-section line of each pencil: the line carrying the marked
/// rational point, and its image under the sign change of x4 for the
/// other pencil.
pub fn zero_section_mask(which: FibrationKind) -> u8 {
    match which {
        FibrationKind::Minus => 0b011011,
        FibrationKind::Plus => 0b001011,
    }
}

/// The section line carrying the marked point of infinite order.
pub fn infinite_section_mask(which: FibrationKind) -> u8 {
    match which {
        FibrationKind::Minus => 0b011010,
        FibrationKind::Plus => 0b001010,
    }
}

/// The Picard lattice in a working basis: a basis of the nondegenerate
/// quotient of the 34-generator presentation, with the tools to express
/// generator combinations and derived classes in it.
pub struct PicBasis {
    basis: Mat<BigInt>,
    gram: Mat<BigInt>,
    gram_inv: Mat<BigRational>,
    pairing_rows: Mat<BigInt>,
}

impl PicBasis {
    pub fn new() -> Result<Self> {
        let g34 = picard_gram()?;
        let basis = Mat::from_rows(nondegenerate_quotient_basis(&g34)?);
        let gram = basis.matmul(&g34).matmul(&basis.transpose());
        let gram_inv = gram
            .to_rational()
            .inverse()
            .ok_or_else(|| Error::Inconsistent("quotient Gram is singular".into()))?;
        let pairing_rows = basis.matmul(&g34);
        Ok(PicBasis {
            basis,
            gram,
            gram_inv,
            pairing_rows,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn gram(&self) -> &Mat<BigInt> {
        &self.gram
    }

    fn solve_integral(&self, paired: &[BigInt]) -> Result<Vec<BigInt>> {
        let rat: Vec<BigRational> = paired.iter().map(|x| BigRational::from(x.clone())).collect();
        let coords = self.gram_inv.mul_vec(&rat);
        coords
            .into_iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::Inconsistent(
                        "class is not integral over the generators".into(),
                    ))
                }
            })
            .collect()
    }

    /// Coordinates of an integer combination of the 34 generators.
    pub fn coords_of_combination(&self, w: &[BigInt]) -> Result<Vec<BigInt>> {
        if w.len() != CLASS_COUNT {
            return Err(Error::DimensionMismatch(format!(
                "combination length {} instead of {CLASS_COUNT}",
                w.len()
            )));
        }
        let paired: Vec<BigInt> = (0..self.rank())
            .map(|k| {
                self.pairing_rows
                    .row(k)
                    .iter()
                    .zip(w)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        self.solve_integral(&paired)
    }

    /// Coordinates of a single generator.
    pub fn coords_of_generator(&self, index: usize) -> Result<Vec<BigInt>> {
        let mut w = vec![BigInt::zero(); CLASS_COUNT];
        w[index] = BigInt::one();
        self.coords_of_combination(&w)
    }

    /// Coordinates of a derived class given by its intersection numbers
    /// against the 34 generators.
    pub fn coords_of_intersection_vector(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != CLASS_COUNT {
            return Err(Error::DimensionMismatch(format!(
                "intersection vector length {} instead of {CLASS_COUNT}",
                v.len()
            )));
        }
        let paired: Vec<BigInt> = (0..self.rank())
            .map(|k| {
                self.basis
                    .row(k)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        self.solve_integral(&paired)
    }

    /// Intersection pairing of two classes in basis coordinates.
    pub fn pairing(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let gb = self.gram.mul_vec(b);
        a.iter().zip(&gb).map(|(x, y)| x * y).sum()
    }
}

/// Intersection vector of a fiber conic that is not itself a generator.
fn conic_intersection_vector(
    conic: &crate::kummer::fibers::ConicCurve,
    all_lines: &[FamilyLine],
) -> Result<Vec<BigInt>> {
    let mut v = Vec::with_capacity(CLASS_COUNT);
    for line in all_lines {
        v.push(BigInt::from(conic_line_intersection(conic, line)? as i64));
    }
    let c1 = c1()?;
    let c2 = c2()?;
    for reference in [&c1, &c2] {
        if conic.label() == reference.label()
            && conic.linear_forms() == reference.linear_forms()
        {
            v.push(BigInt::from(-2));
        } else {
            v.push(BigInt::from(
                conic_conic_intersection(conic, reference)? as i64
            ));
        }
    }
    Ok(v)
}

/// The full Mordell-Weil report of one pencil.
#[derive(Clone, Debug)]
pub struct MwReport {
    pub fibration: FibrationKind,
    /// I_n types of the singular fibers, largest first
    pub fiber_types: Vec<usize>,
    pub shioda_tate_rank: usize,
    /// free rank of Pic / (trivial lattice)
    pub rank: usize,
    /// invariant factors of the torsion subgroup
    pub torsion: Vec<u64>,
    pub zero_section_mask: u8,
    pub infinite_section_mask: u8,
    /// torsion images realized by section lines
    pub torsion_classes_hit: usize,
    pub all_torsion_represented_by_lines: bool,
    pub sections_generate_finite_index: bool,
}

fn mod_u64(x: &BigInt, d: &BigInt) -> u64 {
    let r = ((x % d) + d) % d;
    u64::try_from(&r).expect("reduced residue fits")
}

/// Compute the Mordell-Weil group of one pencil from the Picard
/// presentation.
pub fn mw_group(which: FibrationKind) -> Result<MwReport> {
    let params = distinguished_member();
    let all_lines = lines(&params)?;
    let pic = PicBasis::new()?;
    let fib = Fibration::new(which);

    let zero_mask = zero_section_mask(which);
    if !fib.is_section(&all_lines[zero_mask as usize]) {
        return Err(Error::Inconsistent("zero section is not a section".into()));
    }
    let o_coords = pic.coords_of_generator(zero_mask as usize)?;

    // decompose all singular fibers and express their components
    let inventory = conic_inventory(which)?;
    let mut fiber_types = Vec::new();
    let mut fiber_component_coords: Vec<Vec<Vec<BigInt>>> = Vec::new();
    for base in special_bases()? {
        let fiber = fiber_decomposition(which, &base)?;
        match fiber.label {
            KodairaLabel::Smooth => continue,
            KodairaLabel::I1 => fiber_types.push(1),
            KodairaLabel::I2 => fiber_types.push(2),
            KodairaLabel::I4 => fiber_types.push(4),
        }
        let mut comps = Vec::new();
        for component in &fiber.components {
            let coords = match component {
                FiberComponent::Line { mask } => pic.coords_of_generator(*mask as usize)?,
                FiberComponent::Conic { label } => {
                    let is_generator = which == FibrationKind::Minus
                        && (label == c1()?.label() || label == c2()?.label());
                    if is_generator {
                        let index = if label == c1()?.label() { 32 } else { 33 };
                        pic.coords_of_generator(index)?
                    } else {
                        let conic = inventory
                            .iter()
                            .find(|c| c.label() == label)
                            .ok_or_else(|| {
                                Error::Inconsistent(format!("conic {label} not in inventory"))
                            })?;
                        let v = conic_intersection_vector(conic, &all_lines)?;
                        pic.coords_of_intersection_vector(&v)?
                    }
                }
                FiberComponent::SmoothQuartic => {
                    return Err(Error::Inconsistent(
                        "smooth component inside a singular fiber".into(),
                    ))
                }
            };
            comps.push(coords);
        }
        fiber_component_coords.push(comps);
    }
    fiber_types.sort_unstable_by(|a, b| b.cmp(a));
    let shioda_tate_rank = shioda_tate(pic.rank(), &fiber_types)?;

    // fiber class: sum of the components of the first fiber; all fibers
    // must give the same class
    let add = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    };
    let fiber_class = |comps: &[Vec<BigInt>]| -> Vec<BigInt> {
        comps
            .iter()
            .skip(1)
            .fold(comps[0].clone(), |acc, c| add(&acc, c))
    };
    let f_coords = fiber_class(&fiber_component_coords[0]);
    for comps in &fiber_component_coords[1..] {
        if fiber_class(comps) != f_coords {
            return Err(Error::Inconsistent(
                "fibers are not linearly equivalent".into(),
            ));
        }
    }
    if !pic.pairing(&f_coords, &f_coords).is_zero() {
        return Err(Error::Inconsistent("fiber class has nonzero square".into()));
    }
    if pic.pairing(&f_coords, &o_coords) != BigInt::one() {
        return Err(Error::Inconsistent(
            "zero section does not meet the fiber once".into(),
        ));
    }

    // trivial lattice: O, F, and each fiber's components away from the one
    // meeting O
    let mut trivial_rows = vec![o_coords.clone(), f_coords.clone()];
    for comps in &fiber_component_coords {
        let meets_o: Vec<bool> = comps
            .iter()
            .map(|c| pic.pairing(c, &o_coords) == BigInt::one())
            .collect();
        if meets_o.iter().filter(|&&m| m).count() != 1 {
            return Err(Error::Inconsistent(
                "zero section does not meet exactly one component".into(),
            ));
        }
        for (c, meets) in comps.iter().zip(&meets_o) {
            if !meets {
                trivial_rows.push(c.clone());
            }
        }
    }
    let expected_rows = 2 + fiber_types.iter().map(|n| n - 1).sum::<usize>();
    if trivial_rows.len() != expected_rows {
        return Err(Error::Inconsistent(format!(
            "trivial lattice has {} spanning rows instead of {expected_rows}",
            trivial_rows.len()
        )));
    }

    let m = Mat::from_rows(trivial_rows);
    let snf = smith_normal_form(&m);
    if snf.rank() != expected_rows {
        return Err(Error::Inconsistent(
            "trivial lattice rows are dependent".into(),
        ));
    }
    let rank = pic.rank() - expected_rows;
    let torsion: Vec<u64> = snf
        .factors()
        .iter()
        .filter(|d| d.abs() > BigInt::one())
        .map(|d| u64::try_from(&d.abs()).expect("small factor"))
        .collect();

    // images of classes in Pic / T: right-multiplication by the Smith V
    // factor turns the row span of m into the span of the diagonal
    let v_t = snf.v().transpose();
    let torsion_positions: Vec<(usize, BigInt)> = snf
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.abs() > BigInt::one())
        .map(|(i, d)| (i, d.abs()))
        .collect();
    let free_positions: Vec<usize> = (expected_rows..pic.rank()).collect();
    let image = |coords: &[BigInt]| -> (Vec<u64>, Vec<BigInt>) {
        let z = v_t.mul_vec(coords);
        let tor = torsion_positions
            .iter()
            .map(|(i, d)| mod_u64(&z[*i], d))
            .collect();
        let free = free_positions.iter().map(|&i| z[i].clone()).collect();
        (tor, free)
    };

    // the zero section must map to zero
    let (o_tor, o_free) = image(&o_coords);
    if o_tor.iter().any(|&t| t != 0) || o_free.iter().any(|x| !x.is_zero()) {
        return Err(Error::Inconsistent(
            "zero section has nonzero image in the quotient".into(),
        ));
    }

    // scan the sixteen section lines
    let mut torsion_images = std::collections::BTreeSet::new();
    let mut any_free = false;
    let mut q_free_nonzero = false;
    let q_mask = infinite_section_mask(which);
    for line in &all_lines {
        if !fib.is_section(line) {
            continue;
        }
        let coords = pic.coords_of_generator(line.mask() as usize)?;
        let (tor, free) = image(&coords);
        if free.iter().all(|x| x.is_zero()) {
            torsion_images.insert(tor);
        } else {
            any_free = true;
            if line.mask() == q_mask {
                q_free_nonzero = true;
            }
        }
    }
    let torsion_order: u64 = torsion.iter().product();
    let torsion_classes_hit = torsion_images.len();
    let all_torsion_represented_by_lines = torsion_classes_hit as u64 == torsion_order;
    if !q_free_nonzero {
        return Err(Error::Inconsistent(
            "marked section has finite order in the quotient".into(),
        ));
    }
    let sections_generate_finite_index = any_free && all_torsion_represented_by_lines;

    Ok(MwReport {
        fibration: which,
        fiber_types,
        shioda_tate_rank,
        rank,
        torsion,
        zero_section_mask: zero_mask,
        infinite_section_mask: q_mask,
        torsion_classes_hit,
        all_torsion_represented_by_lines,
        sections_generate_finite_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kummer::fibers::sigma0_c1;
    use crate::kummer::lines::canonical_mask;

    #[test]
    fn shioda_tate_formula_cases() {
        assert_eq!(shioda_tate(19, &[4, 4, 4, 4, 2, 2, 2, 2]).unwrap(), 1);
        assert_eq!(shioda_tate(19, &[4, 4, 4, 4, 2, 2, 1, 1, 1, 1]).unwrap(), 3);
        assert_eq!(shioda_tate(19, &[4, 4, 4, 4, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap(), 5);
        assert!(shioda_tate(19, &[8, 8, 8]).is_err());
        assert!(shioda_tate(1, &[]).is_err());
    }

    #[test]
    fn zero_sections_are_sections_of_their_pencils() {
        let all_lines = lines(&distinguished_member()).unwrap();
        for which in [FibrationKind::Minus, FibrationKind::Plus] {
            let fib = Fibration::new(which);
            let o = zero_section_mask(which);
            let q = infinite_section_mask(which);
            assert!(fib.is_section(&all_lines[o as usize]));
            assert!(fib.is_section(&all_lines[q as usize]));
            assert_eq!(canonical_mask(o), o);
            assert_eq!(canonical_mask(q), q);
        }
    }

    #[test]
    fn minus_pencil_mordell_weil() {
        let report = mw_group(FibrationKind::Minus).unwrap();
        assert_eq!(report.fiber_types, vec![4, 4, 4, 4, 2, 2, 2, 2]);
        assert_eq!(report.rank, 1);
        assert_eq!(report.shioda_tate_rank, 1);
        assert_eq!(report.torsion, vec![2, 4]);
        assert_eq!(report.torsion_classes_hit, 8);
        assert!(report.all_torsion_represented_by_lines);
        assert!(report.sections_generate_finite_index);
    }

    #[test]
    fn plus_pencil_report_is_identical() {
        let plus = mw_group(FibrationKind::Plus).unwrap();
        let minus = mw_group(FibrationKind::Minus).unwrap();
        assert_eq!(plus.fiber_types, minus.fiber_types);
        assert_eq!(plus.rank, minus.rank);
        assert_eq!(plus.torsion, minus.torsion);
        assert_eq!(plus.torsion_classes_hit, minus.torsion_classes_hit);
    }

    #[test]
    fn conjugate_conic_completes_a_fiber_class() {
        // C1 plus its sign-change image must be a fiber class: square
        // zero, one intersection with the zero section
        let pic = PicBasis::new().unwrap();
        let all_lines = lines(&distinguished_member()).unwrap();
        let sigma = sigma0_c1().unwrap();
        let v = conic_intersection_vector(&sigma, &all_lines).unwrap();
        let sigma_coords = pic.coords_of_intersection_vector(&v).unwrap();
        let c1_coords = pic.coords_of_generator(32).unwrap();
        let f: Vec<BigInt> = sigma_coords
            .iter()
            .zip(&c1_coords)
            .map(|(a, b)| a + b)
            .collect();
        assert!(pic.pairing(&f, &f).is_zero());
        let o = pic
            .coords_of_generator(zero_section_mask(FibrationKind::Minus) as usize)
            .unwrap();
        assert_eq!(pic.pairing(&f, &o), BigInt::one());
        // the conjugate itself is a (-2)-class meeting C1 twice
        assert_eq!(pic.pairing(&sigma_coords, &sigma_coords), BigInt::from(-2));
        assert_eq!(pic.pairing(&sigma_coords, &c1_coords), BigInt::from(2));
    }
}
