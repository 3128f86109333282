//! Elliptic fibrations, singular fibers, and the two conic families.
//!
//! The two pencils [x1 + x5 : x2 -+ x4] restrict to elliptic fibrations on
//! the member at (t, s) = (-1, 1). Each of the 32 lines lies in a fiber of
//! one pencil and is a section of the other; the corresponding partition of
//! the lines into two 16-element tables is hardcoded and then re-verified
//! geometrically. The singular fibers are located explicitly: four
//! 4-cycles of lines (Kodaira type I4) over the base points +-1, +-2, and
//! four pairs of conics meeting twice (type I2) over +-sqrt(2) and
//! +-sqrt(-2). Intersection numbers between fiber components are computed
//! as honest scheme lengths through exact conic parametrizations.

use crate::error::{Error, Result};
use crate::exact::{Field, Mat, Mq, QuadField, Ring, SparsePoly, UniPoly};

use super::lines::{canonical_mask, lines, masks_adjacent, FamilyLine};
use super::FamilyParams;

/// The distinguished member at (t, s) = (-1, 1) which the fiber analysis
/// targets.
pub fn distinguished_member() -> FamilyParams {
    FamilyParams::from_i64(-1, 1).expect("rational parameters")
}

/// Sign choice in the pencil denominator x2 -+ x4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibrationKind {
    Plus,
    Minus,
}

/// A point of the base line, stored as a projective pair [num : den] and
/// compared by cross-multiplication.
#[derive(Clone, Debug)]
pub struct BasePoint {
    num: Mq,
    den: Mq,
}

impl BasePoint {
    pub fn new(num: Mq, den: Mq) -> Result<Self> {
        if Ring::is_zero(&num) && Ring::is_zero(&den) {
            return Err(Error::Invalid("a base point needs a nonzero pair".into()));
        }
        Ok(BasePoint { num, den })
    }

    /// The finite point [c : 1].
    pub fn finite(c: Mq) -> Self {
        let one = c.ring_one();
        BasePoint { num: c, den: one }
    }

    pub fn infinity() -> Self {
        BasePoint {
            num: Mq::from_i64(1),
            den: Mq::from_i64(0),
        }
    }

    pub fn num(&self) -> &Mq {
        &self.num
    }

    pub fn den(&self) -> &Mq {
        &self.den
    }

    /// The affine value num/den, if finite.
    pub fn value(&self) -> Option<Mq> {
        self.den.inv().map(|i| self.num.mul(&i))
    }
}

impl PartialEq for BasePoint {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

/// One of the two pencils.
#[derive(Clone, Copy, Debug)]
pub struct Fibration {
    kind: FibrationKind,
}

impl Fibration {
    pub fn new(kind: FibrationKind) -> Self {
        Fibration { kind }
    }

    pub fn minus() -> Self {
        Self::new(FibrationKind::Minus)
    }

    pub fn plus() -> Self {
        Self::new(FibrationKind::Plus)
    }

    pub fn kind(&self) -> FibrationKind {
        self.kind
    }

    /// Coefficients of the numerator form x1 + x5.
    pub fn numerator_form(&self) -> [i64; 6] {
        [0, 1, 0, 0, 0, 1]
    }

    /// Coefficients of the denominator form x2 -+ x4.
    pub fn denominator_form(&self) -> [i64; 6] {
        match self.kind {
            FibrationKind::Plus => [0, 0, 1, 0, 1, 0],
            FibrationKind::Minus => [0, 0, 1, 0, -1, 0],
        }
    }

    /// The pencil value on a line when the line lies in a single fiber.
    /// `None` means the value moves along the line.
    pub fn value_on_line(&self, line: &FamilyLine) -> Option<BasePoint> {
        let (p, q) = line.span();
        let a0 = eval_int_form(&self.numerator_form(), p);
        let a1 = eval_int_form(&self.numerator_form(), q);
        let b0 = eval_int_form(&self.denominator_form(), p);
        let b1 = eval_int_form(&self.denominator_form(), q);
        if a0.mul(&b1) != a1.mul(&b0) {
            return None;
        }
        if Ring::is_zero(&a0) && Ring::is_zero(&b0) {
            BasePoint::new(a1, b1).ok()
        } else {
            BasePoint::new(a0, b0).ok()
        }
    }

    /// A line is a section exactly when the pencil value moves along it (a
    /// degree-one map between lines is an isomorphism).
    pub fn is_section(&self, line: &FamilyLine) -> bool {
        let (p, q) = line.span();
        let a0 = eval_int_form(&self.numerator_form(), p);
        let a1 = eval_int_form(&self.numerator_form(), q);
        let b0 = eval_int_form(&self.denominator_form(), p);
        let b1 = eval_int_form(&self.denominator_form(), q);
        a0.mul(&b1) != a1.mul(&b0)
    }

    /// The pencil value on a conic when constant along it.
    pub fn value_on_conic(&self, conic: &ConicCurve) -> Result<Option<BasePoint>> {
        let param = conic_parametrization(conic)?;
        let num = pullback_int_form(&self.numerator_form(), &param);
        let den = pullback_int_form(&self.denominator_form(), &param);
        if num.is_zero() && den.is_zero() {
            return Err(Error::Inconsistent(
                "conic lies in the base locus of the pencil".into(),
            ));
        }
        // constant iff the two pullbacks are proportional
        let ref_poly = if den.is_zero() { &num } else { &den };
        let (e, _) = &ref_poly.terms()[0];
        let num_c = coeff_at(&num, e);
        let den_c = coeff_at(&den, e);
        if num.scale(&den_c) != den.scale(&num_c) {
            return Ok(None);
        }
        Ok(Some(BasePoint::new(num_c, den_c)?))
    }
}

fn eval_int_form(form: &[i64; 6], point: &[Mq; 6]) -> Mq {
    let mut acc = point[0].ring_zero();
    for (c, x) in form.iter().zip(point.iter()) {
        if *c != 0 {
            acc = acc.add(&x.mul(&x.from_i64(*c)));
        }
    }
    acc
}

fn coeff_at(p: &SparsePoly<Mq>, e: &crate::exact::poly::Exp) -> Mq {
    for (f, c) in p.terms() {
        if f == e {
            return c.clone();
        }
    }
    Mq::from_i64(0)
}

/// Whether x1^2 - 2 x2^2 + 2 x4^2 - x5^2 lies in the net at the given
/// parameters, i.e. whether (x1+x5)(x1-x5) = 2(x2+x4)(x2-x4) holds on the
/// surface. True at the distinguished member, where it makes the two
/// pencils trade places under sign changes.
pub fn product_identity_holds(params: &FamilyParams) -> bool {
    let v: [i64; 6] = [0, 1, -2, 0, 2, -1];
    let kernel = params.diagonal_matrix().nullspace();
    kernel.iter().all(|n| {
        let mut acc = n[0].ring_zero();
        for (c, x) in v.iter().zip(n.iter()) {
            if *c != 0 {
                acc = acc.add(&x.mul(&x.from_i64(*c)));
            }
        }
        Ring::is_zero(&acc)
    })
}

// ---------------------------------------------------------------------------
// line partition

/// The sixteen lines lying in fibers of the plus pencil (rows) and the
/// sixteen lying in fibers of the minus pencil, as canonical subset masks.
/// Each row is one fiber: a 4-cycle of lines.
pub fn line_partition() -> ([[u8; 4]; 4], [[u8; 4]; 4]) {
    let canon = |raw: [u8; 4]| raw.map(canonical_mask);
    let plus = [
        canon([0b000000, 0b000001, 0b001000, 0b001001]),
        canon([0b010010, 0b010011, 0b011010, 0b100100]),
        canon([0b010100, 0b010101, 0b011100, 0b100010]),
        canon([0b110000, 0b110001, 0b111000, 0b000110]),
    ];
    let minus = [
        canon([0b000010, 0b000011, 0b001010, 0b001011]),
        canon([0b010000, 0b010001, 0b011000, 0b011001]),
        canon([0b010110, 0b101000, 0b100001, 0b100000]),
        canon([0b110010, 0b001100, 0b000101, 0b000100]),
    ];
    (plus, minus)
}

/// Everything the partition promises, checked at the distinguished member.
#[derive(Clone, Debug)]
pub struct PartitionReport {
    pub plus_rows: [[u8; 4]; 4],
    pub minus_rows: [[u8; 4]; 4],
    /// the 32 canonical masks are hit exactly once
    pub covers_all_lines: bool,
    /// every row induces a 4-cycle in the intersection graph
    pub rows_are_four_cycles: bool,
    /// plus-table lines have constant plus-pencil value, row by row
    pub plus_lines_are_plus_fibers: bool,
    /// plus-table lines are sections of the minus pencil
    pub plus_lines_are_minus_sections: bool,
    pub minus_lines_are_minus_fibers: bool,
    pub minus_lines_are_plus_sections: bool,
    /// minus-pencil values on the minus table are +-1, +-2, four each
    pub minus_values_are_pm_1_2: bool,
    pub plus_values_are_pm_1_2: bool,
    /// a pair of minus-pencil sections meeting each other
    pub two_meeting_sections: Option<(u8, u8)>,
}

impl PartitionReport {
    pub fn all_checks_pass(&self) -> bool {
        self.covers_all_lines
            && self.rows_are_four_cycles
            && self.plus_lines_are_plus_fibers
            && self.plus_lines_are_minus_sections
            && self.minus_lines_are_minus_fibers
            && self.minus_lines_are_plus_sections
            && self.minus_values_are_pm_1_2
            && self.plus_values_are_pm_1_2
            && self.two_meeting_sections.is_some()
    }
}

fn row_is_four_cycle(row: &[u8; 4]) -> bool {
    let deg = |i: usize| -> usize {
        (0..4)
            .filter(|&j| j != i && masks_adjacent(row[i], row[j]))
            .count()
    };
    (0..4).all(|i| deg(i) == 2)
}

fn rational_base(v: i64) -> BasePoint {
    BasePoint::finite(Mq::from_i64(v))
}

/// Verify the partition tables at the distinguished member.
pub fn partition_checks() -> Result<PartitionReport> {
    let params = distinguished_member();
    let ls = lines(&params)?;
    let (plus_rows, minus_rows) = line_partition();
    let pi_plus = Fibration::plus();
    let pi_minus = Fibration::minus();

    let mut seen = [false; 32];
    for row in plus_rows.iter().chain(minus_rows.iter()) {
        for &m in row {
            seen[m as usize] = true;
        }
    }
    let covers_all_lines = seen.iter().all(|&s| s);

    let rows_are_four_cycles = plus_rows
        .iter()
        .chain(minus_rows.iter())
        .all(row_is_four_cycle);

    let row_fiber_values = |rows: &[[u8; 4]; 4], fib: &Fibration| -> Option<Vec<BasePoint>> {
        let mut values = Vec::new();
        for row in rows {
            let mut row_value: Option<BasePoint> = None;
            for &m in row {
                let v = fib.value_on_line(&ls[m as usize])?;
                match &row_value {
                    None => row_value = Some(v),
                    Some(w) => {
                        if &v != w {
                            return None;
                        }
                    }
                }
            }
            values.push(row_value?);
        }
        Some(values)
    };

    let plus_values = row_fiber_values(&plus_rows, &pi_plus);
    let minus_values = row_fiber_values(&minus_rows, &pi_minus);
    let plus_lines_are_plus_fibers = plus_values.is_some();
    let minus_lines_are_minus_fibers = minus_values.is_some();

    let expected: Vec<BasePoint> = [1, -1, 2, -2].iter().map(|&v| rational_base(v)).collect();
    let values_ok = |vals: &Option<Vec<BasePoint>>| -> bool {
        vals.as_ref().is_some_and(|vs| {
            vs.len() == 4
                && expected.iter().all(|e| vs.iter().filter(|v| *v == e).count() == 1)
        })
    };
    let minus_values_are_pm_1_2 = values_ok(&minus_values);
    let plus_values_are_pm_1_2 = values_ok(&plus_values);

    let plus_lines_are_minus_sections = plus_rows
        .iter()
        .flatten()
        .all(|&m| pi_minus.is_section(&ls[m as usize]));
    let minus_lines_are_plus_sections = minus_rows
        .iter()
        .flatten()
        .all(|&m| pi_plus.is_section(&ls[m as usize]));

    let mut two_meeting_sections = None;
    'outer: for &a in plus_rows.iter().flatten() {
        for &b in plus_rows.iter().flatten() {
            if a < b && masks_adjacent(a, b) {
                two_meeting_sections = Some((a, b));
                break 'outer;
            }
        }
    }

    Ok(PartitionReport {
        plus_rows,
        minus_rows,
        covers_all_lines,
        rows_are_four_cycles,
        plus_lines_are_plus_fibers,
        plus_lines_are_minus_sections,
        minus_lines_are_minus_fibers,
        minus_lines_are_plus_sections,
        minus_values_are_pm_1_2,
        plus_values_are_pm_1_2,
        two_meeting_sections,
    })
}

// ---------------------------------------------------------------------------
// conics

/// A conic on the distinguished member, cut out by three linear forms (its
/// plane) and one diagonal quadric. The plane is also carried as an
/// explicit parametrization witness together with a rational point of the
/// conic in plane coordinates.
#[derive(Clone, Debug)]
pub struct ConicCurve {
    label: String,
    linear_forms: [[Mq; 6]; 3],
    quadric_diag: [Mq; 6],
    /// rows span the plane: plane coordinates (a, b, c) map to
    /// a*w0 + b*w1 + c*w2 in the ambient space
    plane_witness: [[Mq; 6]; 3],
    /// Gram matrix of the conic in plane coordinates
    plane_gram: [[Mq; 3]; 3],
    /// a point of the plane conic over the tag field
    rational_point: [Mq; 3],
    field_tag: QuadField,
}

impl ConicCurve {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn linear_forms(&self) -> &[[Mq; 6]; 3] {
        &self.linear_forms
    }

    pub fn quadric_diag(&self) -> &[Mq; 6] {
        &self.quadric_diag
    }

    pub fn plane_witness(&self) -> &[[Mq; 6]; 3] {
        &self.plane_witness
    }

    pub fn field_tag(&self) -> &QuadField {
        &self.field_tag
    }

    /// Map a plane point into the ambient space.
    pub fn ambient_point(&self, p: &[Mq; 3]) -> [Mq; 6] {
        std::array::from_fn(|m| {
            let mut acc = p[0].mul(&self.plane_witness[0][m]);
            acc = acc.add(&p[1].mul(&self.plane_witness[1][m]));
            acc.add(&p[2].mul(&self.plane_witness[2][m]))
        })
    }
}

fn mq_int(v: i64) -> Mq {
    Mq::from_i64(v)
}

/// The conics in planes of the form x1 = a sqrt(2) x2, x5 = b sqrt(2) x4,
/// x3 = d sqrt(2) x0. The sign b = -a puts the conic in a fiber of the
/// minus pencil, b = a in a fiber of the plus pencil.
fn conic_sqrt2(which: FibrationKind, a: i64, d: i64) -> Result<ConicCurve> {
    let r2 = Mq::sqrt_int(2)?;
    let b = match which {
        FibrationKind::Minus => -a,
        FibrationKind::Plus => a,
    };
    let av = r2.mul(&r2.from_i64(a));
    let bv = r2.mul(&r2.from_i64(b));
    let dv = r2.mul(&r2.from_i64(d));
    let z = mq_int(0);
    let o = mq_int(1);
    let linear_forms = [
        [z.clone(), o.clone(), av.neg(), z.clone(), z.clone(), z.clone()],
        [z.clone(), z.clone(), z.clone(), z.clone(), bv.neg(), o.clone()],
        [dv.neg(), z.clone(), z.clone(), o.clone(), z.clone(), z.clone()],
    ];
    let quadric_diag = [
        mq_int(-12),
        z.clone(),
        mq_int(2),
        z.clone(),
        z.clone(),
        o.clone(),
    ];
    // plane coordinates (p0, p2, p4)
    let plane_witness = [
        [o.clone(), z.clone(), z.clone(), dv, z.clone(), z.clone()],
        [z.clone(), av, o.clone(), z.clone(), z.clone(), z.clone()],
        [z.clone(), z.clone(), z.clone(), z.clone(), o.clone(), bv],
    ];
    // restriction of the net: p2^2 + p4^2 - 6 p0^2
    let plane_gram = [
        [mq_int(-6), z.clone(), z.clone()],
        [z.clone(), o.clone(), z.clone()],
        [z.clone(), z.clone(), o.clone()],
    ];
    let rational_point = [o.clone(), o.add(&r2), r2.sub(&o)];
    let sign = |v: i64| if v > 0 { 'p' } else { 'm' };
    Ok(ConicCurve {
        label: format!("C{}{}", sign(a), sign(d)),
        linear_forms,
        quadric_diag,
        plane_witness,
        plane_gram,
        rational_point,
        field_tag: r2.field().clone(),
    })
}

/// The conics in planes of the form x1 = u sqrt(-2) x4,
/// 2 x2 = v sqrt(-2) x5, x3 = -w sqrt(-2) x0. The sign v = u puts the
/// conic in a fiber of the minus pencil, v = -u in one of the plus pencil.
fn conic_sqrt_minus2(which: FibrationKind, u: i64, w: i64) -> Result<ConicCurve> {
    let rm2 = Mq::sqrt_int(-2)?;
    let v = match which {
        FibrationKind::Minus => u,
        FibrationKind::Plus => -u,
    };
    let uv = rm2.mul(&rm2.from_i64(u));
    let vv = rm2.mul(&rm2.from_i64(v));
    let wv = rm2.mul(&rm2.from_i64(w));
    let z = mq_int(0);
    let o = mq_int(1);
    let half = Mq::from_rat(num_rational::BigRational::new(1.into(), 2.into()));
    let linear_forms = [
        [z.clone(), o.clone(), z.clone(), z.clone(), uv.neg(), z.clone()],
        [z.clone(), z.clone(), mq_int(2), z.clone(), z.clone(), vv.neg()],
        [wv.clone(), z.clone(), z.clone(), o.clone(), z.clone(), z.clone()],
    ];
    let quadric_diag = [
        mq_int(4),
        z.clone(),
        z.clone(),
        z.clone(),
        mq_int(2),
        mq_int(-1),
    ];
    // plane coordinates (p0, p4, p5)
    let plane_witness = [
        [o.clone(), z.clone(), z.clone(), wv.neg(), z.clone(), z.clone()],
        [z.clone(), uv, z.clone(), z.clone(), o.clone(), z.clone()],
        [z.clone(), z.clone(), vv.mul(&half), z.clone(), z.clone(), o.clone()],
    ];
    // restriction of the net: 4 p0^2 + 2 p4^2 - p5^2 (up to scale)
    let plane_gram = [
        [mq_int(4), z.clone(), z.clone()],
        [z.clone(), mq_int(2), z.clone()],
        [z.clone(), z.clone(), mq_int(-1)],
    ];
    let rational_point = [o.clone(), z.clone(), mq_int(2)];
    let sign = |x: i64| if x > 0 { 'p' } else { 'm' };
    Ok(ConicCurve {
        label: format!("Q{}{}", sign(u), sign(w)),
        linear_forms,
        quadric_diag,
        plane_witness,
        plane_gram,
        rational_point,
        field_tag: rm2.field().clone(),
    })
}

/// The conic called C1: in the plane x1 = -sqrt(2) x2, x5 = sqrt(2) x4,
/// x3 = sqrt(2) x0, lying in the minus-pencil fiber over -sqrt(2).
pub fn c1() -> Result<ConicCurve> {
    conic_sqrt2(FibrationKind::Minus, -1, 1)
}

/// The image of C1 under the sign change of x0: the other component of the
/// same fiber.
pub fn sigma0_c1() -> Result<ConicCurve> {
    conic_sqrt2(FibrationKind::Minus, -1, -1)
}

/// The conic called C2: in the plane x1 = sqrt(-2) x4,
/// 2 x2 = sqrt(-2) x5, x3 = -sqrt(-2) x0, lying in the minus-pencil fiber
/// over -sqrt(-2).
pub fn c2() -> Result<ConicCurve> {
    conic_sqrt_minus2(FibrationKind::Minus, 1, 1)
}

/// All eight conics sitting in fibers of the chosen pencil.
pub fn conic_inventory(which: FibrationKind) -> Result<Vec<ConicCurve>> {
    let mut out = Vec::with_capacity(8);
    for a in [1i64, -1] {
        for d in [1i64, -1] {
            out.push(conic_sqrt2(which, a, d)?);
        }
    }
    for u in [1i64, -1] {
        for w in [1i64, -1] {
            out.push(conic_sqrt_minus2(which, u, w)?);
        }
    }
    Ok(out)
}

/// Restrict a diagonal ambient quadric to a plane.
fn restrict_quadric(diag: &[Mq; 6], witness: &[[Mq; 6]; 3]) -> [[Mq; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = diag[0].ring_zero();
            for m in 0..6 {
                acc = acc.add(&diag[m].mul(&witness[i][m]).mul(&witness[j][m]));
            }
            acc
        })
    })
}

fn gram_scale(a: &[[Mq; 3]; 3], b: &[[Mq; 3]; 3]) -> Option<Mq> {
    // scalar c with a = c * b, requiring b != 0
    let mut c: Option<Mq> = None;
    for i in 0..3 {
        for j in 0..3 {
            if !Ring::is_zero(&b[i][j]) {
                let s = a[i][j].mul(&b[i][j].inv()?);
                match &c {
                    None => c = Some(s),
                    Some(t) => {
                        if t != &s {
                            return None;
                        }
                    }
                }
            } else if !Ring::is_zero(&a[i][j]) {
                return None;
            }
        }
    }
    c
}

/// Certificate that a plane meets the surface exactly in the stored conic:
/// each net quadric restricts to a scalar multiple of the plane conic, not
/// all scalars are zero, and the plane conic is smooth (rank 3).
#[derive(Clone, Debug)]
pub struct ContainmentCertificate {
    pub scalars: [Mq; 3],
    pub conic_rank: usize,
}

pub fn containment_certificate(conic: &ConicCurve) -> Result<ContainmentCertificate> {
    let params = distinguished_member();
    let rows = params.diagonal_rows();
    let mut scalars: Vec<Mq> = Vec::with_capacity(3);
    for row in &rows {
        let restricted = restrict_quadric(row, &conic.plane_witness);
        let s = gram_scale(&restricted, &conic.plane_gram).ok_or_else(|| {
            Error::Inconsistent(format!(
                "net restriction to the plane of {} is not a multiple of its conic",
                conic.label
            ))
        })?;
        scalars.push(s);
    }
    if scalars.iter().all(Ring::is_zero) {
        return Err(Error::Inconsistent(format!(
            "the net vanishes identically on the plane of {}",
            conic.label
        )));
    }
    let gram = Mat::from_rows(conic.plane_gram.iter().map(|r| r.to_vec()).collect());
    let conic_rank = gram.rank();
    if conic_rank != 3 {
        return Err(Error::Inconsistent(format!(
            "the plane conic of {} is singular",
            conic.label
        )));
    }
    Ok(ContainmentCertificate {
        scalars: [scalars[0].clone(), scalars[1].clone(), scalars[2].clone()],
        conic_rank,
    })
}

/// Negative control for the containment certificate: a nearby sign variant
/// of the C1 plane (x1 + sqrt(2) x2 = 0, x4 + sqrt(2) x5 = 0,
/// 2 x3 - sqrt(2) x0 = 0) does not carry a conic of the surface, and the
/// certificate must reject it.
pub fn broken_sign_variant_is_rejected() -> Result<bool> {
    let r2 = Mq::sqrt_int(2)?;
    let z = mq_int(0);
    let o = mq_int(1);
    let half = Mq::from_rat(num_rational::BigRational::new(1.into(), 2.into()));
    // plane coordinates (p0, p2, p5)
    let witness = [
        [o.clone(), z.clone(), z.clone(), r2.mul(&half), z.clone(), z.clone()],
        [z.clone(), r2.neg(), o.clone(), z.clone(), z.clone(), z.clone()],
        [z.clone(), z.clone(), z.clone(), z.clone(), r2.neg(), o.clone()],
    ];
    let params = distinguished_member();
    let rows = params.diagonal_rows();
    let restrictions: Vec<[[Mq; 3]; 3]> = rows
        .iter()
        .map(|row| restrict_quadric(row, &witness))
        .collect();
    // rejected iff no common conic: some pair of restrictions fails to be
    // proportional (in either direction)
    let proportional = |a: &[[Mq; 3]; 3], b: &[[Mq; 3]; 3]| -> bool {
        gram_scale(a, b).is_some() || gram_scale(b, a).is_some()
    };
    let all_compatible = proportional(&restrictions[0], &restrictions[1])
        && proportional(&restrictions[0], &restrictions[2])
        && proportional(&restrictions[1], &restrictions[2]);
    Ok(!all_compatible)
}

// ---------------------------------------------------------------------------
// parametrization and intersection lengths

fn plane_quadric_value(g: &[[Mq; 3]; 3], p: &[Mq; 3]) -> Mq {
    let mut acc = p[0].ring_zero();
    for i in 0..3 {
        for j in 0..3 {
            acc = acc.add(&g[i][j].mul(&p[i]).mul(&p[j]));
        }
    }
    acc
}

fn plane_polar_value(g: &[[Mq; 3]; 3], p: &[Mq; 3], q: &[Mq; 3]) -> Mq {
    let mut acc = p[0].ring_zero();
    for i in 0..3 {
        for j in 0..3 {
            acc = acc.add(&g[i][j].mul(&p[i]).mul(&q[j]));
        }
    }
    acc
}

/// Degree-two parametrization of the conic in ambient coordinates, as six
/// homogeneous quadratics in two variables. Projection from the stored
/// rational point: the line through P in direction W meets the conic again
/// at q(W) P - 2 B(P, W) W.
fn conic_parametrization(conic: &ConicCurve) -> Result<[SparsePoly<Mq>; 6]> {
    let g = &conic.plane_gram;
    let p = &conic.rational_point;
    if !Ring::is_zero(&plane_quadric_value(g, p)) {
        return Err(Error::Inconsistent(format!(
            "stored point is not on the conic {}",
            conic.label
        )));
    }
    // two directions completing the point to a basis of the plane
    let basis: [[Mq; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { mq_int(1) } else { mq_int(0) })
    });
    let mut dirs: Vec<[Mq; 3]> = Vec::new();
    for w in &basis {
        if dirs.len() == 2 {
            break;
        }
        let mut rows = vec![p.to_vec(), w.to_vec()];
        rows.extend(dirs.iter().map(|d| d.to_vec()));
        if Mat::from_rows(rows).rank() == 2 + dirs.len() {
            dirs.push(w.clone());
        }
    }
    let [w1, w2] = [dirs[0].clone(), dirs[1].clone()];

    // plane coordinates of the parametrized point, as polynomials in (u, v)
    let one = mq_int(1);
    let u = SparsePoly::var(2, 0, one.clone());
    let v = SparsePoly::var(2, 1, one.clone());
    let qw = {
        // q(u w1 + v w2) = u^2 q(w1) + 2uv B(w1, w2) + v^2 q(w2)
        let a = plane_quadric_value(g, &w1);
        let b = plane_polar_value(g, &w1, &w2);
        let c = plane_quadric_value(g, &w2);
        u.mul(&u)
            .scale(&a)
            .add(&u.mul(&v).scale(&b.add(&b)))
            .add(&v.mul(&v).scale(&c))
    };
    let bpw2 = {
        // twice the polar value B(P, W), the coefficient of W in the
        // second intersection point q(W) P - 2 B(P, W) W
        let a = plane_polar_value(g, p, &w1);
        let b = plane_polar_value(g, p, &w2);
        u.scale(&a.add(&a)).add(&v.scale(&b.add(&b)))
    };
    let plane_param: [SparsePoly<Mq>; 3] = std::array::from_fn(|i| {
        let wi = u.scale(&w1[i]).add(&v.scale(&w2[i]));
        qw.scale(&p[i]).sub(&bpw2.mul(&wi))
    });

    // the parametrized point satisfies the conic identically
    let mut check = SparsePoly::zero(2);
    for i in 0..3 {
        for j in 0..3 {
            check = check.add(&plane_param[i].mul(&plane_param[j]).scale(&g[i][j]));
        }
    }
    if !check.is_zero() {
        return Err(Error::Inconsistent(format!(
            "parametrization of {} left the conic",
            conic.label
        )));
    }

    Ok(std::array::from_fn(|m| {
        let mut acc = SparsePoly::zero(2);
        for i in 0..3 {
            acc = acc.add(&plane_param[i].scale(&conic.plane_witness[i][m]));
        }
        acc
    }))
}

fn pullback_linear(form: &[Mq; 6], param: &[SparsePoly<Mq>; 6]) -> SparsePoly<Mq> {
    let mut acc = SparsePoly::zero(2);
    for (c, x) in form.iter().zip(param.iter()) {
        acc = acc.add(&x.scale(c));
    }
    acc
}

fn pullback_int_form(form: &[i64; 6], param: &[SparsePoly<Mq>; 6]) -> SparsePoly<Mq> {
    let forms: [Mq; 6] = std::array::from_fn(|m| mq_int(form[m]));
    pullback_linear(&forms, param)
}

fn pullback_diag_quadric(diag: &[Mq; 6], param: &[SparsePoly<Mq>; 6]) -> SparsePoly<Mq> {
    let mut acc = SparsePoly::zero(2);
    for (c, x) in diag.iter().zip(param.iter()) {
        acc = acc.add(&x.mul(x).scale(c));
    }
    acc
}

/// Scheme length of the common zero locus on the parametrized curve: the
/// degree of the gcd of the dehomogenized pullbacks plus the common order
/// of vanishing at the point at infinity of the parametrization.
fn length_from_pullbacks(pulls: Vec<SparsePoly<Mq>>) -> Result<usize> {
    let nonzero: Vec<SparsePoly<Mq>> = pulls.into_iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::Invalid(
            "every generator vanishes on the curve; the curves coincide".into(),
        ));
    }
    let one = nonzero[0].terms()[0].1.ring_one();
    let dehom_images = [
        SparsePoly::var(1, 0, one.clone()),
        SparsePoly::constant(1, one.clone()),
    ];
    let mut gcd: Option<UniPoly<Mq>> = None;
    let mut inf_val: Option<u32> = None;
    for g in &nonzero {
        let total = g.total_degree().expect("nonzero polynomial");
        if g.terms().iter().any(|(e, _)| u32::from(e[0] + e[1]) != total) {
            return Err(Error::Inconsistent(
                "pullback of a generator is not homogeneous".into(),
            ));
        }
        let dehom = UniPoly::from_sparse(&g.compose(&dehom_images), 0)?;
        let udeg = dehom.degree().expect("nonzero dehomogenization") as u32;
        let vval = total - udeg;
        inf_val = Some(match inf_val {
            None => vval,
            Some(m) => m.min(vval),
        });
        gcd = Some(match gcd {
            None => dehom,
            Some(h) => h.gcd(&dehom),
        });
    }
    let g = gcd.expect("at least one generator");
    let finite = g.degree().expect("gcd of nonzero polynomials is nonzero");
    Ok(finite + inf_val.unwrap_or(0) as usize)
}

/// Intersection length of a conic with a line.
pub fn conic_line_intersection(conic: &ConicCurve, line: &FamilyLine) -> Result<usize> {
    let param = conic_parametrization(conic)?;
    let forms = line.vanishing_forms()?;
    let pulls: Vec<SparsePoly<Mq>> = forms
        .iter()
        .map(|f| {
            let arr: [Mq; 6] = std::array::from_fn(|m| f[m].clone());
            pullback_linear(&arr, &param)
        })
        .collect();
    length_from_pullbacks(pulls)
}

/// Intersection length of two distinct conics.
pub fn conic_conic_intersection(a: &ConicCurve, b: &ConicCurve) -> Result<usize> {
    let param = conic_parametrization(a)?;
    let mut pulls: Vec<SparsePoly<Mq>> = b
        .linear_forms
        .iter()
        .map(|f| pullback_linear(f, &param))
        .collect();
    pulls.push(pullback_diag_quadric(&b.quadric_diag, &param));
    length_from_pullbacks(pulls)
}

/// Intersection length of two distinct lines (0 or 1).
pub fn line_line_intersection(a: &FamilyLine, b: &FamilyLine) -> Result<usize> {
    if a.mask() == b.mask() {
        return Err(Error::Invalid("the lines coincide".into()));
    }
    let m = Mat::from_rows(vec![
        a.span().0.to_vec(),
        a.span().1.to_vec(),
        b.span().0.to_vec(),
        b.span().1.to_vec(),
    ]);
    Ok(if m.rank() <= 3 { 1 } else { 0 })
}

// ---------------------------------------------------------------------------
// fibers

/// Kodaira type of a fiber, as far as this analysis distinguishes them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KodairaLabel {
    Smooth,
    I1,
    I2,
    I4,
}

impl KodairaLabel {
    /// Contribution to the Euler number of the surface.
    pub fn euler(&self) -> usize {
        match self {
            KodairaLabel::Smooth => 0,
            KodairaLabel::I1 => 1,
            KodairaLabel::I2 => 2,
            KodairaLabel::I4 => 4,
        }
    }
}

/// One irreducible component of a fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberComponent {
    Line { mask: u8 },
    Conic { label: String },
    SmoothQuartic,
}

impl FiberComponent {
    pub fn degree(&self) -> usize {
        match self {
            FiberComponent::Line { .. } => 1,
            FiberComponent::Conic { .. } => 2,
            FiberComponent::SmoothQuartic => 4,
        }
    }
}

/// A fiber of one of the pencils at the distinguished member, with its
/// components listed explicitly (consecutive components of an I4 cycle are
/// adjacent) and all pairwise intersection lengths.
#[derive(Clone, Debug)]
pub struct FiberDescriptor {
    pub base: BasePoint,
    pub label: KodairaLabel,
    pub components: Vec<FiberComponent>,
    /// intersection lengths between components i < j
    pub meetings: Vec<(usize, usize, usize)>,
}

impl FiberDescriptor {
    pub fn degree_sum(&self) -> usize {
        self.components.iter().map(FiberComponent::degree).sum()
    }
}

/// Decompose the fiber of the chosen pencil over a base point at the
/// distinguished member. Components are searched among the 32 lines and
/// the eight fiber conics; a base point carrying none of them has a smooth
/// quartic fiber, since the singular fibers found this way already account
/// for the full Euler number 24.
pub fn fiber_decomposition(which: FibrationKind, base: &BasePoint) -> Result<FiberDescriptor> {
    let params = distinguished_member();
    let ls = lines(&params)?;
    let fib = Fibration::new(which);

    let line_masks: Vec<u8> = ls
        .iter()
        .filter(|l| fib.value_on_line(l).as_ref() == Some(base))
        .map(|l| l.mask())
        .collect();

    let mut fiber_conics: Vec<ConicCurve> = Vec::new();
    for c in conic_inventory(which)? {
        if fib.value_on_conic(&c)?.as_ref() == Some(base) {
            fiber_conics.push(c);
        }
    }

    match (line_masks.len(), fiber_conics.len()) {
        (4, 0) => {
            // order the four lines into a cycle
            for &m in &line_masks {
                let deg = line_masks
                    .iter()
                    .filter(|&&n| n != m && masks_adjacent(m, n))
                    .count();
                if deg != 2 {
                    return Err(Error::Inconsistent(
                        "fiber lines do not form a cycle".into(),
                    ));
                }
            }
            let start = line_masks[0];
            let mut cycle = vec![start];
            while cycle.len() < 4 {
                let last = *cycle.last().expect("nonempty");
                let next = line_masks
                    .iter()
                    .find(|&&n| {
                        n != last
                            && masks_adjacent(last, n)
                            && (cycle.len() < 2 || n != cycle[cycle.len() - 2])
                    })
                    .copied()
                    .ok_or_else(|| Error::Inconsistent("cycle walk broke off".into()))?;
                cycle.push(next);
            }
            let mut meetings = Vec::new();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let len =
                        line_line_intersection(&ls[cycle[i] as usize], &ls[cycle[j] as usize])?;
                    meetings.push((i, j, len));
                }
            }
            Ok(FiberDescriptor {
                base: base.clone(),
                label: KodairaLabel::I4,
                components: cycle
                    .into_iter()
                    .map(|mask| FiberComponent::Line { mask })
                    .collect(),
                meetings,
            })
        }
        (0, 2) => {
            let len = conic_conic_intersection(&fiber_conics[0], &fiber_conics[1])?;
            if len != 2 {
                return Err(Error::Inconsistent(format!(
                    "conic components meet with length {len}, not 2"
                )));
            }
            Ok(FiberDescriptor {
                base: base.clone(),
                label: KodairaLabel::I2,
                components: fiber_conics
                    .iter()
                    .map(|c| FiberComponent::Conic {
                        label: c.label().to_string(),
                    })
                    .collect(),
                meetings: vec![(0, 1, 2)],
            })
        }
        (0, 0) => Ok(FiberDescriptor {
            base: base.clone(),
            label: KodairaLabel::Smooth,
            components: vec![FiberComponent::SmoothQuartic],
            meetings: Vec::new(),
        }),
        (l, c) => Err(Error::Inconsistent(format!(
            "unexpected component counts: {l} lines and {c} conics over one base point"
        ))),
    }
}

/// The eight base points carrying singular fibers: +-1, +-2, +-sqrt(2),
/// +-sqrt(-2).
pub fn special_bases() -> Result<Vec<BasePoint>> {
    let r2 = Mq::sqrt_int(2)?;
    let rm2 = Mq::sqrt_int(-2)?;
    Ok(vec![
        rational_base(1),
        rational_base(-1),
        rational_base(2),
        rational_base(-2),
        BasePoint::finite(r2.clone()),
        BasePoint::finite(r2.neg()),
        BasePoint::finite(rm2.clone()),
        BasePoint::finite(rm2.neg()),
    ])
}

/// Sum of Euler contributions over the singular fibers of the pencil,
/// which must come out to 24.
pub fn euler_number(which: FibrationKind) -> Result<usize> {
    let mut total = 0;
    for base in special_bases()? {
        total += fiber_decomposition(which, &base)?.label.euler();
    }
    if total != 24 {
        return Err(Error::Inconsistent(format!(
            "singular fibers account for Euler number {total}, not 24"
        )));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_tables_check_out() {
        let report = partition_checks().unwrap();
        assert!(report.covers_all_lines);
        assert!(report.rows_are_four_cycles);
        assert!(report.plus_lines_are_plus_fibers);
        assert!(report.plus_lines_are_minus_sections);
        assert!(report.minus_lines_are_minus_fibers);
        assert!(report.minus_lines_are_plus_sections);
        assert!(report.minus_values_are_pm_1_2);
        assert!(report.plus_values_are_pm_1_2);
        assert!(report.two_meeting_sections.is_some());
        assert!(report.all_checks_pass());
    }

    #[test]
    fn sample_line_values_on_the_minus_pencil() {
        let ls = lines(&distinguished_member()).unwrap();
        let fib = Fibration::minus();
        // sign change at 1 -> -2; at 4 -> 1; at {1,2,4} -> 2; at {2} -> -1
        let cases = [(0b000010u8, -2i64), (0b010000, 1), (0b010110, 2), (0b000100, -1)];
        for (mask, v) in cases {
            let value = fib.value_on_line(&ls[mask as usize]).unwrap();
            assert_eq!(value, rational_base(v), "mask {mask}");
        }
        // the base line is a section of the minus pencil, so it has no
        // constant value
        assert!(fib.value_on_line(&ls[0]).is_none());
        assert!(fib.is_section(&ls[0]));
    }

    #[test]
    fn i4_fibers_over_the_rational_bases() {
        for v in [1i64, -1, 2, -2] {
            let fiber =
                fiber_decomposition(FibrationKind::Minus, &rational_base(v)).unwrap();
            assert_eq!(fiber.label, KodairaLabel::I4, "base {v}");
            assert_eq!(fiber.components.len(), 4);
            assert_eq!(fiber.degree_sum(), 4);
            // cycle: consecutive components meet once, opposite ones do not
            let len = |i: usize, j: usize| {
                fiber
                    .meetings
                    .iter()
                    .find(|(a, b, _)| (*a, *b) == (i.min(j), i.max(j)))
                    .expect("all pairs recorded")
                    .2
            };
            for i in 0..4 {
                assert_eq!(len(i, (i + 1) % 4), 1);
            }
            assert_eq!(len(0, 2), 0);
            assert_eq!(len(1, 3), 0);
        }
    }

    #[test]
    fn i2_fibers_over_the_quadratic_bases() {
        let r2 = Mq::sqrt_int(2).unwrap();
        let rm2 = Mq::sqrt_int(-2).unwrap();
        for base in [
            BasePoint::finite(r2.clone()),
            BasePoint::finite(r2.neg()),
            BasePoint::finite(rm2.clone()),
            BasePoint::finite(rm2.neg()),
        ] {
            let fiber = fiber_decomposition(FibrationKind::Minus, &base).unwrap();
            assert_eq!(fiber.label, KodairaLabel::I2);
            assert_eq!(fiber.components.len(), 2);
            assert_eq!(fiber.degree_sum(), 4);
            assert_eq!(fiber.meetings, vec![(0, 1, 2)]);
        }
    }

    #[test]
    fn generic_fibers_are_smooth() {
        let fiber = fiber_decomposition(FibrationKind::Minus, &rational_base(3)).unwrap();
        assert_eq!(fiber.label, KodairaLabel::Smooth);
        assert_eq!(fiber.degree_sum(), 4);
        let inf = fiber_decomposition(FibrationKind::Minus, &BasePoint::infinity()).unwrap();
        assert_eq!(inf.label, KodairaLabel::Smooth);
    }

    #[test]
    fn euler_numbers_of_both_pencils() {
        assert_eq!(euler_number(FibrationKind::Minus).unwrap(), 24);
        assert_eq!(euler_number(FibrationKind::Plus).unwrap(), 24);
    }

    #[test]
    fn conic_containment_certificates() {
        let c1 = c1().unwrap();
        let cert = containment_certificate(&c1).unwrap();
        let vals: Vec<Option<num_rational::BigRational>> =
            cert.scalars.iter().map(|s| s.to_rational()).collect();
        assert_eq!(
            vals,
            vec![
                Some(num_rational::BigRational::from_integer(0.into())),
                Some(num_rational::BigRational::from_integer(1.into())),
                Some(num_rational::BigRational::from_integer(0.into()))
            ]
        );
        assert_eq!(c1.field_tag().generators(), &[2]);

        let c2 = c2().unwrap();
        let cert = containment_certificate(&c2).unwrap();
        let expected = [
            num_rational::BigRational::from_integer((-1).into()),
            num_rational::BigRational::new(1.into(), 2.into()),
            num_rational::BigRational::from_integer((-1).into()),
        ];
        for (s, e) in cert.scalars.iter().zip(expected.iter()) {
            assert_eq!(&s.to_rational().unwrap(), e);
        }
        assert_eq!(c2.field_tag().generators(), &[-2]);

        for c in conic_inventory(FibrationKind::Minus).unwrap() {
            assert!(containment_certificate(&c).is_ok(), "{}", c.label());
        }
        for c in conic_inventory(FibrationKind::Plus).unwrap() {
            assert!(containment_certificate(&c).is_ok(), "{}", c.label());
        }
    }

    #[test]
    fn broken_variant_fails_containment() {
        assert!(broken_sign_variant_is_rejected().unwrap());
    }

    #[test]
    fn conic_pencil_values() {
        let fib = Fibration::minus();
        let r2 = Mq::sqrt_int(2).unwrap();
        let rm2 = Mq::sqrt_int(-2).unwrap();
        let v1 = fib.value_on_conic(&c1().unwrap()).unwrap().unwrap();
        assert_eq!(v1, BasePoint::finite(r2.neg()));
        let v0 = fib.value_on_conic(&sigma0_c1().unwrap()).unwrap().unwrap();
        assert_eq!(v0, BasePoint::finite(r2.neg()));
        let v2 = fib.value_on_conic(&c2().unwrap()).unwrap().unwrap();
        assert_eq!(v2, BasePoint::finite(rm2.neg()));
    }

    #[test]
    fn conic_intersection_numbers() {
        let c1 = c1().unwrap();
        let s0 = sigma0_c1().unwrap();
        let c2 = c2().unwrap();
        assert_eq!(conic_conic_intersection(&c1, &s0).unwrap(), 2);
        assert_eq!(conic_conic_intersection(&s0, &c1).unwrap(), 2);
        assert_eq!(conic_conic_intersection(&c1, &c2).unwrap(), 0);
        assert_eq!(conic_conic_intersection(&c2, &c1).unwrap(), 0);
    }

    #[test]
    fn sections_meet_an_i2_fiber_once() {
        // a section of the minus pencil meets each fiber in one point, so
        // its lengths against the two conic components of an I2 fiber sum
        // to 1
        let ls = lines(&distinguished_member()).unwrap();
        let c1 = c1().unwrap();
        let s0 = sigma0_c1().unwrap();
        for mask in [0u8, 1, 8, 9] {
            let a = conic_line_intersection(&c1, &ls[mask as usize]).unwrap();
            let b = conic_line_intersection(&s0, &ls[mask as usize]).unwrap();
            assert_eq!(a + b, 1, "mask {mask}");
        }
    }

    #[test]
    fn fiber_components_are_disjoint_from_other_fibers() {
        // lines of the I4 fiber over 1 never meet the conics over -sqrt(2)
        let ls = lines(&distinguished_member()).unwrap();
        let c1 = c1().unwrap();
        for mask in [0b010000u8, 0b010001, 0b011000, 0b011001] {
            assert_eq!(conic_line_intersection(&c1, &ls[mask as usize]).unwrap(), 0);
        }
    }

    #[test]
    fn product_identity_at_sample_members() {
        assert!(product_identity_holds(&distinguished_member()));
        assert!(!product_identity_holds(
            &FamilyParams::from_i64(2, 3).unwrap()
        ));
    }
}
