//! Finite-field arithmetic: elliptic-curve traces and the supersingular
//! scan, genus-2 and Jacobian point counts, the two independent counting
//! routes for the surface over F_p, and the zeta-function shape checks.

pub mod galois;
pub mod k4;

use crate::error::{Error, Result};
use crate::exact::{is_prime_u64, least_nonresidue, legendre_symbol, Fp, Fp2, Ring};
use rayon::prelude::*;

/// Largest bound accepted by the supersingular scan.
pub const SCAN_CAP: u64 = 1_000_000;

/// Largest prime accepted by the brute-force surface count.
pub const BRUTE_CAP: u64 = 31;

/// y^2 = x^3 + a2 x^2 + a4 x + a6 with integer coefficients.
#[derive(Clone, Copy, Debug)]
pub struct WeierstrassCurve {
    pub a2: i64,
    pub a4: i64,
    pub a6: i64,
}

impl WeierstrassCurve {
    /// The curve y^2 = x^3 - 8x^2 - 2x attached to the quotient pencil.
    pub fn marked() -> Self {
        WeierstrassCurve {
            a2: -8,
            a4: -2,
            a6: 0,
        }
    }

    /// Discriminant of the cubic right-hand side (zero iff the curve is
    /// singular over Q).
    pub fn cubic_discriminant(&self) -> i64 {
        let (b, c, d) = (self.a2 as i128, self.a4 as i128, self.a6 as i128);
        let disc = 18 * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * c * c * c
            - 27 * d * d;
        i64::try_from(disc).expect("small coefficients")
    }

    fn rhs_mod(&self, x: u64, p: u64) -> u64 {
        let reduce = |v: i64| v.rem_euclid(p as i64) as u64;
        let mut acc = (x + reduce(self.a2)) % p;
        acc = (acc * x + reduce(self.a4)) % p;
        (acc * x + reduce(self.a6)) % p
    }
}

fn require_odd_prime_ge5(p: u64) -> Result<()> {
    if p < 5 || !is_prime_u64(p) {
        return Err(Error::Invalid(format!("{p} is not a prime at least 5")));
    }
    Ok(())
}

/// Count points of an elliptic curve over F_p and return (#E(F_p), a_p).
pub fn ec_count(e: &WeierstrassCurve, p: u64) -> Result<(u64, i64)> {
    require_odd_prime_ge5(p)?;
    if e.cubic_discriminant().rem_euclid(p as i64) == 0 {
        return Err(Error::Invalid(format!("bad reduction at {p}")));
    }
    let mut count = p as i64 + 1;
    for x in 0..p {
        count += legendre_symbol(e.rhs_mod(x, p) as i64, p)? as i64;
    }
    let ap = p as i64 + 1 - count;
    if ap * ap > 4 * p as i64 {
        return Err(Error::Inconsistent(format!(
            "trace {ap} violates the Weil bound at {p}"
        )));
    }
    Ok((count as u64, ap))
}

/// All supersingular primes of the curve in [5, bound], each checked
/// against the congruence p = 5 or 23 (mod 24).
pub fn supersingular_scan(e: &WeierstrassCurve, bound: u64) -> Result<Vec<u64>> {
    if bound > SCAN_CAP {
        return Err(Error::BoundExceeded {
            bound,
            cap: SCAN_CAP,
        });
    }
    let disc = e.cubic_discriminant();
    let primes: Vec<u64> = (5..=bound)
        .filter(|&p| is_prime_u64(p) && disc.rem_euclid(p as i64) != 0)
        .collect();
    let mut hits: Vec<u64> = primes
        .par_iter()
        .map(|&p| ec_count(e, p).map(|(_, ap)| (p, ap)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&(_, ap)| ap == 0)
        .map(|(p, _)| p)
        .collect();
    hits.sort_unstable();
    for &p in &hits {
        if p % 24 != 5 && p % 24 != 23 {
            return Err(Error::Inconsistent(format!(
                "supersingular prime {p} is {} mod 24",
                p % 24
            )));
        }
    }
    Ok(hits)
}

/// y^2 = f(x) (or d y^2 = f(x) for the twist) with f of degree 5 or 6.
/// Coefficients ascending; the twist constant is chosen per prime as the
/// least positive non-residue.
#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    pub coeffs: Vec<i64>,
    pub twisted: bool,
}

impl HyperellipticCurve {
    /// The genus-2 curve y^2 = x (x^2 - 4) (x^2 - 1).
    pub fn marked() -> Self {
        HyperellipticCurve {
            coeffs: vec![0, 4, 0, -5, 0, 1],
            twisted: false,
        }
    }

    pub fn twist(&self) -> Self {
        HyperellipticCurve {
            coeffs: self.coeffs.clone(),
            twisted: !self.twisted,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn good_reduction(&self, p: u64) -> Result<bool> {
        // squarefree and degree preserved mod p
        let coeffs: Vec<Fp> = self
            .coeffs
            .iter()
            .map(|&c| Fp::new(c, p))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.last().expect("nonempty").is_zero() {
            return Ok(false);
        }
        let f = crate::exact::UniPoly::new(coeffs.clone());
        let df = crate::exact::UniPoly::new(
            coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&c.from_i64(i as i64)))
                .collect(),
        );
        let g = f.gcd(&df);
        Ok(g.degree() == Some(0))
    }

    fn eval_fp(&self, x: Fp) -> Fp {
        let mut acc = x.ring_zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&x).add(&x.from_i64(*c));
        }
        acc
    }

    fn eval_fp2(&self, x: &Fp2) -> Fp2 {
        let mut acc = x.ring_zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&x.from_i64(*c));
        }
        acc
    }
}

/// Point counts (N1, N2) of the curve over F_p and F_{p^2}, projectively
/// (a degree-5 model contributes one point at infinity, a degree-6 model
/// 0 or 2 by the character of its leading coefficient).
pub fn genus2_counts(c: &HyperellipticCurve, p: u64) -> Result<(u64, u64)> {
    require_odd_prime_ge5(p)?;
    if !c.good_reduction(p)? {
        return Err(Error::Invalid(format!("bad reduction at {p}")));
    }
    let d: i64 = if c.twisted {
        least_nonresidue(p)? as i64
    } else {
        1
    };
    let chi = |v: i64| -> Result<i64> { Ok(legendre_symbol(v, p)? as i64) };

    // affine over F_p: solutions of d y^2 = f(x)
    let mut n1: i64 = 0;
    for x in 0..p {
        let fx = c.eval_fp(Fp::new_unchecked(x as i64, p)).value() as i64;
        n1 += 1 + chi(fx * d)?;
    }
    // infinity
    let lead = *c.coeffs.last().expect("nonempty");
    n1 += match c.degree() {
        5 => 1,
        6 => 1 + chi(lead * d)?,
        deg => {
            return Err(Error::Invalid(format!(
                "hyperelliptic degree {deg} not supported"
            )))
        }
    };

    // affine over F_{p^2}: an element is a square there iff its norm is a
    // square in F_p, and the twist constant becomes a square
    let s = least_nonresidue(p)?;
    let mut n2: i64 = 0;
    for a in 0..p {
        for b in 0..p {
            let x = Fp2::new(a as i64, b as i64, s, p)?;
            let fx = c.eval_fp2(&x);
            if fx.is_zero() {
                n2 += 1;
            } else {
                n2 += 1 + chi(fx.norm().value() as i64)?;
            }
        }
    }
    n2 += match c.degree() {
        5 => 1,
        _ => {
            let lead_fp2 = Fp2::new(lead, 0, s, p)?;
            if lead_fp2.is_zero() {
                return Err(Error::Invalid(format!("bad reduction at {p}")));
            }
            1 + chi(lead_fp2.norm().value() as i64)?
        }
    };
    Ok((n1 as u64, n2 as u64))
}

/// Order of the Jacobian over F_p from the two point counts, through the
/// L-polynomial 1 + a1 t + a2 t^2 + p a1 t^3 + p^2 t^4 evaluated at 1.
pub fn jacobian_order(n1: u64, n2: u64, p: u64) -> Result<u64> {
    let pi = p as i128;
    let a1 = n1 as i128 - (pi + 1);
    // genus-2 Weil bound on the first trace
    if a1 * a1 > 16 * pi {
        return Err(Error::Inconsistent(format!(
            "first trace {a1} violates the Weil bound at {p}"
        )));
    }
    let num = n2 as i128 - (pi * pi + 1) + a1 * a1;
    if num % 2 != 0 {
        return Err(Error::Inconsistent(
            "second power sum has the wrong parity".into(),
        ));
    }
    let a2 = num / 2;
    let order = 1 + a1 + a2 + pi * a1 + pi * pi;
    if order <= 0 {
        return Err(Error::Inconsistent(format!(
            "non-positive Jacobian order {order} at {p}"
        )));
    }
    Ok(order as u64)
}

/// How a surface count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    Chain,
    Brute,
}

/// One point-count of the surface over F_p with the intermediate data of
/// the chain route.
#[derive(Clone, Debug)]
pub struct CountRecord {
    pub p: u64,
    pub method: CountMethod,
    /// #C(F_p), #C(F_{p^2})
    pub curve_counts: (u64, u64),
    /// the same for the quadratic twist
    pub twist_counts: (u64, u64),
    pub jacobian: u64,
    pub jacobian_twist: u64,
    /// #Y = (#JC + #JC~)/2
    pub y_count: u64,
    /// #X = #Y + 16 p
    pub x_count: u64,
}

/// Count the surface over F_p through the Jacobian route: average the two
/// Jacobian orders and add the contribution of the sixteen exceptional
/// lines.
pub fn x_count_chain(p: u64) -> Result<CountRecord> {
    require_odd_prime_ge5(p)?;
    let c = HyperellipticCurve::marked();
    let ct = c.twist();
    let (n1, n2) = genus2_counts(&c, p)?;
    let (m1, m2) = genus2_counts(&ct, p)?;
    let jc = jacobian_order(n1, n2, p)?;
    let jt = jacobian_order(m1, m2, p)?;
    if (jc + jt) % 2 != 0 {
        return Err(Error::Inconsistent(
            "Jacobian orders have odd sum; the quotient count is not integral".into(),
        ));
    }
    let y_count = (jc + jt) / 2;
    let x_count = y_count + 16 * p;

    // the supersingular count formulas must hold when the elliptic trace
    // vanishes
    let (_, ap) = ec_count(&WeierstrassCurve::marked(), p)?;
    if ap == 0 {
        let expected = match p % 24 {
            23 => Some(p * p + 18 * p + 1),
            5 => Some(p * p + 14 * p + 1),
            _ => None,
        };
        if let Some(e) = expected {
            if x_count != e {
                return Err(Error::Inconsistent(format!(
                    "supersingular count {x_count} differs from the predicted {e} at {p}"
                )));
            }
        }
    }
    Ok(CountRecord {
        p,
        method: CountMethod::Chain,
        curve_counts: (n1, n2),
        twist_counts: (m1, m2),
        jacobian: jc,
        jacobian_twist: jt,
        y_count,
        x_count,
    })
}

/// Count the surface over F_p by direct enumeration of canonical
/// projective representatives against the three quadrics.
pub fn x_count_brute(p: u64) -> Result<u64> {
    if p > BRUTE_CAP {
        return Err(Error::BoundExceeded { bound: p, cap: BRUTE_CAP });
    }
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::Invalid(format!("{p} is not an odd prime")));
    }
    // representatives have first nonzero coordinate 1; a point (x0..x5)
    // lies on the surface iff the three stencil rows vanish on the squares
    let sq: Vec<u64> = (0..p).map(|v| v * v % p).collect();
    let off = 4 * p * p;
    let stencil = |s: &[u64; 6]| -> bool {
        (s[1] + off - 2 * s[2] + s[3] - 2 * s[0]) % p == 0
            && (s[2] + off - 2 * s[3] + s[4] - 2 * s[0]) % p == 0
            && (s[3] + off - 2 * s[4] + s[5] - 2 * s[0]) % p == 0
    };
    let mut total: u64 = 0;
    for lead in 0..6usize {
        let free = 5 - lead;
        let reps = p.pow(free as u32);
        let block: u64 = (0..reps)
            .into_par_iter()
            .map(|idx| {
                let mut s = [0u64; 6];
                s[lead] = 1;
                let mut rest = idx;
                for slot in s.iter_mut().skip(lead + 1) {
                    *slot = sq[(rest % p) as usize];
                    rest /= p;
                }
                u64::from(stencil(&s))
            })
            .sum();
        total += block;
    }
    Ok(total)
}

/// Shape of the genus-2 L-polynomial at a supersingular prime.
#[derive(Clone, Debug)]
pub struct ZetaRecord {
    pub p: u64,
    /// coefficients (1, a1, a2, p a1, p^2)
    pub l_coeffs: [i128; 5],
    /// the sign s with L(t) = (p t^2 + s)^2
    pub expected_sign: i64,
    pub matches: bool,
}

/// Check the supersingular L-polynomial shape (p t^2 +- 1)^2 at a prime
/// where the elliptic trace vanishes.
pub fn zeta_supersingular_check(p: u64) -> Result<ZetaRecord> {
    let (_, ap) = ec_count(&WeierstrassCurve::marked(), p)?;
    if ap != 0 {
        return Err(Error::Invalid(format!(
            "{p} is not a supersingular prime of the marked curve"
        )));
    }
    let (n1, n2) = genus2_counts(&HyperellipticCurve::marked(), p)?;
    let pi = p as i128;
    let a1 = n1 as i128 - (pi + 1);
    let a2 = (n2 as i128 - (pi * pi + 1) + a1 * a1) / 2;
    let l_coeffs = [1, a1, a2, pi * a1, pi * pi];
    let expected_sign: i64 = match p % 24 {
        23 => 1,
        5 => -1,
        r => {
            return Err(Error::Inconsistent(format!(
                "supersingular prime {p} is {r} mod 24"
            )))
        }
    };
    // (p t^2 + s)^2 = p^2 t^4 + 2 s p t^2 + 1
    let expected = [1, 0, 2 * expected_sign as i128 * pi, 0, pi * pi];
    Ok(ZetaRecord {
        p,
        l_coeffs,
        expected_sign,
        matches: l_coeffs == expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elliptic_counts_at_small_primes() {
        let e = WeierstrassCurve::marked();
        assert_eq!(ec_count(&e, 5).unwrap(), (6, 0));
        let (_, a7) = ec_count(&e, 7).unwrap();
        assert_ne!(a7, 0);
        let (_, a167) = ec_count(&e, 167).unwrap();
        assert_eq!(a167, 0);
        assert!(ec_count(&e, 2).is_err());
        assert!(ec_count(&e, 3).is_err());
    }

    #[test]
    fn scan_finds_the_listed_primes() {
        let e = WeierstrassCurve::marked();
        let hits = supersingular_scan(&e, 200).unwrap();
        assert_eq!(hits, vec![5, 149, 167, 173]);
        assert!(supersingular_scan(&e, 4).unwrap().is_empty());
        assert!(supersingular_scan(&e, SCAN_CAP + 1).is_err());
    }

    #[test]
    fn genus2_counts_at_five() {
        // the right-hand quintic degenerates to x^5 - x mod 5, which
        // vanishes identically on F_5
        let c = HyperellipticCurve::marked();
        let (n1, n2) = genus2_counts(&c, 5).unwrap();
        assert_eq!(n1, 6);
        assert_eq!(jacobian_order(n1, n2, 5).unwrap(), 16);
    }

    #[test]
    fn twist_shares_counts_at_twenty_three_mod_24() {
        let c = HyperellipticCurve::marked();
        let t = c.twist();
        assert_eq!(
            genus2_counts(&c, 167).unwrap().0,
            genus2_counts(&t, 167).unwrap().0
        );
    }

    #[test]
    fn jacobian_order_degenerate_case() {
        let p = 7;
        assert_eq!(jacobian_order(p + 1, p * p + 1, p).unwrap(), p * p + 1);
        assert!(jacobian_order(100, 50, 7).is_err());
    }

    #[test]
    fn chain_counts_at_the_marked_primes() {
        assert_eq!(x_count_chain(5).unwrap().x_count, 96);
        assert_eq!(x_count_chain(5).unwrap().x_count, 5 * 5 + 14 * 5 + 1);
        let r = x_count_chain(167).unwrap();
        assert_eq!(r.x_count, 30896);
        assert_eq!(r.x_count, 167 * 167 + 18 * 167 + 1);
        assert_eq!(r.jacobian, (167 + 1) * (167 + 1));
    }

    #[test]
    fn brute_count_matches_the_chain() {
        assert_eq!(x_count_brute(5).unwrap(), 96);
        for p in [5u64, 7, 11, 13] {
            assert_eq!(x_count_brute(p).unwrap(), x_count_chain(p).unwrap().x_count, "p = {p}");
        }
        assert!(x_count_brute(37).is_err());
    }

    #[test]
    fn zeta_shapes_at_supersingular_primes() {
        let z5 = zeta_supersingular_check(5).unwrap();
        assert_eq!(z5.expected_sign, -1);
        assert!(z5.matches);
        let z167 = zeta_supersingular_check(167).unwrap();
        assert_eq!(z167.expected_sign, 1);
        assert!(z167.matches);
        assert!(zeta_supersingular_check(7).is_err());
    }
}
