//! Smith normal form of integer matrices with unimodular transformation
//! witnesses, and basis extraction for nondegenerate quotients of integer
//! symmetric matrices.
//!
//! Pivoting rule: smallest absolute value among nonzero candidates, ties
//! broken by row-major position. This makes the output deterministic.

use crate::error::{Error, Result};
use crate::exact::matrix::Mat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Outcome of `smith_normal_form`: U * M * V = diag(d_1, ..., d_r, 0, ...)
/// with U, V unimodular and positive invariant factors d_1 | d_2 | ... | d_r.
#[derive(Clone, Debug)]
pub struct SnfResult {
    d: Vec<BigInt>,
    u: Mat<BigInt>,
    v: Mat<BigInt>,
    rows: usize,
    cols: usize,
}

impl SnfResult {
    /// Positive invariant factors (nonzero diagonal only).
    pub fn factors(&self) -> &[BigInt] {
        &self.d
    }

    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn u(&self) -> &Mat<BigInt> {
        &self.u
    }

    pub fn v(&self) -> &Mat<BigInt> {
        &self.v
    }

    /// The full diagonal matrix U * M * V.
    pub fn diagonal(&self) -> Mat<BigInt> {
        Mat::from_fn(self.rows, self.cols, |i, j| {
            if i == j && i < self.d.len() {
                self.d[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }
}

/// Smith normal form by elementary row/column reduction.
pub fn smith_normal_form(m: &Mat<BigInt>) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = Mat::identity(rows, BigInt::one());
    let mut v = Mat::identity(cols, BigInt::one());

    let row_sub = |a: &mut Mat<BigInt>, u: &mut Mat<BigInt>, dst: usize, src: usize, q: &BigInt| {
        for j in 0..a.cols() {
            let x = a.get(dst, j) - q * a.get(src, j);
            a.set(dst, j, x);
        }
        for j in 0..u.cols() {
            let x = u.get(dst, j) - q * u.get(src, j);
            u.set(dst, j, x);
        }
    };
    let col_sub = |a: &mut Mat<BigInt>, v: &mut Mat<BigInt>, dst: usize, src: usize, q: &BigInt| {
        for i in 0..a.rows() {
            let x = a.get(i, dst) - q * a.get(i, src);
            a.set(i, dst, x);
        }
        for i in 0..v.rows() {
            let x = v.get(i, dst) - q * v.get(i, src);
            v.set(i, dst, x);
        }
    };
    let swap_rows = |a: &mut Mat<BigInt>, u: &mut Mat<BigInt>, x: usize, y: usize| {
        if x == y {
            return;
        }
        for j in 0..a.cols() {
            let t = a.get(x, j).clone();
            a.set(x, j, a.get(y, j).clone());
            a.set(y, j, t);
        }
        for j in 0..u.cols() {
            let t = u.get(x, j).clone();
            u.set(x, j, u.get(y, j).clone());
            u.set(y, j, t);
        }
    };
    let swap_cols = |a: &mut Mat<BigInt>, v: &mut Mat<BigInt>, x: usize, y: usize| {
        if x == y {
            return;
        }
        for i in 0..a.rows() {
            let t = a.get(i, x).clone();
            a.set(i, x, a.get(i, y).clone());
            a.set(i, y, t);
        }
        for i in 0..v.rows() {
            let t = v.get(i, x).clone();
            v.set(i, x, v.get(i, y).clone());
            v.set(i, y, t);
        }
    };

    let mut k = 0;
    while k < rows.min(cols) {
        // smallest nonzero pivot in the trailing block, row-major tie break
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !a.get(i, j).is_zero()
                    && pivot.is_none_or(|(pi, pj)| a.get(i, j).abs() < a.get(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut u, k, pi);
        swap_cols(&mut a, &mut v, k, pj);

        // clear row and column k; restart whenever a remainder survives,
        // which strictly shrinks |pivot|
        let mut dirty = false;
        for i in k + 1..rows {
            if !a.get(i, k).is_zero() {
                let q = a.get(i, k) / a.get(k, k); // truncated quotient
                row_sub(&mut a, &mut u, i, k, &q);
                if !a.get(i, k).is_zero() {
                    dirty = true;
                }
            }
        }
        for j in k + 1..cols {
            if !a.get(k, j).is_zero() {
                let q = a.get(k, j) / a.get(k, k);
                col_sub(&mut a, &mut v, j, k, &q);
                if !a.get(k, j).is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // enforce divisibility of the trailing block by the pivot
        let mut fixed = true;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(a.get(i, j) % a.get(k, k)).is_zero() {
                    // fold row i into row k to expose a smaller pivot
                    let q = BigInt::from(-1);
                    row_sub(&mut a, &mut u, k, i, &q);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if a.get(k, k).is_negative() {
            for j in 0..cols {
                let x = -a.get(k, j);
                a.set(k, j, x);
            }
            for j in 0..rows {
                let x = -u.get(k, j);
                u.set(k, j, x);
            }
        }
        k += 1;
    }

    let mut d = Vec::new();
    for i in 0..rows.min(cols) {
        if a.get(i, i).is_zero() {
            break;
        }
        d.push(a.get(i, i).clone());
    }
    SnfResult {
        d,
        u,
        v,
        rows,
        cols,
    }
}

/// Exact inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &Mat<BigInt>) -> Result<Mat<BigInt>> {
    let inv = m
        .to_rational()
        .inverse()
        .ok_or_else(|| Error::Invalid("matrix is singular".into()))?;
    let mut out = Mat::filled(m.rows(), m.cols(), BigInt::zero());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v: &BigRational = inv.get(i, j);
            if !v.is_integer() {
                return Err(Error::Invalid("matrix is not unimodular".into()));
            }
            out.set(i, j, v.to_integer());
        }
    }
    Ok(out)
}

/// For a symmetric integer matrix G (possibly singular), return integer
/// vectors u_1, ..., u_r whose classes form a basis of Z^n / ker_Z(G), i.e. a
/// basis of the nondegenerate quotient lattice, expressed as preimages in
/// Z^n. The kernel is saturated, so the quotient is free of rank r = rank G.
pub fn nondegenerate_quotient_basis(g: &Mat<BigInt>) -> Result<Vec<Vec<BigInt>>> {
    let n = g.rows();
    if g.cols() != n {
        return Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let null = g.to_rational().nullspace();
    if null.is_empty() {
        return Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect());
    }
    // primitive integer spanning vectors of the rational kernel
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(null.len());
    for v in &null {
        let mut l = BigInt::one();
        for x in v {
            l = num_integer::lcm(l, x.denom().clone());
        }
        let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from(l.clone())).to_integer()).collect();
        let mut gcd = BigInt::zero();
        for x in &ints {
            gcd = num_integer::gcd(gcd, x.clone());
        }
        cols.push(ints.iter().map(|x| x / &gcd).collect());
    }
    let m = cols.len();
    let nmat = Mat::from_fn(n, m, |i, j| cols[j][i].clone());
    let snf = smith_normal_form(&nmat);
    // U N V = D implies the first m columns of U^-1 span the saturation of
    // the kernel; the remaining columns descend to a quotient basis.
    let uinv = unimodular_inverse(snf.u())?;
    Ok((m..n).map(|j| uinv.col(j)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::mat_i64;

    fn check(m: &Mat<BigInt>) {
        let s = smith_normal_form(m);
        // witnesses multiply out to the diagonal
        let prod = s.u().matmul(m).matmul(s.v());
        assert_eq!(prod, s.diagonal(), "U M V != D for {m:?}");
        // unimodularity
        assert_eq!(s.u().det_bareiss().unwrap().abs(), BigInt::one());
        assert_eq!(s.v().det_bareiss().unwrap().abs(), BigInt::one());
        // positive divisibility chain
        for w in s.factors().windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "broken chain in {:?}", s.factors());
        }
        for d in s.factors() {
            assert!(d.is_positive());
        }
    }

    #[test]
    fn snf_small_cases() {
        let m = mat_i64(&[&[2, 0], &[0, 4]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.factors(), &[BigInt::from(2), BigInt::from(4)]);
        check(&m);

        let m = mat_i64(&[&[0, 4], &[4, 0]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.factors(), &[BigInt::from(4), BigInt::from(4)]);
        check(&m);

        // classic example needing the divisibility fix-up
        let m = mat_i64(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.factors(), &[BigInt::from(1), BigInt::from(6)]);
        check(&m);

        let m = mat_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let s = smith_normal_form(&m);
        assert_eq!(
            s.factors(),
            &[BigInt::from(1), BigInt::from(3)],
            "rank-2 matrix"
        );
        check(&m);
    }

    #[test]
    fn snf_rectangular() {
        let m = mat_i64(&[&[2, 4, 6], &[4, 8, 12]]);
        check(&m);
        let m = mat_i64(&[&[3], &[6], &[9]]);
        check(&m);
    }

    #[test]
    fn quotient_basis_of_singular_gram() {
        // G = diag(2, 0) has kernel e2; quotient basis = e1
        let g = mat_i64(&[&[2, 0], &[0, 0]]);
        let b = nondegenerate_quotient_basis(&g).unwrap();
        assert_eq!(b.len(), 1);
        // the basis vector must pair nontrivially with G
        let gv = g.mul_vec(&b[0]);
        assert!(gv.iter().any(|x| !x.is_zero()));

        // rank-1 symmetric matrix with off-diagonal kernel
        let g = mat_i64(&[&[1, 1], &[1, 1]]);
        let b = nondegenerate_quotient_basis(&g).unwrap();
        assert_eq!(b.len(), 1);
    }
}
