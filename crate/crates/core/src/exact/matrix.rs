//! Exact dense matrices over a ring or field: elimination, determinants
//! (Gaussian and fraction-free Bareiss), Berkowitz characteristic
//! polynomials, and signatures of symmetric rational matrices by Descartes
//! sign counting.

use crate::error::{Error, Result};
use crate::exact::{Field, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Rectangular matrix with entries in a single exact scalar domain,
/// row-major storage.
#[derive(Clone, PartialEq)]
pub struct Mat<T: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Mat<T> {
    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Mat {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn identity(n: usize, one: T) -> Self {
        let zero = one.ring_zero();
        Mat::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let zero = self
            .data
            .first()
            .or_else(|| rhs.data.first())
            .expect("empty product")
            .ring_zero();
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(rhs.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        let zero = self.data.first().expect("empty matrix").ring_zero();
        (0..self.rows)
            .map(|i| {
                let mut acc = zero.clone();
                for j in 0..self.cols {
                    acc = acc.add(&self.get(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Submatrix selecting the given rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Characteristic polynomial det(xI - M) by the division-free Berkowitz
    /// algorithm; returns coefficients in descending degree order with
    /// leading coefficient 1 (length n+1).
    pub fn charpoly_berkowitz(&self) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let one = match self.data.first() {
            Some(x) => x.ring_one(),
            None => return Err(Error::Invalid("empty matrix".into())),
        };
        let zero = one.ring_zero();
        // c holds the charpoly of the leading k x k principal submatrix,
        // descending, starting from the empty matrix (p = 1)
        let mut c: Vec<T> = vec![one.clone()];
        for k in 1..=n {
            // pivot a = M[k-1][k-1], R = row slice, C = col slice, M' = leading (k-1)
            let a = self.get(k - 1, k - 1).clone();
            let mut q: Vec<T> = Vec::with_capacity(k + 1);
            q.push(one.clone());
            q.push(a.neg());
            if k > 1 {
                let r: Vec<T> = (0..k - 1).map(|j| self.get(k - 1, j).clone()).collect();
                let mut v: Vec<T> = (0..k - 1).map(|i| self.get(i, k - 1).clone()).collect();
                for _ in 1..k {
                    // s = R . v
                    let mut s = zero.clone();
                    for (ri, vi) in r.iter().zip(&v) {
                        s = s.add(&ri.mul(vi));
                    }
                    q.push(s.neg());
                    // v = M' . v
                    let mut nv = vec![zero.clone(); k - 1];
                    for (i, nvi) in nv.iter_mut().enumerate() {
                        for (j, vj) in v.iter().enumerate() {
                            *nvi = nvi.add(&self.get(i, j).mul(vj));
                        }
                    }
                    v = nv;
                }
            }
            // multiply: new coefficients = Toeplitz(q) . c
            let mut nc = vec![zero.clone(); k + 1];
            for (i, nci) in nc.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j && i - j < q.len() {
                        *nci = nci.add(&q[i - j].mul(cj));
                    }
                }
            }
            c = nc;
        }
        Ok(c)
    }
}

impl<T: Field> Mat<T> {
    /// Reduced row echelon form; returns the pivot column list.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, col).inv().unwrap();
            for j in col..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, col).is_zero() {
                    let f = self.get(i, col).clone();
                    for j in col..self.cols {
                        let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det_field(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let one = match self.data.first() {
            Some(x) => x.ring_one(),
            None => return Err(Error::Invalid("empty matrix".into())),
        };
        let mut m = self.clone();
        let mut det = one;
        for k in 0..m.rows {
            let Some(p) = (k..m.rows).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(m.data[0].ring_zero());
            };
            if p != k {
                m.swap_rows(k, p);
                det = det.neg();
            }
            let pivot = m.get(k, k).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().unwrap();
            for i in k + 1..m.rows {
                if m.get(i, k).is_zero() {
                    continue;
                }
                let f = m.get(i, k).mul(&inv);
                for j in k..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(k, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// One solution of A x = b (free variables set to zero), or `None` when
    /// inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let zero = self.data.first()?.ring_zero();
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the constants column: inconsistent
        }
        let mut x = vec![zero; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let one = match self.data.first() {
            Some(x) => x.ring_one(),
            None => return Vec::new(),
        };
        let zero = one.ring_zero();
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![zero.clone(); self.cols];
            v[f] = one.clone();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = m.get(r, f).neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Mat<T>> {
        if !self.is_square() {
            return None;
        }
        let one = self.data.first()?.ring_one();
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                one.clone()
            } else {
                one.ring_zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }
}

impl Mat<BigInt> {
    /// Fraction-free determinant (Bareiss).
    pub fn det_bareiss(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Err(Error::Invalid("empty matrix".into()));
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&i| !Zero::is_zero(m.get(i, k))) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1).clone())
    }

    pub fn to_rational(&self) -> Mat<BigRational> {
        self.map(|v| BigRational::from(v.clone()))
    }
}

impl Mat<BigRational> {
    /// Clear denominators: returns (integer matrix, positive scale L) with
    /// self * L integral.
    pub fn clear_denominators(&self) -> (Mat<BigInt>, BigInt) {
        let mut l = BigInt::one();
        for v in &self.data {
            l = l.lcm(v.denom());
        }
        let li = BigRational::from(l.clone());
        let m = self.map(|v| (v * &li).to_integer());
        (m, l)
    }
}

/// Count Descartes sign variations in a coefficient sequence (zeros skipped).
fn sign_variations(coeffs: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut var = 0;
    for c in coeffs {
        let s = match c.sign() {
            num_bigint::Sign::Plus => 1i8,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        };
        if s != 0 {
            if last != 0 && s != last {
                var += 1;
            }
            last = s;
        }
    }
    var
}

/// Inertia (n_plus, n_minus, n_zero) of a symmetric rational matrix, computed
/// from the exact characteristic polynomial of a positively scaled integer
/// congruent matrix plus Descartes' rule, which is exact here because
/// symmetric matrices have real spectra.
pub fn symmetric_signature(g: &Mat<BigRational>) -> Result<(usize, usize, usize)> {
    if !g.is_symmetric() {
        return Err(Error::Invalid("signature of a non-symmetric matrix".into()));
    }
    let n = g.rows();
    if n == 0 {
        return Ok((0, 0, 0));
    }
    // L*G = (sqrt(L) I) G (sqrt(L) I) is congruent to G for L > 0
    let (gi, _l) = g.clear_denominators();
    let coeffs = gi.charpoly_berkowitz()?; // descending, length n+1
    let nzero = coeffs.iter().rev().take_while(|c| Zero::is_zero(*c)).count();
    let reduced = &coeffs[..=n - nzero];
    let nplus = sign_variations(reduced);
    let flipped: Vec<BigInt> = reduced
        .iter()
        .enumerate()
        .map(|(i, c)| {
            // coefficient of lambda^(deg - i); flip odd-degree signs
            let deg = (reduced.len() - 1 - i) as u32;
            if deg % 2 == 1 {
                -c
            } else {
                c.clone()
            }
        })
        .collect();
    let nminus = sign_variations(&flipped);
    if nplus + nminus + nzero != n {
        return Err(Error::Inconsistent(format!(
            "inertia counts {nplus}+{nminus}+{nzero} do not sum to {n}"
        )));
    }
    Ok((nplus, nminus, nzero))
}

impl<T: Ring> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Integer matrix from machine integers (test and table convenience).
pub fn mat_i64(rows: &[&[i64]]) -> Mat<BigInt> {
    Mat::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_int;

    #[test]
    fn determinants_agree() {
        let m = mat_i64(&[&[2, 1, 0], &[1, 3, -1], &[0, -1, 4]]);
        assert_eq!(m.det_bareiss().unwrap(), BigInt::from(18));
        assert_eq!(m.to_rational().det_field().unwrap(), rat_int(18));
        let singular = mat_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det_bareiss().unwrap(), BigInt::zero());
    }

    #[test]
    fn one_by_one() {
        let m = mat_i64(&[&[7]]);
        assert_eq!(m.det_bareiss().unwrap(), BigInt::from(7));
    }

    #[test]
    fn charpoly_known() {
        let m = mat_i64(&[&[2, 0], &[0, 3]]);
        let c = m.charpoly_berkowitz().unwrap();
        assert_eq!(c, vec![BigInt::from(1), BigInt::from(-5), BigInt::from(6)]);
        // companion matrix of x^3 - 2x - 5
        let comp = mat_i64(&[&[0, 0, 5], &[1, 0, 2], &[0, 1, 0]]);
        let c = comp.charpoly_berkowitz().unwrap();
        assert_eq!(
            c,
            vec![
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(-2),
                BigInt::from(-5)
            ]
        );
    }

    #[test]
    fn charpoly_determinant_consistency() {
        // det M = (-1)^n * p(0)
        let m = mat_i64(&[&[1, 2, 3], &[0, -1, 4], &[2, 2, 2]]);
        let c = m.charpoly_berkowitz().unwrap();
        let det = m.det_bareiss().unwrap();
        assert_eq!(c[3], -&det);
    }

    #[test]
    fn signatures() {
        let u = mat_i64(&[&[0, 1], &[1, 0]]).to_rational();
        assert_eq!(symmetric_signature(&u).unwrap(), (1, 1, 0));
        let one = mat_i64(&[&[2]]).to_rational();
        assert_eq!(symmetric_signature(&one).unwrap(), (1, 0, 0));
        let deg = mat_i64(&[&[1, 1], &[1, 1]]).to_rational();
        assert_eq!(symmetric_signature(&deg).unwrap(), (1, 0, 1));
        let negdef = mat_i64(&[&[-2, 1], &[1, -2]]).to_rational();
        assert_eq!(symmetric_signature(&negdef).unwrap(), (0, 2, 0));
    }

    #[test]
    fn solve_and_nullspace() {
        let a = mat_i64(&[&[1, 2, 3], &[2, 4, 6]]).to_rational();
        let b = vec![rat_int(1), rat_int(2)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(a.solve(&[rat_int(1), rat_int(3)]).is_none());
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|x| Zero::is_zero(x)));
        }
        let id3 = Mat::identity(3, rat_int(1));
        assert_eq!(id3.rank(), 3);
        assert_eq!(id3.inverse().unwrap(), id3);
    }
}
