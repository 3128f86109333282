//! Finite quadratic forms: the discriminant group A = L*/L of an even
//! nondegenerate integer lattice together with its Q/2Z-valued quadratic
//! form q(x) = x^T G^-1 x, plus direct sums, negation, and a brute-force
//! isomorphism test for small groups.

use crate::error::{Error, Result};
use crate::exact::matrix::Mat;
use crate::exact::snf::smith_normal_form;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn mod_reduce(x: &BigRational, modulus: i64) -> BigRational {
    let m = BigRational::from(BigInt::from(modulus));
    let mut r = x - (x / &m).floor() * &m;
    if r.is_negative() {
        r += &m;
    }
    if r == m {
        r = BigRational::zero();
    }
    r
}

/// Finite quadratic form on a finite abelian group presented by cyclic
/// generators g_i of the given orders: q(g_i) in Q/2Z and the induced
/// bilinear form b(g_i, g_j) in Q/Z.
#[derive(Clone, Debug, PartialEq)]
pub struct Fqf {
    orders: Vec<u64>,
    q: Vec<BigRational>,
    b: Vec<Vec<BigRational>>,
}

impl Fqf {
    /// The trivial form on the trivial group.
    pub fn trivial() -> Self {
        Fqf {
            orders: Vec::new(),
            q: Vec::new(),
            b: Vec::new(),
        }
    }

    /// Discriminant form of an even nondegenerate symmetric integer matrix.
    pub fn from_gram(g: &Mat<BigInt>) -> Result<Self> {
        if !g.is_symmetric() {
            return Err(Error::Invalid("Gram matrix is not symmetric".into()));
        }
        let n = g.rows();
        for i in 0..n {
            if !(g.get(i, i) % BigInt::from(2)).is_zero() {
                return Err(Error::Invalid(format!(
                    "odd diagonal entry {} at position {i}",
                    g.get(i, i)
                )));
            }
        }
        if g.det_bareiss()?.is_zero() {
            return Err(Error::Invalid("Gram matrix is singular".into()));
        }
        let snf = smith_normal_form(g);
        let grat = g.to_rational();
        let mut orders = Vec::new();
        let mut gens: Vec<Vec<BigRational>> = Vec::new();
        for (i, d) in snf.factors().iter().enumerate() {
            if d > &BigInt::from(1) {
                let du: u64 = d.try_into().map_err(|_| {
                    Error::GroupTooLarge {
                        order: u64::MAX,
                        cap: u64::MAX,
                    }
                })?;
                orders.push(du);
                let dq = BigRational::from(d.clone());
                gens.push(
                    snf.v()
                        .col(i)
                        .into_iter()
                        .map(|x| BigRational::from(x) / &dq)
                        .collect(),
                );
            }
        }
        let k = gens.len();
        let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
            let gy = grat.mul_vec(y);
            x.iter()
                .zip(&gy)
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
        };
        let q: Vec<BigRational> = gens.iter().map(|g| mod_reduce(&pair(g, g), 2)).collect();
        let mut b = vec![vec![BigRational::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                b[i][j] = mod_reduce(&pair(&gens[i], &gens[j]), 1);
            }
        }
        Ok(Fqf { orders, q, b })
    }

    /// Orders of the cyclic generators (each > 1).
    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    /// q-values on the generators, reduced into [0, 2).
    pub fn generator_q(&self) -> &[BigRational] {
        &self.q
    }

    pub fn group_order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn direct_sum(&self, other: &Fqf) -> Fqf {
        let n1 = self.orders.len();
        let n2 = other.orders.len();
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        let mut q = self.q.clone();
        q.extend_from_slice(&other.q);
        let mut b = vec![vec![BigRational::zero(); n1 + n2]; n1 + n2];
        for i in 0..n1 {
            for j in 0..n1 {
                b[i][j] = self.b[i][j].clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                b[n1 + i][n1 + j] = other.b[i][j].clone();
            }
        }
        Fqf { orders, q, b }
    }

    /// The form with all values negated (the discriminant form of the
    /// opposite lattice).
    pub fn neg(&self) -> Fqf {
        Fqf {
            orders: self.orders.clone(),
            q: self.q.iter().map(|x| mod_reduce(&(-x), 2)).collect(),
            b: self
                .b
                .iter()
                .map(|row| row.iter().map(|x| mod_reduce(&(-x), 1)).collect())
                .collect(),
        }
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = vec![Vec::new()];
        for &n in &self.orders {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for e in &out {
                for v in 0..n {
                    let mut e2 = e.clone();
                    e2.push(v);
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    fn element_order(&self, x: &[u64]) -> u64 {
        let mut o = 1u64;
        for (&xi, &ni) in x.iter().zip(&self.orders) {
            if xi != 0 {
                let oi = ni / num_integer::gcd(xi, ni);
                o = num_integer::lcm(o, oi);
            }
        }
        o
    }

    /// q on an arbitrary element via the bilinear expansion.
    fn element_q(&self, x: &[u64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let xi_b = BigRational::from(BigInt::from(xi));
            acc += &xi_b * &xi_b * &self.q[i];
            for (j, &xj) in x.iter().enumerate().skip(i + 1) {
                if xj == 0 {
                    continue;
                }
                let two = BigRational::from(BigInt::from(2u64));
                acc += two * &xi_b * BigRational::from(BigInt::from(xj)) * &self.b[i][j];
            }
        }
        mod_reduce(&acc, 2)
    }

    fn element_b(&self, x: &[u64], y: &[u64]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                acc += BigRational::from(BigInt::from(xi))
                    * BigRational::from(BigInt::from(yj))
                    * &self.b[i][j];
            }
        }
        mod_reduce(&acc, 1)
    }

    fn add_elements(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), n)| (a + b) % n)
            .collect()
    }

    /// Search for a group isomorphism preserving q; returns the generator
    /// images on success. Both groups must have order at most `cap`.
    pub fn isomorphism(&self, other: &Fqf, cap: u64) -> Result<Option<Vec<Vec<u64>>>> {
        let o1 = self.group_order();
        let o2 = other.group_order();
        if o1 > cap || o2 > cap {
            return Err(Error::GroupTooLarge {
                order: o1.max(o2),
                cap,
            });
        }
        if o1 != o2 {
            return Ok(None);
        }
        if o1 == 1 {
            return Ok(Some(Vec::new()));
        }
        let elems = other.elements();
        let orders: Vec<u64> = elems.iter().map(|e| other.element_order(e)).collect();
        let qvals: Vec<BigRational> = elems.iter().map(|e| other.element_q(e)).collect();

        // candidate images per generator: order divides, q matches
        let mut cands: Vec<Vec<usize>> = Vec::new();
        for (gi, d) in self.orders.iter().enumerate() {
            let list: Vec<usize> = (0..elems.len())
                .filter(|&e| d % orders[e] == 0 && qvals[e] == self.q[gi])
                .collect();
            if list.is_empty() {
                return Ok(None);
            }
            cands.push(list);
        }

        let k = self.orders.len();
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        fn backtrack(
            depth: usize,
            k: usize,
            cands: &[Vec<usize>],
            chosen: &mut Vec<usize>,
            this: &Fqf,
            other: &Fqf,
            elems: &[Vec<u64>],
            total: u64,
        ) -> Option<Vec<usize>> {
            if depth == k {
                // verify the images generate the whole group
                let mut span: std::collections::BTreeSet<Vec<u64>> = std::collections::BTreeSet::new();
                let zero: Vec<u64> = other.orders.iter().map(|_| 0).collect();
                span.insert(zero);
                for &ei in chosen.iter() {
                    let g = &elems[ei];
                    let current: Vec<Vec<u64>> = span.iter().cloned().collect();
                    for base in current {
                        let mut acc = base;
                        loop {
                            acc = other.add_elements(&acc, g);
                            if !span.insert(acc.clone()) {
                                break;
                            }
                        }
                    }
                }
                if span.len() as u64 == total {
                    return Some(chosen.clone());
                }
                return None;
            }
            for &e in &cands[depth] {
                // bilinear compatibility with previously chosen images
                let ok = chosen.iter().enumerate().all(|(j, &cj)| {
                    other.element_b(&elems[e], &elems[cj]) == this.b[depth][j]
                });
                if ok {
                    chosen.push(e);
                    if let Some(w) =
                        backtrack(depth + 1, k, cands, chosen, this, other, elems, total)
                    {
                        return Some(w);
                    }
                    chosen.pop();
                }
            }
            None
        }
        let witness = backtrack(0, k, &cands, &mut chosen, self, other, &elems, o1);
        Ok(witness.map(|w| w.into_iter().map(|e| elems[e].clone()).collect()))
    }

    /// Convenience wrapper with the default cap of 256.
    pub fn is_isomorphic(&self, other: &Fqf) -> Result<bool> {
        Ok(self.isomorphism(other, 256)?.is_some())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "orders": self.orders,
            "q": self.q.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "b": self.b.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::mat_i64;
    use crate::exact::rational::rat;

    #[test]
    fn rank_one_minus_four() {
        // G = (-4): group Z/4, q(gen) = -1/4 = 7/4 mod 2Z
        let f = Fqf::from_gram(&mat_i64(&[&[-4]])).unwrap();
        assert_eq!(f.generator_orders(), &[4]);
        assert_eq!(f.generator_q(), &[rat(7, 4)]);
    }

    #[test]
    fn hyperbolic_u4() {
        // G = [[0,4],[4,0]]: group (Z/4)^2, q(e1) = 0, q(e1 + e2) = 1/2
        let f = Fqf::from_gram(&mat_i64(&[&[0, 4], &[4, 0]])).unwrap();
        assert_eq!(f.generator_orders(), &[4, 4]);
        // q vanishes on both generators; their sum has q = 2 * b12 = 1/2
        let q12 = f.element_q(&[1, 1]);
        assert_eq!(q12, rat(1, 2));
    }

    #[test]
    fn opposite_signs_not_isomorphic() {
        let plus = Fqf::from_gram(&mat_i64(&[&[2]])).unwrap();
        let minus = Fqf::from_gram(&mat_i64(&[&[-2]])).unwrap();
        assert!(!plus.is_isomorphic(&minus).unwrap());
        assert!(plus.is_isomorphic(&plus).unwrap());
        assert!(plus.is_isomorphic(&minus.neg()).unwrap());
    }

    #[test]
    fn sum_versus_gram_of_block_matrix() {
        let a = mat_i64(&[&[-4]]);
        let b = mat_i64(&[&[0, 4], &[4, 0]]);
        let block = mat_i64(&[&[-4, 0, 0], &[0, 0, 4], &[0, 4, 0]]);
        let fa = Fqf::from_gram(&a).unwrap();
        let fb = Fqf::from_gram(&b).unwrap();
        let fsum = fa.direct_sum(&fb);
        let fblock = Fqf::from_gram(&block).unwrap();
        assert!(fsum.is_isomorphic(&fblock).unwrap());
    }

    #[test]
    fn group_order_equals_det() {
        for g in [
            mat_i64(&[&[2, 1], &[1, 2]]),
            mat_i64(&[&[-2, 1], &[1, -2]]),
            mat_i64(&[&[0, 2], &[2, 0]]),
            mat_i64(&[&[4, 2], &[2, 4]]),
        ] {
            let f = Fqf::from_gram(&g).unwrap();
            let det = g.det_bareiss().unwrap().abs();
            assert_eq!(BigInt::from(f.group_order()), det);
        }
    }

    #[test]
    fn unimodular_gram_gives_trivial_form() {
        let g = mat_i64(&[&[2, 1], &[1, 2]]); // det 3 -> Z/3
        let f = Fqf::from_gram(&g).unwrap();
        assert_eq!(f.generator_orders(), &[3]);
        // E8-like: any even unimodular block contributes nothing; emulate with
        // the 2x2 even unimodular U
        let u = mat_i64(&[&[0, 1], &[1, 0]]);
        let fu = Fqf::from_gram(&u).unwrap();
        assert_eq!(fu.generator_orders(), &[] as &[u64]);
        assert!(fu.is_isomorphic(&Fqf::trivial()).unwrap());
    }
}
