//! Randomized invariants: algebraic laws and dual-route agreements that
//! must hold on arbitrary inputs, not just the tabulated ones.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use k3lab_core::arith::{genus2_counts, HyperellipticCurve};
use k3lab_core::buchi;
use k3lab_core::exact::{rat, Field, Fp, Mat, Mq, QuadField, Ring, smith_normal_form};

fn rational() -> impl Strategy<Value = num_rational::BigRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_classifiers_agree(alpha in rational()) {
        let point = buchi::family_point(&alpha);
        prop_assert!(buchi::residuals(&point).unwrap().iter().all(Zero::is_zero));
        let by_shift = buchi::classify_point(&point).unwrap();
        let by_signs = buchi::classify_by_signs(&point).unwrap();
        prop_assert_eq!(by_shift.trivial, by_signs.trivial);
    }

    #[test]
    fn minor_determinant_routes_agree(
        n in 3usize..=10,
        seed in 0usize..10_000,
    ) {
        // decode the seed into an ordered triple 0 <= a < b < c <= n
        let mut triples = Vec::new();
        for a in 0..=n {
            for b in (a + 1)..=n {
                for c in (b + 1)..=n {
                    triples.push((a, b, c));
                }
            }
        }
        let (a, b, c) = triples[seed % triples.len()];
        prop_assert_eq!(
            buchi::minor_det_closed(n, a, b, c).unwrap(),
            buchi::minor_det_brute(n, a, b, c).unwrap()
        );
    }

    #[test]
    fn prime_field_satisfies_the_field_axioms(
        p_idx in 0usize..6,
        a in 0i64..1000,
        b in 0i64..1000,
        c in 0i64..1000,
    ) {
        let p = [5u64, 7, 11, 13, 101, 257][p_idx];
        let x = Fp::new(a, p).unwrap();
        let y = Fp::new(b, p).unwrap();
        let z = Fp::new(c, p).unwrap();
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.add(&x.neg()), x.ring_zero());
        if !Ring::is_zero(&x) {
            let inv = x.inv().unwrap();
            prop_assert_eq!(x.mul(&inv), x.ring_one());
        }
    }

    #[test]
    fn quadratic_field_conjugation_and_norm(
        a0 in -9i64..=9, a1 in -9i64..=9, a2 in -9i64..=9, a3 in -9i64..=9,
        b0 in -9i64..=9, b1 in -9i64..=9, b2 in -9i64..=9, b3 in -9i64..=9,
    ) {
        let field = QuadField::new(vec![2, 3]).unwrap();
        let x = Mq::from_coords(&field, vec![rat(a0, 1), rat(a1, 1), rat(a2, 1), rat(a3, 1)]).unwrap();
        let y = Mq::from_coords(&field, vec![rat(b0, 1), rat(b1, 1), rat(b2, 1), rat(b3, 1)]).unwrap();
        // conjugation in each generator is a ring homomorphism
        for mask in 1usize..4 {
            prop_assert_eq!(x.add(&y).conj(mask), x.conj(mask).add(&y.conj(mask)));
            prop_assert_eq!(x.mul(&y).conj(mask), x.conj(mask).mul(&y.conj(mask)));
        }
        // the norm to the rationals is multiplicative
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn smith_form_reconstructs_and_divides(
        entries in proptest::collection::vec(-9i64..=9, 12),
    ) {
        let a = Mat::from_rows(
            (0..3)
                .map(|i| (0..4).map(|j| BigInt::from(entries[4 * i + j])).collect())
                .collect(),
        );
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u().matmul(&a).matmul(snf.v()), snf.diagonal());
        for w in snf.factors().windows(2) {
            prop_assert!(!num_traits::Zero::is_zero(&w[0]));
            prop_assert!(
                num_traits::Zero::is_zero(&(&w[1] % &w[0])),
                "divisibility broke: {} | {}", w[0], w[1]
            );
        }
    }

    #[test]
    fn genus_two_counts_respect_the_weil_bound(p_idx in 0usize..8) {
        let p = [7u64, 11, 13, 17, 19, 23, 29, 31][p_idx];
        let curve = HyperellipticCurve::marked();
        let (n1, n2) = genus2_counts(&curve, p).unwrap();
        let a1 = n1 as i128 - (p as i128 + 1);
        prop_assert!(a1 * a1 <= 16 * p as i128, "|a1| too large: {a1} at p={p}");
        let a2 = (n2 as i128 - (p as i128 * p as i128 + 1) + a1 * a1) / 2;
        prop_assert!(a2.unsigned_abs() <= (6 * p as u128 + 2 * p as u128 * p as u128));
    }
}
