use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dgs_core::graph::{find_gm_partitions, gm_switch, is_isomorphic};
use dgs_core::linalg::{char_poly, smith_normal_form};
use dgs_core::oracle::spectrum_key;
use dgs_core::{
    build_walk_bundle, certify, certify_squarefree, check_fn, random_gnp_half, BigIntMatrix, Budget,
    SquarefreeStatus, VerdictKind,
};

fn small_budget() -> Budget {
    Budget {
        trial_bound: 100_000,
        rho_iterations: 20_000,
        ecm_curves: 4,
    }
}

fn matrix(n: usize, entries: &[i64]) -> BigIntMatrix {
    BigIntMatrix::from_fn(n, n, |i, j| entries[i * n + j])
}

/// Random unimodular matrix built from elementary row operations.
fn unimodular(n: usize, seed: u64) -> BigIntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let i = rand::Rng::gen_range(&mut rng, 0..n);
        let j = rand::Rng::gen_range(&mut rng, 0..n);
        if i == j {
            rows.swap(0, i);
            continue;
        }
        let c = rand::Rng::gen_range(&mut rng, -2i64..=2);
        for col in 0..n {
            rows[i][col] += c * rows[j][col];
        }
    }
    BigIntMatrix::from_rows(&rows).unwrap()
}

fn smallest_square_factor(x: u64) -> Option<u64> {
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d * d) {
            return Some(d);
        }
        d += 1;
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_unimodular_invariant(
        n in 1usize..6,
        entries in prop::collection::vec(-9i64..=9, 36),
        s1 in any::<u64>(),
        s2 in any::<u64>(),
    ) {
        let m = matrix(n, &entries);
        prop_assume!(!m.det_bareiss().unwrap().is_zero());
        let p = unimodular(n, s1);
        let q = unimodular(n, s2);
        let pmq = p.mul(&m).unwrap().mul(&q).unwrap();
        let a = smith_normal_form(&m, false).unwrap().diag;
        let b = smith_normal_form(&pmq, false).unwrap().diag;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn smith_transforms_reconstruct(n in 1usize..6, entries in prop::collection::vec(-9i64..=9, 36)) {
        let m = matrix(n, &entries);
        let det = m.det_bareiss().unwrap();
        prop_assume!(!det.is_zero());
        let s = smith_normal_form(&m, true).unwrap();
        let product: BigInt = s.diag.iter().product();
        prop_assert_eq!(&product, &det.abs());
        for w in s.diag.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        let (u, v) = (s.u.clone().unwrap(), s.v.clone().unwrap());
        prop_assert!(u.det_bareiss().unwrap().abs().is_one());
        prop_assert!(v.det_bareiss().unwrap().abs().is_one());
        let diag = BigIntMatrix::from_rows(
            &(0..n)
                .map(|i| (0..n).map(|j| if i == j { s.diag[i].clone() } else { BigInt::zero() }).collect())
                .collect::<Vec<Vec<BigInt>>>(),
        )
        .unwrap();
        prop_assert_eq!(u.mul(&diag).unwrap().mul(&v).unwrap(), m);
    }

    #[test]
    fn char_poly_ignores_labels(n in 1usize..12, seed in any::<u64>()) {
        let g = random_gnp_half(n, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        let h = g.permuted(&perm);
        prop_assert_eq!(
            char_poly(&g.adjacency_matrix()).unwrap(),
            char_poly(&h.adjacency_matrix()).unwrap()
        );
        prop_assert_eq!(spectrum_key(&g), spectrum_key(&h));
    }

    #[test]
    fn walk_columns_and_parity(n in 1usize..16, seed in any::<u64>()) {
        let g = random_gnp_half(n, seed);
        let b = build_walk_bundle(&g).unwrap();
        let a = g.adjacency_matrix();
        let mut col = vec![BigInt::one(); n];
        for j in 0..n {
            prop_assert_eq!(&b.w.column(j), &col);
            col = a.mul_vec(&col);
        }
        for l in 1..n {
            prop_assert!(b.walk_count(l).is_even());
        }
    }

    #[test]
    fn fn_members_pass_extended_test(n in 6usize..16, seed in any::<u64>()) {
        let g = random_gnp_half(n, seed);
        let budget = small_budget();
        let f = check_fn(&g, &budget).unwrap();
        let v = certify(&g, &budget).unwrap();
        if f.kind == VerdictKind::DgsByFn {
            prop_assert_eq!(v.kind, VerdictKind::DgsByFn);
        }
        if v.kind == VerdictKind::NotControllable {
            prop_assert!(build_walk_bundle(&g).unwrap().w.det_bareiss().unwrap().is_zero());
        }
    }

    #[test]
    fn switching_never_yields_a_certified_graph(n in 8usize..13, seed in any::<u64>()) {
        let g = random_gnp_half(n, seed);
        let budget = small_budget();
        for p in find_gm_partitions(&g).into_iter().take(4) {
            let h = gm_switch(&g, &p).unwrap();
            if is_isomorphic(&g, &h) {
                continue;
            }
            prop_assert_eq!(spectrum_key(&g), spectrum_key(&h));
            prop_assert!(!certify(&g, &budget).unwrap().kind.is_dgs());
            prop_assert!(!certify(&h, &budget).unwrap().kind.is_dgs());
        }
    }

    #[test]
    fn squarefree_matches_trial_division(half in 0u64..5_000_000) {
        let x = 2 * half + 1;
        let c = certify_squarefree(&BigInt::from(x), &small_budget()).unwrap();
        match smallest_square_factor(x) {
            Some(_) => prop_assert_eq!(c.status, SquarefreeStatus::NotSquareFree),
            None => prop_assert_eq!(c.status, SquarefreeStatus::SquareFree),
        }
    }
}
