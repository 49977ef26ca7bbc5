//! Smith normal form against determinant and minor oracles.

mod common;

use common::{abs_is_one, det, minor_gcd, random_matrix};
use cover_core::abgrp::smith_decomposition;
use cover_core::{BigInt, IntMatrix};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_smith(a: &IntMatrix) {
    let s = smith_decomposition(a);
    assert_eq!(&(&s.u * a) * &s.v, s.d, "U·A·V != D for {a:?}");
    assert!(abs_is_one(&det(&s.u)), "U not unimodular");
    assert!(abs_is_one(&det(&s.v)), "V not unimodular");
    assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(a.num_cols()));

    let n = a.num_rows().min(a.num_cols());
    for i in 0..a.num_rows() {
        for j in 0..a.num_cols() {
            if i != j {
                assert!(s.d[(i, j)].is_zero());
            }
        }
    }
    for i in 0..n {
        let di = &s.d[(i, i)];
        assert!(*di >= BigInt::zero());
        assert_eq!(!di.is_zero(), i < s.rank, "zeros must trail the nonzero entries");
        if i + 1 < s.rank {
            assert!(s.d[(i + 1, i + 1)].is_multiple_of(di), "divisibility chain broken");
        }
    }
}

/// `d_1⋯d_k` equals the gcd of the `k × k` minors.
fn check_minors(a: &IntMatrix) {
    let s = smith_decomposition(a);
    let n = a.num_rows().min(a.num_cols());
    let mut prod = BigInt::one();
    for k in 1..=n {
        prod *= &s.d[(k - 1, k - 1)];
        assert_eq!(prod, minor_gcd(a, k), "k = {k} for {a:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transforms_and_chain(rows in 0usize..=6, cols in 0usize..=6, bound in 1i64..=50, seed: u64) {
        let a = random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols, bound);
        check_smith(&a);
    }

    #[test]
    fn invariant_factors_match_minor_gcds(rows in 1usize..=4, cols in 1usize..=4, bound in 1i64..=20, seed: u64) {
        let a = random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols, bound);
        check_minors(&a);
    }
}

#[test]
fn rank_deficient_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let b = random_matrix(&mut rng, 4, 2, 9);
        let c = random_matrix(&mut rng, 2, 5, 9);
        let a = &b * &c;
        check_smith(&a);
        check_minors(&a);
        assert!(smith_decomposition(&a).rank <= 2);
    }
}

#[test]
fn bareiss_agrees_with_cofactor_expansion() {
    fn laplace(m: &IntMatrix) -> BigInt {
        let n = m.num_rows();
        if n == 0 {
            return BigInt::one();
        }
        (0..n)
            .map(|j| {
                let minor = IntMatrix::from_rows(
                    (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| m[(i, c)].clone()).collect()).collect(),
                    n - 1,
                );
                let s = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                s * &m[(0, j)] * laplace(&minor)
            })
            .sum()
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 0..=5 {
        for _ in 0..20 {
            let m = random_matrix(&mut rng, n, n, 6);
            assert_eq!(det(&m), laplace(&m));
        }
    }
}

#[test]
fn known_forms() {
    let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    assert_eq!(smith_decomposition(&a).invariant_factors(), common::big(&[2, 6, 12]));
    let z = IntMatrix::zeros(2, 3);
    assert_eq!(smith_decomposition(&z).rank, 0);
}
