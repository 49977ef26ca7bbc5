//! Fixtures shared by the benchmarks.

use cover_core::abgrp::canonicalize;
use cover_core::cover::{Branch, BuildingData, PicardModel};
use cover_core::{BigInt, FgAbGroup, IntMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The order 32 quotient of `(Z/4)³` by `2e₁+2e₂+2e₃`, branched on three
/// divisors of class `2h` in `A = Z⟨h⟩`.
pub fn order_32_cover() -> (BuildingData, PicardModel) {
    let rel = IntMatrix::from_i64(&[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[2, 2, 2]]);
    let c = canonicalize(&rel, 3);
    let branches = (0..3)
        .map(|j| {
            let mut e = vec![BigInt::from(0); 3];
            e[j] = BigInt::from(1);
            Branch {
                order: BigInt::from(4),
                generator: c.map(&e),
            }
        })
        .collect();
    let comps: Vec<Vec<BigInt>> = [[1, 0, 3], [0, 1, 3], [0, 0, 2]]
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let bd = BuildingData::from_components(c.group, branches, &comps).expect("valid characters");
    let a = FgAbGroup::free(1);
    let el = |x: i64| a.element_i64(&[x]).expect("one coordinate");
    let pic = PicardModel {
        d: vec![el(2), el(2), el(2)],
        l: vec![el(2), el(2), el(1)],
        group: a.clone(),
    };
    (bd, pic)
}

/// Seeded random square matrices with entries in `[-bound, bound]`.
pub fn random_matrices(n: usize, size: usize, bound: i64, seed: u64) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let rows = (0..size)
                .map(|_| (0..size).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
                .collect();
            IntMatrix::from_rows(rows, size)
        })
        .collect()
}
