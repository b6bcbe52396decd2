//! Seeded inputs shared by the benchmarks.

use num_bigint::BigInt;
use padic_entropy::selftest::{random_one_unit, random_poly};
use padic_entropy::{IntMatrix, Law, LaurentPoly, PolyMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An `n x n` integer matrix with entries in `[-bound, bound]`.
pub fn int_matrix(n: usize, bound: i64, seed: u64) -> IntMatrix {
    let mut r = rng(seed);
    let rows = (0..n).map(|_| (0..n).map(|_| BigInt::from(r.gen_range(-bound..=bound))).collect()).collect();
    IntMatrix::from_rows(rows).expect("square")
}

pub fn laurent_pair(law: Law, terms: usize, seed: u64) -> (LaurentPoly, LaurentPoly) {
    let mut r = rng(seed);
    (random_poly(&mut r, law, terms, 4, 50), random_poly(&mut r, law, terms, 4, 50))
}

pub fn one_unit(law: Law, p: u64, seed: u64) -> PolyMatrix {
    PolyMatrix::scalar(random_one_unit(&mut rng(seed), law, p))
}
