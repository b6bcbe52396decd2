use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use padic_entropy::arith::big_pow;
use padic_entropy::mahler::mahler_1d_detailed;
use padic_entropy::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: u32 = 6;

/// Degree <= 6, coefficients <= 100 in size, exactly one of them a unit.
fn expansive(rng: &mut ChaCha8Rng, p: u64) -> Vec<BigInt> {
    let p = p as i64;
    let deg = rng.gen_range(1..=6usize);
    let s = rng.gen_range(0..=deg);
    (0..=deg)
        .map(|i| {
            let c = if i == s {
                loop {
                    let c = rng.gen_range(-100..=100i64);
                    if c % p != 0 {
                        break c;
                    }
                }
            } else {
                let c = p * rng.gen_range(-100 / p..=100 / p);
                if c == 0 && (i == 0 || i == deg) {
                    p
                } else {
                    c
                }
            };
            BigInt::from(c)
        })
        .collect()
}

fn poly(c: &[BigInt]) -> LaurentPoly {
    LaurentPoly::from_dense_univariate(0, c)
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_lines_agree(p in prime(), seed: u64) {
        let f = expansive(&mut ChaCha8Rng::seed_from_u64(seed), p);
        let r = mahler_1d_detailed(&poly(&f), p, N).unwrap();
        prop_assert!(r.value.equals_at(&r.outside_form, N as i64).unwrap());
    }

    #[test]
    fn slope_split_is_sound(p in prime(), seed: u64) {
        let f = expansive(&mut ChaCha8Rng::seed_from_u64(seed), p);
        let split = slope_split(&f, p, N).unwrap();
        let m = big_pow(p, N);
        let s = split.g.len() - 1;
        prop_assert!(split.g[s].is_one());
        prop_assert!(split.g[..s].iter().all(|c| c.is_multiple_of(&BigInt::from(p))));
        let mut prod = vec![BigInt::zero(); split.g.len() + split.h.len() - 1];
        for (i, a) in split.g.iter().enumerate() {
            for (j, b) in split.h.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        for (i, c) in prod.iter().enumerate() {
            prop_assert!((c - f.get(i).cloned().unwrap_or_default()).is_multiple_of(&m));
        }
    }

    #[test]
    fn agrees_with_trace_log(p in prime(), seed: u64) {
        let f = poly(&expansive(&mut ChaCha8Rng::seed_from_u64(seed), p));
        prop_assert!(mahler_1d(&f, p, N).unwrap().equals_at(&logdet_unit(&f, p, N).unwrap(), N as i64).unwrap());
    }

    #[test]
    fn is_additive(p in prime(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (poly(&expansive(&mut rng, p)), poly(&expansive(&mut rng, p)));
        let lhs = mahler_1d(&f.try_mul(&g).unwrap(), p, N).unwrap();
        let rhs = mahler_1d(&f, p, N).unwrap().try_add(&mahler_1d(&g, p, N).unwrap()).unwrap();
        prop_assert!(lhs.equals_at(&rhs, N as i64).unwrap());
    }
}
