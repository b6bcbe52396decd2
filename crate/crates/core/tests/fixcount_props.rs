use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use padic_entropy::fixcount::{det_bareiss, det_crt};
use padic_entropy::selftest::{random_exponent, random_poly};
use padic_entropy::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, law: Law, r: usize) -> PolyMatrix {
    RingMatrix::new(r, (0..r * r).map(|_| random_poly(rng, law, 4, 2, 6)).collect()).unwrap()
}

fn moduli(rng: &mut ChaCha8Rng, d: usize) -> Vec<u64> {
    (0..d).map(|_| rng.gen_range(1..=8)).collect()
}

fn det_of(f: &PolyMatrix, q: &QuotientSpec) -> BigInt {
    let lim = Limits::default();
    let group = build_quotient_group(q, &lim).unwrap();
    det_exact(&rho_matrix(&reduce_to_quotient(f, &group).unwrap(), &lim).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn character_route_matches_regular_representation(seed: u64, d in 1usize..=2, r in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_matrix(&mut rng, Law::abelian(d), r);
        let ns = moduli(&mut rng, d);
        let chars = fix_count_char_crt(&f, &ns, &Limits::default()).unwrap();
        prop_assert_eq!(chars.abs(), det_of(&f, &QuotientSpec::torus(&ns)).abs());
    }

    #[test]
    fn fix_counts_multiply(seed: u64, heis: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (law, q) = if heis {
            (Law::Heisenberg, QuotientSpec::heisenberg(rng.gen_range(2..=3)))
        } else {
            let ns = moduli(&mut rng, 2);
            (Law::abelian(2), QuotientSpec::torus(&ns))
        };
        let f = RingMatrix::scalar(random_poly(&mut rng, law, 4, 2, 6));
        let g = RingMatrix::scalar(random_poly(&mut rng, law, 4, 2, 6));
        let (a, b) = (det_of(&f, &q), det_of(&g, &q));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let fg = fix_count(&f.try_mul(&g).unwrap(), &q, 3, 4, &Limits::default()).unwrap();
        prop_assert_eq!(fg.fix_count, (a * b).abs());
    }

    #[test]
    fn det_routes_agree(seed: u64, n in 1usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..n).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-50..=50))).collect()).collect();
        let m = IntMatrix::from_rows(rows).unwrap();
        let b = det_bareiss(&m);
        prop_assert_eq!(det_exact(&m), b.clone());
        prop_assert_eq!(det_crt(&m), b);
    }

    #[test]
    fn group_elements_have_one_fixed_point(seed: u64, heis: bool, n in 1u64..=5, sign: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let law = if heis { Law::Heisenberg } else { Law::abelian(2) };
        let c = if sign { 1 } else { -1 };
        let f = RingMatrix::scalar(LaurentPoly::monomial(law, random_exponent(&mut rng, law, 4), BigInt::from(c)));
        let rec = fix_count(&f, &QuotientSpec::diagonal(law, n), 2, 4, &Limits::default()).unwrap();
        prop_assert_eq!(rec.fix_count, BigInt::from(1));
        prop_assert!(rec.normalized.is_zero());
    }
}
