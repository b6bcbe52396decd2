use num_bigint::BigInt;
use padic_entropy::selftest::{random_exponent, random_finite_one_unit, random_one_unit, random_one_unit_matrix};
use padic_entropy::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: u32 = 6;

fn law() -> impl Strategy<Value = Law> {
    prop::sample::select(vec![Law::abelian(1), Law::abelian(2), Law::Heisenberg])
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn same(a: &PadicScalar, b: &PadicScalar) -> bool {
    a.equals_at(b, N as i64).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tr_log_is_a_homomorphism(law in law(), p in prime(), r in 1usize..=2, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_one_unit_matrix(&mut rng, law, r, p);
        let g = random_one_unit_matrix(&mut rng, law, r, p);
        let t = |x: &PolyMatrix| tr_log_one_unit(x, p, N).unwrap();
        prop_assert!(same(&t(&f.try_mul(&g).unwrap()), &t(&f).try_add(&t(&g)).unwrap()));
    }

    #[test]
    fn tr_log_is_a_homomorphism_on_finite_groups(p in prime(), seed: u64, which in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = [QuotientSpec::heisenberg(2), QuotientSpec::cyclic(6), QuotientSpec::torus(&[2, 3])][which].clone();
        let group = build_quotient_group(&q, &Limits::default()).unwrap();
        let f = RingMatrix::scalar(random_finite_one_unit(&mut rng, &group, p));
        let g = RingMatrix::scalar(random_finite_one_unit(&mut rng, &group, p));
        let t = |x: &FiniteMatrix| tr_log_one_unit(x, p, N).unwrap();
        prop_assert!(same(&t(&f.try_mul(&g).unwrap()), &t(&f).try_add(&t(&g)).unwrap()));
        prop_assert!(same(&t(&f), &logdet_finite(&f, p, N, &Limits::default()).unwrap()));
    }

    #[test]
    fn tr_log_is_conjugation_invariant(law in law(), p in prime(), r in 1usize..=2, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_one_unit_matrix(&mut rng, law, r, p);
        let gamma = random_exponent(&mut rng, law, 3);
        let c = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        let left = LaurentPoly::monomial(law, gamma, c.clone());
        let right = LaurentPoly::monomial(law, law.inverse(&gamma), c);
        let conj = f.try_map(|e| left.try_mul(e)?.try_mul(&right)).unwrap();
        prop_assert!(same(&tr_log_one_unit(&conj, p, N).unwrap(), &tr_log_one_unit(&f, p, N).unwrap()));
    }

    #[test]
    fn matrix_and_determinant_agree(p in prime(), d in 1usize..=2, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_one_unit_matrix(&mut rng, Law::abelian(d), 2, p);
        let det = RingMatrix::scalar(det_laurent_matrix(&f).unwrap());
        prop_assert!(same(&tr_log_one_unit(&f, p, N).unwrap(), &tr_log_one_unit(&det, p, N).unwrap()));
    }

    #[test]
    fn logdet_unit_is_additive(p in prime(), d in 1usize..=2, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let law = Law::abelian(d);
        let unit = |rng: &mut ChaCha8Rng| {
            let mono = LaurentPoly::monomial(law, random_exponent(rng, law, 2), BigInt::from(p).pow(rng.gen_range(0..3)));
            let c = loop {
                let c: i64 = rng.gen_range(-20..=20);
                if c % p as i64 != 0 {
                    break BigInt::from(c);
                }
            };
            mono.scale(&c).try_mul(&random_one_unit(rng, law, p)).unwrap()
        };
        let (f, g) = (unit(&mut rng), unit(&mut rng));
        let lhs = logdet_unit(&f.try_mul(&g).unwrap(), p, N).unwrap();
        let rhs = logdet_unit(&f, p, N).unwrap().try_add(&logdet_unit(&g, p, N).unwrap()).unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn normalization_reexpands(p in prime(), d in 1usize..=2, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let law = Law::abelian(d);
        let mono = LaurentPoly::monomial(law, random_exponent(&mut rng, law, 2), BigInt::from(p + 1));
        let f = mono.try_mul(&random_one_unit(&mut rng, law, p)).unwrap();
        let u = c0_unit_normalize(&f, p, 20).unwrap();
        let m = BigInt::from(p).pow(u.a + 21);
        prop_assert!(u.reexpand().try_sub(&f).unwrap().divisible_by(&m));
    }
}
