//! Worked examples checked against values computed here by independent,
//! deliberately naive means (exact rationals, Sylvester resultants,
//! brute-force group tables), plus a few frozen residues.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use padic_entropy::*;

fn poly(s: &str) -> LaurentPoly {
    parse_poly(s, None).unwrap()
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

/// A rational with non-negative valuation, reduced modulo `p^k`.
fn rational_mod(x: &BigRational, p: u64, k: u32) -> BigInt {
    let m = BigInt::from(p).pow(k);
    let mut den = x.denom().clone();
    let mut num = x.numer().clone();
    let pb = BigInt::from(p);
    while den.is_multiple_of(&pb) {
        assert!(num.is_multiple_of(&pb), "negative valuation");
        den /= &pb;
        num /= &pb;
    }
    let inv = den.modpow(&(m.clone() - BigInt::from(p).pow(k - 1) - 1), &m);
    (num * inv).mod_floor(&m)
}

/// Determinant by Gaussian elimination over Q.
fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else { return BigRational::zero() };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}

/// `Res(T^n - 1, f)` for `f` given by ascending integer coefficients.
fn resultant_with_cyclotomic(f: &[i64], n: usize) -> BigInt {
    let m = f.len() - 1;
    let mut a = vec![0i64; n + 1];
    a[0] = -1;
    a[n] = 1;
    let size = n + m;
    let mut rows = Vec::new();
    for i in 0..m {
        let mut row = vec![BigRational::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = BigRational::from_integer(int(*c));
        }
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![BigRational::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            row[i + j] = BigRational::from_integer(int(*c));
        }
        rows.push(row);
    }
    det_rational(rows).to_integer()
}

#[test]
fn scalar_construction_and_inverse() {
    let third = PadicScalar::from_ratio(&int(1), &int(3), 2, 4).unwrap();
    assert_eq!(third.valuation(), Some(0));
    assert_eq!(third.unit(), Some(&int(11)));
    assert_eq!((int(3) * int(11)).mod_floor(&int(16)), int(1));
    let three = PadicScalar::from_i64(3, 2, 4).unwrap();
    assert_eq!(three.try_mul(&third).unwrap().unit(), Some(&int(1)));
    assert_eq!(three.inv().unwrap().unit(), Some(&int(11)));
}

#[test]
fn log_of_four_at_three() {
    // log(1 + 3) = sum (-1)^(k+1) 3^k / k; terms beyond k = 12 vanish mod 27.
    let series: BigRational = (1..=12i64)
        .map(|k| rat(if k % 2 == 1 { 1 } else { -1 }, 1) * BigRational::from_integer(int(3).pow(k as u32)) / int(k))
        .sum();
    let oracle = rational_mod(&series, 3, 3);
    assert_eq!(oracle, int(21));
    let l = PadicScalar::from_i64(4, 3, 3).unwrap().log().unwrap();
    assert_eq!(l.to_residue(), Some(oracle));
    for p in [2u64, 3, 5, 7] {
        assert!(PadicScalar::from_i64(p as i64, p, 8).unwrap().log().unwrap().is_zero());
    }
}

#[test]
fn example_factorization_reexpands() {
    let lhs = poly("-t").try_mul(&poly("1 - 2*t - 2*t^-1")).unwrap();
    assert_eq!(lhs, poly("2*t^2 - t + 2"));
}

#[test]
fn heisenberg_two_by_brute_force() {
    let g = build_quotient_group(&QuotientSpec::heisenberg(2), &Limits::default()).unwrap();
    assert_eq!(g.order(), 8);
    let central: Vec<usize> =
        (0..8).filter(|&a| (0..8).all(|b| g.mul(a, b) == g.mul(b, a))).collect();
    assert_eq!(central.len(), 2);
    assert!(!g.is_abelian());
}

#[test]
fn regular_representation_of_four_minus_s() {
    let f = RingMatrix::scalar(poly("4 - t"));
    let lim = Limits::default();
    let group = build_quotient_group(&QuotientSpec::cyclic(2), &lim).unwrap();
    let rho = rho_matrix(&reduce_to_quotient(&f, &group).unwrap(), &lim).unwrap();
    assert_eq!(rho, IntMatrix::from_i64(&[&[4, -1], &[-1, 4]]));
    assert_eq!(det_exact(&rho), int(15));
}

#[test]
fn fix_counts_match_resultants() {
    let coeffs = [2, -1, 2];
    let f = RingMatrix::scalar(poly("2*t^2 - t + 2"));
    let lim = Limits::default();
    let frozen = [3, 15, 27];
    for n in 1..=9usize {
        let res = resultant_with_cyclotomic(&coeffs, n).abs();
        let rec = fix_count(&f, &QuotientSpec::cyclic(n as u64), 2, 8, &lim).unwrap();
        assert_eq!(rec.fix_count, res, "n = {n}");
        assert_eq!(fix_count_char_crt(&f, &[n as u64], &lim).unwrap().abs(), res);
        if n <= 3 {
            assert_eq!(res, int(frozen[n - 1]));
        }
    }
}

#[test]
fn unit_normalization_of_the_example() {
    let f = poly("2*t^2 - t + 2");
    let u = c0_unit_normalize(&f, 2, 8).unwrap();
    assert_eq!((u.a, u.c.clone(), u.nu), (0, int(-1), Exponent::unit(0)));
    assert_eq!(u.g, poly("-t - t^-1"));
    assert_eq!(c0_unit_normalize(&f, 3, 8).unwrap_err(), Error::NotACZeroUnit(3));
}

#[test]
fn central_binomial_trace_log() {
    // tr log(1 + 3(t + 1/t)) = -sum_k 9^k binom(2k, k) / (2k).
    let mut series = BigRational::zero();
    let mut binom = BigInt::one();
    for k in 1..=20i64 {
        binom = binom * int(2 * k) * int(2 * k - 1) / int(k * k);
        series -= BigRational::from_integer(int(9).pow(k as u32) * &binom) / int(2 * k);
    }
    let oracle = rational_mod(&series, 3, 4);
    assert_eq!(oracle, int(72));
    let f = RingMatrix::scalar(poly("1 + 3*(t + t^-1)"));
    assert_eq!(tr_log_one_unit(&f, 3, 4).unwrap().to_residue(), Some(oracle));
}

#[test]
fn finite_logdet_of_three_plus_two_s() {
    let lim = Limits::default();
    let group = build_quotient_group(&QuotientSpec::cyclic(2), &lim).unwrap();
    let f = RingMatrix::scalar(GroupRingElem::new(group, vec![int(3), int(2)]).unwrap());
    let half_log5 = PadicScalar::from_i64(5, 2, 9).unwrap().log().unwrap().div_u64(2);
    let a = logdet_finite(&f, 2, 8, &lim).unwrap();
    assert!(a.equals_at(&half_log5, 8).unwrap());
    assert!(a.equals_at(&tr_log_one_unit(&f, 2, 8).unwrap(), 8).unwrap());
}

#[test]
fn example_roots_and_measure() {
    let f = poly("2*t^2 - t + 2");
    let np = newton_polygon(&f, 2).unwrap();
    assert_eq!(np.vertices, vec![(0, 1), (1, 0), (2, 1)]);
    let split = slope_split(&[int(2), int(-1), int(2)], 2, 20).unwrap();
    let m = int(2).pow(20);
    let alpha_minus = (-&split.g[0]).mod_floor(&m);
    // h = h1 T + h0 with root alpha_+ = -h0 / h1; alpha_+ alpha_- = 1.
    let prod = PadicScalar::from_residue(&alpha_minus, 2, 20)
        .try_mul(&PadicScalar::from_residue(&(-&split.h[0]), 2, 20))
        .unwrap()
        .try_div(&PadicScalar::from_residue(&split.h[1], 2, 20))
        .unwrap();
    assert!(prod.equals_at(&PadicScalar::one(2, 20), prod.abs_precision()).unwrap());

    // log_2 alpha_+ with alpha_+ = (1 + sqrt(-15)) / 4 from the square root.
    let s = PadicScalar::from_i64(-15, 2, 16).unwrap().sqrt().unwrap();
    let alpha = s
        .try_add(&PadicScalar::one(2, 16))
        .unwrap()
        .try_div(&PadicScalar::from_i64(4, 2, 16).unwrap())
        .unwrap();
    assert_eq!(alpha.valuation(), Some(-1));
    let h = mahler_1d(&f, 2, 8).unwrap();
    assert!(h.equals_at(&alpha.log().unwrap(), 8).unwrap());
    assert_eq!(h.to_residue().unwrap().to_i64(), Some(164));
    assert_eq!(logdet_unit(&f, 2, 8).unwrap(), h);
    assert_eq!(logdet_unit(&poly("3"), 2, 8).unwrap(), PadicScalar::from_i64(3, 2, 8).unwrap().log().unwrap());
}

#[test]
fn snirelman_small_moduli() {
    let f = poly("2*t^2 - t + 2");
    let r = snirelman_mahler(&f, 2, &[1, 3], 8, &ReportOptions::default(), &Limits::default()).unwrap();
    let log3 = PadicScalar::from_i64(3, 2, 8).unwrap().log().unwrap();
    let log27_over_3 = PadicScalar::from_i64(27, 2, 8).unwrap().log().unwrap().div_u64(3);
    assert_eq!(r.records[0].normalized, log3);
    assert_eq!(r.records[1].normalized, log27_over_3);
}

#[test]
fn two_variable_sequence_meets_trace_log() {
    let f = RingMatrix::scalar(poly("1 + 3*(t1 + t2^-1)"));
    let fam: Vec<QuotientSpec> = [1u64, 2, 4, 5, 7, 8].iter().map(|&n| QuotientSpec::torus(&[n, n])).collect();
    let r = entropy_sequence(&f, &fam, 3, 6, &ReportOptions { window: 3, target: Some(4) }, &Limits::default()).unwrap();
    assert!(r.stabilized_value.equals_at(&tr_log_one_unit(&f, 3, 6).unwrap(), 4).unwrap());
}

#[test]
fn one_variable_distances_shrink() {
    // In Z/n the powers (1 - F)^nu with 2 nu < n have no aliasing, so the
    // n-th value agrees with the limit up to the terms nu >= n/2 of the
    // logarithm series, each of valuation at least nu - v_p(nu).
    for p in [2u64, 3, 5] {
        let f = RingMatrix::scalar(poly(&format!("1 + {p}*(t + t^-1)")));
        let limit = tr_log_one_unit(&f, p, 10).unwrap();
        let fam = parse_family("all:1..12", Law::abelian(1), p).unwrap();
        let r = entropy_sequence(&f, &fam, p, 10, &ReportOptions::default(), &Limits::default()).unwrap();
        for rec in &r.records {
            let n = rec.index;
            let bound = ((n + 1) / 2..(n + 1) / 2 + 64)
                .map(|nu| nu as i64 - padic_entropy::arith::valuation_u64(nu, p) as i64)
                .min()
                .unwrap()
                .min(10);
            let got = rec.normalized.agreement(&limit).unwrap();
            assert!(got >= bound, "p = {p}, n = {n}: {got} < {bound}");
        }
    }
}
