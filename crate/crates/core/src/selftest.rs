//! Seeded randomized consistency checks between the independent routes,
//! plus the generators they draw from.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detlog::{det_laurent_matrix, logdet_finite, logdet_unit, tr_log_one_unit};
use crate::error::{Error, Result};
use crate::fixcount::{det_bareiss, det_crt, det_exact, fix_count_char_crt, IntMatrix};
use crate::groupring::{
    build_quotient_group, reduce_to_quotient, rho_matrix, Exponent, FiniteGroup, FiniteMatrix, GroupRingElem, Law,
    LaurentPoly, Limits, PolyMatrix, QuotientSpec, RingMatrix,
};
use crate::mahler::mahler_1d;
use crate::padic::PadicScalar;

/// A random exponent with coordinates in `-radius..=radius`.
pub fn random_exponent<R: Rng>(rng: &mut R, law: Law, radius: i32) -> Exponent {
    let e: Vec<i32> = (0..law.dim()).map(|_| rng.gen_range(-radius..=radius)).collect();
    Exponent::from_slice(&e)
}

/// Up to `terms` monomials with coefficients in `-coeff..=coeff`.
pub fn random_poly<R: Rng>(rng: &mut R, law: Law, terms: usize, radius: i32, coeff: i64) -> LaurentPoly {
    let n = rng.gen_range(1..=terms);
    LaurentPoly::from_terms(
        law,
        (0..n).map(|_| (random_exponent(rng, law, radius), BigInt::from(rng.gen_range(-coeff..=coeff)))),
    )
}

/// `1 + p g` for a random `g`.
pub fn random_one_unit<R: Rng>(rng: &mut R, law: Law, p: u64) -> LaurentPoly {
    let g = random_poly(rng, law, 3, 1, 2);
    &LaurentPoly::one(law) + &g.scale(&BigInt::from(p))
}

/// `I + p G` for a random `r x r` matrix `G`.
pub fn random_one_unit_matrix<R: Rng>(rng: &mut R, law: Law, r: usize, p: u64) -> PolyMatrix {
    let pb = BigInt::from(p);
    let entries = (0..r * r)
        .map(|k| {
            let g = random_poly(rng, law, 2, 1, 2).scale(&pb);
            if k % (r + 1) == 0 {
                &LaurentPoly::one(law) + &g
            } else {
                g
            }
        })
        .collect();
    RingMatrix::new(r, entries).expect("square")
}

/// A univariate polynomial whose Newton polygon has no horizontal segment:
/// exactly one coefficient is a p-adic unit, optionally times a power of `p`.
pub fn random_expansive<R: Rng>(rng: &mut R, p: u64) -> LaurentPoly {
    let law = Law::abelian(1);
    let deg = rng.gen_range(1..=4usize);
    let s = rng.gen_range(0..=deg);
    let p = p as i64;
    let coeffs: Vec<BigInt> = (0..=deg)
        .map(|i| {
            let c = if i == s {
                p * rng.gen_range(-2..=2) + rng.gen_range(1..p)
            } else {
                let m = p * rng.gen_range(-2..=2i64);
                if m == 0 && (i == 0 || i == deg) {
                    p
                } else {
                    m
                }
            };
            BigInt::from(c)
        })
        .collect();
    let content = BigInt::from(p).pow(rng.gen_range(0..=1u32));
    let shift = rng.gen_range(-2..=2);
    LaurentPoly::from_dense_univariate(shift, &coeffs).scale(&content).with_law(law).expect("univariate")
}

/// `1 + p g` in the group ring of a finite group.
pub fn random_finite_one_unit<R: Rng>(rng: &mut R, group: &Arc<FiniteGroup>, p: u64) -> GroupRingElem {
    let pb = BigInt::from(p);
    let coeffs = (0..group.order())
        .map(|i| {
            let g = if rng.gen_bool(0.5) { BigInt::from(rng.gen_range(-2..=2)) } else { BigInt::zero() };
            let c = g * &pb;
            if i == group.identity() {
                c + 1
            } else {
                c
            }
        })
        .collect();
    GroupRingElem::new(group.clone(), coeffs).expect("sized to the group")
}

/// Result of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case, if any.
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28} {:>6} {:>9}  status", "check", "cases", "failures")?;
        for c in &self.checks {
            let status = if c.failures == 0 { "PASS" } else { "FAIL" };
            writeln!(f, "{:<28} {:>6} {:>9}  {status}", c.name, c.cases, c.failures)?;
            if let Some(msg) = &c.first_failure {
                writeln!(f, "    first failure: {msg}")?;
            }
        }
        Ok(())
    }
}

const PRIMES: [u64; 3] = [2, 3, 5];
const PREC: u32 = 6;

fn laws() -> [Law; 3] {
    [Law::abelian(1), Law::abelian(2), Law::Heisenberg]
}

/// Runs `case` `cases` times; a case returns `Ok(None)` on success,
/// `Ok(Some(msg))` on a mismatch, and an error is also a failure.
fn run(name: &str, cases: usize, rng: &mut ChaCha8Rng, mut case: impl FnMut(&mut ChaCha8Rng) -> Result<Option<String>>) -> CheckResult {
    let mut failures = 0;
    let mut first_failure = None;
    for i in 0..cases {
        let msg = match case(rng) {
            Ok(None) => continue,
            Ok(Some(m)) => m,
            Err(e) => format!("error: {e}"),
        };
        failures += 1;
        first_failure.get_or_insert_with(|| format!("case {i}: {msg}"));
    }
    CheckResult { name: name.to_string(), cases, failures, first_failure }
}

fn mismatch(what: &str, a: &PadicScalar, b: &PadicScalar) -> Option<String> {
    match a.equals_at(b, PREC as i64) {
        Ok(true) => None,
        _ => Some(format!("{what}: {a} vs {b}")),
    }
}

fn conjugate(f: &PolyMatrix, g: &Exponent) -> Result<PolyMatrix> {
    let law = f.law();
    let left = LaurentPoly::monomial(law, *g, BigInt::one());
    let right = LaurentPoly::monomial(law, law.inverse(g), BigInt::one());
    f.try_map(|e| left.try_mul(e)?.try_mul(&right))
}

fn check_log_homomorphism(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let p = *[2u64, 3, 5, 7].choose(rng).unwrap();
    let unit = |rng: &mut ChaCha8Rng| loop {
        let v: i64 = rng.gen_range(-10_000..=10_000);
        if v % p as i64 != 0 {
            return v;
        }
    };
    let (a, b) = (unit(rng), unit(rng));
    let log = |x: i64| PadicScalar::from_i64(x, p, 10).and_then(|s| s.log());
    let lhs = log(a * b)?;
    let rhs = log(a)?.try_add(&log(b)?)?;
    Ok(mismatch(&format!("log({a}*{b}) at p={p}"), &lhs, &rhs))
}

fn check_tr_log_homomorphism(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let law = *laws().choose(rng).unwrap();
    let p = *PRIMES.choose(rng).unwrap();
    let r = rng.gen_range(1..=2);
    let f = random_one_unit_matrix(rng, law, r, p);
    let g = random_one_unit_matrix(rng, law, r, p);
    let lhs = tr_log_one_unit(&f.try_mul(&g)?, p, PREC)?;
    let rhs = tr_log_one_unit(&f, p, PREC)?.try_add(&tr_log_one_unit(&g, p, PREC)?)?;
    Ok(mismatch(&format!("tr log(FG) over {law:?}, p={p}, r={r}"), &lhs, &rhs))
}

fn check_tr_log_conjugation(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let law = *laws().choose(rng).unwrap();
    let p = *PRIMES.choose(rng).unwrap();
    let r = rng.gen_range(1..=2);
    let f = random_one_unit_matrix(rng, law, r, p);
    let g = random_one_unit_matrix(rng, law, r, p);
    let gamma = random_exponent(rng, law, 2);
    let base = tr_log_one_unit(&f, p, PREC)?;
    let conj = tr_log_one_unit(&conjugate(&f, &gamma)?, p, PREC)?;
    if let Some(m) = mismatch(&format!("tr log of a conjugate over {law:?}, p={p}"), &base, &conj) {
        return Ok(Some(m));
    }
    let fg = tr_log_one_unit(&f.try_mul(&g)?, p, PREC)?;
    let gf = tr_log_one_unit(&g.try_mul(&f)?, p, PREC)?;
    Ok(mismatch(&format!("tr log(FG) vs tr log(GF) over {law:?}, p={p}"), &fg, &gf))
}

fn check_finite_determinant(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let q = if rng.gen_bool(0.7) { QuotientSpec::cyclic(rng.gen_range(1..=6)) } else { QuotientSpec::heisenberg(2) };
    let p = *PRIMES.choose(rng).unwrap();
    let group = build_quotient_group(&q, &Limits::default())?;
    let f: FiniteMatrix = RingMatrix::scalar(random_finite_one_unit(rng, &group, p));
    let lhs = tr_log_one_unit(&f, p, PREC)?;
    let rhs = logdet_finite(&f, p, PREC, &Limits::default())?;
    Ok(mismatch(&format!("finite determinant over {q}, p={p}"), &lhs, &rhs))
}

fn check_fix_count_routes(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let d = rng.gen_range(1..=2);
    let law = Law::abelian(d);
    let moduli: Vec<u64> = (0..d).map(|_| rng.gen_range(1..=if d == 1 { 12 } else { 5 })).collect();
    let f = RingMatrix::scalar(random_poly(rng, law, 4, 2, 3));
    let limits = Limits::default();
    let group = build_quotient_group(&QuotientSpec::torus(&moduli), &limits)?;
    let via_rho = det_exact(&rho_matrix(&reduce_to_quotient(&f, &group)?, &limits)?);
    let via_chars = fix_count_char_crt(&f, &moduli, &limits)?;
    Ok((via_rho != via_chars).then(|| format!("moduli {moduli:?}: {via_rho} vs {via_chars}")))
}

fn check_mahler_vs_logdet(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let p = *PRIMES.choose(rng).unwrap();
    let f = random_expansive(rng, p);
    let lhs = mahler_1d(&f, p, PREC)?;
    let rhs = logdet_unit(&f, p, PREC)?;
    Ok(mismatch(&format!("m_p vs logdet for {f}, p={p}"), &lhs, &rhs))
}

fn check_det_vs_tr_log(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let law = if rng.gen_bool(0.5) { Law::abelian(1) } else { Law::abelian(2) };
    let p = *PRIMES.choose(rng).unwrap();
    let f = random_one_unit_matrix(rng, law, 2, p);
    let lhs = tr_log_one_unit(&f, p, PREC)?;
    let rhs = logdet_unit(&det_laurent_matrix(&f)?, p, PREC)?;
    Ok(mismatch(&format!("tr log F vs logdet det F over {law:?}, p={p}"), &lhs, &rhs))
}

fn check_det_routes(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let n = rng.gen_range(1..=14);
    let rows: Vec<Vec<BigInt>> =
        (0..n).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect()).collect();
    let m = IntMatrix::from_rows(rows).ok_or(Error::NotSquare)?;
    let (a, b) = (det_bareiss(&m), det_crt(&m));
    Ok((a != b).then(|| format!("size {n}: {a} vs {b}")))
}

/// Every check with `cases` random cases each, from a fixed seed.
pub fn run_selftest(seed: u64, cases: usize) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    type Case = fn(&mut ChaCha8Rng) -> Result<Option<String>>;
    let checks: [(&str, Case); 8] = [
        ("log_homomorphism", check_log_homomorphism),
        ("tr_log_homomorphism", check_tr_log_homomorphism),
        ("tr_log_conjugation", check_tr_log_conjugation),
        ("finite_determinant", check_finite_determinant),
        ("fix_count_routes", check_fix_count_routes),
        ("mahler_vs_logdet", check_mahler_vs_logdet),
        ("matrix_det_vs_tr_log", check_det_vs_tr_log),
        ("det_bareiss_vs_crt", check_det_routes),
    ];
    let checks = checks.iter().map(|(name, case)| run(name, cases, &mut rng, case)).collect();
    SelftestReport { seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let report = run_selftest(7, 12);
        assert!(report.passed(), "{report}");
        assert_eq!(report, run_selftest(7, 12));
    }

    #[test]
    fn expansive_generator_has_no_zero_slope() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in PRIMES {
            for _ in 0..50 {
                let f = random_expansive(&mut rng, p);
                assert!(!crate::mahler::newton_polygon(&f, p).unwrap().has_zero_slope(), "{f}");
            }
        }
    }
}
