//! The entropy limit `lim (1/|Gamma/Gamma_n|) log_p |Fix_n|` over a family of
//! quotients, the Snirelman-integral form of the Mahler measure, and the
//! bookkeeping that says how many digits of the limit a finite family
//! actually pins down.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixcount::{fix_count, fix_count_char_crt, FixCountRecord};
use crate::groupring::{Law, LaurentPoly, Limits, PolyMatrix, QuotientSpec, RingMatrix};
use crate::padic::PadicScalar;

/// Tail window and digit target for a [`ConvergenceReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Number of trailing records that must agree.
    pub window: usize,
    /// Digits required for a `converged` verdict; the working precision if
    /// unset.
    pub target: Option<u32>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { window: 3, target: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converged,
    Undecided,
}

/// Records sorted by index, with their mutual p-adic distances.
///
/// Distances are stored as agreement digits `k`, meaning
/// `|a - b|_p <= p^-k`, capped at what both values are known to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub p: u64,
    pub window: usize,
    pub target: u32,
    pub records: Vec<FixCountRecord>,
    pub pairwise_agreement: Vec<Vec<i64>>,
    /// `agreement(records[i], records[i + 1])`.
    pub consecutive_agreement: Vec<i64>,
    /// Minimum consecutive agreement within the last `window` records.
    pub stable_digits: u32,
    /// The last normalized value, truncated to `stable_digits`.
    pub stabilized_value: PadicScalar,
    pub verdict: Verdict,
}

impl ConvergenceReport {
    pub fn normalized(&self) -> impl Iterator<Item = &PadicScalar> {
        self.records.iter().map(|r| &r.normalized)
    }

    /// `quotient,index,fix_count,v_p,normalized`, one row per record;
    /// `normalized` is written as base-p digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quotient,index,fix_count,v_p,normalized\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.quotient,
                r.index,
                r.fix_count,
                r.p_valuation,
                r.normalized.digits()
            );
        }
        out
    }
}

/// Assembles a report. Records are sorted by index first, so the result
/// does not depend on the order in which they were computed.
pub fn convergence_report(mut records: Vec<FixCountRecord>, opts: &ReportOptions) -> Result<ConvergenceReport> {
    if records.len() < 2 {
        return Err(Error::TooFewRecords(records.len()));
    }
    records.sort_by_key(|r| r.index);
    let p = records[0].p;
    let precision = records.iter().map(|r| r.normalized.abs_precision()).min().unwrap().max(0);
    let target = opts.target.unwrap_or(precision as u32);
    let window = opts.window.max(2);
    let n = records.len();
    let mut pairwise = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            pairwise[i][j] = records[i].normalized.agreement(&records[j].normalized)?.clamp(0, precision);
        }
    }
    let consecutive: Vec<i64> = (0..n - 1).map(|i| pairwise[i][i + 1]).collect();
    let tail = &consecutive[n.saturating_sub(window)..];
    let stable_digits = tail.iter().copied().min().unwrap_or(0).max(0) as u32;
    let stabilized_value = records[n - 1].normalized.truncate(stable_digits as i64);
    let verdict =
        if n >= window && stable_digits >= target { Verdict::Converged } else { Verdict::Undecided };
    Ok(ConvergenceReport {
        p,
        window,
        target,
        records,
        pairwise_agreement: pairwise,
        consecutive_agreement: consecutive,
        stable_digits,
        stabilized_value,
        verdict,
    })
}

/// Fixed-point records of `f` over each quotient of `family`, computed in
/// parallel. Indices must increase strictly.
pub fn entropy_records(
    f: &PolyMatrix,
    family: &[QuotientSpec],
    p: u64,
    prec: u32,
    limits: &Limits,
) -> Result<Vec<FixCountRecord>> {
    let orders = family.iter().map(QuotientSpec::order).collect::<Result<Vec<_>>>()?;
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::FamilyNotIncreasing);
    }
    family.par_iter().map(|q| fix_count(f, q, p, prec, limits)).collect()
}

/// The entropy limit, sampled along `family`.
pub fn entropy_sequence(
    f: &PolyMatrix,
    family: &[QuotientSpec],
    p: u64,
    prec: u32,
    opts: &ReportOptions,
    limits: &Limits,
) -> Result<ConvergenceReport> {
    convergence_report(entropy_records(f, family, p, prec, limits)?, opts)
}

/// `(1/N^d) sum_{zeta in mu_N^d} log_p f(zeta)` for each `N` in `ns`.
///
/// The sum is `log_p` of the product of the values, and that product is a
/// rational integer, evaluated exactly by characters modulo word primes.
pub fn snirelman_mahler(
    f: &LaurentPoly,
    p: u64,
    ns: &[u64],
    prec: u32,
    opts: &ReportOptions,
    limits: &Limits,
) -> Result<ConvergenceReport> {
    if let Some(&n) = ns.iter().find(|&&n| n % p == 0) {
        return Err(Error::ModulusNotCoprimeToP { n, p });
    }
    let d = match f.law() {
        Law::Abelian { d } => d,
        Law::Heisenberg => return Err(Error::NonAbelianQuotient("Heisenberg".into())),
    };
    let fm = RingMatrix::scalar(f.clone());
    let records = ns
        .par_iter()
        .map(|&n| {
            let moduli = vec![n; d];
            let prod = fix_count_char_crt(&fm, &moduli, limits)?;
            let index = n.checked_pow(d as u32).ok_or(Error::OrderOverflow { order: u128::MAX, cap: limits.max_order })?;
            FixCountRecord::from_det(QuotientSpec::torus(&moduli), index, prod, p, prec)
        })
        .collect::<Result<Vec<_>>>()?;
    convergence_report(records, opts)
}

/// Moduli `n` in `lo..=hi` for the family kinds `all`, `odd` (odd `n`) and
/// `coprime` (`n` prime to `p`).
fn range_family(kind: &str, lo: u64, hi: u64, p: u64) -> Result<Vec<u64>> {
    let keep: fn(u64, u64) -> bool = match kind {
        "all" => |_, _| true,
        "odd" => |n, _| n % 2 == 1,
        "coprime" => |n, p| n % p != 0,
        _ => return Err(Error::InvalidQuotient(format!("unknown family kind '{kind}'"))),
    };
    Ok((lo.max(1)..=hi).filter(|&n| keep(n, p)).collect())
}

/// Parses a family description:
///
/// * `odd:1..25`, `coprime:1..12`, `all:2..6` give diagonal quotients
///   `(n, ..., n)` (or `heisenberg(n)`) for the selected moduli;
/// * `1,2,4,5` lists moduli explicitly;
/// * `C2xC3;C4xC6` lists quotients explicitly.
pub fn parse_family(text: &str, law: Law, p: u64) -> Result<Vec<QuotientSpec>> {
    let text = text.trim();
    let bad = || Error::InvalidQuotient(text.to_string());
    if text.contains(';') || text.starts_with(['C', 'H']) {
        return text.split(';').map(|s| s.trim().parse()).collect();
    }
    let moduli: Vec<u64> = if let Some((kind, range)) = text.split_once(':') {
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        range_family(kind.trim(), lo, hi, p)?
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    Ok(moduli.into_iter().map(|n| QuotientSpec::diagonal(law, n)).collect())
}

/// The first `count` moduli prime to `p`, as diagonal quotients.
/// `n = 1` is skipped for the Heisenberg group.
pub fn default_family(law: Law, p: u64, count: usize) -> Vec<QuotientSpec> {
    let start = if law.is_abelian() { 1 } else { 2 };
    (start..)
        .filter(|n| n % p != 0)
        .take(count)
        .map(|n| QuotientSpec::diagonal(law, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    fn record(index: u64, normalized: PadicScalar) -> FixCountRecord {
        let p = normalized.prime();
        FixCountRecord {
            quotient: QuotientSpec::cyclic(index),
            index,
            fix_count: BigInt::from(1),
            signed_det: BigInt::from(1),
            p,
            p_valuation: 0,
            unit_residue: PadicScalar::one(p, 8),
            unit_log: normalized.clone(),
            normalized,
        }
    }

    #[test]
    fn equal_records_converge() {
        let x = PadicScalar::from_i64(5, 3, 6).unwrap();
        let recs = (1..=4).map(|i| record(i, x.clone())).collect();
        let r = convergence_report(recs, &ReportOptions::default()).unwrap();
        assert_eq!(r.stable_digits, 6);
        assert_eq!(r.verdict, Verdict::Converged);
        assert_eq!(r.stabilized_value, x);
    }

    #[test]
    fn geometric_records_gain_a_digit_per_step() {
        // 0, p, p + p^2, p + p^2 + p^3, ...: consecutive differences p^k.
        let p = 5u64;
        let mut acc = BigInt::from(0);
        let mut recs = Vec::new();
        for k in 0..6u32 {
            if k > 0 {
                acc += BigInt::from(p).pow(k);
            }
            recs.push(record(k as u64 + 1, PadicScalar::from_residue(&acc, p, 8)));
        }
        let r = convergence_report(recs.clone(), &ReportOptions::default()).unwrap();
        assert_eq!(r.consecutive_agreement, vec![1, 2, 3, 4, 5]);
        assert_eq!(r.stable_digits, 4);
        assert_eq!(r.verdict, Verdict::Undecided);
        // Smaller windows never report fewer digits.
        let digits: Vec<u32> = (2..=6)
            .map(|w| convergence_report(recs.clone(), &ReportOptions { window: w, target: None }).unwrap().stable_digits)
            .collect();
        assert!(digits.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(
            convergence_report(recs[..1].to_vec(), &ReportOptions::default()),
            Err(Error::TooFewRecords(1))
        );
    }

    #[test]
    fn example_polynomial_sequence() {
        let f = RingMatrix::scalar(parse_poly("2*t^2 - t + 2", None).unwrap());
        let fam = parse_family("odd:1..25", Law::abelian(1), 2).unwrap();
        let r = entropy_sequence(&f, &fam, 2, 8, &ReportOptions::default(), &Limits::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Converged);
        assert_eq!(r.stabilized_value.to_residue().unwrap().to_i64(), Some(164));
        assert!(r.to_csv().lines().nth(2).unwrap().starts_with("C3,3,27,0,"));
    }

    #[test]
    fn snirelman_examples() {
        let f = parse_poly("2*t^2 - t + 2", None).unwrap();
        let r = snirelman_mahler(&f, 2, &[1, 3], 8, &ReportOptions::default(), &Limits::default()).unwrap();
        let log3 = PadicScalar::from_i64(3, 2, 8).unwrap().log().unwrap();
        assert_eq!(r.records[0].normalized, log3);
        assert_eq!(r.records[1].fix_count, BigInt::from(27));
        assert_eq!(r.records[1].normalized, log3);
        assert_eq!(
            snirelman_mahler(&f, 2, &[1, 2], 8, &ReportOptions::default(), &Limits::default()),
            Err(Error::ModulusNotCoprimeToP { n: 2, p: 2 })
        );
        let c = parse_poly("7", None).unwrap();
        let r = snirelman_mahler(&c, 3, &[1, 2, 4], 6, &ReportOptions::default(), &Limits::default()).unwrap();
        let log7 = PadicScalar::from_i64(7, 3, 6).unwrap().log().unwrap();
        assert!(r.normalized().all(|v| *v == log7));
    }

    #[test]
    fn monomials_have_trivial_records() {
        let f = RingMatrix::scalar(parse_poly("-t^3", None).unwrap());
        let fam = parse_family("1,2,3,4", Law::abelian(1), 2).unwrap();
        let r = entropy_sequence(&f, &fam, 2, 6, &ReportOptions::default(), &Limits::default()).unwrap();
        assert!(r.records.iter().all(|x| x.fix_count == BigInt::from(1) && x.normalized.is_zero()));
    }

    #[test]
    fn family_parsing() {
        let law = Law::abelian(2);
        assert_eq!(parse_family("coprime:1..5", law, 3).unwrap().len(), 4);
        assert_eq!(parse_family("2,4", law, 3).unwrap()[1].to_string(), "C4xC4");
        assert_eq!(parse_family("C2xC3; C4xC6", law, 3).unwrap()[0].to_string(), "C2xC3");
        assert_eq!(parse_family("all:2..4", Law::Heisenberg, 3).unwrap()[2].to_string(), "H4");
        assert!(parse_family("prime:1..4", law, 3).is_err());
        assert_eq!(default_family(Law::Heisenberg, 3, 4).iter().map(|q| q.to_string()).collect::<Vec<_>>(), [
            "H2", "H4", "H5", "H7"
        ]);
        let f = RingMatrix::scalar(parse_poly("t + 3", None).unwrap());
        let fam = parse_family("3,2", Law::abelian(1), 3).unwrap();
        assert_eq!(
            entropy_sequence(&f, &fam, 3, 4, &ReportOptions::default(), &Limits::default()),
            Err(Error::FamilyNotIncreasing)
        );
    }
}
