use padic_entropy::entropy::entropy_records;
use padic_entropy::mahler::mahler_1d_detailed;
use padic_entropy::selftest::run_selftest;
use padic_entropy::*;
use serde_json::{json, Value};

use crate::render::{envelope, error_envelope, fields, padic, table};
use crate::{Command, Common, Format, Group, Quotients, Report};

pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: u8,
}

enum Failure {
    /// Malformed input or flags.
    Usage(String),
    /// Well-formed input the mathematics refuses, or a library error.
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run = Result<String, Failure>;

pub fn run(cmd: Command) -> Outcome {
    let (name, format) = match &cmd {
        Command::UnitCheck(c) | Command::Mahler(c) => (command_name(&cmd), c.format),
        Command::Fixcount { common, .. } | Command::Entropy { common, .. } | Command::Detlog { common, .. } => {
            (command_name(&cmd), common.format)
        }
        Command::Selftest { format, .. } => (command_name(&cmd), *format),
    };
    let result = match cmd {
        Command::UnitCheck(c) => unit_check(&c),
        Command::Fixcount { common, quotients } => fixcount(&common, &quotients),
        Command::Entropy { common, quotients, report, snirelman } => entropy(&common, &quotients, &report, snirelman),
        Command::Mahler(c) => mahler(&c),
        Command::Detlog { common, quotient } => detlog(&common, quotient.as_deref()),
        Command::Selftest { seed, cases, format } => return selftest(seed, cases, format),
    };
    match result {
        Ok(stdout) => Outcome { stdout, stderr: None, code: 0 },
        Err(f) => {
            let (code, id, msg) = match f {
                Failure::Usage(m) => (1, "USAGE", m),
                Failure::Core(e) => (if e.is_refusal() { 2 } else { 1 }, e.code(), e.to_string()),
            };
            let stdout = if format == Format::Json { error_envelope(name, id, &msg) } else { String::new() };
            Outcome { stdout, stderr: Some(format!("error[{id}]: {msg}")), code }
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::UnitCheck(_) => "unit-check",
        Command::Fixcount { .. } => "fixcount",
        Command::Entropy { .. } => "entropy",
        Command::Mahler(_) => "mahler",
        Command::Detlog { .. } => "detlog",
        Command::Selftest { .. } => "selftest",
    }
}

fn law_hint(c: &Common) -> Option<Law> {
    match c.group {
        Group::Laurent => None,
        Group::Heisenberg => Some(Law::Heisenberg),
    }
}

fn input(c: &Common) -> Result<PolyMatrix, Failure> {
    let text = match (&c.poly, &c.input) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(Failure::Usage("one of --poly or --input is required".into())),
    };
    parse_matrix(&text, law_hint(c)).map_err(|e| match e {
        Error::Syntax { .. } | Error::DimensionInconsistent(_) => Failure::Usage(e.to_string()),
        e => Failure::Core(e),
    })
}

fn scalar(f: &PolyMatrix) -> Result<&LaurentPoly, Failure> {
    if f.size() == 1 {
        Ok(f.get(0, 0))
    } else {
        Err(Failure::Usage("this command takes a single polynomial, not a matrix".into()))
    }
}

fn check_prime(p: u64) -> Result<(), Failure> {
    if padic_entropy::arith::is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p).into())
    }
}

fn quotient_list(q: &Quotients, law: Law, p: u64, default_count: usize) -> Result<Vec<QuotientSpec>, Failure> {
    let usage = |e: Error| Failure::Usage(e.to_string());
    match (&q.quotient, &q.family) {
        (Some(s), _) => Ok(vec![s.parse().map_err(usage)?]),
        (None, Some(f)) => parse_family(f, law, p).map_err(usage),
        (None, None) => Ok(default_family(law, p, default_count)),
    }
}

fn unit_check(c: &Common) -> Run {
    check_prime(c.p)?;
    let f = input(c)?;
    let law = f.law();
    let poly = if f.size() == 1 {
        f.get(0, 0).clone()
    } else if law.is_abelian() {
        det_laurent_matrix(&f)?
    } else {
        return Err(Failure::Usage("matrices over the Heisenberg group are checked by `detlog`".into()));
    };
    let u = c0_unit_normalize(&poly, c.p, c.prec)?;
    let gamma = print_poly(&LaurentPoly::monomial(law, u.nu, 1.into()));
    let g = print_poly(&u.g);
    Ok(match c.format {
        Format::Json => envelope(
            "unit-check",
            json!({
                "p": c.p, "precision": c.prec, "input": print_poly(&poly), "unit": true,
                "a": u.a, "c": u.c.to_string(), "gamma": gamma, "g": g,
            }),
        ),
        Format::Table | Format::Csv => fields(&[
            ("input", print_poly(&poly)),
            ("unit", "yes".into()),
            ("form", format!("{}^a * c * gamma * (1 + {} g)", c.p, c.p)),
            ("a", u.a.to_string()),
            ("c", u.c.to_string()),
            ("gamma", gamma),
            ("g", format!("{g} (mod {}^{})", c.p, c.prec)),
        ]),
    })
}

/// `n` when the quotient is `(n, ..., n)` with `d` factors.
fn torus_moduli(q: &QuotientSpec, d: usize) -> Option<Vec<u64>> {
    let ns: Vec<u64> = match q {
        QuotientSpec::Cyclic { n } => vec![*n],
        QuotientSpec::Product { factors } => factors
            .iter()
            .map(|f| match f {
                QuotientSpec::Cyclic { n } => Some(*n),
                _ => None,
            })
            .collect::<Option<_>>()?,
        QuotientSpec::Heisenberg { .. } => return None,
    };
    (ns.len() == d).then_some(ns)
}

fn record_row(r: &FixCountRecord) -> Vec<String> {
    vec![
        r.quotient.to_string(),
        r.index.to_string(),
        r.fix_count.to_string(),
        r.p_valuation.to_string(),
        padic(&r.normalized),
    ]
}

const RECORD_HEADER: [&str; 5] = ["quotient", "index", "fix_count", "v_p", "normalized"];

fn csv_records(records: &[FixCountRecord]) -> String {
    let mut out = String::from("quotient,index,fix_count,v_p,normalized\n");
    for r in records {
        out += &format!("{},{},{},{},{}\n", r.quotient, r.index, r.fix_count, r.p_valuation, r.normalized.digits());
    }
    out
}

fn fixcount(c: &Common, q: &Quotients) -> Run {
    check_prime(c.p)?;
    let f = input(c)?;
    let law = f.law();
    let family = quotient_list(q, law, c.p, 5)?;
    let lim = Limits::default();
    let records: Vec<FixCountRecord> =
        family.iter().map(|q| fix_count(&f, q, c.p, c.prec, &lim)).collect::<Result<_>>()?;
    // Independent character-sum cross-check where it applies.
    let mut checks = Vec::new();
    for r in &records {
        let check = match (law, torus_moduli(&r.quotient, law.dim())) {
            (Law::Abelian { .. }, Some(ns)) => {
                let prod = fix_count_char_crt(&f, &ns, &lim)?;
                Some(prod == r.signed_det)
            }
            _ => None,
        };
        checks.push(check);
    }
    Ok(match c.format {
        Format::Json => {
            let recs: Vec<Value> = records
                .iter()
                .zip(&checks)
                .map(|(r, ch)| {
                    let mut v = serde_json::to_value(r).expect("serializable");
                    v["character_check"] = json!(ch);
                    v
                })
                .collect();
            envelope("fixcount", json!({ "p": c.p, "precision": c.prec, "input": print_matrix(&f), "records": recs }))
        }
        Format::Csv => csv_records(&records),
        Format::Table => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .zip(&checks)
                .map(|(r, ch)| {
                    let mut row = record_row(r);
                    row.push(match ch {
                        Some(true) => "agrees".into(),
                        Some(false) => "MISMATCH".into(),
                        None => "-".into(),
                    });
                    row
                })
                .collect();
            let mut header = RECORD_HEADER.to_vec();
            header.push("characters");
            table(&header, &rows)
        }
    })
}

fn entropy(c: &Common, q: &Quotients, rep: &Report, snirelman: bool) -> Run {
    check_prime(c.p)?;
    let f = input(c)?;
    let law = f.law();
    let opts = ReportOptions { window: rep.window as usize, target: rep.target };
    let lim = Limits::default();
    let report = if snirelman {
        let poly = scalar(&f)?;
        if !law.is_abelian() {
            return Err(Error::NonAbelianQuotient("Heisenberg".into()).into());
        }
        let family = match (&q.quotient, &q.family) {
            (None, None) => parse_family(&format!("coprime:1..{}", 8 * c.p), law, c.p)
                .map_err(|e| Failure::Usage(e.to_string()))?,
            _ => quotient_list(q, law, c.p, 8)?,
        };
        let ns = family
            .iter()
            .map(|q| torus_moduli(q, law.dim()).filter(|ns| ns.iter().all(|&n| n == ns[0])).map(|ns| ns[0]))
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| Failure::Usage("the Snirelman route needs diagonal quotients (n, ..., n)".into()))?;
        snirelman_mahler(poly, c.p, &ns, c.prec, &opts, &lim)?
    } else {
        let family = quotient_list(q, law, c.p, 8)?;
        convergence_report(entropy_records(&f, &family, c.p, c.prec, &lim)?, &opts)?
    };
    let verdict = match report.verdict {
        Verdict::Converged => "converged",
        Verdict::Undecided => "undecided",
    };
    Ok(match c.format {
        Format::Json => envelope(
            "entropy",
            json!({
                "p": c.p, "precision": c.prec, "input": print_matrix(&f),
                "route": if snirelman { "snirelman" } else { "fixed-points" },
                "report": serde_json::to_value(&report).expect("serializable"),
            }),
        ),
        Format::Csv => format!(
            "{}# stable_digits={}\n# stabilized={}\n# verdict={verdict}\n",
            report.to_csv(),
            report.stable_digits,
            padic(&report.stabilized_value)
        ),
        Format::Table => {
            let rows: Vec<Vec<String>> = report.records.iter().map(record_row).collect();
            let mut out = table(&RECORD_HEADER, &rows);
            out += "\n";
            out += &fields(&[
                ("consecutive agreement", format!("{:?}", report.consecutive_agreement)),
                ("stable digits", format!("{} (window {})", report.stable_digits, report.window)),
                ("stabilized value", padic(&report.stabilized_value)),
                ("verdict", format!("{verdict} (target {} digits)", report.target)),
            ]);
            out
        }
    })
}

fn mahler(c: &Common) -> Run {
    check_prime(c.p)?;
    let f = input(c)?;
    let poly = scalar(&f)?;
    let r = mahler_1d_detailed(poly, c.p, c.prec)?;
    let segments: Vec<Value> = r
        .polygon
        .segments
        .iter()
        .map(|s| json!({ "slope": slope(s.slope.num, s.slope.den), "length": s.length }))
        .collect();
    Ok(match c.format {
        Format::Json => envelope(
            "mahler",
            json!({
                "p": c.p, "precision": c.prec, "input": print_poly(poly),
                "value": r.value, "outside_form": r.outside_form,
                "inside_roots": r.inside_roots, "vertices": r.polygon.vertices, "segments": segments,
            }),
        ),
        Format::Table | Format::Csv => {
            let slopes: Vec<String> = r
                .polygon
                .root_valuations()
                .iter()
                .map(|(v, m)| format!("{} x{m}", slope(v.num, v.den)))
                .collect();
            fields(&[
                ("input", print_poly(poly)),
                ("root valuations", slopes.join(", ")),
                ("roots inside", r.inside_roots.to_string()),
                ("m_p", padic(&r.value)),
                ("digits", r.value.digits()),
                ("outside form", padic(&r.outside_form)),
            ])
        }
    })
}

fn slope(num: i64, den: i64) -> String {
    if den == 1 {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

fn detlog(c: &Common, quotient: Option<&str>) -> Run {
    check_prime(c.p)?;
    let f = input(c)?;
    let law = f.law();
    let (route, value) = if let Some(q) = quotient {
        let spec: QuotientSpec = q.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
        let lim = Limits::default();
        let group = build_quotient_group(&spec, &lim)?;
        let reduced = reduce_to_quotient(&f, &group)?;
        (format!("finite quotient {spec}"), logdet_finite(&reduced, c.p, c.prec, &lim)?)
    } else if padic_entropy::detlog::is_one_unit(&f, c.p) {
        ("trace of the logarithm series".to_string(), tr_log_one_unit(&f, c.p, c.prec)?)
    } else if f.size() == 1 {
        ("unit normalization".to_string(), logdet_unit(f.get(0, 0), c.p, c.prec)?)
    } else if law.is_abelian() {
        ("determinant, then unit normalization".to_string(), logdet_unit(&det_laurent_matrix(&f)?, c.p, c.prec)?)
    } else {
        return Err(Error::NotAOneUnit(c.p).into());
    };
    Ok(match c.format {
        Format::Json => envelope(
            "detlog",
            json!({ "p": c.p, "precision": c.prec, "input": print_matrix(&f), "route": route, "value": value }),
        ),
        Format::Table | Format::Csv => fields(&[
            ("input", print_matrix(&f)),
            ("route", route),
            ("log_p det", padic(&value)),
            ("digits", value.digits()),
        ]),
    })
}

fn selftest(seed: u64, cases: usize, format: Format) -> Outcome {
    let report = run_selftest(seed, cases);
    let stdout = match format {
        Format::Json => envelope("selftest", serde_json::to_value(&report).expect("serializable")),
        Format::Csv => {
            let mut out = String::from("check,cases,failures\n");
            for c in &report.checks {
                out += &format!("{},{},{}\n", c.name, c.cases, c.failures);
            }
            out
        }
        Format::Table => report.to_string(),
    };
    if report.passed() {
        Outcome { stdout, stderr: None, code: 0 }
    } else {
        Outcome { stdout, stderr: Some("selftest: some checks failed".into()), code: 1 }
    }
}
