//! Command-line frontend: primality tests, certification, pseudoprime
//! censuses, family searches, operation-count benches and certificate
//! verification, with machine-readable JSON output and stable exit codes.
//!
//! Exit codes: 0 = prime / valid, 1 = composite / invalid,
//! 2 = probable-prime or inconclusive, 64 = usage error,
//! 69 = resource limit, 70 = internal error.

use clap::{Parser, Subcommand, ValueEnum};
use gproth::arith::ScheduleMode;
use gproth::bench::{scaling_run, BenchError, OpCountReport, DEFAULT_DIGIT_CAP};
use gproth::census::{
    enumerate_pseudoprimes, search_family, CensusError, CensusKind, SieveOracle,
    DEFAULT_SIEVE_CAP,
};
use gproth::forms::FormError;
use gproth::primality::{
    certify_jump, certify_scan, complete_strong, generalized_proth, p_miller_rabin, pocklington,
    proth_classic, verify_certificate, CertifyStrategy, TestContext, TestError,
    DEFAULT_BASE_RETRY_CAP,
};
use gproth::verdict::{
    CompositeReason, Outcome, PrimalityCertificate, TestVerdict,
};
use gproth::{make_form, Natural, ProthForm};
use num_traits::{Num, ToPrimitive};
use std::io::{Read, Write};
use std::path::PathBuf;

const EXIT_PRIME: i32 = 0;
const EXIT_COMPOSITE: i32 = 1;
const EXIT_INDEFINITE: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_RESOURCE: i32 = 69;
const EXIT_INTERNAL: i32 = 70;

#[derive(Parser)]
#[command(
    name = "gproth",
    version,
    about = "Primality testing and certification for numbers K*p^n + 1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one primality test and print a verdict record.
    Test {
        /// Form expression "K*p^n+1" (alternative to --K/--p/--n).
        form: Option<String>,
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        /// Test to run; auto picks gproth for K < p^n, else pmr.
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value = "2")]
        base: String,
    },
    /// Certify primality, retrying bases, and optionally write the
    /// certificate to a file.
    Certify {
        form: Option<String>,
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        /// First base to try; later retries walk the prime ladder.
        #[arg(long)]
        base: Option<String>,
        /// 1 = full chain scan, 2 = jump to the threshold index.
        #[arg(long, default_value_t = 2)]
        algorithm: u8,
        /// Where to write the certificate record on success.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BASE_RETRY_CAP)]
        max_bases: usize,
    },
    /// Enumerate pseudoprimes below a limit.
    Census {
        /// "pstrong" (needs --p) or "complete".
        #[arg(long)]
        kind: String,
        #[arg(long)]
        p: Option<String>,
        /// Comma-separated bases, e.g. --bases 2,3
        #[arg(long, value_delimiter = ',', default_value = "2")]
        bases: Vec<String>,
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan a family K*p^n+1 over a range of exponents.
    Search {
        #[arg(long = "K")]
        k: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        n_from: u32,
        #[arg(long)]
        n_to: u32,
        #[arg(long, default_value = "2")]
        base: String,
    },
    /// Instrumented certification runs: operation counts and timing.
    Bench {
        #[arg(long = "K", default_value = "2")]
        k: String,
        #[arg(long)]
        p: String,
        /// Comma-separated exponents, e.g. --n-list 100,200,400
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u32>,
        #[arg(long, value_enum, default_value_t = BenchMode::Both)]
        mode: BenchMode,
        /// Also print an aligned table to stderr.
        #[arg(long)]
        table: bool,
        #[arg(long, default_value_t = DEFAULT_DIGIT_CAP)]
        digit_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate record (from --cert or stdin).
    Verify {
        #[arg(long)]
        cert: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Proth,
    Gproth,
    Pocklington,
    Pmr,
    Complete,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchMode {
    Binary,
    Scheduled,
    Both,
}

enum CliError {
    Usage(String),
    Resource(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Resource(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<TestError> for CliError {
    fn from(e: TestError) -> Self {
        match e {
            TestError::FactorizationIncomplete { .. } | TestError::PepinIndexOutOfRange { .. } => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::SieveCapExceeded { .. } | CensusError::LimitBeyondSieve { .. } => {
                CliError::Resource(e.to_string())
            }
            CensusError::OracleMismatch { .. } => CliError::Internal(e.to_string()),
            CensusError::Form(f) => f.into(),
            CensusError::Test(t) => t.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::DigitCapExceeded { .. } => CliError::Resource(e.to_string()),
            BenchError::Form(f) => f.into(),
            BenchError::Test(t) => t.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("io error: {e}"))
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            eprintln!("{e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gproth: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Test {
            form,
            k,
            p,
            n,
            method,
            base,
        } => cmd_test(form, k, p, n, method, base),
        Command::Certify {
            form,
            k,
            p,
            n,
            base,
            algorithm,
            out,
            max_bases,
        } => cmd_certify(form, k, p, n, base, algorithm, out, max_bases),
        Command::Census {
            kind,
            p,
            bases,
            limit,
            out,
        } => cmd_census(kind, p, bases, limit, out),
        Command::Search {
            k,
            p,
            n_from,
            n_to,
            base,
        } => cmd_search(k, p, n_from, n_to, base),
        Command::Bench {
            k,
            p,
            n_list,
            mode,
            table,
            digit_cap,
            out,
        } => cmd_bench(k, p, n_list, mode, table, digit_cap, out),
        Command::Verify { cert } => cmd_verify(cert),
    }
}

fn parse_natural(field: &str, raw: &str) -> Result<Natural, CliError> {
    Natural::from_str_radix(raw.trim(), 10)
        .map_err(|_| CliError::Usage(format!("{field}: `{raw}` is not a decimal integer")))
}

/// "K*p^n+1" -> (K, p, n)
fn parse_form_expr(expr: &str) -> Result<(Natural, Natural, u32), CliError> {
    let bad = || CliError::Usage(format!("`{expr}`: expected a form like 2*3^5+1"));
    let body = expr.trim().strip_suffix("+1").ok_or_else(bad)?;
    let (k_raw, rest) = body.split_once('*').ok_or_else(bad)?;
    let (p_raw, n_raw) = rest.split_once('^').ok_or_else(bad)?;
    let k = parse_natural("K", k_raw)?;
    let p = parse_natural("p", p_raw)?;
    let n: u32 = n_raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("n: `{n_raw}` is not a small integer")))?;
    Ok((k, p, n))
}

fn resolve_form(
    expr: Option<String>,
    k: Option<String>,
    p: Option<String>,
    n: Option<u32>,
) -> Result<ProthForm, CliError> {
    let (k, p, n) = match (expr, k, p, n) {
        (Some(e), None, None, None) => parse_form_expr(&e)?,
        (None, Some(k), Some(p), Some(n)) => {
            (parse_natural("K", &k)?, parse_natural("p", &p)?, n)
        }
        _ => {
            return Err(CliError::Usage(
                "give either a form expression like 2*3^5+1, or all of --K, --p and --n".into(),
            ))
        }
    };
    Ok(make_form(k, p, n)?)
}

fn sieve_cap() -> u64 {
    std::env::var("GPROTH_SIEVE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SIEVE_CAP)
}

fn emit(out: &mut Option<std::fs::File>, line: &str) -> Result<(), CliError> {
    match out {
        Some(f) => writeln!(f, "{line}")?,
        None => println!("{line}"),
    }
    Ok(())
}

fn open_out(path: &Option<PathBuf>) -> Result<Option<std::fs::File>, CliError> {
    Ok(match path {
        Some(p) => Some(std::fs::File::create(p)?),
        None => None,
    })
}

fn witness_json(witness: &gproth::verdict::CompositenessWitness) -> serde_json::Value {
    let mut obj = serde_json::json!({
        "reason": witness.reason.label(),
        "base": witness.base.to_string(),
    });
    match &witness.reason {
        CompositeReason::ChainBreak {
            prime,
            index,
            penultimate,
        } => {
            obj["p"] = serde_json::json!(prime.to_string());
            obj["index"] = serde_json::json!(index);
            obj["penultimate"] = serde_json::json!(penultimate.to_string());
        }
        CompositeReason::FactorFound(d) => {
            obj["factor"] = serde_json::json!(d.to_string());
        }
        CompositeReason::PocklingtonGcd(d) => {
            obj["gcd"] = serde_json::json!(d.to_string());
        }
        CompositeReason::FermatFail => {}
    }
    obj
}

fn certificate_json(cert: &PrimalityCertificate) -> serde_json::Value {
    let mut obj = serde_json::json!({
        "K": cert.form.k().to_string(),
        "p": cert.form.prime().to_string(),
        "n": cert.form.exponent(),
        "N": cert.form.value().to_string(),
        "a": cert.base.to_string(),
        "j": cert.index,
        "algorithm": cert.algorithm.label(),
    });
    if let Some(cp) = &cert.checkpoints {
        obj["s_prev"] = serde_json::json!(cp.penultimate.to_string());
        obj["s_last"] = serde_json::json!(cp.last.to_string());
    }
    obj
}

fn verdict_json(form: &ProthForm, method: &str, base: &Natural, verdict: &TestVerdict) -> serde_json::Value {
    let mut obj = serde_json::json!({
        "form": form.to_string(),
        "K": form.k().to_string(),
        "p": form.prime().to_string(),
        "n": form.exponent(),
        "N": form.value().to_string(),
        "method": method,
        "base": base.to_string(),
        "outcome": verdict.outcome.label(),
    });
    match &verdict.outcome {
        Outcome::Prime(cert) => obj["certificate"] = certificate_json(cert),
        Outcome::Composite(w) => obj["witness"] = witness_json(w),
        Outcome::ProbablePrime(kind) => obj["kind"] = serde_json::json!(kind.label()),
        Outcome::Inconclusive(reason) => obj["reason"] = serde_json::json!(reason.label()),
    }
    obj
}

fn exit_for(verdict: &TestVerdict) -> i32 {
    match verdict.outcome {
        Outcome::Prime(_) => EXIT_PRIME,
        Outcome::Composite(_) => EXIT_COMPOSITE,
        Outcome::ProbablePrime(_) | Outcome::Inconclusive(_) => EXIT_INDEFINITE,
    }
}

fn cmd_test(
    expr: Option<String>,
    k: Option<String>,
    p: Option<String>,
    n: Option<u32>,
    method: Method,
    base: String,
) -> Result<i32, CliError> {
    let form = resolve_form(expr, k, p, n)?;
    let base = parse_natural("base", &base)?;
    let mut ctx = TestContext::new();
    let method = match method {
        Method::Auto => {
            if form.is_generalized() {
                Method::Gproth
            } else {
                Method::Pmr
            }
        }
        m => m,
    };
    let (label, verdict) = match method {
        Method::Proth => ("proth", proth_classic(&form, &base, &mut ctx)?),
        Method::Gproth => ("gproth", generalized_proth(&form, &base, &mut ctx)?),
        Method::Pocklington => ("pocklington", pocklington(&form, &base, &mut ctx)?),
        Method::Pmr => (
            "pmr",
            p_miller_rabin(form.value(), form.prime(), &base, &mut ctx)?,
        ),
        Method::Complete => ("complete", complete_strong(form.value(), &base, &mut ctx)?),
        Method::Auto => unreachable!("resolved above"),
    };
    println!("{}", verdict_json(&form, label, &base, &verdict));
    Ok(exit_for(&verdict))
}

#[allow(clippy::too_many_arguments)]
fn cmd_certify(
    expr: Option<String>,
    k: Option<String>,
    p: Option<String>,
    n: Option<u32>,
    base: Option<String>,
    algorithm: u8,
    out: Option<PathBuf>,
    max_bases: usize,
) -> Result<i32, CliError> {
    let form = resolve_form(expr, k, p, n)?;
    let strategy = match algorithm {
        1 => CertifyStrategy::Scan,
        2 => CertifyStrategy::Jump,
        other => {
            return Err(CliError::Usage(format!(
                "--algorithm must be 1 or 2, got {other}"
            )))
        }
    };
    let mut ladder: Vec<Natural> = Vec::new();
    if let Some(b) = base {
        ladder.push(parse_natural("base", &b)?);
    }
    let mut candidate = 2u64;
    while ladder.len() < max_bases.max(1) {
        if gproth::census::is_prime_u64(candidate) {
            let b = Natural::from(candidate);
            if !ladder.contains(&b) {
                ladder.push(b);
            }
        }
        candidate += 1;
    }
    ladder.truncate(max_bases.max(1));

    let mut ctx = TestContext::new();
    let mut attempts: Vec<Natural> = Vec::new();
    let mut last: Option<TestVerdict> = None;
    for b in &ladder {
        attempts.push(b.clone());
        let verdict = match strategy {
            CertifyStrategy::Scan => certify_scan(&form, b, &mut ctx),
            CertifyStrategy::Jump => certify_jump(&form, b, &mut ctx)?,
        };
        let definite = verdict.is_prime() || verdict.is_composite();
        last = Some(verdict);
        if definite {
            break;
        }
    }
    let verdict = last.expect("at least one base attempted");
    let last_base = attempts.last().expect("nonempty").clone();
    let mut record = verdict_json(&form, "certify", &last_base, &verdict);
    record["algorithm"] = serde_json::json!(match strategy {
        CertifyStrategy::Scan => "scan",
        CertifyStrategy::Jump => "jump",
    });
    record["attempts"] = serde_json::json!(attempts
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>());
    println!("{record}");
    if let Some(cert) = verdict.certificate() {
        if let Some(path) = &out {
            std::fs::write(path, cert.to_record())?;
        }
    }
    Ok(exit_for(&verdict))
}

fn cmd_census(
    kind: String,
    p: Option<String>,
    bases: Vec<String>,
    limit: u64,
    out: Option<PathBuf>,
) -> Result<i32, CliError> {
    let kind = match kind.as_str() {
        "pstrong" | "p-strong" => CensusKind::PStrong,
        "complete" | "complete-strong" => CensusKind::CompleteStrong,
        other => {
            return Err(CliError::Usage(format!(
                "--kind must be pstrong or complete, got `{other}`"
            )))
        }
    };
    let p = match p {
        Some(raw) => Some(parse_natural("p", &raw)?),
        None => None,
    };
    let bases: Vec<Natural> = bases
        .iter()
        .map(|b| parse_natural("bases", b))
        .collect::<Result<_, _>>()?;
    let oracle = SieveOracle::build_with_cap(limit.max(2), sieve_cap())?;
    let records = enumerate_pseudoprimes(&oracle, kind, p.as_ref(), &bases, limit)?;
    let mut out = open_out(&out)?;
    for record in &records {
        emit(&mut out, &record.to_json_line())?;
    }
    Ok(0)
}

fn cmd_search(
    k: String,
    p: String,
    n_from: u32,
    n_to: u32,
    base: String,
) -> Result<i32, CliError> {
    let k = parse_natural("K", &k)?;
    let p = parse_natural("p", &p)?;
    let base = parse_natural("base", &base)?;
    if n_from >= 1 && n_from <= n_to {
        // Surface form-level problems (composite p, shared factors) as a
        // usage error before scanning.
        make_form(k.clone(), p.clone(), n_from)?;
    }
    let oracle = build_search_oracle(&k, &p, n_to);
    let samples = search_family(&k, &p, n_from..=n_to, &base, oracle.as_ref());
    let mut primes = Vec::new();
    for sample in &samples {
        match &sample.result {
            Ok(verdict) => {
                let value = &k * p.pow(sample.n) + Natural::from(1u32);
                let mut line = serde_json::json!({
                    "n": sample.n,
                    "N": value.to_string(),
                    "outcome": verdict.outcome.label(),
                });
                if let Some(cert) = verdict.certificate() {
                    line["certificate"] = certificate_json(cert);
                    primes.push(sample.n);
                }
                println!("{line}");
            }
            Err(e) => {
                println!(
                    "{}",
                    serde_json::json!({ "n": sample.n, "error": e.to_string() })
                );
            }
        }
    }
    let summary = serde_json::json!({
        "summary": {
            "tested": samples.len(),
            "primes": primes.len(),
            "prime_exponents": primes,
        }
    });
    println!("{summary}");
    Ok(0)
}

fn build_search_oracle(k: &Natural, p: &Natural, n_to: u32) -> Option<SieveOracle> {
    let largest = k * p.pow(n_to) + Natural::from(1u32);
    let v = largest.to_u64()?;
    if v < (1 << 24).min(sieve_cap()) {
        SieveOracle::build_with_cap(v + 1, sieve_cap()).ok()
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    k: String,
    p: String,
    n_list: Vec<u32>,
    mode: BenchMode,
    table: bool,
    digit_cap: usize,
    out: Option<PathBuf>,
) -> Result<i32, CliError> {
    let k = parse_natural("K", &k)?;
    let p = parse_natural("p", &p)?;
    if n_list.is_empty() {
        return Err(CliError::Usage("--n-list must not be empty".into()));
    }
    let modes: &[ScheduleMode] = match mode {
        BenchMode::Binary => &[ScheduleMode::Binary],
        BenchMode::Scheduled => &[ScheduleMode::Scheduled],
        BenchMode::Both => &[ScheduleMode::Binary, ScheduleMode::Scheduled],
    };
    let base = Natural::from(2u32);
    let mut reports: Vec<OpCountReport> = Vec::new();
    for m in modes {
        reports.extend(scaling_run(&k, &p, &n_list, &base, *m, digit_cap)?);
    }
    let mut out = open_out(&out)?;
    for report in &reports {
        emit(&mut out, &report.to_json_line())?;
    }
    if table {
        eprintln!("{}", OpCountReport::table_header());
        for report in &reports {
            eprintln!("{}", report.table_row());
        }
    }
    Ok(0)
}

fn cmd_verify(cert: Option<PathBuf>) -> Result<i32, CliError> {
    let text = match cert {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let cert = PrimalityCertificate::from_record(&text)
        .map_err(|e| CliError::Usage(format!("bad certificate: {e}")))?;
    let valid = verify_certificate(&cert);
    println!(
        "{}",
        serde_json::json!({
            "N": cert.form.value().to_string(),
            "a": cert.base.to_string(),
            "j": cert.index,
            "valid": valid,
        })
    );
    Ok(if valid { 0 } else { 1 })
}
