//! Structured outcomes for every primality test: verdicts, re-checkable
//! primality certificates, and compositeness witnesses.

use crate::arith::Natural;
use crate::forms::{make_form, FormError, ProthForm};
use num_traits::Num;
use thiserror::Error;

/// Which test produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Pepin,
    ProthClassic,
    GeneralizedProth,
    Pocklington,
    PMillerRabin,
    CompleteStrong,
    CertifyScan,
    CertifyJump,
}

impl TestKind {
    pub fn label(&self) -> &'static str {
        match self {
            TestKind::Pepin => "pepin",
            TestKind::ProthClassic => "proth",
            TestKind::GeneralizedProth => "gproth",
            TestKind::Pocklington => "pocklington",
            TestKind::PMillerRabin => "pmr",
            TestKind::CompleteStrong => "complete-strong",
            TestKind::CertifyScan => "scan",
            TestKind::CertifyJump => "jump",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "pepin" => TestKind::Pepin,
            "proth" => TestKind::ProthClassic,
            "gproth" => TestKind::GeneralizedProth,
            "pocklington" => TestKind::Pocklington,
            "pmr" => TestKind::PMillerRabin,
            "complete-strong" => TestKind::CompleteStrong,
            "scan" => TestKind::CertifyScan,
            "jump" => TestKind::CertifyJump,
            _ => return None,
        })
    }
}

impl std::fmt::Display for TestKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Flavor of a probable-prime outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbableKind {
    /// Passed the chain test for one prime divisor of `N - 1`.
    PStrong,
    /// Passed for every prime divisor of `N - 1`.
    CompleteStrong,
}

impl ProbableKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProbableKind::PStrong => "p-strong",
            ProbableKind::CompleteStrong => "complete-strong",
        }
    }
}

/// Why a sufficiency-only test stopped without an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    /// The certifying congruence did not hold; the base may simply be a
    /// p-th power residue.
    CongruenceFailed,
    /// `gcd(a^{(N-1)/p} - 1, N) = N`: the base carries no information.
    UnitGcd,
    /// `a ≡ 0 (mod N)`: degenerate base, no conclusion possible.
    DegenerateBase,
}

impl InconclusiveReason {
    pub fn label(&self) -> &'static str {
        match self {
            InconclusiveReason::CongruenceFailed => "congruence-failed",
            InconclusiveReason::UnitGcd => "unit-gcd",
            InconclusiveReason::DegenerateBase => "degenerate-base",
        }
    }
}

/// Data that proves compositeness in one checked computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompositeReason {
    /// `base^{N-1} != 1 (mod N)`.
    FermatFail,
    /// `S_i == 1` while `Phi_p(S_{i-1}) != 0` with `S_{i-1} != 1`:
    /// impossible modulo a prime.
    ChainBreak {
        prime: Natural,
        index: u32,
        penultimate: Natural,
    },
    /// A nontrivial divisor.
    FactorFound(Natural),
    /// Nontrivial `gcd(a^{(N-1)/p} - 1, N)`.
    PocklingtonGcd(Natural),
}

impl CompositeReason {
    pub fn label(&self) -> &'static str {
        match self {
            CompositeReason::FermatFail => "fermat-fail",
            CompositeReason::ChainBreak { .. } => "chain-break",
            CompositeReason::FactorFound(_) => "factor-found",
            CompositeReason::PocklingtonGcd(_) => "pocklington-gcd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositenessWitness {
    pub base: Natural,
    pub reason: CompositeReason,
}

/// Stored chain values `S_{j-1}` and `S_j` for integrity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCheckpoints {
    pub penultimate: Natural,
    pub last: Natural,
}

/// A self-contained proof of primality: base `a` and index `j` such that
/// `Phi_p(a^{K * p^{j-1}}) ≡ 0 (mod N)` while `p^{2j} > K * p^n`.
/// Both conditions are re-checkable from the stored fields alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalityCertificate {
    pub form: ProthForm,
    pub base: Natural,
    pub index: u32,
    pub algorithm: TestKind,
    pub checkpoints: Option<ChainCheckpoints>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Prime(PrimalityCertificate),
    Composite(CompositenessWitness),
    ProbablePrime(ProbableKind),
    Inconclusive(InconclusiveReason),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Prime(_) => "prime",
            Outcome::Composite(_) => "composite",
            Outcome::ProbablePrime(_) => "probable-prime",
            Outcome::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Outcome of one test run, tagged with the test that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestVerdict {
    pub test: TestKind,
    pub outcome: Outcome,
}

impl TestVerdict {
    pub fn is_prime(&self) -> bool {
        matches!(self.outcome, Outcome::Prime(_))
    }

    pub fn is_composite(&self) -> bool {
        matches!(self.outcome, Outcome::Composite(_))
    }

    pub fn is_probable_prime(&self) -> bool {
        matches!(self.outcome, Outcome::ProbablePrime(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self.outcome, Outcome::Inconclusive(_))
    }

    pub fn certificate(&self) -> Option<&PrimalityCertificate> {
        match &self.outcome {
            Outcome::Prime(cert) => Some(cert),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&CompositenessWitness> {
        match &self.outcome {
            Outcome::Composite(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateParseError {
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("malformed line `{0}`: expected key=value")]
    MalformedLine(String),
    #[error("field `{field}` is not a valid number: `{value}`")]
    BadNumber { field: &'static str, value: String },
    #[error("stored N = {stored} does not equal K*p^n + 1 = {computed}")]
    ValueMismatch { stored: Natural, computed: Natural },
    #[error("unknown algorithm label `{0}`")]
    BadAlgorithm(String),
    #[error("checkpoint fields must appear together")]
    HalfCheckpoint,
    #[error(transparent)]
    Form(#[from] FormError),
}

impl PrimalityCertificate {
    /// Render as a flat `key=value` record, one field per line, all
    /// numbers in decimal. The layout is stable so records can be checked
    /// by independent implementations.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("K={}\n", self.form.k()));
        out.push_str(&format!("p={}\n", self.form.prime()));
        out.push_str(&format!("n={}\n", self.form.exponent()));
        out.push_str(&format!("N={}\n", self.form.value()));
        out.push_str(&format!("a={}\n", self.base));
        out.push_str(&format!("j={}\n", self.index));
        out.push_str(&format!("algorithm={}\n", self.algorithm.label()));
        if let Some(cp) = &self.checkpoints {
            out.push_str(&format!("s_prev={}\n", cp.penultimate));
            out.push_str(&format!("s_last={}\n", cp.last));
        }
        out
    }

    /// Parse a record produced by [`to_record`](Self::to_record).
    ///
    /// Strict: unknown keys are rejected, the form is re-validated and the
    /// stored `N` must equal `K * p^n + 1` exactly.
    pub fn from_record(text: &str) -> Result<Self, CertificateParseError> {
        let mut k = None;
        let mut p = None;
        let mut n = None;
        let mut value = None;
        let mut base = None;
        let mut index = None;
        let mut algorithm = None;
        let mut s_prev = None;
        let mut s_last = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, raw) = line
                .split_once('=')
                .ok_or_else(|| CertificateParseError::MalformedLine(line.to_string()))?;
            match key {
                "K" => k = Some(parse_nat("K", raw)?),
                "p" => p = Some(parse_nat("p", raw)?),
                "n" => n = Some(parse_u32("n", raw)?),
                "N" => value = Some(parse_nat("N", raw)?),
                "a" => base = Some(parse_nat("a", raw)?),
                "j" => index = Some(parse_u32("j", raw)?),
                "algorithm" => {
                    algorithm = Some(TestKind::from_label(raw).ok_or_else(|| {
                        CertificateParseError::BadAlgorithm(raw.to_string())
                    })?)
                }
                "s_prev" => s_prev = Some(parse_nat("s_prev", raw)?),
                "s_last" => s_last = Some(parse_nat("s_last", raw)?),
                other => return Err(CertificateParseError::UnknownField(other.to_string())),
            }
        }
        let k = k.ok_or(CertificateParseError::MissingField("K"))?;
        let p = p.ok_or(CertificateParseError::MissingField("p"))?;
        let n = n.ok_or(CertificateParseError::MissingField("n"))?;
        let value = value.ok_or(CertificateParseError::MissingField("N"))?;
        let base = base.ok_or(CertificateParseError::MissingField("a"))?;
        let index = index.ok_or(CertificateParseError::MissingField("j"))?;
        let algorithm = algorithm.ok_or(CertificateParseError::MissingField("algorithm"))?;
        let form = make_form(k, p, n)?;
        if form.value() != &value {
            return Err(CertificateParseError::ValueMismatch {
                stored: value,
                computed: form.value().clone(),
            });
        }
        let checkpoints = match (s_prev, s_last) {
            (Some(penultimate), Some(last)) => Some(ChainCheckpoints { penultimate, last }),
            (None, None) => None,
            _ => return Err(CertificateParseError::HalfCheckpoint),
        };
        Ok(PrimalityCertificate {
            form,
            base,
            index,
            algorithm,
            checkpoints,
        })
    }
}

fn parse_nat(field: &'static str, raw: &str) -> Result<Natural, CertificateParseError> {
    Natural::from_str_radix(raw, 10).map_err(|_| CertificateParseError::BadNumber {
        field,
        value: raw.to_string(),
    })
}

fn parse_u32(field: &'static str, raw: &str) -> Result<u32, CertificateParseError> {
    raw.parse()
        .map_err(|_| CertificateParseError::BadNumber {
            field,
            value: raw.to_string(),
        })
}
