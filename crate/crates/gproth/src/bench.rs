//! Operation-count and timing harness for the certifiers.
//!
//! Counts are the assertable quantity: for fixed `K` and `p` the jump
//! certifier's modular-product total is an affine function of `n`, which
//! is the desk-scale stand-in for the quasi-quadratic bit complexity
//! (operand growth supplies the other factor and is reported as digits).
//! Wall times are reported but never asserted.

use crate::arith::{Natural, ScheduleMode};
use crate::forms::{make_form, FormError, ProthForm};
use crate::primality::{certify_jump, TestContext, TestError};
use num_traits::ToPrimitive;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Refuse to build numbers above this many decimal digits.
pub const DEFAULT_DIGIT_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("K*{p}^{n}+1 would have about {digits} digits, beyond the cap of {cap}")]
    DigitCapExceeded {
        p: Natural,
        n: u32,
        digits: usize,
        cap: usize,
    },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Test(#[from] TestError),
}

/// Counts and timing for one instrumented certification run.
#[derive(Debug, Clone)]
pub struct OpCountReport {
    pub k: Natural,
    pub p: Natural,
    pub n: u32,
    pub digits: usize,
    pub mode: ScheduleMode,
    pub outcome: String,
    pub squarings: u64,
    pub multiplications: u64,
    pub inversions: u64,
    pub reductions: u64,
    pub wall: Duration,
}

impl OpCountReport {
    pub fn total_products(&self) -> u64 {
        self.squarings + self.multiplications + self.inversions
    }

    fn mode_label(&self) -> &'static str {
        match self.mode {
            ScheduleMode::Binary => "binary",
            ScheduleMode::Scheduled => "scheduled",
        }
    }

    /// One JSON object per run, numbers small enough stay numeric, big
    /// ones render as decimal strings.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "K": self.k.to_string(),
            "p": self.p.to_string(),
            "n": self.n,
            "digits": self.digits,
            "mode": self.mode_label(),
            "outcome": self.outcome,
            "squarings": self.squarings,
            "multiplications": self.multiplications,
            "inversions": self.inversions,
            "reductions": self.reductions,
            "total_products": self.total_products(),
            "wall_us": self.wall.as_micros() as u64,
        })
        .to_string()
    }

    pub fn table_header() -> String {
        format!(
            "{:>10} {:>6} {:>8} {:>10} {:>10} {:>10} {:>8} {:>12} {:>10}",
            "K*p^n+1", "n", "digits", "mode", "squarings", "mults", "invs", "total", "wall_us"
        )
    }

    pub fn table_row(&self) -> String {
        format!(
            "{:>10} {:>6} {:>8} {:>10} {:>10} {:>10} {:>8} {:>12} {:>10}",
            format!("{}*{}^n+1", self.k, self.p),
            self.n,
            self.digits,
            self.mode_label(),
            self.squarings,
            self.multiplications,
            self.inversions,
            self.total_products(),
            self.wall.as_micros()
        )
    }
}

/// Run the jump certifier once with instrumented arithmetic.
pub fn count_certify(
    form: &ProthForm,
    base: &Natural,
    mode: ScheduleMode,
) -> Result<OpCountReport, BenchError> {
    let mut ctx = TestContext::with_mode(mode);
    let start = Instant::now();
    let verdict = certify_jump(form, base, &mut ctx)?;
    let wall = start.elapsed();
    Ok(OpCountReport {
        k: form.k().clone(),
        p: form.prime().clone(),
        n: form.exponent(),
        digits: form.value().to_string().len(),
        mode,
        outcome: verdict.outcome.label().to_string(),
        squarings: ctx.counter.squarings,
        multiplications: ctx.counter.multiplications,
        inversions: ctx.counter.inversions,
        reductions: ctx.counter.reductions,
        wall,
    })
}

/// Instrumented runs across a list of exponents, guarded by the digit cap.
pub fn scaling_run(
    k: &Natural,
    p: &Natural,
    n_list: &[u32],
    base: &Natural,
    mode: ScheduleMode,
    digit_cap: usize,
) -> Result<Vec<OpCountReport>, BenchError> {
    let mut reports = Vec::new();
    for &n in n_list {
        let digits = estimate_digits(k, p, n);
        if digits > digit_cap {
            return Err(BenchError::DigitCapExceeded {
                p: p.clone(),
                n,
                digits,
                cap: digit_cap,
            });
        }
        let form = make_form(k.clone(), p.clone(), n)?;
        reports.push(count_certify(&form, base, mode)?);
    }
    Ok(reports)
}

/// Decimal digits of `K * p^n + 1`, estimated without building the number.
fn estimate_digits(k: &Natural, p: &Natural, n: u32) -> usize {
    let log10_p = (p.to_f64().unwrap_or(f64::MAX)).log10();
    let log10_k = (k.to_f64().unwrap_or(f64::MAX)).log10();
    (n as f64 * log10_p + log10_k).ceil() as usize + 1
}
