//! Primality tests and certifiers for `N = K * p^n + 1`.
//!
//! Two families live here. The sufficiency tests (`proth_classic`,
//! `generalized_proth`, `pocklington`, `pepin`) answer from a single
//! congruence. The chain certifiers (`certify_scan`, `certify_jump`) walk
//! the tower `S_0 = a^K`, `S_i = S_{i-1}^p` and certify primality from the
//! index where the chain first hits 1, using the strict threshold
//! `p^{2j} > K * p^n`. `certify_jump` starts at the last index where the
//! threshold still fails, so whenever `S_J != 1` it always ends in a
//! definite prime/composite answer.

use crate::arith::{
    mod_pow, phi_p_eval, schedule_for, CostModel, Natural, OpCounter, PowerSchedule,
    ScheduleMode, ScheduledPow,
};
use crate::census;
use crate::forms::{compute_j, make_form, threshold_ok, FormError, ProthForm};
use crate::verdict::{
    ChainCheckpoints, CompositeReason, CompositenessWitness, InconclusiveReason, Outcome,
    PrimalityCertificate, ProbableKind, TestKind, TestVerdict,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest Fermat index accepted by [`pepin`]; `F_16` already has almost
/// twenty thousand digits.
pub const PEPIN_MAX_INDEX: u32 = 16;

/// Default number of bases tried before giving up on certification.
pub const DEFAULT_BASE_RETRY_CAP: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TestError {
    #[error("p = {p} does not divide N - 1 for N = {value}")]
    NotADivisor { p: Natural, value: Natural },
    #[error("p = {0} is not prime")]
    PNotPrime(Natural),
    #[error("p = {0} exceeds the supported range")]
    PrimeTooLarge(Natural),
    #[error("N must be at least 3, got {0}")]
    ValueTooSmall(Natural),
    #[error("{form} is not generalized: the test requires K < p^n")]
    NotGeneralized { form: String },
    #[error("{form} is not a classical Proth form (p = 2, K odd, K < 2^n)")]
    NotProthClassic { form: String },
    #[error("Fermat index {n} out of range (1..={max})")]
    PepinIndexOutOfRange { n: u32, max: u32 },
    #[error("Jacobi symbol requires an odd modulus >= 3")]
    JacobiModulus,
    #[error("N - 1 could not be fully factored within budget; cofactor {cofactor}")]
    FactorizationIncomplete { cofactor: Natural },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Per-run state threaded through every test: the operation counter plus
/// the p-th-power strategy. Each concurrent task owns its own context.
#[derive(Debug, Clone, Default)]
pub struct TestContext {
    pub counter: OpCounter,
    pub mode: ScheduleMode,
    pub cost_model: CostModel,
}

impl TestContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Context forcing plain square-and-multiply chains.
    pub fn binary() -> Self {
        TestContext {
            mode: ScheduleMode::Binary,
            ..Self::default()
        }
    }

    pub fn with_mode(mode: ScheduleMode) -> Self {
        TestContext {
            mode,
            ..Self::default()
        }
    }

    fn chain_schedule(&self, p: &Natural) -> PowerSchedule {
        schedule_for(p, self.mode, &self.cost_model).expect("prime p is at least 2")
    }
}

enum BaseScreen {
    Usable(Natural),
    ProperFactor(Natural),
    Degenerate,
}

/// Reduce the base and classify its gcd with N. A proper shared factor
/// certifies compositeness; `a ≡ 0 (mod N)` certifies nothing.
fn screen_base(base: &Natural, value: &Natural) -> BaseScreen {
    let reduced = base % value;
    if reduced.is_zero() {
        return BaseScreen::Degenerate;
    }
    let g = reduced.gcd(value);
    if g.is_one() {
        BaseScreen::Usable(reduced)
    } else {
        BaseScreen::ProperFactor(g)
    }
}

fn composite(test: TestKind, base: &Natural, reason: CompositeReason) -> TestVerdict {
    TestVerdict {
        test,
        outcome: Outcome::Composite(CompositenessWitness {
            base: base.clone(),
            reason,
        }),
    }
}

fn inconclusive(test: TestKind, reason: InconclusiveReason) -> TestVerdict {
    TestVerdict {
        test,
        outcome: Outcome::Inconclusive(reason),
    }
}

fn probable(test: TestKind, kind: ProbableKind) -> TestVerdict {
    TestVerdict {
        test,
        outcome: Outcome::ProbablePrime(kind),
    }
}

fn prime(
    test: TestKind,
    form: &ProthForm,
    base: &Natural,
    index: u32,
    checkpoints: Option<ChainCheckpoints>,
) -> TestVerdict {
    TestVerdict {
        test,
        outcome: Outcome::Prime(PrimalityCertificate {
            form: form.clone(),
            base: base.clone(),
            index,
            algorithm: test,
            checkpoints,
        }),
    }
}

fn relabel(mut verdict: TestVerdict, test: TestKind) -> TestVerdict {
    verdict.test = test;
    if let Outcome::Prime(cert) = &mut verdict.outcome {
        cert.algorithm = test;
    }
    verdict
}

/// Jacobi symbol `(a / n)` for odd `n >= 3`, by binary reciprocity.
pub fn jacobi(a: &Natural, n: &Natural) -> Result<i8, TestError> {
    if n.is_even() || *n < Natural::from(3u32) {
        return Err(TestError::JacobiModulus);
    }
    let mut a = a % n;
    let mut n = n.clone();
    let mut t: i8 = 1;
    let three = Natural::from(3u32);
    let four = Natural::from(4u32);
    let five = Natural::from(5u32);
    let eight = Natural::from(8u32);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = &n % &eight;
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if &a % &four == three && &n % &four == three {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        Ok(t)
    } else {
        Ok(0)
    }
}

/// Walk the chain `S_0 = a^K, S_i = S_{i-1}^p` from `start_index` up to
/// `n`, certifying from the first index where the chain hits 1.
///
/// `start_index > 0` means the caller already advanced to
/// `S_{start_index}` without comparisons; from there every step compares
/// against 1 and, on a hit, evaluates the cyclotomic condition on the
/// predecessor directly (never through a gcd shortcut).
fn run_chain(
    test: TestKind,
    form: &ProthForm,
    base: &Natural,
    ctx: &mut TestContext,
    start_index: u32,
) -> TestVerdict {
    let value = form.value();
    let p = form.prime();
    let reduced = match screen_base(base, value) {
        BaseScreen::Usable(a) => a,
        BaseScreen::ProperFactor(g) => {
            return composite(test, base, CompositeReason::FactorFound(g))
        }
        BaseScreen::Degenerate => return inconclusive(test, InconclusiveReason::DegenerateBase),
    };
    let schedule = ctx.chain_schedule(p);
    let mut s = mod_pow(&reduced, form.k(), value, &mut ctx.counter).expect("N >= 3");
    // Advance to S_{start_index} with no unit comparisons.
    for _ in 0..start_index {
        s = match pow_p_scheduled_step(&s, &schedule, value, ctx) {
            Ok(v) => v,
            Err(verdict_reason) => return finish_factor(test, base, verdict_reason, value),
        };
    }
    if s.is_one() {
        return probable(test, ProbableKind::PStrong);
    }
    for i in start_index + 1..=form.exponent() {
        let prev = s;
        s = match pow_p_scheduled_step(&prev, &schedule, value, ctx) {
            Ok(v) => v,
            Err(g) => return finish_factor(test, base, g, value),
        };
        if s.is_one() {
            let phi = phi_p_eval(&prev, p, value, &mut ctx.counter).expect("N >= 3");
            if phi.is_zero() {
                if threshold_ok(form, i) {
                    let checkpoints = ChainCheckpoints {
                        penultimate: prev,
                        last: s,
                    };
                    return prime(test, form, base, i, Some(checkpoints));
                }
                return probable(test, ProbableKind::PStrong);
            }
            return composite(
                test,
                base,
                CompositeReason::ChainBreak {
                    prime: p.clone(),
                    index: i,
                    penultimate: prev,
                },
            );
        }
    }
    composite(test, base, CompositeReason::FermatFail)
}

fn pow_p_scheduled_step(
    x: &Natural,
    schedule: &PowerSchedule,
    value: &Natural,
    ctx: &mut TestContext,
) -> Result<Natural, Natural> {
    match crate::arith::pow_p_scheduled(x, schedule, value, &mut ctx.counter).expect("N >= 3") {
        ScheduledPow::Value(v) => Ok(v),
        ScheduledPow::SharedFactor(g) => Err(g),
    }
}

fn finish_factor(
    test: TestKind,
    base: &Natural,
    g: Natural,
    value: &Natural,
) -> TestVerdict {
    if g.is_one() || &g == value {
        // gcd(S_i, N) = N cannot certify compositeness.
        inconclusive(test, InconclusiveReason::DegenerateBase)
    } else {
        composite(test, base, CompositeReason::FactorFound(g))
    }
}

/// Full chain certifier: scans `S_0, S_1, ...` and decides at the first
/// unit index. Works for every valid form; the threshold decides between
/// a certificate and a probable-prime answer.
pub fn certify_scan(form: &ProthForm, base: &Natural, ctx: &mut TestContext) -> TestVerdict {
    run_chain(TestKind::CertifyScan, form, base, ctx, 0)
}

/// Jump certifier for generalized forms (`K < p^n`): computes
/// `S_J = a^{K p^J}` outright for the last threshold-failing index `J` and
/// scans from there. If `S_J != 1` the verdict is always definite.
pub fn certify_jump(
    form: &ProthForm,
    base: &Natural,
    ctx: &mut TestContext,
) -> Result<TestVerdict, TestError> {
    if !form.is_generalized() {
        return Err(TestError::NotGeneralized {
            form: form.to_string(),
        });
    }
    let start = compute_j(form);
    debug_assert!(start < form.exponent());
    Ok(run_chain(TestKind::CertifyJump, form, base, ctx, start))
}

/// Pepin's criterion for `F_n = 2^{2^n} + 1`, run as the p = 2 chain on
/// the form `1 * 2^{2^n} + 1` with base 3. For prime `F_n` the chain
/// first hits 1 at the very top, which is exactly the classical
/// `3^{(F_n - 1)/2} ≡ -1` congruence.
pub fn pepin(n: u32, ctx: &mut TestContext) -> Result<TestVerdict, TestError> {
    if !(1..=PEPIN_MAX_INDEX).contains(&n) {
        return Err(TestError::PepinIndexOutOfRange {
            n,
            max: PEPIN_MAX_INDEX,
        });
    }
    let form = make_form(Natural::one(), Natural::from(2u32), 1u32 << n)?;
    let verdict = certify_scan(&form, &Natural::from(3u32), ctx);
    Ok(relabel(verdict, TestKind::Pepin))
}

/// Classical Proth test. With `(a/N) = -1` the answer is definite either
/// way; otherwise only the positive direction applies and a failed
/// congruence is inconclusive.
pub fn proth_classic(
    form: &ProthForm,
    base: &Natural,
    ctx: &mut TestContext,
) -> Result<TestVerdict, TestError> {
    let test = TestKind::ProthClassic;
    if !form.is_proth_classic() {
        return Err(TestError::NotProthClassic {
            form: form.to_string(),
        });
    }
    let value = form.value();
    let reduced = match screen_base(base, value) {
        BaseScreen::Usable(a) => a,
        BaseScreen::ProperFactor(g) => {
            return Ok(composite(test, base, CompositeReason::FactorFound(g)))
        }
        BaseScreen::Degenerate => {
            return Ok(inconclusive(test, InconclusiveReason::DegenerateBase))
        }
    };
    let half = form.n_minus_one_over_p(); // (N - 1) / 2
    let x = mod_pow(&reduced, &half, value, &mut ctx.counter).expect("N >= 3");
    let minus_one = value - Natural::one();
    if x == minus_one {
        // S_{n-1} ≡ -1, so the chain closes at j = n; K < 2^n makes the
        // threshold hold.
        let checkpoints = ChainCheckpoints {
            penultimate: x,
            last: Natural::one(),
        };
        return Ok(prime(test, form, base, form.exponent(), Some(checkpoints)));
    }
    if jacobi(&reduced, value)? == -1 {
        // Definite direction: a prime N would have forced x ≡ -1.
        let y = mod_pow(&x, &Natural::from(2u32), value, &mut ctx.counter).expect("N >= 3");
        if !y.is_one() {
            return Ok(composite(test, base, CompositeReason::FermatFail));
        }
        if !x.is_one() {
            // Nontrivial square root of 1 hands us a factor.
            let g = (&x - Natural::one()).gcd(value);
            return Ok(composite(test, base, CompositeReason::FactorFound(g)));
        }
        // x ≡ 1 with (a/N) = -1: the chain must break strictly below the
        // top; let the scan find the witness.
        let scanned = certify_scan(form, base, ctx);
        return Ok(relabel(scanned, test));
    }
    Ok(inconclusive(test, InconclusiveReason::CongruenceFailed))
}

/// Generalized Proth test: `Phi_p(a^{(N-1)/p}) ≡ 0 (mod N)` certifies
/// primality of a generalized form (and records that the base is a p-th
/// power non-residue). A failed congruence says nothing.
pub fn generalized_proth(
    form: &ProthForm,
    base: &Natural,
    ctx: &mut TestContext,
) -> Result<TestVerdict, TestError> {
    let test = TestKind::GeneralizedProth;
    if !form.is_generalized() {
        return Err(TestError::NotGeneralized {
            form: form.to_string(),
        });
    }
    let value = form.value();
    let reduced = match screen_base(base, value) {
        BaseScreen::Usable(a) => a,
        BaseScreen::ProperFactor(g) => {
            return Ok(composite(test, base, CompositeReason::FactorFound(g)))
        }
        BaseScreen::Degenerate => {
            return Ok(inconclusive(test, InconclusiveReason::DegenerateBase))
        }
    };
    let exponent = form.n_minus_one_over_p();
    let x = mod_pow(&reduced, &exponent, value, &mut ctx.counter).expect("N >= 3");
    let phi = phi_p_eval(&x, form.prime(), value, &mut ctx.counter).expect("N >= 3");
    if phi.is_zero() {
        let checkpoints = ChainCheckpoints {
            penultimate: x,
            last: Natural::one(),
        };
        Ok(prime(test, form, base, form.exponent(), Some(checkpoints)))
    } else {
        Ok(inconclusive(test, InconclusiveReason::CongruenceFailed))
    }
}

/// Pocklington's criterion: `a^{N-1} ≡ 1` and
/// `gcd(a^{(N-1)/p} - 1, N) = 1` certify primality.
///
/// Both exponentiations are computed as independent full chains — this is
/// the baseline the one-exponentiation tests are measured against.
pub fn pocklington(
    form: &ProthForm,
    base: &Natural,
    ctx: &mut TestContext,
) -> Result<TestVerdict, TestError> {
    let test = TestKind::Pocklington;
    if !form.is_generalized() {
        return Err(TestError::NotGeneralized {
            form: form.to_string(),
        });
    }
    let value = form.value();
    let reduced = match screen_base(base, value) {
        BaseScreen::Usable(a) => a,
        BaseScreen::ProperFactor(g) => {
            return Ok(composite(test, base, CompositeReason::FactorFound(g)))
        }
        BaseScreen::Degenerate => {
            return Ok(inconclusive(test, InconclusiveReason::DegenerateBase))
        }
    };
    let fermat_exp = value - Natural::one();
    let y = mod_pow(&reduced, &fermat_exp, value, &mut ctx.counter).expect("N >= 3");
    if !y.is_one() {
        return Ok(composite(test, base, CompositeReason::FermatFail));
    }
    let x = mod_pow(&reduced, &form.n_minus_one_over_p(), value, &mut ctx.counter)
        .expect("N >= 3");
    let shifted = (&x + value - Natural::one()) % value; // x - 1 mod N
    let g = shifted.gcd(value);
    if g.is_one() {
        // For a genuinely certified N the cyclotomic condition holds at
        // the top index, so the standard certificate applies.
        let checkpoints = ChainCheckpoints {
            penultimate: x,
            last: Natural::one(),
        };
        Ok(prime(test, form, base, form.exponent(), Some(checkpoints)))
    } else if &g == value {
        Ok(inconclusive(test, InconclusiveReason::UnitGcd))
    } else {
        Ok(composite(test, base, CompositeReason::PocklingtonGcd(g)))
    }
}

/// Chain probable-prime test relative to one prime divisor `p` of
/// `N - 1`: decomposes `N - 1 = K * p^e` with `gcd(K, p) = 1` internally
/// and accepts when `a^K ≡ 1` or the cyclotomic condition holds at some
/// chain index below `e`.
pub fn p_miller_rabin(
    value: &Natural,
    p: &Natural,
    base: &Natural,
    ctx: &mut TestContext,
) -> Result<TestVerdict, TestError> {
    let test = TestKind::PMillerRabin;
    if *value < Natural::from(3u32) {
        return Err(TestError::ValueTooSmall(value.clone()));
    }
    let p64 = p
        .to_u64()
        .ok_or_else(|| TestError::PrimeTooLarge(p.clone()))?;
    if !census::is_prime_u64(p64) {
        return Err(TestError::PNotPrime(p.clone()));
    }
    let mut k = value - Natural::one();
    let mut e = 0u32;
    loop {
        let (q, r) = k.div_rem(p);
        if !r.is_zero() {
            break;
        }
        k = q;
        e += 1;
    }
    if e == 0 {
        return Err(TestError::NotADivisor {
            p: p.clone(),
            value: value.clone(),
        });
    }
    let reduced = match screen_base(base, value) {
        BaseScreen::Usable(a) => a,
        BaseScreen::ProperFactor(g) => {
            return Ok(composite(test, base, CompositeReason::FactorFound(g)))
        }
        BaseScreen::Degenerate => {
            return Ok(inconclusive(test, InconclusiveReason::DegenerateBase))
        }
    };
    let schedule = ctx.chain_schedule(p);
    let mut s = mod_pow(&reduced, &k, value, &mut ctx.counter).expect("N >= 3");
    if s.is_one() {
        return Ok(probable(test, ProbableKind::PStrong));
    }
    // The cyclotomic value can only vanish at the step entering the first
    // unit index, so one evaluation decides.
    for i in 1..=e {
        let prev = s;
        s = match pow_p_scheduled_step(&prev, &schedule, value, ctx) {
            Ok(v) => v,
            Err(g) => return Ok(finish_factor(test, base, g, value)),
        };
        if s.is_one() {
            let phi = phi_p_eval(&prev, p, value, &mut ctx.counter).expect("N >= 3");
            return if phi.is_zero() {
                Ok(probable(test, ProbableKind::PStrong))
            } else {
                Ok(composite(
                    test,
                    base,
                    CompositeReason::ChainBreak {
                        prime: p.clone(),
                        index: i,
                        penultimate: prev,
                    },
                ))
            };
        }
    }
    Ok(composite(test, base, CompositeReason::FermatFail))
}

/// Probable-prime test against every prime divisor of `N - 1`; composite
/// as soon as one divisor fails.
pub fn complete_strong(
    value: &Natural,
    base: &Natural,
    ctx: &mut TestContext,
) -> Result<TestVerdict, TestError> {
    let test = TestKind::CompleteStrong;
    if *value < Natural::from(3u32) {
        return Err(TestError::ValueTooSmall(value.clone()));
    }
    let m = value - Natural::one();
    let factors = match census::factorize(&m, census::DEFAULT_FACTOR_BUDGET) {
        census::Factorization::Complete(fs) => fs,
        census::Factorization::Partial { cofactor, .. } => {
            return Err(TestError::FactorizationIncomplete { cofactor })
        }
    };
    for (q, _) in &factors {
        let verdict = p_miller_rabin(value, q, base, ctx)?;
        match verdict.outcome {
            Outcome::ProbablePrime(_) => continue,
            _ => return Ok(relabel(verdict, test)),
        }
    }
    Ok(probable(test, ProbableKind::CompleteStrong))
}

/// Strategy selector for [`certify_auto`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyStrategy {
    Scan,
    Jump,
}

/// Result of a certification run with base retries.
#[derive(Debug, Clone)]
pub struct CertifyRun {
    pub verdict: TestVerdict,
    pub attempts: Vec<Natural>,
}

/// Run a certifier with the default base ladder 2, 3, 5, 7, ... retrying
/// on indefinite outcomes up to `max_bases` attempts.
pub fn certify_auto(
    form: &ProthForm,
    strategy: CertifyStrategy,
    max_bases: usize,
    ctx: &mut TestContext,
) -> Result<CertifyRun, TestError> {
    let mut attempts = Vec::new();
    let mut last = None;
    let mut base = Natural::from(2u32);
    while attempts.len() < max_bases.max(1) {
        if base.to_u64().map(census::is_prime_u64) == Some(true) || base.to_u64().is_none() {
            attempts.push(base.clone());
            let verdict = match strategy {
                CertifyStrategy::Scan => certify_scan(form, &base, ctx),
                CertifyStrategy::Jump => certify_jump(form, &base, ctx)?,
            };
            match verdict.outcome {
                Outcome::Prime(_) | Outcome::Composite(_) => {
                    return Ok(CertifyRun { verdict, attempts })
                }
                _ => last = Some(verdict),
            }
        }
        base += Natural::one();
    }
    Ok(CertifyRun {
        verdict: last.expect("at least one base attempted"),
        attempts,
    })
}

/// Exact probability that the jump certifier answers "probable prime" on
/// a random base when `N` is prime: `(K p^J - 1) / (K p^n - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InconclusiveProbability {
    pub value: BigRational,
    /// Set when `N` is known composite (64-bit oracle); the formula only
    /// models prime `N`.
    pub composite_input: bool,
}

pub fn inconclusive_probability(form: &ProthForm) -> InconclusiveProbability {
    let j = compute_j(form);
    let numerator = form.k() * form.prime().pow(j) - Natural::one();
    let denominator = form.value() - Natural::from(2u32);
    let composite_input = form
        .value()
        .to_u64()
        .map(|v| !census::is_prime_u64(v))
        .unwrap_or(false);
    InconclusiveProbability {
        value: BigRational::new(BigInt::from(numerator), BigInt::from(denominator)),
        composite_input,
    }
}

/// Re-check a certificate from scratch: index in range, strict threshold,
/// checkpoint integrity, and the cyclotomic condition recomputed through
/// an independent single exponentiation.
pub fn verify_certificate(cert: &PrimalityCertificate) -> bool {
    let form = &cert.form;
    let value = form.value();
    let j = cert.index;
    if j < 1 || j > form.exponent() {
        return false;
    }
    if !threshold_ok(form, j) {
        return false;
    }
    let mut counter = OpCounter::new();
    let exponent = form.k() * form.prime().pow(j - 1);
    let prev = match mod_pow(&cert.base, &exponent, value, &mut counter) {
        Ok(v) => v,
        Err(_) => return false,
    };
    if let Some(cp) = &cert.checkpoints {
        if cp.penultimate != prev {
            return false;
        }
        let last = match mod_pow(&prev, form.prime(), value, &mut counter) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if cp.last != last || !last.is_one() {
            return false;
        }
    }
    match phi_p_eval(&prev, form.prime(), value, &mut counter) {
        Ok(phi) => phi.is_zero(),
        Err(_) => false,
    }
}
