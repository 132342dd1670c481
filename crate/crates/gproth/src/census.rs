//! Ground truth and enumeration: the sieve oracle, deterministic 64-bit
//! primality, integer factorization, pseudoprime censuses and family
//! scans.
//!
//! Everything downstream of a census record is checkable: a record's
//! number is composite per the sieve and passes the claimed chain test on
//! recompute. Factorization is deterministic (fixed trial-division bound,
//! then Brent's cycle method with parameter sequence 1, 2, 3, ...) so
//! census output is bit-identical across runs.

use crate::arith::Natural;
use crate::forms::{make_form, FormError, ProthForm};
use crate::primality::{certify_jump, p_miller_rabin, TestContext, TestError};
use crate::verdict::TestVerdict;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Hard cap on sieve size.
pub const DEFAULT_SIEVE_CAP: u64 = 1 << 32;

/// Trial division bound used before switching to Brent's method.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Default factoring budget, in Brent iterations.
pub const DEFAULT_FACTOR_BUDGET: u64 = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("sieve limit {limit} exceeds the memory cap {cap}")]
    SieveCapExceeded { limit: u64, cap: u64 },
    #[error("requested limit {limit} is beyond the sieve's range {sieve_limit}")]
    LimitBeyondSieve { limit: u64, sieve_limit: u64 },
    #[error("the p-strong census needs a prime p")]
    MissingPrime,
    #[error("verdict for {value} contradicts the sieve oracle")]
    OracleMismatch { value: Natural },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Test(#[from] TestError),
}

/// Deterministic primality for anything that fits in 64 bits.
///
/// Strong test with the witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
/// 31, 37}, which is known to be exact over the full 64-bit range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Eratosthenes table over the odd integers below `limit`, answering
/// primality in O(1). Construction cross-checks a thousand samples
/// against trial division.
pub struct SieveOracle {
    limit: u64,
    // bit set = composite; index i stands for 2i + 1
    bits: Vec<u64>,
}

impl SieveOracle {
    pub fn build(limit: u64) -> Result<Self, CensusError> {
        Self::build_with_cap(limit, DEFAULT_SIEVE_CAP)
    }

    pub fn build_with_cap(limit: u64, cap: u64) -> Result<Self, CensusError> {
        if limit > cap {
            return Err(CensusError::SieveCapExceeded { limit, cap });
        }
        let odd_count = (limit / 2) as usize;
        let mut bits = vec![0u64; odd_count / 64 + 1];
        let set = |bits: &mut Vec<u64>, idx: usize| bits[idx / 64] |= 1 << (idx % 64);
        if limit > 1 {
            set(&mut bits, 0); // 1 is not prime
        }
        let mut p = 3u64;
        while p * p < limit {
            let idx = ((p - 1) / 2) as usize;
            if bits[idx / 64] >> (idx % 64) & 1 == 0 {
                let mut multiple = p * p;
                while multiple < limit {
                    set(&mut bits, ((multiple - 1) / 2) as usize);
                    multiple += 2 * p;
                }
            }
            p += 2;
        }
        let oracle = SieveOracle { limit, bits };
        oracle.self_check();
        Ok(oracle)
    }

    /// Compare a thousand deterministic pseudo-random samples against
    /// trial division.
    fn self_check(&self) {
        if self.limit < 2 {
            return;
        }
        let mut state = 0x6a09e667f3bcc909u64;
        for _ in 0..1000 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let n = (state >> 11) % self.limit.max(1);
            assert_eq!(
                self.is_prime(n),
                trial_division_is_prime(n),
                "sieve self-check failed at {n}"
            );
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// O(1) primality for `n < limit`.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n < self.limit, "{n} is beyond the sieve limit {}", self.limit);
        if n == 2 {
            return true;
        }
        if n < 2 || n % 2 == 0 {
            return false;
        }
        let idx = ((n - 1) / 2) as usize;
        self.bits[idx / 64] >> (idx % 64) & 1 == 0
    }

    /// All primes below the limit, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let odds = (1..self.limit)
            .step_by(2)
            .filter(move |&n| n > 2 && self.is_prime(n));
        let two = if self.limit > 2 { Some(2u64) } else { None };
        two.into_iter().chain(odds)
    }

    pub fn prime_count(&self) -> usize {
        self.primes().count()
    }
}

fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Result of a factoring attempt. `Partial` is a normal outcome carrying
/// whatever did not give in within budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factorization {
    Complete(Vec<(Natural, u32)>),
    Partial {
        factors: Vec<(Natural, u32)>,
        cofactor: Natural,
    },
}

impl Factorization {
    pub fn factors(&self) -> &[(Natural, u32)] {
        match self {
            Factorization::Complete(fs) => fs,
            Factorization::Partial { factors, .. } => factors,
        }
    }
}

/// Factor `m` by trial division up to the fixed bound, then Brent's
/// method within `budget` iterations.
pub fn factorize(m: &Natural, budget: u64) -> Factorization {
    let mut factors: Vec<(Natural, u32)> = Vec::new();
    let mut rest = m.clone();
    if rest < Natural::from(2u32) {
        return Factorization::Complete(factors);
    }

    // Trial division, counting exponents.
    for d in std::iter::once(2u64).chain((3..=TRIAL_DIVISION_BOUND).step_by(2)) {
        let dn = Natural::from(d);
        if &dn * &dn > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&dn);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((dn, e));
        }
        if rest.is_one() {
            break;
        }
    }
    if rest.is_one() {
        return Factorization::Complete(factors);
    }
    // Anything left has no divisor below the trial bound; a cofactor below
    // the bound squared is therefore prime.
    let bound_sq = Natural::from(TRIAL_DIVISION_BOUND) * Natural::from(TRIAL_DIVISION_BOUND);
    if rest < bound_sq || is_probable_prime_natural(&rest) {
        merge_factor(&mut factors, rest, 1);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        return Factorization::Complete(factors);
    }

    let mut budget = budget;
    let mut pending = vec![rest];
    let mut failed: Option<Natural> = None;
    while let Some(c) = pending.pop() {
        if is_probable_prime_natural(&c) {
            merge_factor(&mut factors, c, 1);
            continue;
        }
        match brent_rho(&c, &mut budget) {
            Some(d) => {
                pending.push(&c / &d);
                pending.push(d);
            }
            None => {
                // Budget exhausted; everything still pending is unfactored.
                let mut cof = c;
                for rem in pending.drain(..) {
                    cof *= rem;
                }
                failed = Some(cof);
                break;
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    match failed {
        None => Factorization::Complete(factors),
        Some(cofactor) => Factorization::Partial { factors, cofactor },
    }
}

fn merge_factor(factors: &mut Vec<(Natural, u32)>, q: Natural, e: u32) {
    if let Some(entry) = factors.iter_mut().find(|(f, _)| *f == q) {
        entry.1 += e;
    } else {
        factors.push((q, e));
    }
}

/// Strong probable-prime screen with the 64-bit witness set; exact below
/// 2^64, probabilistic above.
fn is_probable_prime_natural(n: &Natural) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    // n is odd and large here (even numbers fall to trial division).
    let one = Natural::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut r = 0u64;
    while d.is_even() {
        d >>= 1;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = Natural::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 0..r - 1 {
            x = x.modpow(&Natural::from(2u32), n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding factor search with deterministic parameters
/// c = 1, 2, 3, ...; returns a nontrivial factor or None when the budget
/// runs out.
fn brent_rho(n: &Natural, budget: &mut u64) -> Option<Natural> {
    if n.is_even() {
        return Some(Natural::from(2u32));
    }
    if let Some(v) = n.to_u64() {
        return brent_rho_u64(v, budget).map(Natural::from);
    }
    for c in 1u64..64 {
        match brent_attempt_big(n, c, budget) {
            BrentOutcome::Factor(g) => return Some(g),
            BrentOutcome::Degenerate => continue,
            BrentOutcome::BudgetExhausted => return None,
        }
    }
    None
}

enum BrentOutcome<T> {
    Factor(T),
    Degenerate,
    BudgetExhausted,
}

const BRENT_WINDOW: u64 = 128;

fn brent_attempt_big(n: &Natural, c: u64, budget: &mut u64) -> BrentOutcome<Natural> {
    let c = Natural::from(c);
    let step = |x: &Natural| (x * x + &c) % n;
    let mut y = Natural::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = Natural::one();
    let mut r = 1u64;
    let mut g = Natural::one();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            let window = BRENT_WINDOW.min(r - k);
            if *budget < window {
                *budget = 0;
                return BrentOutcome::BudgetExhausted;
            }
            *budget -= window;
            ys = y.clone();
            for _ in 0..window {
                y = step(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = q * diff % n;
            }
            g = q.gcd(n);
            k += window;
        }
        r *= 2;
    }
    if &g == n {
        // The gcd jumped to n inside a window; replay it one step at a
        // time. The trigger is guaranteed within the window.
        for _ in 0..=BRENT_WINDOW {
            ys = step(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if !g.is_one() && &g != n {
        BrentOutcome::Factor(g)
    } else {
        BrentOutcome::Degenerate
    }
}

fn brent_rho_u64(n: u64, budget: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1u64..64 {
        match brent_attempt_u64(n, c, budget) {
            BrentOutcome::Factor(g) => return Some(g),
            BrentOutcome::Degenerate => continue,
            BrentOutcome::BudgetExhausted => return None,
        }
    }
    None
}

fn brent_attempt_u64(n: u64, c: u64, budget: &mut u64) -> BrentOutcome<u64> {
    let step = |x: u64| {
        let v = mul_mod_u64(x, x, n);
        let (s, overflow) = v.overflowing_add(c % n);
        if overflow || s >= n {
            s.wrapping_sub(n)
        } else {
            s
        }
    };
    let mut y = 2u64;
    let mut x = y;
    let mut ys = y;
    let mut q = 1u64;
    let mut r = 1u64;
    let mut g = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            let window = BRENT_WINDOW.min(r - k);
            if *budget < window {
                *budget = 0;
                return BrentOutcome::BudgetExhausted;
            }
            *budget -= window;
            ys = y;
            for _ in 0..window {
                y = step(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += window;
        }
        r *= 2;
    }
    if g == n {
        for _ in 0..=BRENT_WINDOW {
            ys = step(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g > 1 && g < n {
        BrentOutcome::Factor(g)
    } else {
        BrentOutcome::Degenerate
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Which pseudoprime census to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusKind {
    PStrong,
    CompleteStrong,
}

impl CensusKind {
    pub fn label(&self) -> &'static str {
        match self {
            CensusKind::PStrong => "p-strong",
            CensusKind::CompleteStrong => "complete-strong",
        }
    }
}

/// One pseudoprime found: a composite number passing the claimed test for
/// every listed base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub value: Natural,
    pub kind: CensusKind,
    pub prime: Option<Natural>,
    pub bases: Vec<Natural>,
    pub factors: Vec<(Natural, u32)>,
}

impl CensusRecord {
    /// One JSON object per record, numbers as decimal strings.
    pub fn to_json_line(&self) -> String {
        let factors: Vec<serde_json::Value> = self
            .factors
            .iter()
            .map(|(q, e)| serde_json::json!([q.to_string(), e]))
            .collect();
        serde_json::json!({
            "n": self.value.to_string(),
            "kind": self.kind.label(),
            "p": self.prime.as_ref().map(|p| p.to_string()),
            "bases": self.bases.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "factors": factors,
        })
        .to_string()
    }
}

/// Enumerate composite numbers below `limit` passing the requested test
/// for all `bases`, in ascending order.
///
/// For the p-strong kind only odd composites with `p | N - 1` are
/// candidates. For the complete-strong kind the base-2 prime divisor is
/// tested first, so almost every candidate dies after one chain; the
/// survivors get `N - 1` fully factored. A factoring failure skips the
/// candidate with a diagnostic on stderr (cannot happen below 10^7).
pub fn enumerate_pseudoprimes(
    oracle: &SieveOracle,
    kind: CensusKind,
    prime: Option<&Natural>,
    bases: &[Natural],
    limit: u64,
) -> Result<Vec<CensusRecord>, CensusError> {
    if limit > oracle.limit() {
        return Err(CensusError::LimitBeyondSieve {
            limit,
            sieve_limit: oracle.limit(),
        });
    }
    let mut records = Vec::new();
    if bases.is_empty() {
        return Ok(records);
    }
    let p_u64 = match kind {
        CensusKind::PStrong => {
            let p = prime.ok_or(CensusError::MissingPrime)?;
            let p64 = p
                .to_u64()
                .ok_or_else(|| TestError::PrimeTooLarge(p.clone()))?;
            if !is_prime_u64(p64) {
                return Err(TestError::PNotPrime(p.clone()).into());
            }
            Some(p64)
        }
        CensusKind::CompleteStrong => None,
    };
    let mut n = 9u64;
    while n < limit {
        if !oracle.is_prime(n) {
            let keep = match kind {
                CensusKind::PStrong => {
                    let p = p_u64.expect("validated above");
                    (n - 1) % p == 0 && passes_p_strong_all(n, p, bases)
                }
                CensusKind::CompleteStrong => passes_complete_strong_all(n, bases),
            };
            if keep {
                match factorize(&Natural::from(n - 1), DEFAULT_FACTOR_BUDGET) {
                    Factorization::Complete(factors) => records.push(CensusRecord {
                        value: Natural::from(n),
                        kind,
                        prime: prime.cloned().filter(|_| kind == CensusKind::PStrong),
                        bases: bases.to_vec(),
                        factors,
                    }),
                    Factorization::Partial { cofactor, .. } => {
                        eprintln!(
                            "census: skipping {n}: N-1 not fully factored (cofactor {cofactor})"
                        );
                    }
                }
            }
        }
        n += 2;
    }
    Ok(records)
}

fn passes_p_strong_all(n: u64, p: u64, bases: &[Natural]) -> bool {
    let value = Natural::from(n);
    let p = Natural::from(p);
    bases.iter().all(|base| {
        let mut ctx = TestContext::binary();
        matches!(
            p_miller_rabin(&value, &p, base, &mut ctx),
            Ok(v) if v.is_probable_prime()
        )
    })
}

fn passes_complete_strong_all(n: u64, bases: &[Natural]) -> bool {
    let value = Natural::from(n);
    // Cheap first hurdle: the 2-part chain kills almost everything.
    let two = Natural::from(2u64);
    for base in bases {
        let mut ctx = TestContext::binary();
        match p_miller_rabin(&value, &two, base, &mut ctx) {
            Ok(v) if v.is_probable_prime() => {}
            _ => return false,
        }
    }
    let mut m = n - 1;
    while m % 2 == 0 {
        m /= 2;
    }
    let mut odd_primes = Vec::new();
    let mut d = 3u64;
    while d * d <= m {
        if m % d == 0 {
            odd_primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 2;
    }
    if m > 1 {
        odd_primes.push(m);
    }
    for q in odd_primes {
        let q = Natural::from(q);
        for base in bases {
            let mut ctx = TestContext::binary();
            match p_miller_rabin(&value, &q, base, &mut ctx) {
                Ok(v) if v.is_probable_prime() => {}
                _ => return false,
            }
        }
    }
    true
}

/// One entry of a family scan.
#[derive(Debug, Clone)]
pub struct FamilySample {
    pub n: u32,
    pub result: Result<TestVerdict, CensusError>,
}

/// Run the jump certifier over `K * p^n + 1` for each `n` in the range,
/// collecting per-exponent outcomes. Definite verdicts are cross-checked
/// against the oracle whenever the value is inside its range.
pub fn search_family(
    k: &Natural,
    p: &Natural,
    n_range: std::ops::RangeInclusive<u32>,
    base: &Natural,
    oracle: Option<&SieveOracle>,
) -> Vec<FamilySample> {
    let mut out = Vec::new();
    for n in n_range {
        let result = run_family_entry(k, p, n, base, oracle);
        out.push(FamilySample { n, result });
    }
    out
}

fn run_family_entry(
    k: &Natural,
    p: &Natural,
    n: u32,
    base: &Natural,
    oracle: Option<&SieveOracle>,
) -> Result<TestVerdict, CensusError> {
    let form: ProthForm = make_form(k.clone(), p.clone(), n)?;
    let mut ctx = TestContext::new();
    let verdict = certify_jump(&form, base, &mut ctx)?;
    if let Some(oracle) = oracle {
        if let Some(v) = form.value().to_u64() {
            let definite = verdict.is_prime() || verdict.is_composite();
            if v < oracle.limit() && definite && verdict.is_prime() != oracle.is_prime(v) {
                return Err(CensusError::OracleMismatch {
                    value: form.value().clone(),
                });
            }
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn sieve_basics() {
        let s = SieveOracle::build(100).unwrap();
        assert_eq!(s.prime_count(), 25);
        assert!(s.is_prime(2));
        assert!(s.is_prime(97));
        assert!(!s.is_prime(1));
        assert!(!s.is_prime(91));
    }

    #[test]
    fn sieve_known_composites() {
        let s = SieveOracle::build(1_500_000).unwrap();
        assert!(!s.is_prime(1373653)); // 829 * 1657
        assert!(!s.is_prime(2047)); // 23 * 89
        assert!(s.is_prime(1373677));
        assert_eq!(1373653u64 % 829, 0);
    }

    #[test]
    fn sieve_cap() {
        assert!(matches!(
            SieveOracle::build_with_cap(1000, 100),
            Err(CensusError::SieveCapExceeded { .. })
        ));
    }

    #[test]
    fn is_prime_u64_spot_checks() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_003));
        assert!(is_prime_u64(4294967311)); // first prime above 2^32
        assert!(!is_prime_u64(4294967297)); // 641 * 6700417
        assert!(!is_prime_u64(3825123056546413051)); // strong pseudoprime to many bases
        let s = SieveOracle::build(10_000).unwrap();
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), s.is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(
            factorize(&nat(2046), DEFAULT_FACTOR_BUDGET),
            Factorization::Complete(vec![(nat(2), 1), (nat(3), 1), (nat(11), 1), (nat(31), 1)])
        );
        assert_eq!(
            factorize(&nat(8), DEFAULT_FACTOR_BUDGET),
            Factorization::Complete(vec![(nat(2), 3)])
        );
        assert_eq!(
            factorize(&nat(1373652), DEFAULT_FACTOR_BUDGET),
            Factorization::Complete(vec![
                (nat(2), 2),
                (nat(3), 3),
                (nat(7), 1),
                (nat(23), 1),
                (nat(79), 1)
            ])
        );
        assert_eq!(
            factorize(&nat(1), DEFAULT_FACTOR_BUDGET),
            Factorization::Complete(vec![])
        );
    }

    #[test]
    fn factorize_needs_rho_beyond_trial_bound() {
        // 1000003 * 1000033 has no factor below the trial bound... both are
        // above it, so Brent must split the product.
        let m = nat(1_000_003) * nat(1_000_033);
        match factorize(&m, DEFAULT_FACTOR_BUDGET) {
            Factorization::Complete(fs) => {
                assert_eq!(fs, vec![(nat(1_000_003), 1), (nat(1_000_033), 1)]);
            }
            other => panic!("expected complete factorization, got {other:?}"),
        }
    }

    #[test]
    fn factorize_partial_on_zero_budget() {
        let p1 = nat(1_000_003);
        let p2 = nat(1_000_033);
        let p3 = nat(1_000_037);
        let m = &p1 * &p2 * (&p3 * &p3);
        match factorize(&m, 0) {
            Factorization::Partial { cofactor, .. } => {
                assert!((&m % &cofactor).is_zero());
                assert!(cofactor > nat(1));
            }
            Factorization::Complete(_) => {
                panic!("zero budget cannot complete a four-prime composite")
            }
        }
    }

    #[test]
    fn small_pstrong_census_is_empty_below_2047() {
        let oracle = SieveOracle::build(2048).unwrap();
        let records = enumerate_pseudoprimes(
            &oracle,
            CensusKind::PStrong,
            Some(&nat(2)),
            &[nat(2)],
            2000,
        )
        .unwrap();
        assert!(records.is_empty());
    }

    #[test]
    fn first_two_strong_pseudoprime_is_2047() {
        let oracle = SieveOracle::build(2100).unwrap();
        let records = enumerate_pseudoprimes(
            &oracle,
            CensusKind::PStrong,
            Some(&nat(2)),
            &[nat(2)],
            2100,
        )
        .unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].value, nat(2047));
        assert_eq!(records[0].factors, vec![(nat(2), 1), (nat(3), 1), (nat(11), 1), (nat(31), 1)]);
        let line = records[0].to_json_line();
        let parsed: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(parsed["n"], "2047");
        assert_eq!(parsed["kind"], "p-strong");
    }

    #[test]
    fn search_family_small() {
        let oracle = SieveOracle::build(20_000).unwrap();
        let samples = search_family(&nat(2), &nat(3), 1..=8, &nat(2), Some(&oracle));
        let primes: Vec<u32> = samples
            .iter()
            .filter(|s| s.result.as_ref().map(|v| v.is_prime()).unwrap_or(false))
            .map(|s| s.n)
            .collect();
        assert_eq!(primes, vec![1, 2, 4, 5, 6]);

        let samples = search_family(&nat(1), &nat(2), 1..=5, &nat(2), Some(&oracle));
        let primes: Vec<u32> = samples
            .iter()
            .filter(|s| s.result.as_ref().map(|v| v.is_prime()).unwrap_or(false))
            .map(|s| s.n)
            .collect();
        assert_eq!(primes, vec![1, 2, 4]);

        let empty = search_family(&nat(2), &nat(3), 5..=4, &nat(2), None);
        assert!(empty.is_empty());
    }
}
