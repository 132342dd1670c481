//! Arbitrary-precision modular arithmetic kernel.
//!
//! Everything here counts its work: each modular product (squaring,
//! multiplication or division by a cached inverse) ticks an [`OpCounter`],
//! which is what the bench layer uses to validate cost claims. The kernel
//! also knows how to compute p-th powers through a precomputed
//! [`PowerSchedule`], which for exponents with sparse signed-digit
//! representations (Mersenne/Fermat-like primes) beats plain
//! square-and-multiply.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision non-negative integer used throughout the crate.
pub type Natural = BigUint;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("schedule exponent must be at least 2")]
    ExponentTooSmall,
}

/// Tally of modular operations performed.
///
/// Counts only grow while an operation runs; `reductions` ticks once per
/// modular reduction and is reported but never asserted on.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct OpCounter {
    pub squarings: u64,
    pub multiplications: u64,
    pub inversions: u64,
    pub reductions: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total modular products: squarings + multiplications + inverse-multiplies.
    pub fn total_products(&self) -> u64 {
        self.squarings + self.multiplications + self.inversions
    }

    /// Cost with inversions weighted per the model.
    pub fn weighted_cost(&self, model: &CostModel) -> u64 {
        self.squarings + self.multiplications + model.inversion_weight * self.inversions
    }

    fn record_square(&mut self) {
        self.squarings += 1;
        self.reductions += 1;
    }

    fn record_mul(&mut self) {
        self.multiplications += 1;
        self.reductions += 1;
    }

    fn record_inverse_mul(&mut self) {
        self.inversions += 1;
        self.reductions += 1;
    }
}

/// Relative cost of a modular division (multiply by a cached inverse)
/// against a plain modular product. The right ratio depends on operand
/// size and the underlying bignum library, so it is a knob rather than a
/// constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostModel {
    pub inversion_weight: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            inversion_weight: 4,
        }
    }
}

/// One step of a power schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// `acc <- acc^2 mod N`
    Square,
    /// `acc <- acc * x mod N`
    MulBase,
    /// `acc <- acc * x^-1 mod N` (one modular division)
    MulBaseInverse,
}

/// A plan for computing `x^p mod N` as a fixed sequence of steps.
///
/// Replaying the steps symbolically from exponent 1 yields exactly `p`:
/// `Square` doubles the running exponent, `MulBase` adds one,
/// `MulBaseInverse` subtracts one. The predicted counts are the multiset
/// counts of the step kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSchedule {
    exponent: Natural,
    steps: Vec<Step>,
    squarings: usize,
    multiplications: usize,
    inversions: usize,
}

impl PowerSchedule {
    fn from_steps(exponent: Natural, steps: Vec<Step>) -> Self {
        let squarings = steps.iter().filter(|s| **s == Step::Square).count();
        let multiplications = steps.iter().filter(|s| **s == Step::MulBase).count();
        let inversions = steps.iter().filter(|s| **s == Step::MulBaseInverse).count();
        PowerSchedule {
            exponent,
            steps,
            squarings,
            multiplications,
            inversions,
        }
    }

    pub fn exponent(&self) -> &Natural {
        &self.exponent
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn predicted_squarings(&self) -> usize {
        self.squarings
    }

    pub fn predicted_multiplications(&self) -> usize {
        self.multiplications
    }

    pub fn predicted_inversions(&self) -> usize {
        self.inversions
    }

    /// Total operation count with every step weighing one.
    pub fn predicted_total(&self) -> usize {
        self.steps.len()
    }

    pub fn uses_inverse(&self) -> bool {
        self.inversions > 0
    }

    pub fn weighted_cost(&self, model: &CostModel) -> u64 {
        self.squarings as u64
            + self.multiplications as u64
            + model.inversion_weight * self.inversions as u64
    }
}

/// Which p-th-power strategy a chain computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScheduleMode {
    /// Plain left-to-right square-and-multiply.
    Binary,
    /// Signed-digit schedule when the cost model says it is cheaper.
    #[default]
    Scheduled,
}

/// `base^exponent mod modulus` by left-to-right square-and-multiply,
/// counting every modular product.
pub fn mod_pow(
    base: &Natural,
    exponent: &Natural,
    modulus: &Natural,
    counter: &mut OpCounter,
) -> Result<Natural, ArithError> {
    ensure_modulus(modulus)?;
    if exponent.is_zero() {
        return Ok(Natural::one());
    }
    let base = reduce(base, modulus, counter);
    let mut acc = base.clone();
    let nbits = exponent.bits();
    for i in (0..nbits - 1).rev() {
        acc = square(&acc, modulus, counter);
        if exponent.bit(i) {
            acc = mul(&acc, &base, modulus, counter);
        }
    }
    Ok(acc)
}

/// Plain binary square-and-multiply as a schedule: `bits(p) - 1` squarings
/// and `popcount(p) - 1` multiplications.
pub fn binary_schedule(p: &Natural) -> Result<PowerSchedule, ArithError> {
    ensure_exponent(p)?;
    Ok(PowerSchedule::from_steps(p.clone(), binary_steps(p)))
}

/// Best schedule for `x^p` by raw operation count.
///
/// Compares plain binary against the non-adjacent-form signed-digit
/// schedule and keeps the shorter one (ties go to the signed-digit form,
/// which is never heavier in multiplies). For `p = 2^s - 1` this yields
/// `s` squarings plus one division; for `p = 2^s + 1`, `s` squarings plus
/// one multiplication.
pub fn build_schedule(p: &Natural) -> Result<PowerSchedule, ArithError> {
    ensure_exponent(p)?;
    let bin = binary_steps(p);
    let naf = naf_steps(p);
    let steps = if naf.len() <= bin.len() { naf } else { bin };
    Ok(PowerSchedule::from_steps(p.clone(), steps))
}

/// Schedule minimizing the *weighted* cost under the given model; used by
/// the certifiers, which only pay for an inversion when it is predicted
/// to win.
pub fn select_schedule(p: &Natural, model: &CostModel) -> Result<PowerSchedule, ArithError> {
    ensure_exponent(p)?;
    let bin = PowerSchedule::from_steps(p.clone(), binary_steps(p));
    let naf = PowerSchedule::from_steps(p.clone(), naf_steps(p));
    if naf.weighted_cost(model) < bin.weighted_cost(model) {
        Ok(naf)
    } else {
        Ok(bin)
    }
}

/// Schedule for the requested mode.
pub fn schedule_for(
    p: &Natural,
    mode: ScheduleMode,
    model: &CostModel,
) -> Result<PowerSchedule, ArithError> {
    match mode {
        ScheduleMode::Binary => binary_schedule(p),
        ScheduleMode::Scheduled => select_schedule(p, model),
    }
}

/// Result of running a schedule: either the power, or a shared factor
/// with the modulus discovered while inverting the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduledPow {
    Value(Natural),
    /// `gcd(x, modulus) > 1`; for the primality chains this certifies the
    /// modulus composite (or degenerate, when the gcd equals it).
    SharedFactor(Natural),
}

/// `x^p mod modulus` following a schedule.
///
/// An inverse-multiply step is charged as one division on the counter;
/// the inverse itself is computed once per call by extended gcd.
pub fn pow_p_scheduled(
    x: &Natural,
    schedule: &PowerSchedule,
    modulus: &Natural,
    counter: &mut OpCounter,
) -> Result<ScheduledPow, ArithError> {
    ensure_modulus(modulus)?;
    let x = reduce(x, modulus, counter);
    let inverse = if schedule.uses_inverse() {
        match mod_inverse(&x, modulus)? {
            ModInverse::Inverse(v) => Some(v),
            ModInverse::SharedFactor(g) => return Ok(ScheduledPow::SharedFactor(g)),
        }
    } else {
        None
    };
    let mut acc = x.clone();
    for step in schedule.steps() {
        match step {
            Step::Square => acc = square(&acc, modulus, counter),
            Step::MulBase => acc = mul(&acc, &x, modulus, counter),
            Step::MulBaseInverse => {
                let inv = inverse.as_ref().expect("schedule with inverse step");
                acc = &acc * inv % modulus;
                counter.record_inverse_mul();
            }
        }
    }
    Ok(ScheduledPow::Value(acc))
}

/// `(1 + x + x^2 + ... + x^{p-1}) mod modulus` for prime `p`, i.e. the
/// p-th cyclotomic polynomial at `x`.
///
/// Evaluated by binary splitting of the geometric sum —
/// `S(2m) = S(m) * (1 + x^m)` with one extra power for odd lengths — so
/// the cost stays `O(log p)` modular products instead of `p - 1`.
pub fn phi_p_eval(
    x: &Natural,
    p: &Natural,
    modulus: &Natural,
    counter: &mut OpCounter,
) -> Result<Natural, ArithError> {
    ensure_modulus(modulus)?;
    if p.is_zero() {
        return Ok(Natural::zero());
    }
    let x = reduce(x, modulus, counter);
    // Scan p MSB -> LSB keeping (sum, power) = (S(v), x^v) for the prefix v.
    let mut sum = Natural::one();
    let mut power = x.clone();
    let nbits = p.bits();
    for i in (0..nbits - 1).rev() {
        // v <- 2v: S(2v) = S(v) + S(v) * x^v, x^{2v} = (x^v)^2
        let cross = mul(&sum, &power, modulus, counter);
        sum = add_mod(&sum, &cross, modulus, counter);
        let last = i == 0;
        let bit = p.bit(i);
        if bit || !last {
            power = square(&power, modulus, counter);
        }
        if bit {
            // v <- v + 1: S(v+1) = S(v) + x^v
            sum = add_mod(&sum, &power, modulus, counter);
            if !last {
                power = mul(&power, &x, modulus, counter);
            }
        }
    }
    Ok(sum)
}

/// Outcome of a modular inversion attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModInverse {
    Inverse(Natural),
    /// The nontrivial `gcd(x, modulus)`; never an error, a found factor is
    /// useful information.
    SharedFactor(Natural),
}

/// Inverse of `x` modulo `modulus` by extended gcd.
pub fn mod_inverse(x: &Natural, modulus: &Natural) -> Result<ModInverse, ArithError> {
    ensure_modulus(modulus)?;
    let x = x % modulus;
    let ext = BigInt::from(x).extended_gcd(&BigInt::from(modulus.clone()));
    if ext.gcd.is_one() {
        let m = BigInt::from(modulus.clone());
        let mut coeff = ext.x % &m;
        if coeff.is_negative() {
            coeff += &m;
        }
        Ok(ModInverse::Inverse(coeff.to_biguint().expect("normalized")))
    } else {
        Ok(ModInverse::SharedFactor(
            ext.gcd.to_biguint().expect("gcd of naturals"),
        ))
    }
}

fn ensure_modulus(modulus: &Natural) -> Result<(), ArithError> {
    if *modulus < Natural::from(2u32) {
        Err(ArithError::ModulusTooSmall)
    } else {
        Ok(())
    }
}

fn ensure_exponent(p: &Natural) -> Result<(), ArithError> {
    if *p < Natural::from(2u32) {
        Err(ArithError::ExponentTooSmall)
    } else {
        Ok(())
    }
}

fn reduce(x: &Natural, modulus: &Natural, counter: &mut OpCounter) -> Natural {
    if x < modulus {
        x.clone()
    } else {
        counter.reductions += 1;
        x % modulus
    }
}

fn square(x: &Natural, modulus: &Natural, counter: &mut OpCounter) -> Natural {
    counter.record_square();
    x * x % modulus
}

fn mul(a: &Natural, b: &Natural, modulus: &Natural, counter: &mut OpCounter) -> Natural {
    counter.record_mul();
    a * b % modulus
}

fn add_mod(a: &Natural, b: &Natural, modulus: &Natural, counter: &mut OpCounter) -> Natural {
    let s = a + b;
    if s >= *modulus {
        counter.reductions += 1;
        s % modulus
    } else {
        s
    }
}

fn binary_steps(p: &Natural) -> Vec<Step> {
    let mut steps = Vec::new();
    let nbits = p.bits();
    for i in (0..nbits - 1).rev() {
        steps.push(Step::Square);
        if p.bit(i) {
            steps.push(Step::MulBase);
        }
    }
    steps
}

/// Non-adjacent form of `p`, least significant digit first. Digits are in
/// {-1, 0, 1} with no two adjacent nonzeros; it has minimal Hamming weight
/// among signed-digit representations.
fn naf_digits(p: &Natural) -> Vec<i8> {
    let mut digits = Vec::new();
    let mut n = p.clone();
    let one = Natural::one();
    let four = Natural::from(4u32);
    while !n.is_zero() {
        if n.is_odd() {
            let rem4 = (&n % &four).to_u32_digits();
            if rem4 == [1] {
                digits.push(1i8);
                n -= &one;
            } else {
                digits.push(-1i8);
                n += &one;
            }
        } else {
            digits.push(0i8);
        }
        n >>= 1;
    }
    digits
}

fn naf_steps(p: &Natural) -> Vec<Step> {
    let digits = naf_digits(p);
    debug_assert_eq!(digits.last(), Some(&1i8));
    let mut steps = Vec::new();
    for &d in digits.iter().rev().skip(1) {
        steps.push(Step::Square);
        match d {
            1 => steps.push(Step::MulBase),
            -1 => steps.push(Step::MulBaseInverse),
            _ => {}
        }
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn plain_pow(base: u64, exp: u64, modulus: u64) -> u64 {
        // Independent reference: repeated multiplication in u128.
        let mut acc: u128 = 1;
        for _ in 0..exp {
            acc = acc * base as u128 % modulus as u128;
        }
        acc as u64
    }

    #[test]
    fn mod_pow_small_values() {
        let mut c = OpCounter::new();
        assert_eq!(mod_pow(&nat(2), &nat(6), &nat(19), &mut c).unwrap(), nat(7));
        assert_eq!(
            mod_pow(&nat(3), &nat(8), &nat(17), &mut c).unwrap(),
            nat(16)
        );
        // empty product
        assert_eq!(
            mod_pow(&nat(5), &nat(0), &nat(11), &mut c).unwrap(),
            nat(1)
        );
        assert_eq!(
            mod_pow(&nat(2), &nat(6), &nat(1), &mut c),
            Err(ArithError::ModulusTooSmall)
        );
    }

    #[test]
    fn mod_pow_matches_repeated_multiplication() {
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            seed >> 33
        };
        for _ in 0..2000 {
            let base = next() % 1000;
            let exp = next() % 200;
            let modulus = 2 + next() % 100_000;
            let mut c = OpCounter::new();
            let got = mod_pow(&nat(base), &nat(exp), &nat(modulus), &mut c).unwrap();
            assert_eq!(got, nat(plain_pow(base, exp, modulus)));
        }
    }

    #[test]
    fn mod_pow_counts_binary_shape() {
        // 127 = 1111111b: 6 squarings, 6 multiplications.
        let mut c = OpCounter::new();
        mod_pow(&nat(3), &nat(127), &nat(1009), &mut c).unwrap();
        assert_eq!((c.squarings, c.multiplications), (6, 6));
    }

    #[test]
    fn schedule_127_is_seven_squarings_and_a_division() {
        let s = build_schedule(&nat(127)).unwrap();
        assert_eq!(s.predicted_squarings(), 7);
        assert_eq!(s.predicted_multiplications(), 0);
        assert_eq!(s.predicted_inversions(), 1);
        assert_eq!(s.predicted_total(), 8);
        let bin = binary_schedule(&nat(127)).unwrap();
        assert_eq!(bin.predicted_total(), 12);
    }

    #[test]
    fn schedule_two_is_one_squaring() {
        let s = build_schedule(&nat(2)).unwrap();
        assert_eq!(s.steps(), &[Step::Square]);
        assert_eq!(
            (
                s.predicted_squarings(),
                s.predicted_multiplications(),
                s.predicted_inversions()
            ),
            (1, 0, 0)
        );
    }

    #[test]
    fn schedule_257_is_eight_squarings_one_multiply() {
        let s = build_schedule(&nat(257)).unwrap();
        assert_eq!(s.predicted_squarings(), 8);
        assert_eq!(s.predicted_multiplications(), 1);
        assert_eq!(s.predicted_inversions(), 0);
    }

    #[test]
    fn schedule_rejects_unit_exponent() {
        assert_eq!(build_schedule(&nat(1)), Err(ArithError::ExponentTooSmall));
    }

    #[test]
    fn mersenne_schedule_counts() {
        // p = 2^s - 1: s squarings + 1 division = s + 1 ops, against
        // 2(s - 1) for binary; at the count level the saving approaches 50%.
        for s in 3u32..=13 {
            let p = nat((1u64 << s) - 1);
            let sched = build_schedule(&p).unwrap();
            assert_eq!(sched.predicted_total(), s as usize + 1);
            let bin = binary_schedule(&p).unwrap();
            assert_eq!(bin.predicted_total(), 2 * (s as usize - 1));
            if s >= 3 {
                assert!(sched.predicted_total() <= bin.predicted_total());
            }
        }
    }

    #[test]
    fn naf_multiply_count_never_exceeds_binary() {
        for p in 2u64..2000 {
            let sched = build_schedule(&nat(p)).unwrap();
            let bin = binary_schedule(&nat(p)).unwrap();
            let naf_muls = sched.predicted_multiplications() + sched.predicted_inversions();
            assert!(naf_muls <= bin.predicted_multiplications(), "p = {p}");
            assert!(sched.predicted_total() <= bin.predicted_total(), "p = {p}");
        }
    }

    /// Symbolic replay: running the steps on a formal exponent must land
    /// exactly on p.
    fn replay_exponent(schedule: &PowerSchedule) -> i128 {
        let mut e: i128 = 1;
        for step in schedule.steps() {
            match step {
                Step::Square => e *= 2,
                Step::MulBase => e += 1,
                Step::MulBaseInverse => e -= 1,
            }
        }
        e
    }

    #[test]
    fn symbolic_replay_exhaustive_small() {
        for p in 2u64..=5000 {
            let sched = build_schedule(&nat(p)).unwrap();
            assert_eq!(replay_exponent(&sched), p as i128, "p = {p}");
            let bin = binary_schedule(&nat(p)).unwrap();
            assert_eq!(replay_exponent(&bin), p as i128, "p = {p}");
        }
    }

    #[test]
    fn scheduled_pow_matches_mod_pow() {
        // >= 10^4 randomized cases, skipping only found-factor outcomes.
        let mut seed = 0x853c49e6748fea9bu64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            seed >> 33
        };
        let mut checked = 0u32;
        while checked < 10_000 {
            let x = next() % 10_000;
            let p = 2 + next() % 512;
            let modulus = 2 + next() % 1_000_000;
            let sched = build_schedule(&nat(p)).unwrap();
            let mut c = OpCounter::new();
            match pow_p_scheduled(&nat(x), &sched, &nat(modulus), &mut c).unwrap() {
                ScheduledPow::Value(v) => {
                    let mut c2 = OpCounter::new();
                    let want = mod_pow(&nat(x), &nat(p), &nat(modulus), &mut c2).unwrap();
                    assert_eq!(v, want, "x={x} p={p} m={modulus}");
                    checked += 1;
                }
                ScheduledPow::SharedFactor(g) => {
                    assert!(g > nat(1));
                    assert!((nat(x) % &g).is_zero());
                    assert!((nat(modulus) % &g).is_zero());
                }
            }
        }
    }

    #[test]
    fn scheduled_pow_factor_signal() {
        // x shares a factor with the modulus and the schedule divides.
        let sched = build_schedule(&nat(127)).unwrap();
        assert!(sched.uses_inverse());
        let mut c = OpCounter::new();
        match pow_p_scheduled(&nat(6), &sched, &nat(21), &mut c).unwrap() {
            ScheduledPow::SharedFactor(g) => assert_eq!(g, nat(3)),
            other => panic!("expected factor, got {other:?}"),
        }
    }

    #[test]
    fn scheduled_pow_fixed_point_one() {
        for p in [2u64, 3, 7, 127, 257] {
            let sched = build_schedule(&nat(p)).unwrap();
            let mut c = OpCounter::new();
            assert_eq!(
                pow_p_scheduled(&Natural::one(), &sched, &nat(97), &mut c).unwrap(),
                ScheduledPow::Value(Natural::one())
            );
        }
    }

    #[test]
    fn scheduled_pow_small_case() {
        let sched = build_schedule(&nat(7)).unwrap();
        let mut c = OpCounter::new();
        assert_eq!(
            pow_p_scheduled(&nat(5), &sched, &nat(11), &mut c).unwrap(),
            ScheduledPow::Value(nat(3))
        );
    }

    #[test]
    fn phi_small_values() {
        let mut c = OpCounter::new();
        assert_eq!(
            phi_p_eval(&nat(7), &nat(3), &nat(19), &mut c).unwrap(),
            nat(0)
        );
        // phi_p(1) = p
        for p in [2u64, 3, 5, 7, 13, 127] {
            assert_eq!(
                phi_p_eval(&nat(1), &nat(p), &nat(1_000_003), &mut c).unwrap(),
                nat(p)
            );
        }
        // phi_2(x) = x + 1
        for x in [0u64, 1, 5, 100] {
            assert_eq!(
                phi_p_eval(&nat(x), &nat(2), &nat(1000), &mut c).unwrap(),
                nat(x + 1)
            );
        }
    }

    fn phi_naive(x: u64, p: u64, m: u64) -> u64 {
        let mut sum: u128 = 0;
        let mut term: u128 = 1;
        for _ in 0..p {
            sum = (sum + term) % m as u128;
            term = term * x as u128 % m as u128;
        }
        sum as u64
    }

    #[test]
    fn phi_matches_naive_sum() {
        let primes: Vec<u64> = (2..100).filter(|&p| (2..p).all(|d| p % d != 0)).collect();
        let mut seed = 0x2545f4914f6cdd1du64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            seed >> 33
        };
        for _ in 0..3000 {
            let p = primes[(next() % primes.len() as u64) as usize];
            let x = next() % 1000;
            let m = 2 + next() % 1_000_000;
            let mut c = OpCounter::new();
            let got = phi_p_eval(&nat(x), &nat(p), &nat(m), &mut c).unwrap();
            assert_eq!(got, nat(phi_naive(x, p, m)), "x={x} p={p} m={m}");
            // Logarithmic product count.
            assert!(c.total_products() <= 3 * 64);
        }
    }

    #[test]
    fn mod_inverse_values() {
        assert_eq!(
            mod_inverse(&nat(7), &nat(19)).unwrap(),
            ModInverse::Inverse(nat(11))
        );
        assert_eq!(
            mod_inverse(&nat(1), &nat(97)).unwrap(),
            ModInverse::Inverse(nat(1))
        );
        assert_eq!(
            mod_inverse(&nat(6), &nat(21)).unwrap(),
            ModInverse::SharedFactor(nat(3))
        );
        assert_eq!(
            mod_inverse(&nat(0), &nat(21)).unwrap(),
            ModInverse::SharedFactor(nat(21))
        );
    }

    proptest! {
        #[test]
        fn prop_scheduled_equals_binary_pow(x in 0u64..100_000, p in 2u64..1000, m in 2u64..1_000_000) {
            let sched = build_schedule(&nat(p)).unwrap();
            let mut c = OpCounter::new();
            if let ScheduledPow::Value(v) = pow_p_scheduled(&nat(x), &sched, &nat(m), &mut c).unwrap() {
                let mut c2 = OpCounter::new();
                prop_assert_eq!(v, mod_pow(&nat(x), &nat(p), &nat(m), &mut c2).unwrap());
            }
        }

        #[test]
        fn prop_factorization_identity(x in 0u64..10_000, m in 2u64..1_000_000) {
            // (x - 1) * phi_p(x) == x^p - 1 (mod m)
            for p in [2u64, 3, 5, 7, 13, 31] {
                let mut c = OpCounter::new();
                let phi = phi_p_eval(&nat(x), &nat(p), &nat(m), &mut c).unwrap();
                let pow = mod_pow(&nat(x), &nat(p), &nat(m), &mut c).unwrap();
                let xm = nat(x) % nat(m);
                let lhs = (xm + nat(m) - nat(1)) % nat(m) * phi % nat(m);
                let rhs = (pow + nat(m) - nat(1)) % nat(m);
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn prop_inverse_really_inverts(x in 1u64..1_000_000, m in 2u64..1_000_000) {
            match mod_inverse(&nat(x), &nat(m)).unwrap() {
                ModInverse::Inverse(inv) => {
                    prop_assert_eq!(nat(x) * inv % nat(m), nat(1) % nat(m));
                }
                ModInverse::SharedFactor(g) => {
                    prop_assert!(g > nat(1));
                    prop_assert!((nat(x) % &g).is_zero());
                    prop_assert!((nat(m) % &g).is_zero());
                }
            }
        }
    }
}
