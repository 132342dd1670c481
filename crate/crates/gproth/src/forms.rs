//! Validated `N = K * p^n + 1` forms and the exact integer arithmetic
//! behind every threshold comparison.
//!
//! The certification theorems state their bounds with real logarithms
//! (`2j > log_p K + n`). Floating point would mis-certify near boundary
//! values, so everything here compares exact powers instead:
//! `p^{2j} > K * p^n`, with equality counting as failure because the
//! underlying inequality is strict.

use crate::arith::Natural;
use crate::census;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("K must be at least 1")]
    ZeroK,
    #[error("exponent n must be at least 1")]
    ZeroExponent,
    #[error("p = {0} is not prime")]
    PNotPrime(Natural),
    #[error("p = {0} exceeds the supported range (p must fit in 64 bits)")]
    PTooLarge(Natural),
    #[error("gcd(K, p) = {gcd} but K and p must be coprime (K = {k}, p = {p})")]
    SharedFactor { k: Natural, p: Natural, gcd: Natural },
}

/// Classification flags for a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormClass {
    /// `K < p^n`, the hypothesis of the deterministic certifiers.
    pub generalized: bool,
    /// `p = 2` with `K` odd and `K < 2^n` (the classical case; implies
    /// `generalized`).
    pub proth_classic: bool,
}

/// A validated `N = K * p^n + 1` with its cached value and classification.
///
/// Immutable after construction; `p` is checked prime with the
/// deterministic 64-bit oracle, larger `p` is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProthForm {
    k: Natural,
    p: Natural,
    n: u32,
    value: Natural,
    class: FormClass,
}

impl ProthForm {
    pub fn k(&self) -> &Natural {
        &self.k
    }

    pub fn prime(&self) -> &Natural {
        &self.p
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    /// The number `N = K * p^n + 1` itself.
    pub fn value(&self) -> &Natural {
        &self.value
    }

    pub fn class(&self) -> FormClass {
        self.class
    }

    pub fn is_generalized(&self) -> bool {
        self.class.generalized
    }

    pub fn is_proth_classic(&self) -> bool {
        self.class.proth_classic
    }

    /// `(N - 1) / p`, the exponent of the outermost chain step.
    pub fn n_minus_one_over_p(&self) -> Natural {
        (&self.value - Natural::one()) / &self.p
    }
}

impl std::fmt::Display for ProthForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}*{}^{}+1", self.k, self.p, self.n)
    }
}

/// Validate and build a form, or report the violated invariant.
pub fn make_form(k: Natural, p: Natural, n: u32) -> Result<ProthForm, FormError> {
    if k.is_zero() {
        return Err(FormError::ZeroK);
    }
    if n == 0 {
        return Err(FormError::ZeroExponent);
    }
    let p64 = p.to_u64().ok_or_else(|| FormError::PTooLarge(p.clone()))?;
    if !census::is_prime_u64(p64) {
        return Err(FormError::PNotPrime(p));
    }
    let gcd = k.gcd(&p);
    if !gcd.is_one() {
        return Err(FormError::SharedFactor { k, p, gcd });
    }
    let pn = p.pow(n);
    let generalized = k < pn;
    let proth_classic = p64 == 2 && generalized;
    let value = &k * &pn + Natural::one();
    Ok(ProthForm {
        k,
        p,
        n,
        value,
        class: FormClass {
            generalized,
            proth_classic,
        },
    })
}

/// Largest `J >= 0` with `p^{2J} <= K * p^n`, i.e.
/// `floor((log_p K + n) / 2)`, computed by exact power comparison.
///
/// For generalized forms `J < n`, which is what guarantees the jump
/// certifier has at least one chain step to examine.
pub fn compute_j(form: &ProthForm) -> u32 {
    let target = form.value() - Natural::one(); // K * p^n
    let p_squared = form.prime() * form.prime();
    let mut j = 0u32;
    let mut power = p_squared.clone(); // p^{2(j+1)}
    while power <= target {
        j += 1;
        power *= &p_squared;
    }
    j
}

/// Strict threshold test `p^{2j} > K * p^n` (equivalently
/// `2j > log_p K + n`); equality fails because the certification
/// inequality is strict.
pub fn threshold_ok(form: &ProthForm, j: u32) -> bool {
    form.prime().pow(2 * j) > form.value() - Natural::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn form(k: u64, p: u64, n: u32) -> ProthForm {
        make_form(nat(k), nat(p), n).unwrap()
    }

    #[test]
    fn make_form_examples() {
        let f = form(2, 3, 2);
        assert_eq!(f.value(), &nat(19));
        assert!(f.is_generalized());
        assert!(!f.is_proth_classic());

        let f = form(1, 2, 4);
        assert_eq!(f.value(), &nat(17));
        assert!(f.is_proth_classic());
        assert!(f.is_generalized());

        assert!(matches!(
            make_form(nat(3), nat(3), 1),
            Err(FormError::SharedFactor { .. })
        ));
        assert_eq!(make_form(nat(0), nat(3), 1), Err(FormError::ZeroK));
        assert_eq!(make_form(nat(2), nat(3), 0), Err(FormError::ZeroExponent));
        assert!(matches!(
            make_form(nat(2), nat(9), 1),
            Err(FormError::PNotPrime(_))
        ));
        assert!(matches!(
            make_form(nat(3), nat(4), 2),
            Err(FormError::PNotPrime(_))
        ));
    }

    #[test]
    fn non_generalized_form_is_still_valid() {
        // K > p^n: usable by the probable-prime tests, not the jump certifier.
        let f = form(9, 2, 1);
        assert_eq!(f.value(), &nat(19));
        assert!(!f.is_generalized());
        assert!(!f.is_proth_classic());
    }

    #[test]
    fn compute_j_examples() {
        assert_eq!(compute_j(&form(2, 3, 2)), 1);
        assert_eq!(compute_j(&form(1, 2, 4)), 2);
        assert_eq!(compute_j(&form(5, 7, 3)), 1);
    }

    #[test]
    fn threshold_examples() {
        let f = form(2, 3, 2);
        assert!(threshold_ok(&f, 2)); // 81 > 18
        assert!(!threshold_ok(&f, 1)); // 9 > 18 is false
        let f = form(1, 2, 4);
        assert!(!threshold_ok(&f, 2)); // 16 > 16 must fail: strict inequality
        assert!(threshold_ok(&f, 3));
    }

    #[test]
    fn j_is_last_failing_index_small_grid() {
        for p in [2u64, 3, 5, 7, 13] {
            for n in 1u32..=8 {
                let pn = nat(p).pow(n);
                let mut k = nat(1);
                while &k * &pn + nat(1) < nat(200_000) {
                    if k.gcd(&nat(p)).is_one() {
                        let f = make_form(k.clone(), nat(p), n).unwrap();
                        let j = compute_j(&f);
                        assert!(!threshold_ok(&f, j), "{f}");
                        assert!(threshold_ok(&f, j + 1), "{f}");
                        if f.is_generalized() {
                            assert!(j < n, "{f}: J = {j} must stay below n");
                        }
                    }
                    k += nat(1);
                }
            }
        }
    }

    proptest! {
        /// The float formula floor((log_p K + n) / 2) agrees with the exact
        /// J away from representation boundaries; where it differs, the
        /// float value must be the wrong one.
        #[test]
        fn prop_j_matches_float_formula(k in 1u64..(1u64 << 53), p_idx in 0usize..5, n in 1u32..40) {
            let p = [2u64, 3, 5, 7, 13][p_idx];
            if k % p == 0 {
                return Ok(());
            }
            let f = make_form(Natural::from(k), Natural::from(p), n).unwrap();
            let j = compute_j(&f);
            // Exact definition: p^{2J} <= K p^n < p^{2J + 2}.
            let target = f.value() - Natural::from(1u32);
            prop_assert!(Natural::from(p).pow(2 * j) <= target);
            prop_assert!(Natural::from(p).pow(2 * j + 2) > target);
            let float_j = (((k as f64).log(p as f64) + n as f64) / 2.0).floor();
            if float_j >= 0.0 && (float_j as u32) != j {
                // Float disagreement must be a float error.
                let fj = float_j as u32;
                let wrong = Natural::from(p).pow(2 * fj) > target
                    || Natural::from(p).pow(2 * fj + 2) <= target;
                prop_assert!(wrong, "float J = {fj} contradicts exact J = {j} for {f}");
            }
        }

        #[test]
        fn prop_threshold_strictness(k in 1u64..10_000, p_idx in 0usize..5, n in 1u32..12) {
            let p = [2u64, 3, 5, 7, 13][p_idx];
            if k % p == 0 {
                return Ok(());
            }
            let f = make_form(Natural::from(k), Natural::from(p), n).unwrap();
            for j in 0..=n {
                let lhs = Natural::from(p).pow(2 * j);
                let target = f.value() - Natural::from(1u32);
                prop_assert_eq!(threshold_ok(&f, j), lhs > target);
            }
        }
    }
}
