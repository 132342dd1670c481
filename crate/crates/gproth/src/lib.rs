//! Primality testing and certification for integers of the form
//! `N = K * p^n + 1`.
//!
//! The library is built around one structural fact: modulo a prime, the
//! power chain `S_0 = a^K`, `S_i = S_{i-1}^p` can only reach 1 through a
//! zero of the p-th cyclotomic polynomial, and when that happens late
//! enough in the chain (`p^{2j} > K * p^n`, checked by exact integer
//! comparison) the number is certified prime.
//!
//! Modules:
//!
//! * [`arith`] — counting modular arithmetic: powers, scheduled p-th
//!   powers, cyclotomic evaluation, inverses.
//! * [`forms`] — validated `K * p^n + 1` forms and the exact threshold
//!   index arithmetic.
//! * [`primality`] — the tests: Pepin, classical and generalized Proth,
//!   Pocklington, the chain probable-prime tests, the two certifiers, and
//!   certificate verification.
//! * [`census`] — sieve oracle, 64-bit deterministic primality,
//!   factorization, pseudoprime enumeration and family scans.
//! * [`bench`] — instrumented certification runs for count and scaling
//!   checks.

pub mod arith;
pub mod bench;
pub mod census;
pub mod forms;
pub mod primality;
pub mod verdict;

pub use arith::{CostModel, Natural, OpCounter, PowerSchedule, ScheduleMode};
pub use forms::{compute_j, make_form, threshold_ok, FormClass, FormError, ProthForm};
pub use primality::{
    certify_auto, certify_jump, certify_scan, complete_strong, generalized_proth,
    inconclusive_probability, jacobi, p_miller_rabin, pepin, pocklington, proth_classic,
    verify_certificate, CertifyRun, CertifyStrategy, TestContext, TestError,
};
pub use verdict::{
    CompositeReason, CompositenessWitness, Outcome, PrimalityCertificate, ProbableKind,
    TestKind, TestVerdict,
};
