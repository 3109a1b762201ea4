//! Midy's property in any base.
//!
//! `N` has Midy's property for base `b` and block count `d` when, for every
//! `x` coprime to `N`, cutting the period of `x/N` into `d` equal blocks of
//! `k` digits gives a block sum divisible by `b^k - 1`. This crate
//!
//! - computes periods and decides the property digit by digit
//!   ([`expansion`]),
//! - decides it from the prime structure of `N` with several interchangeable
//!   deciders ([`midy`]), including the multi-prime criterion in [`jenkins`],
//! - computes multiplicative orders with prime-power lifting ([`order`]),
//! - and builds primes `≡ 1 (mod q^v)` from smallest Midy witnesses
//!   ([`progression`]).
//!
//! ```
//! use midylab::{midy_set, period_digits};
//!
//! assert_eq!(period_digits(1, 13, 10).unwrap().render(), "076923");
//! assert_eq!(midy_set(8, 75).unwrap().members, vec![4, 20]);
//! ```

pub mod arith;
pub mod error;
pub mod expansion;
pub mod jenkins;
pub mod midy;
pub mod order;
pub mod progression;
pub mod registry;

pub use arith::{factor, gcd, is_prime, pow_mod, valuation, Factorization, Natural};
pub use error::{MidyError, Result};
pub use expansion::{blocks_and_sum, midy_direct, period_digits, BlockDecomposition, PeriodExpansion};
pub use jenkins::{jenkins_check, jenkins_check_gcd, JenkinsInstance};
pub use midy::{
    builtin_deciders, guel_triple, midy_check_direct, midy_check_ppl2, midy_check_ppl3, midy_set,
    Certificate, Method, MidyDecider, MidySet, MidyVerdict,
};
pub use order::{order_mod, order_prime_power, OrderRecord};
pub use progression::{
    midy_prime_v1_check, prime_power_midy_structure, prime_progression, smallest_midy_witness,
    ProgressionTrace,
};
