//! When is `q^v` in a Midy set, and primes `≡ 1 (mod q^v)` from it.
//!
//! For `N = q^n ∏ p_i^{h_i}` (some `h_i > 0`), `q^v ∈ M_b(N)` exactly when
//! `n <= v`, every `ν_q(|b|_{p_i})` is positive, and
//! `ν_q(|b|_{p_i}) > t - v` for every `i`, where `t = ν_q(|b|_N)`. The
//! smallest `N` with `q^v ∈ M_b(N)` is then a prime `≡ 1 (mod q^v)`, and
//! repeating the search with moduli `q^{tv}` larger than the previous prime
//! yields an unbounded increasing sequence of such primes.

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, factor, gcd, is_prime, nu, Natural};
use crate::error::{MidyError, Result};
use crate::midy::{MidyDecider, MidyQuery, Ppl2};
use crate::order::{lifting_exponent, order_mod_factored, order_mod_prime};

/// Default number of candidates a witness search examines.
pub const DEFAULT_SEARCH_BOUND: Natural = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OtherPrime {
    pub prime: Natural,
    pub exponent: u32,
    /// `ν_q(|b|_p)`.
    pub nu_q_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerStructure {
    pub base: Natural,
    pub q: Natural,
    pub v: u32,
    pub modulus: Natural,
    /// `n = ν_q(N)`.
    pub n: u32,
    /// `m = ν_q(b^{|b|_q} - 1)`, only needed (and only defined) when `q | N`.
    pub m: Option<u32>,
    pub others: Vec<OtherPrime>,
    /// `t = ν_q(|b|_N)`.
    pub t: u32,
}

/// Both readings of the structural criterion, side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub structure: PrimePowerStructure,
    /// `n <= v` and every `ν_q(|b|_{p_i}) > 0`.
    pub basic_conditions: bool,
    /// `max_i{n - m, ν_q(|b|_{p_i})} - v < min_i ν_q(|b|_{p_i})`, with the
    /// `n - m` term counted only when `n > m`.
    pub max_min_inequality: bool,
    /// `ν_q(|b|_{p_i}) > ν_q(|b|_N) - v` for every `i`.
    pub per_prime_inequality: bool,
    /// `None` when `N` is a pure power of `q` and the decision fell back to
    /// [`Ppl2`].
    pub routed_to_ppl2: Option<bool>,
}

impl StructureReport {
    /// The decision: the per-prime reading, or the [`Ppl2`] fallback.
    pub fn holds(&self) -> bool {
        match self.routed_to_ppl2 {
            Some(v) => v,
            None => self.basic_conditions && self.per_prime_inequality,
        }
    }

    /// Whether the two readings of the inequality disagree on this input.
    pub fn readings_disagree(&self) -> bool {
        self.routed_to_ppl2.is_none()
            && self.basic_conditions
            && self.max_min_inequality != self.per_prime_inequality
    }
}

fn check_prime(q: Natural) -> Result<()> {
    if !is_prime(q) {
        return Err(MidyError::precondition(format!("{q} is not prime")));
    }
    Ok(())
}

/// `m = ν_q(b^{|b|_q} - 1)` for `q ∤ b`.
fn q_lifting_exponent(b: Natural, q: Natural) -> Result<u32> {
    if q == 2 {
        // |b|_2 = 1
        return Ok(nu(2, b - 1));
    }
    lifting_exponent(b, q)
}

pub fn prime_power_structure_report(b: Natural, n_total: Natural, q: Natural, v: u32) -> Result<StructureReport> {
    check_prime(q)?;
    if v == 0 {
        return Err(MidyError::precondition("v must be positive"));
    }
    if n_total == 0 {
        return Err(MidyError::domain("modulus 0"));
    }
    if gcd(b, n_total) != 1 {
        return Err(MidyError::precondition(format!("gcd({b}, {n_total}) != 1")));
    }
    let qv = checked_pow(q, v)?;
    let factors = factor(n_total)?;
    let order = order_mod_factored(b, &factors)?;
    if order % qv != 0 {
        return Err(MidyError::precondition(format!("{q}^{v} does not divide |{b}|_{n_total} = {order}")));
    }
    let n = factors.exponent_of(q);
    let m = if n > 0 { Some(q_lifting_exponent(b, q)?) } else { None };
    let mut others = Vec::new();
    for &(p, h) in factors.factors().iter().filter(|&&(p, _)| p != q) {
        others.push(OtherPrime {
            prime: p,
            exponent: h,
            nu_q_order: nu(q, order_mod_prime(b, p)?),
        });
    }
    let t = nu(q, order);
    let structure = PrimePowerStructure {
        base: b,
        q,
        v,
        modulus: n_total,
        n,
        m,
        others,
        t,
    };

    if structure.others.is_empty() {
        let q_ = MidyQuery::factored(b, factors, qv)?;
        let holds = Ppl2.decide_query(&q_)?.holds;
        return Ok(StructureReport {
            structure,
            basic_conditions: false,
            max_min_inequality: false,
            per_prime_inequality: false,
            routed_to_ppl2: Some(holds),
        });
    }

    let nus = structure.others.iter().map(|o| o.nu_q_order as i64);
    let min_nu = nus.clone().min().unwrap_or(0);
    let max_nu = nus.clone().max().unwrap_or(0);
    let lifted = match m {
        Some(m) if n > m => (n - m) as i64,
        _ => 0,
    };
    let v_ = v as i64;
    let basic_conditions = n <= v && min_nu > 0;
    let max_min_inequality = lifted.max(max_nu) - v_ < min_nu;
    let per_prime_inequality = nus.clone().all(|x| x > t as i64 - v_);
    Ok(StructureReport {
        structure,
        basic_conditions,
        max_min_inequality,
        per_prime_inequality,
        routed_to_ppl2: None,
    })
}

/// Whether `q^v ∈ M_b(N)`, decided from the prime structure of `N`.
pub fn prime_power_midy_structure(b: Natural, n: Natural, q: Natural, v: u32) -> Result<bool> {
    Ok(prime_power_structure_report(b, n, q, v)?.holds())
}

/// The `v = 1` criterion: every relevant `p | N` has
/// `ν_q(|b|_p) = ν_q(|b|_N)`, and if `q | N` then `q^2 ∤ N` with `p = q`
/// left out of the comparison.
pub fn midy_prime_v1_check(b: Natural, n_total: Natural, q: Natural) -> Result<bool> {
    check_prime(q)?;
    if n_total == 0 {
        return Err(MidyError::domain("modulus 0"));
    }
    if gcd(b, n_total) != 1 {
        return Err(MidyError::precondition(format!("gcd({b}, {n_total}) != 1")));
    }
    let factors = factor(n_total)?;
    let order = order_mod_factored(b, &factors)?;
    if order % q != 0 {
        return Err(MidyError::precondition(format!("{q} does not divide |{b}|_{n_total} = {order}")));
    }
    let t = nu(q, order);
    let n = factors.exponent_of(q);
    if n >= 2 {
        return Ok(false);
    }
    for p in factors.primes().filter(|&p| p != q) {
        if nu(q, order_mod_prime(b, p)?) != t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `d ∈ M_b(N)` for a candidate `N` coprime to `b`, or `false` when `d`
/// does not divide `|b|_N`.
fn in_midy_set(b: Natural, n: Natural, d: Natural) -> Result<bool> {
    let factors = factor(n)?;
    let order = order_mod_factored(b, &factors)?;
    if order % d != 0 {
        return Ok(false);
    }
    let query = MidyQuery::factored(b, factors, d)?;
    Ok(Ppl2.decide_query(&query)?.holds)
}

/// Smallest `N >= 2` coprime to `b` with `q^v ∈ M_b(N)`, scanning `N` up
/// to `bound`.
///
/// # Panics
///
/// If the witness found is not a prime `≡ 1 (mod q^v)`.
pub fn smallest_midy_witness_within(b: Natural, q: Natural, v: u32, bound: Natural) -> Result<Natural> {
    if b < 2 {
        return Err(MidyError::precondition(format!("base {b} must be at least 2")));
    }
    check_prime(q)?;
    if v == 0 {
        return Err(MidyError::precondition("v must be positive"));
    }
    let qv = checked_pow(q, v)?;
    for n in 2..=bound {
        if gcd(n, b) != 1 {
            continue;
        }
        if in_midy_set(b, n, qv)? {
            assert!(
                is_prime(n) && n % qv == 1,
                "smallest witness {n} for {q}^{v} in base {b} is not a prime ≡ 1 mod {qv}"
            );
            return Ok(n);
        }
    }
    Err(MidyError::SearchExhausted { bound })
}

pub fn smallest_midy_witness(b: Natural, q: Natural, v: u32) -> Result<Natural> {
    smallest_midy_witness_within(b, q, v, DEFAULT_SEARCH_BOUND)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionStep {
    /// `q^{t_j v}`.
    pub modulus: Natural,
    pub prime: Natural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionTrace {
    pub base: Natural,
    pub q: Natural,
    pub v: u32,
    pub steps: Vec<ProgressionStep>,
}

impl ProgressionTrace {
    pub fn primes(&self) -> Vec<Natural> {
        self.steps.iter().map(|s| s.prime).collect()
    }

    pub fn moduli(&self) -> Vec<Natural> {
        self.steps.iter().map(|s| s.modulus).collect()
    }

    /// Primes strictly increasing, each `≡ 1` modulo its step modulus, and
    /// each step modulus above the previous prime.
    pub fn is_consistent(&self) -> bool {
        let qv = match checked_pow(self.q, self.v) {
            Ok(x) => x,
            Err(_) => return false,
        };
        self.steps.iter().all(|s| is_prime(s.prime) && s.prime % s.modulus == 1 && s.prime % qv == 1)
            && self.steps.windows(2).all(|w| {
                w[0].prime < w[1].prime && w[0].modulus < w[1].modulus && w[1].modulus > w[0].prime
            })
    }
}

/// Smallest prime `P ≡ 1 (mod modulus)` with `modulus ∈ M_b(P)`, trying
/// `P = 1 + c·modulus` for `c = 1..=bound`.
fn next_progression_prime(b: Natural, modulus: Natural, bound: Natural) -> Result<Natural> {
    for c in 1..=bound {
        let p = c
            .checked_mul(modulus)
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| MidyError::overflow("progression candidate"))?;
        if b % p == 0 || !is_prime(p) {
            continue;
        }
        if in_midy_set(b, p, modulus)? {
            return Ok(p);
        }
    }
    Err(MidyError::SearchExhausted { bound })
}

/// `count` primes `≡ 1 (mod q^v)`: the smallest Midy witness, then for each
/// later step the smallest prime `P ≡ 1 (mod q^{tv})` with `q^{tv} ∈ M_b(P)`,
/// where `t` is the least integer with `q^{tv}` above the previous prime.
pub fn prime_progression_within(b: Natural, q: Natural, v: u32, count: usize, bound: Natural) -> Result<ProgressionTrace> {
    if count == 0 {
        return Err(MidyError::precondition("count must be at least 1"));
    }
    let qv = checked_pow(q, v)?;
    let first = smallest_midy_witness_within(b, q, v, bound)?;
    let mut steps = vec![ProgressionStep {
        modulus: qv,
        prime: first,
    }];
    while steps.len() < count {
        let prev = steps.last().map(|s| s.prime).unwrap_or(first);
        let mut modulus = qv;
        while modulus <= prev {
            modulus = modulus
                .checked_mul(qv)
                .ok_or_else(|| MidyError::overflow("progression modulus"))?;
        }
        let prime = next_progression_prime(b, modulus, bound)?;
        steps.push(ProgressionStep { modulus, prime });
    }
    Ok(ProgressionTrace { base: b, q, v, steps })
}

pub fn prime_progression(b: Natural, q: Natural, v: u32, count: usize) -> Result<ProgressionTrace> {
    prime_progression_within(b, q, v, count, DEFAULT_SEARCH_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::midy::midy_check_ppl2;

    #[test]
    fn structure_examples() {
        assert!(prime_power_midy_structure(10, 13, 3, 1).unwrap());
        assert!(prime_power_midy_structure(10, 21, 3, 1).unwrap());
        let r = prime_power_structure_report(10, 21, 3, 1).unwrap();
        assert_eq!(r.structure.n, 1);
        assert_eq!(r.structure.m, Some(2));
        assert_eq!(r.structure.others[0].nu_q_order, 1);
        assert!(r.max_min_inequality && r.per_prime_inequality);
        assert!(matches!(
            prime_power_midy_structure(10, 9, 3, 1),
            Err(MidyError::Precondition(_))
        ));
    }

    #[test]
    fn pure_prime_power_routes_to_ppl2() {
        // 3^3 = 27, |10|_27 = 3.
        let r = prime_power_structure_report(10, 27, 3, 1).unwrap();
        assert_eq!(r.routed_to_ppl2, Some(midy_check_ppl2(10, 27, 3).unwrap().holds));
    }

    #[test]
    fn v1_examples() {
        assert!(midy_prime_v1_check(10, 13, 3).unwrap());
        assert!(!midy_prime_v1_check(8, 75, 5).unwrap());
        assert!(midy_prime_v1_check(10, 21, 3).unwrap());
        assert!(matches!(midy_prime_v1_check(10, 13, 5), Err(MidyError::Precondition(_))));
    }

    fn smallest_by_scan(b: u128, qv: u128) -> u128 {
        (2..)
            .find(|&n| {
                gcd(n, b) == 1
                    && crate::order::order_mod_naive(b, n).unwrap() % qv == 0
                    && crate::expansion::midy_direct(b, n, qv).unwrap()
            })
            .unwrap()
    }

    #[test]
    fn witness_examples() {
        assert_eq!(smallest_midy_witness(10, 3, 1).unwrap(), 7);
        assert_eq!(smallest_midy_witness(10, 2, 1).unwrap(), 7);
        assert_eq!(smallest_midy_witness(2, 3, 1).unwrap(), 7);
        assert_eq!(smallest_by_scan(10, 3), 7);
        assert_eq!(smallest_by_scan(10, 2), 7);
        assert_eq!(smallest_by_scan(2, 3), 7);
        for (b, q, v) in [(10u128, 5u128, 1u32), (2, 5, 1), (10, 2, 2), (3, 2, 3), (10, 7, 1)] {
            assert_eq!(
                smallest_midy_witness(b, q, v).unwrap(),
                smallest_by_scan(b, q.pow(v)),
                "b={b} q={q} v={v}"
            );
        }
    }

    #[test]
    fn witness_bound_exhaustion() {
        assert_eq!(
            smallest_midy_witness_within(10, 3, 1, 6),
            Err(MidyError::SearchExhausted { bound: 6 })
        );
    }

    #[test]
    fn progression_examples() {
        let t = prime_progression(10, 3, 1, 2).unwrap();
        assert_eq!(t.primes(), vec![7, 19]);
        assert_eq!(t.moduli(), vec![3, 9]);
        let t = prime_progression(10, 2, 1, 2).unwrap();
        assert_eq!(t.primes(), vec![7, 17]);
        assert_eq!(t.moduli(), vec![2, 8]);
        let t = prime_progression(10, 5, 1, 1).unwrap();
        assert_eq!(t.primes(), vec![smallest_midy_witness(10, 5, 1).unwrap()]);
        assert!(prime_progression(10, 3, 1, 0).is_err());
    }

    #[test]
    fn progression_trace_consistent() {
        let t = prime_progression(10, 3, 2, 5).unwrap();
        assert!(t.is_consistent());
        let mut broken = t.clone();
        broken.steps.swap(1, 2);
        assert!(!broken.is_consistent());
    }
}
