//! Structural Midy deciders, Midy sets and the gcd triple.
//!
//! Three interchangeable deciders answer "is `d ∈ M_b(N)`?":
//!
//! * [`Ppl2`]: `ν_p(N) <= ν_p(d)` for every prime `p | gcd(b^k - 1, N)`.
//!   This is the production decider; it needs one modular power per prime
//!   of `N` and never factors `b^k - 1`.
//! * [`Ppl3`]: for every prime `p | N` with `ν_p(N) > ν_p(d)` some prime `q`
//!   satisfies `ν_q(|b|_p) > ν_q(|b|_N) - ν_q(d)`.
//! * [`Direct`]: the digit-level definition from [`crate::expansion`].
//!
//! They are registered by name in [`builtin_deciders`].
//!
//! Both valuation criteria are exact for odd primes only. With `c = b^k`,
//! `d ∈ M_b(N)` iff `N` divides `1 + c + ... + c^{d-1}`. For an odd
//! `p | c - 1` that sum has exactly `ν_p(d)` factors of `p`. For `p = 2` and
//! even `d` it has `ν_2(d) + ν_2(c + 1) - 1`, which exceeds `ν_2(d)` when
//! `c ≡ 3 (mod 4)`. For example `1/4 = 0.(02)` in base 3 and `0 + 2` is a
//! multiple of `3 - 1`. Both deciders therefore treat `p = 2` separately
//! (see [`allowed_valuation`]).

mod deciders;

use serde::{Deserialize, Serialize};

pub use deciders::{Direct, Ppl2, Ppl3, QuantifyOver};

use crate::arith::{factor, gcd, gcd_power_minus_one, nu, powm, Factorization, Natural};
use crate::error::{MidyError, Result};
use crate::order::{order_mod_factored, order_mod_prime};
use crate::registry::{Named, Registry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ppl2,
    Ppl3,
    Direct,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ppl2 => "ppl2",
            Method::Ppl3 => "ppl3",
            Method::Direct => "direct",
        }
    }
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A prime `p | N` with `ν_p(N) > ν_p(d)` that breaks the property.
    ViolatingPrime { p: Natural, nu_n: u32, nu_d: u32 },
    /// The smallest `x ∈ U_N` whose block sum is not a multiple of `b^k - 1`.
    FailingNumerator { x: Natural },
    /// `g = gcd(b^k - 1, N)`; every prime of `g` satisfies `ν_p(N) <= ν_p(d)`.
    Gcd { g: Natural },
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::ViolatingPrime { p, nu_n, nu_d } => {
                write!(f, "prime {p}: ν_{p}(N) = {nu_n} > ν_{p}(d) = {nu_d}")
            }
            Certificate::FailingNumerator { x } => write!(f, "numerator {x} fails"),
            Certificate::Gcd { g } => write!(f, "gcd(b^k - 1, N) = {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MidyVerdict {
    pub holds: bool,
    pub method: Method,
    pub certificate: Option<Certificate>,
}

/// Validated inputs shared by every decider.
#[derive(Debug, Clone)]
pub struct MidyQuery {
    pub base: Natural,
    pub modulus: Natural,
    pub d: Natural,
    pub factors: Factorization,
    pub order: Natural,
    /// Block length `k = |b|_N / d`.
    pub k: Natural,
}

impl MidyQuery {
    pub fn new(b: Natural, n: Natural, d: Natural) -> Result<Self> {
        if n == 0 {
            return Err(MidyError::domain("modulus 0"));
        }
        Self::factored(b, factor(n)?, d)
    }

    pub fn factored(b: Natural, factors: Factorization, d: Natural) -> Result<Self> {
        if b < 2 {
            return Err(MidyError::precondition(format!("base {b} must be at least 2")));
        }
        let n = factors.value();
        let order = order_mod_factored(b, &factors)?;
        if d <= 1 {
            return Err(MidyError::precondition(format!("block count {d} must exceed 1")));
        }
        if order % d != 0 {
            return Err(MidyError::precondition(format!("{d} does not divide |{b}|_{n} = {order}")));
        }
        Ok(MidyQuery {
            base: b,
            modulus: n,
            d,
            factors,
            order,
            k: order / d,
        })
    }

    /// Primes `p | N` that also divide `b^k - 1`, with `ν_p(N)`.
    fn gcd_primes(&self) -> impl Iterator<Item = (Natural, u32)> + '_ {
        self.factors
            .factors()
            .iter()
            .copied()
            .filter(move |&(p, _)| powm(self.base, self.k, p) == 1)
    }
}

pub trait MidyDecider: Named + Send + Sync {
    fn method(&self) -> Method;

    fn decide_query(&self, query: &MidyQuery) -> Result<MidyVerdict>;

    fn decide(&self, b: Natural, n: Natural, d: Natural) -> Result<MidyVerdict> {
        self.decide_query(&MidyQuery::new(b, n, d)?)
    }
}

pub type DeciderRegistry = Registry<dyn MidyDecider>;

/// `ppl2`, `ppl3` and `direct`, in that order.
pub fn builtin_deciders() -> DeciderRegistry {
    let mut reg = DeciderRegistry::new("midy decider");
    reg.register(Box::new(Ppl2) as Box<dyn MidyDecider>)
        .register(Box::new(Ppl3::default()) as Box<dyn MidyDecider>)
        .register(Box::new(Direct) as Box<dyn MidyDecider>);
    reg
}

pub fn midy_check_ppl2(b: Natural, n: Natural, d: Natural) -> Result<MidyVerdict> {
    Ppl2.decide(b, n, d)
}

pub fn midy_check_ppl3(b: Natural, n: Natural, d: Natural) -> Result<MidyVerdict> {
    Ppl3::default().decide(b, n, d)
}

pub fn midy_check_direct(b: Natural, n: Natural, d: Natural) -> Result<MidyVerdict> {
    Direct.decide(b, n, d)
}

impl MidyVerdict {
    /// Re-derives the certificate from scratch. A verdict without a
    /// certificate reverifies trivially.
    pub fn reverify(&self, b: Natural, n: Natural, d: Natural) -> Result<bool> {
        let q = MidyQuery::new(b, n, d)?;
        let Some(cert) = &self.certificate else {
            return Ok(true);
        };
        Ok(match (cert, self.holds) {
            (&Certificate::ViolatingPrime { p, nu_n, nu_d }, false) => {
                let structural = n % p == 0
                    && nu(p, n) == nu_n
                    && nu(p, d) == nu_d
                    && nu_n > nu_d
                    && crate::arith::is_prime(p);
                match self.method {
                    Method::Ppl2 => {
                        structural && powm(b, q.k, p) == 1 && nu_n > allowed_valuation(b, q.k, d, p, nu_n)
                    }
                    _ => structural && !deciders::ppl3_prime_ok(&q, p, nu_n)?,
                }
            }
            (&Certificate::FailingNumerator { x }, false) => {
                let e = crate::expansion::period_digits(x, n, b)?;
                let split = crate::expansion::blocks_and_sum(&e, d as usize)?;
                let modulus = num_bigint::BigUint::from(b).pow(split.k as u32) - 1u32;
                !num_traits::Zero::is_zero(&(&split.sum % &modulus))
            }
            (&Certificate::Gcd { g }, true) => {
                g == gcd_power_minus_one(b, q.k, n)?
                    && factor(g)?
                        .primes()
                        .all(|p| nu(p, n) <= allowed_valuation(b, q.k, d, p, nu(p, n)))
            }
            _ => false,
        })
    }
}

/// The Midy set of `N` to base `b`: every divisor `d > 1` of `|b|_N` with
/// `d ∈ M_b(N)`, plus the certificates for the divisors left out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MidySet {
    pub base: Natural,
    pub modulus: Natural,
    pub order: Natural,
    pub members: Vec<Natural>,
    pub excluded: Vec<(Natural, Certificate)>,
}

impl MidySet {
    pub fn contains(&self, d: Natural) -> bool {
        self.members.binary_search(&d).is_ok()
    }

    /// No `d1 | d2 | L` with `d1` a member and `d2 > 1` excluded.
    pub fn is_upward_closed(&self) -> bool {
        self.members.iter().all(|&d1| {
            self.excluded
                .iter()
                .all(|&(d2, _)| d2 % d1 != 0 || self.order % d2 != 0)
        })
    }
}

pub fn midy_set_factored(b: Natural, factors: &Factorization) -> Result<MidySet> {
    let n = factors.value();
    if b < 2 {
        return Err(MidyError::precondition(format!("base {b} must be at least 2")));
    }
    let order = order_mod_factored(b, factors)?;
    let mut members = Vec::new();
    let mut excluded = Vec::new();
    for d in factor(order)?.divisors().into_iter().filter(|&d| d > 1) {
        let query = MidyQuery {
            base: b,
            modulus: n,
            d,
            factors: factors.clone(),
            order,
            k: order / d,
        };
        let verdict = Ppl2.decide_query(&query)?;
        if verdict.holds {
            members.push(d);
        } else if let Some(cert) = verdict.certificate {
            excluded.push((d, cert));
        }
    }
    Ok(MidySet {
        base: b,
        modulus: n,
        order,
        members,
        excluded,
    })
}

/// `M_b(N)` enumerated with the [`Ppl2`] decider.
pub fn midy_set(b: Natural, n: Natural) -> Result<MidySet> {
    if n == 0 {
        return Err(MidyError::domain("modulus 0"));
    }
    if gcd(b, n) != 1 {
        return Err(MidyError::precondition(format!("gcd({b}, {n}) != 1")));
    }
    midy_set_factored(b, &factor(n)?)
}

/// The three equivalent statements for `N` all of whose primes satisfy
/// `ν_p(N) > ν_p(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuelTriple {
    /// `gcd(b^k - 1, N) = 1`.
    pub gcd_is_one: bool,
    /// `d ∈ M_b(N)`, decided by [`Ppl2`].
    pub in_midy_set: bool,
    /// Every prime `p | N` has a prime `q | d` with
    /// `ν_q(|b|_p) > ν_q(|b|_N) - ν_q(d)`.
    pub q_condition: bool,
}

impl GuelTriple {
    pub fn agrees(&self) -> bool {
        self.gcd_is_one == self.in_midy_set && self.in_midy_set == self.q_condition
    }
}

pub fn guel_triple(b: Natural, n: Natural, d: Natural) -> Result<GuelTriple> {
    let q = MidyQuery::new(b, n, d)?;
    for &(p, e) in q.factors.factors() {
        if e <= nu(p, d) {
            return Err(MidyError::HypothesisNotApplicable(format!(
                "ν_{p}({n}) = {e} does not exceed ν_{p}({d}) = {}",
                nu(p, d)
            )));
        }
    }
    let gcd_is_one = gcd_power_minus_one(b, q.k, n)? == 1;
    let in_midy_set = Ppl2.decide_query(&q)?.holds;
    let mut q_condition = true;
    for p in q.factors.primes() {
        if !deciders::has_q_witness(&q, p, QuantifyOver::BlockCountDivisors)? {
            q_condition = false;
            break;
        }
    }
    Ok(GuelTriple {
        gcd_is_one,
        in_midy_set,
        q_condition,
    })
}

/// Largest `ν_p(N)` compatible with `d ∈ M_b(N)` for a prime `p | b^k - 1`
/// dividing `N` exactly `nu_n` times.
///
/// For odd `p` this is `ν_p(d)`. For `p = 2` it is `0` for odd `d` and
/// `ν_2(d) + ν_2(b^k + 1) - 1` otherwise, with `ν_2(b^k + 1)` capped at
/// `nu_n` (enough to decide the comparison).
pub fn allowed_valuation(b: Natural, k: Natural, d: Natural, p: Natural, nu_n: u32) -> u32 {
    let nu_d = nu(p, d);
    if p != 2 || nu_d == 0 || nu_n == 0 {
        return nu_d;
    }
    let m: Natural = 1 << nu_n.min(127);
    let plus_one = (powm(b, k, m) + 1) % m;
    let s = if plus_one == 0 { nu_n } else { nu(2, plus_one).min(nu_n) };
    nu_d + s - 1
}

/// `|b|_p` for every prime `p | N`, used by the `ν_q` conditions.
pub(crate) fn prime_order(b: Natural, p: Natural) -> Result<Natural> {
    order_mod_prime(b, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppl2_examples() {
        assert!(midy_check_ppl2(10, 13, 2).unwrap().holds);
        let v = midy_check_ppl2(8, 75, 10).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.certificate,
            Some(Certificate::ViolatingPrime { p: 3, nu_n: 1, nu_d: 0 })
        );
        assert!(v.reverify(8, 75, 10).unwrap());
        let v = midy_check_ppl2(8, 75, 4).unwrap();
        assert!(v.holds);
        assert!(v.reverify(8, 75, 4).unwrap());
    }

    #[test]
    fn ppl3_examples() {
        assert!(midy_check_ppl3(10, 13, 3).unwrap().holds);
        let v = midy_check_ppl3(8, 75, 5).unwrap();
        assert!(!v.holds);
        assert!(v.reverify(8, 75, 5).unwrap());
        assert!(midy_check_ppl3(10, 13, 6).unwrap().holds);
    }

    #[test]
    fn direct_examples() {
        let v = midy_check_direct(8, 75, 5).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.certificate, Some(Certificate::FailingNumerator { .. })));
        assert!(v.reverify(8, 75, 5).unwrap());
        assert!(midy_check_direct(10, 13, 3).unwrap().holds);
    }

    #[test]
    fn decider_preconditions() {
        for decider in builtin_deciders().iter() {
            assert!(matches!(decider.decide(10, 13, 1), Err(MidyError::Precondition(_))));
            assert!(matches!(decider.decide(10, 13, 4), Err(MidyError::Precondition(_))));
            assert!(matches!(decider.decide(10, 75, 2), Err(MidyError::Precondition(_))));
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let mut v = midy_check_ppl2(8, 75, 10).unwrap();
        v.certificate = Some(Certificate::ViolatingPrime { p: 5, nu_n: 2, nu_d: 1 });
        assert!(!v.reverify(8, 75, 10).unwrap());
        let mut v = midy_check_ppl2(10, 21, 3).unwrap();
        assert_eq!(v.certificate, Some(Certificate::Gcd { g: 3 }));
        v.certificate = Some(Certificate::Gcd { g: 1 });
        assert!(!v.reverify(10, 21, 3).unwrap());
    }

    #[test]
    fn midy_set_examples() {
        assert_eq!(midy_set(10, 13).unwrap().members, vec![2, 3, 6]);
        let m = midy_set(8, 75).unwrap();
        assert_eq!(m.members, vec![4, 20]);
        assert_eq!(m.order, 20);
        assert!(m.is_upward_closed());
        assert!(midy_set(10, 3).unwrap().members.is_empty());
        assert!(matches!(midy_set(10, 15), Err(MidyError::Precondition(_))));
    }

    #[test]
    fn guel_examples() {
        let all = |t: GuelTriple| (t.gcd_is_one, t.in_midy_set, t.q_condition);
        assert_eq!(all(guel_triple(10, 13, 6).unwrap()), (true, true, true));
        assert_eq!(all(guel_triple(8, 75, 5).unwrap()), (false, false, false));
        assert_eq!(all(guel_triple(10, 13, 2).unwrap()), (true, true, true));
        // 3 | 21 and ν_3(21) = ν_3(3).
        assert!(matches!(
            guel_triple(10, 21, 3),
            Err(MidyError::HypothesisNotApplicable(_))
        ));
    }

    #[test]
    fn full_order_membership_is_k1_specialization() {
        // With k = 1 the gcd is gcd(b - 1, N). Coprimality is sufficient but
        // not necessary: b = 3, N = 10 has L = 4 and
        // gcd(2, 10) = 2, yet ν_2(10) <= ν_2(4).
        let mut coprime_mismatch = Vec::new();
        for b in [2u128, 3, 8, 10, 16] {
            for n in (2u128..600).filter(|&n| gcd(n, b) == 1) {
                let m = midy_set(b, n).unwrap();
                if m.order == 1 {
                    continue;
                }
                let g = gcd(b - 1, n);
                let expected = factor(g)
                    .unwrap()
                    .primes()
                    .all(|p| nu(p, n) <= allowed_valuation(b, 1, m.order, p, nu(p, n)));
                assert_eq!(m.contains(m.order), expected, "b={b} n={n}");
                if m.contains(m.order) != (g == 1) {
                    coprime_mismatch.push((b, n));
                }
            }
        }
        assert!(coprime_mismatch.contains(&(3, 10)));
        assert!(midy_check_direct(3, 10, 4).unwrap().holds);
    }

    #[test]
    fn two_adic_allowance() {
        // 1/4 = 0.(02) in base 3: 0 + 2 = 3 - 1, although ν_2(4) > ν_2(2).
        assert_eq!(period_digits_of(1, 4, 3), "02");
        for decider in builtin_deciders().iter() {
            assert!(decider.decide(3, 4, 2).unwrap().holds, "{}", decider.name());
            // |3|_8 = 2 and 1 + 3 = 4 is not a multiple of 8.
            assert!(!decider.decide(3, 8, 2).unwrap().holds, "{}", decider.name());
            // 7 ≡ 3 (mod 4): 1 + 7 = 8, so d = 2 reaches 2^3 but not 2^4.
            assert!(decider.decide(7, 8, 2).unwrap().holds, "{}", decider.name());
        }
        assert_eq!(allowed_valuation(3, 1, 2, 2, 5), 2);
        assert_eq!(allowed_valuation(7, 1, 2, 2, 5), 3);
        assert_eq!(allowed_valuation(5, 1, 2, 2, 5), 1);
        assert_eq!(allowed_valuation(3, 1, 3, 2, 5), 0);
        assert_eq!(allowed_valuation(3, 1, 4, 3, 5), 0);
        let v = midy_check_ppl2(3, 4, 2).unwrap();
        assert!(v.reverify(3, 4, 2).unwrap());
        let v = midy_check_ppl2(3, 8, 2).unwrap();
        assert_eq!(v.certificate, Some(Certificate::ViolatingPrime { p: 2, nu_n: 3, nu_d: 1 }));
        assert!(v.reverify(3, 8, 2).unwrap());
        assert!(midy_check_ppl3(3, 8, 2).unwrap().reverify(3, 8, 2).unwrap());
    }

    fn period_digits_of(x: Natural, n: Natural, b: Natural) -> String {
        crate::expansion::period_digits(x, n, b).unwrap().render()
    }

    #[test]
    fn registry_names() {
        let reg = builtin_deciders();
        assert_eq!(reg.names(), &["ppl2", "ppl3", "direct"]);
        assert_eq!(reg.get("direct").unwrap().method(), Method::Direct);
        assert!(reg.get("ppl4").is_err());
    }
}
