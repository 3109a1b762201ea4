//! Midy's property for `N = p_1^{h_1} ⋯ p_t^{h_t}` given `d ∈ M_b(p_i)` for
//! every `i`.
//!
//! Writing `|b|_{p_i} = d k_i` and `m_i = ν_{p_i}(b^{|b|_{p_i}} - 1)`, the
//! order of `b` modulo `N` is `d · lcm_i(p_i^{h_i - m_i} k_i)`. Each
//! `p_i^{h_i - m_i} k_i` is split as `d^{c_i} · ∏ q^{α_q^{(i)}} · y_i`
//! over the primes `q` of `d`, and `d ∈ M_b(N)` exactly when no quotient
//! `lcm_i(d^{c_i} ∏ q^{α^{(i)}}) / (d^{c_j} ∏ q^{α^{(j)}})` is a multiple of
//! `d`. Only the `d`-smooth parts matter, so the verdict does not depend on
//! the exponents `h_i`.
//!
//! Two routes are registered: [`Formula`] evaluates the lcm-quotient test and
//! [`GcdRoute`] checks `gcd(b^k - 1, N) = 1` directly.

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, factor, gcd, gcd_power_minus_one, is_prime, nu, Factorization, Natural};
use crate::error::{MidyError, Result};
use crate::midy::{MidyDecider, MidyQuery, Ppl2};
use crate::order::{lifting_exponent, order_mod_factored, order_mod_prime};
use crate::registry::{Named, Registry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JenkinsPrime {
    pub prime: Natural,
    pub exponent: u32,
    /// `k_i = |b|_{p_i} / d`.
    pub k: Natural,
    /// `m_i = ν_{p_i}(b^{|b|_{p_i}} - 1)`.
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JenkinsInstance {
    pub base: Natural,
    pub d: Natural,
    pub primes: Vec<JenkinsPrime>,
}

/// One row `p_j^{max(h_j - m_j, 0)} k_j = d^{c_j} ∏ q_i^{α_i^{(j)}} y_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JenkinsRow {
    /// `p_j^{max(h_j - m_j, 0)} k_j`.
    pub value: Natural,
    pub c: u32,
    /// Residual exponents, aligned with [`JenkinsDecomposition::d_primes`].
    pub alpha: Vec<u32>,
    /// Cofactor coprime to every prime of `d`.
    pub y: Natural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JenkinsDecomposition {
    /// `d = ∏ q_i^{r_i}`.
    pub d_primes: Vec<(Natural, u32)>,
    pub rows: Vec<JenkinsRow>,
}

impl JenkinsInstance {
    /// Validates the primes and the hypothesis `d ∈ M_b(p_i)` for each `i`.
    pub fn new(base: Natural, d: Natural, primes: &[(Natural, u32)]) -> Result<Self> {
        if base < 2 {
            return Err(MidyError::precondition(format!("base {base} must be at least 2")));
        }
        if d <= 1 {
            return Err(MidyError::precondition(format!("block count {d} must exceed 1")));
        }
        if primes.is_empty() {
            return Err(MidyError::precondition("at least one prime is required"));
        }
        let mut seen = Vec::with_capacity(primes.len());
        let mut out = Vec::with_capacity(primes.len());
        for &(p, h) in primes {
            if !is_prime(p) {
                return Err(MidyError::precondition(format!("{p} is not prime")));
            }
            if seen.contains(&p) {
                return Err(MidyError::precondition(format!("prime {p} listed twice")));
            }
            seen.push(p);
            if h == 0 {
                return Err(MidyError::precondition(format!("exponent of {p} must be positive")));
            }
            if gcd(base, p) != 1 {
                return Err(MidyError::precondition(format!("{p} divides the base {base}")));
            }
            let verdict = Ppl2.decide(base, p, d)?;
            if !verdict.holds {
                return Err(MidyError::precondition(format!("{d} is not in M_{base}({p})")));
            }
            let ord = order_mod_prime(base, p)?;
            // The hypothesis forces d | |b|_p | p - 1, hence p is odd.
            let m = lifting_exponent(base, p)?;
            out.push(JenkinsPrime {
                prime: p,
                exponent: h,
                k: ord / d,
                m,
            });
        }
        Ok(JenkinsInstance { base, d, primes: out })
    }

    /// Same primes, different exponents.
    pub fn with_exponents(&self, exponents: &[u32]) -> Result<Self> {
        if exponents.len() != self.primes.len() {
            return Err(MidyError::precondition("exponent list length mismatch"));
        }
        let pairs: Vec<_> = self
            .primes
            .iter()
            .zip(exponents)
            .map(|(jp, &h)| (jp.prime, h))
            .collect();
        Self::new(self.base, self.d, &pairs)
    }

    pub fn modulus_factors(&self) -> Result<Factorization> {
        Factorization::from_pairs(self.primes.iter().map(|jp| (jp.prime, jp.exponent)))
    }

    /// `N = ∏ p_i^{h_i}`.
    pub fn modulus(&self) -> Result<Natural> {
        Ok(self.modulus_factors()?.value())
    }

    pub fn decompose(&self) -> Result<JenkinsDecomposition> {
        let d_primes = factor(self.d)?.factors().to_vec();
        let mut rows = Vec::with_capacity(self.primes.len());
        for jp in &self.primes {
            // Exponents at or below m contribute nothing: |b|_{p^h} = |b|_p there.
            let lift = checked_pow(jp.prime, jp.exponent.saturating_sub(jp.m))?;
            let value = lift
                .checked_mul(jp.k)
                .ok_or_else(|| MidyError::overflow("p^(h-m) k"))?;
            let mut c = 0;
            let mut rest = value;
            while rest % self.d == 0 {
                rest /= self.d;
                c += 1;
            }
            let mut alpha = Vec::with_capacity(d_primes.len());
            for &(q, _) in &d_primes {
                let a = nu(q, rest);
                rest /= q.pow(a);
                alpha.push(a);
            }
            rows.push(JenkinsRow {
                value,
                c,
                alpha,
                y: rest,
            });
        }
        Ok(JenkinsDecomposition { d_primes, rows })
    }
}

impl JenkinsDecomposition {
    /// Exponent of each `q_i` in `d^{c_j} ∏ q_i^{α_i^{(j)}}`.
    fn smooth_exponents(&self, row: &JenkinsRow) -> Vec<u32> {
        self.d_primes
            .iter()
            .zip(&row.alpha)
            .map(|(&(_, r), &a)| row.c * r + a)
            .collect()
    }

    /// The lcm-quotient test, evaluated on exponent vectors over the primes
    /// of `d`.
    pub fn quotients_avoid_d(&self) -> bool {
        let parts: Vec<Vec<u32>> = self.rows.iter().map(|r| self.smooth_exponents(r)).collect();
        let lcm: Vec<u32> = (0..self.d_primes.len())
            .map(|i| parts.iter().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        parts.iter().all(|e| {
            // d divides the quotient iff every q_i^{r_i} does.
            !self
                .d_primes
                .iter()
                .enumerate()
                .all(|(i, &(_, r))| lcm[i] - e[i] >= r)
        })
    }
}

pub trait JenkinsRoute: Named + Send + Sync {
    fn check(&self, inst: &JenkinsInstance) -> Result<bool>;
}

/// Lcm-quotient criterion on the `d`-smooth parts.
#[derive(Debug, Clone, Copy, Default)]
pub struct Formula;

impl Named for Formula {
    fn name(&self) -> &'static str {
        "formula"
    }
}

impl JenkinsRoute for Formula {
    fn check(&self, inst: &JenkinsInstance) -> Result<bool> {
        Ok(inst.decompose()?.quotients_avoid_d())
    }
}

/// `gcd(b^k - 1, N) = 1` with `k = |b|_N / d`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GcdRoute;

impl Named for GcdRoute {
    fn name(&self) -> &'static str {
        "gcd"
    }
}

impl JenkinsRoute for GcdRoute {
    fn check(&self, inst: &JenkinsInstance) -> Result<bool> {
        let factors = inst.modulus_factors()?;
        let n = factors.value();
        let order = order_mod_factored(inst.base, &factors)?;
        if order % inst.d != 0 {
            return Err(MidyError::precondition(format!("{} does not divide |{}|_{n}", inst.d, inst.base)));
        }
        Ok(gcd_power_minus_one(inst.base, order / inst.d, n)? == 1)
    }
}

pub type RouteRegistry = Registry<dyn JenkinsRoute>;

pub fn builtin_routes() -> RouteRegistry {
    let mut reg = RouteRegistry::new("jenkins route");
    reg.register(Box::new(Formula) as Box<dyn JenkinsRoute>)
        .register(Box::new(GcdRoute) as Box<dyn JenkinsRoute>);
    reg
}

pub fn jenkins_check(inst: &JenkinsInstance) -> Result<bool> {
    Formula.check(inst)
}

pub fn jenkins_check_gcd(inst: &JenkinsInstance) -> Result<bool> {
    GcdRoute.check(inst)
}

/// `midy_check_ppl2(b, ∏ p_i^{h_i}, d)`, reusing the known factorization.
pub fn jenkins_check_ppl2(inst: &JenkinsInstance) -> Result<bool> {
    let q = MidyQuery::factored(inst.base, inst.modulus_factors()?, inst.d)?;
    Ok(Ppl2.decide_query(&q)?.holds)
}
