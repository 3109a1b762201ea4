use crate::arith::{factor, gcd_power_minus_one, nu, powm, Natural};
use crate::error::MidyError;
use crate::error::Result;
use crate::expansion::direct_counterexample;
use crate::registry::Named;

use crate::order::order_prime_power;

use super::{allowed_valuation, prime_order, Certificate, Method, MidyDecider, MidyQuery, MidyVerdict};

/// `d ∈ M_b(N)` iff `ν_p(N) <= ν_p(d)` for every prime `p | gcd(b^k - 1, N)`,
/// with the larger two-adic allowance of [`allowed_valuation`] at `p = 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ppl2;

impl Named for Ppl2 {
    fn name(&self) -> &'static str {
        "ppl2"
    }
}

impl MidyDecider for Ppl2 {
    fn method(&self) -> Method {
        Method::Ppl2
    }

    fn decide_query(&self, q: &MidyQuery) -> Result<MidyVerdict> {
        for (p, nu_n) in q.gcd_primes() {
            let nu_d = nu(p, q.d);
            if nu_n > allowed_valuation(q.base, q.k, q.d, p, nu_n) {
                return Ok(MidyVerdict {
                    holds: false,
                    method: Method::Ppl2,
                    certificate: Some(Certificate::ViolatingPrime { p, nu_n, nu_d }),
                });
            }
        }
        Ok(MidyVerdict {
            holds: true,
            method: Method::Ppl2,
            certificate: Some(Certificate::Gcd {
                g: gcd_power_minus_one(q.base, q.k, q.modulus)?,
            }),
        })
    }
}

/// Which primes `q` the existential in the `ν_q` condition ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuantifyOver {
    /// Prime divisors of `|b|_N`.
    #[default]
    OrderDivisors,
    /// Prime divisors of `d` only.
    BlockCountDivisors,
}

/// Whether some prime `q` satisfies `ν_q(|b|_p) > ν_q(|b|_N) - ν_q(d)`.
pub(crate) fn has_q_witness(query: &MidyQuery, p: Natural, over: QuantifyOver) -> Result<bool> {
    let ord_p = prime_order(query.base, p)?;
    let range = match over {
        QuantifyOver::OrderDivisors => query.order,
        QuantifyOver::BlockCountDivisors => query.d,
    };
    Ok(factor(range)?.primes().any(|q| {
        let lhs = nu(q, ord_p) as i64;
        lhs > nu(q, query.order) as i64 - nu(q, query.d) as i64
    }))
}

/// Whether `p^{ν_p(N)}` passes the `ν_q` test. For `p = 2` the prime
/// order `|b|_2 = 1` carries no information, so the test compares orders one
/// level up instead: with `e = ν_2(N)` and `s = ν_2(b^k - 1)`, the two-part
/// holds iff `ν_2(|b|_{2^{e+s}}) <= ν_2(|b|_N)`, i.e. `2^{e+s} | b^{|b|_N} - 1`.
pub(crate) fn ppl3_prime_ok(query: &MidyQuery, p: Natural, nu_n: u32) -> Result<bool> {
    if nu_n <= nu(p, query.d) {
        return Ok(true);
    }
    if p != 2 {
        return has_q_witness(query, p, QuantifyOver::OrderDivisors);
    }
    let cap = 127 - nu_n.min(127);
    let m: Natural = 1 << cap;
    let minus_one = (powm(query.base, query.k, m) + m - 1) % m;
    let s = if minus_one == 0 { cap } else { nu(2, minus_one) };
    let t = nu_n + s;
    if t > 127 {
        return Err(MidyError::overflow(format!("2^{t} exceeds the integer range")));
    }
    Ok(nu(2, order_prime_power(query.base, 2, t)?) <= nu(2, query.order))
}

/// For each prime `p | N` with `ν_p(N) > ν_p(d)` there is a prime `q` with
/// `ν_q(|b|_p) > ν_q(|b|_N) - ν_q(d)`. `QuantifyOver` picks the range of `q`;
/// `p = 2` follows [`ppl3_prime_ok`] under the default range.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ppl3 {
    pub over: QuantifyOver,
}

impl Named for Ppl3 {
    fn name(&self) -> &'static str {
        match self.over {
            QuantifyOver::OrderDivisors => "ppl3",
            QuantifyOver::BlockCountDivisors => "ppl3-d",
        }
    }
}

impl MidyDecider for Ppl3 {
    fn method(&self) -> Method {
        Method::Ppl3
    }

    fn decide_query(&self, q: &MidyQuery) -> Result<MidyVerdict> {
        for &(p, nu_n) in q.factors.factors() {
            let nu_d = nu(p, q.d);
            let ok = match self.over {
                QuantifyOver::OrderDivisors => ppl3_prime_ok(q, p, nu_n)?,
                QuantifyOver::BlockCountDivisors => nu_n <= nu_d || has_q_witness(q, p, self.over)?,
            };
            if !ok {
                return Ok(MidyVerdict {
                    holds: false,
                    method: Method::Ppl3,
                    certificate: Some(Certificate::ViolatingPrime { p, nu_n, nu_d }),
                });
            }
        }
        Ok(MidyVerdict {
            holds: true,
            method: Method::Ppl3,
            certificate: None,
        })
    }
}

/// Block sums of every `x/N`, `x ∈ U_N`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Direct;

impl Named for Direct {
    fn name(&self) -> &'static str {
        "direct"
    }
}

impl MidyDecider for Direct {
    fn method(&self) -> Method {
        Method::Direct
    }

    fn decide_query(&self, q: &MidyQuery) -> Result<MidyVerdict> {
        let failing = direct_counterexample(q.base, q.modulus, q.d)?;
        Ok(MidyVerdict {
            holds: failing.is_none(),
            method: Method::Direct,
            certificate: failing.map(|x| Certificate::FailingNumerator { x }),
        })
    }
}
