//! Multiplicative orders `|b|_N`.
//!
//! The order modulo `N` is assembled from the orders modulo each prime power
//! of `N`. Odd prime powers are lifted from the order modulo the prime;
//! powers of two are handled by repeated squaring.

use serde::{Deserialize, Serialize};

use crate::arith::{self, checked_pow, factor, gcd, is_prime, lcm, nu, powm, Factorization, Natural};
use crate::error::{MidyError, Result};

/// Order of the base modulo one prime power `p^t` of the modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerOrder {
    pub prime: Natural,
    pub exponent: u32,
    pub order: Natural,
    /// `m = ν_p(b^{|b|_p} - 1)`; `None` for `p = 2`.
    pub lifting_exponent: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub base: Natural,
    pub modulus: Natural,
    pub order: Natural,
    pub per_prime: Vec<PrimePowerOrder>,
}

fn require_unit(b: Natural, n: Natural) -> Result<()> {
    if gcd(b, n) != 1 {
        return Err(MidyError::precondition(format!(
            "gcd({b}, {n}) = {} is not 1",
            gcd(b, n)
        )));
    }
    Ok(())
}

/// Strips prime factors from a known multiple of the order.
fn reduce_exponent(b: Natural, n: Natural, mut e: Natural, e_factors: &Factorization) -> Natural {
    for q in e_factors.primes() {
        while e % q == 0 && powm(b, e / q, n) == 1 {
            e /= q;
        }
    }
    e
}

/// `|b|_p` for a prime `p` not dividing `b`.
pub(crate) fn order_mod_prime(b: Natural, p: Natural) -> Result<Natural> {
    if p == 2 {
        return Ok(1);
    }
    let group = p - 1;
    Ok(reduce_exponent(b, p, group, &factor(group)?))
}

/// Largest `e` with `p^e <= limit`, and `p^e`.
fn largest_power_below(p: Natural, limit: Natural) -> (u32, Natural) {
    let (mut e, mut pe) = (0u32, 1 as Natural);
    while let Some(next) = pe.checked_mul(p) {
        if next > limit {
            break;
        }
        pe = next;
        e += 1;
    }
    (e, pe)
}

/// `m = ν_p(b^{|b|_p} - 1)` for an odd prime `p ∤ b`, given `|b|_p`.
///
/// `b^{|b|_p}` is only ever reduced modulo a power of `p`. The result
/// saturates at the largest `e` with `p^e < 2^128`; for every `p^t`
/// representable as a [`Natural`] this is enough to decide `t <= m`.
fn lifting_exponent_with(b: Natural, p: Natural, ord_p: Natural) -> u32 {
    for limit in [u64::MAX as Natural, Natural::MAX] {
        let (e, pe) = largest_power_below(p, limit);
        let r = powm(b, ord_p, pe);
        if r != 1 {
            return nu(p, r - 1);
        }
        if limit == Natural::MAX {
            return e;
        }
    }
    unreachable!()
}

/// `m = ν_p(b^{|b|_p} - 1)` for an odd prime `p` not dividing `b`.
pub fn lifting_exponent(b: Natural, p: Natural) -> Result<u32> {
    check_odd_prime_unit(b, p)?;
    Ok(lifting_exponent_with(b, p, order_mod_prime(b, p)?))
}

fn check_odd_prime_unit(b: Natural, p: Natural) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(MidyError::precondition(format!("{p} is not an odd prime")));
    }
    if b % p == 0 {
        return Err(MidyError::precondition(format!("{p} divides the base {b}")));
    }
    Ok(())
}

/// `|b|_{2^t}` for odd `b`: the order is a power of two, found by squaring.
fn order_two_power(b: Natural, t: u32) -> Result<Natural> {
    if b % 2 == 0 {
        return Err(MidyError::precondition(format!("2 divides the base {b}")));
    }
    let modulus = checked_pow(2, t)?;
    let mut x = b % modulus;
    let mut e: Natural = 1;
    while x != 1 % modulus {
        x = arith::mul_mod(x, x, modulus);
        e *= 2;
    }
    Ok(e)
}

fn prime_power_order(b: Natural, p: Natural, t: u32) -> Result<PrimePowerOrder> {
    if p == 2 {
        return Ok(PrimePowerOrder {
            prime: 2,
            exponent: t,
            order: order_two_power(b, t)?,
            lifting_exponent: None,
        });
    }
    let ord_p = order_mod_prime(b, p)?;
    let m = lifting_exponent_with(b, p, ord_p);
    let order = if t <= m {
        ord_p
    } else {
        checked_pow(p, t - m)?
            .checked_mul(ord_p)
            .ok_or_else(|| MidyError::overflow("prime power order"))?
    };
    Ok(PrimePowerOrder {
        prime: p,
        exponent: t,
        order,
        lifting_exponent: Some(m),
    })
}

/// `|b|_{p^t}`: `|b|_p` when `t <= m`, otherwise `p^{t-m} |b|_p`, where
/// `m = ν_p(b^{|b|_p} - 1)`. For `p = 2` the order is computed directly.
pub fn order_prime_power(b: Natural, p: Natural, t: u32) -> Result<Natural> {
    if t == 0 {
        return Err(MidyError::precondition("prime power exponent must be positive"));
    }
    if p != 2 {
        check_odd_prime_unit(b, p)?;
    }
    checked_pow(p, t)?;
    Ok(prime_power_order(b, p, t)?.order)
}

/// Full order record for a modulus whose factorization is already known.
pub fn order_record_factored(b: Natural, n: &Factorization) -> Result<OrderRecord> {
    let modulus = n.value();
    require_unit(b, modulus)?;
    let mut order: Natural = 1;
    let mut per_prime = Vec::with_capacity(n.factors().len());
    for &(p, t) in n.factors() {
        let rec = prime_power_order(b, p, t)?;
        order = lcm(order, rec.order)?;
        per_prime.push(rec);
    }
    Ok(OrderRecord {
        base: b,
        modulus,
        order,
        per_prime,
    })
}

pub fn order_record(b: Natural, n: Natural) -> Result<OrderRecord> {
    if n == 0 {
        return Err(MidyError::domain("order modulo 0"));
    }
    order_record_factored(b, &factor(n)?)
}

/// `|b|_N`, the least `L >= 1` with `b^L ≡ 1 (mod N)`. `N = 1` yields 1.
pub fn order_mod(b: Natural, n: Natural) -> Result<Natural> {
    Ok(order_record(b, n)?.order)
}

pub fn order_mod_factored(b: Natural, n: &Factorization) -> Result<Natural> {
    Ok(order_record_factored(b, n)?.order)
}

/// Order by successive multiplication. Linear in the order; kept as an
/// independent cross-check for [`order_mod`].
pub fn order_mod_naive(b: Natural, n: Natural) -> Result<Natural> {
    if n == 0 {
        return Err(MidyError::domain("order modulo 0"));
    }
    require_unit(b, n)?;
    if n == 1 {
        return Ok(1);
    }
    let b = b % n;
    let mut x = b;
    let mut e: Natural = 1;
    while x != 1 {
        x = arith::mul_mod(x, b, n);
        e += 1;
    }
    Ok(e)
}

impl OrderRecord {
    /// Checks the record against its defining properties: `b^L ≡ 1`, no
    /// proper divisor of `L` works, and `L` is the lcm of the per-prime
    /// orders.
    pub fn verify(&self) -> Result<bool> {
        let (b, n, l) = (self.base, self.modulus, self.order);
        if powm(b, l, n) != 1 % n {
            return Ok(false);
        }
        for q in factor(l)?.primes() {
            if powm(b, l / q, n) == 1 % n {
                return Ok(false);
            }
        }
        let combined = self
            .per_prime
            .iter()
            .try_fold(1, |acc, r| lcm(acc, r.order))?;
        Ok(combined == l)
    }
}
