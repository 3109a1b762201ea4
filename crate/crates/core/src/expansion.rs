//! Digit-level ground truth.
//!
//! Periods are produced by remainder-driven long division and Midy's
//! property is decided straight from its definition: cut the period of
//! every `x/N` into `d` blocks and test whether the block sum is a multiple
//! of `b^k - 1`. Nothing here uses the valuation criteria, so
//! [`midy_direct`] serves as the oracle for them.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, Natural};
use crate::error::{MidyError, Result};
use crate::order::order_mod;

/// Longest period that will be materialized.
pub const MAX_PERIOD: usize = 1 << 27;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodExpansion {
    pub base: Natural,
    pub modulus: Natural,
    pub numerator: Natural,
    /// Minimal repeating block, most significant digit first. Leading zeros
    /// are part of the period.
    pub digits: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub d: usize,
    pub k: usize,
    pub blocks: Vec<BigUint>,
    pub sum: BigUint,
}

fn check_base(b: Natural) -> Result<u32> {
    if b < 2 {
        return Err(MidyError::precondition(format!("base {b} must be at least 2")));
    }
    u32::try_from(b).map_err(|_| MidyError::domain(format!("base {b} is too large for digit expansion")))
}

/// Appends the period of `x/n` in base `b` to `out`. Stops when the
/// remainder returns to `x`.
fn long_division(x: Natural, n: Natural, b: u32, out: &mut Vec<u32>) -> Result<()> {
    let start = out.len();
    if let (Ok(n64), Ok(x64)) = (u64::try_from(n), u64::try_from(x)) {
        if n64.checked_mul(b as u64).is_some() {
            let b64 = b as u64;
            let mut r = x64;
            loop {
                let t = r * b64;
                out.push((t / n64) as u32);
                r = t % n64;
                if r == x64 {
                    return Ok(());
                }
                if out.len() - start >= MAX_PERIOD {
                    break;
                }
            }
            return Err(MidyError::domain(format!("period of {x}/{n} exceeds {MAX_PERIOD} digits")));
        }
    }
    if n.checked_mul(b as Natural).is_none() {
        return Err(MidyError::overflow(format!("long division of {x}/{n} in base {b}")));
    }
    let mut r = x;
    loop {
        let t = r * b as Natural;
        out.push((t / n) as u32);
        r = t % n;
        if r == x {
            return Ok(());
        }
        if out.len() - start >= MAX_PERIOD {
            return Err(MidyError::domain(format!("period of {x}/{n} exceeds {MAX_PERIOD} digits")));
        }
    }
}

/// Minimal period of the purely periodic expansion of `x/N` in base `b`.
pub fn period_digits(x: Natural, n: Natural, b: Natural) -> Result<PeriodExpansion> {
    let base = check_base(b)?;
    if gcd(n, b) != 1 {
        return Err(MidyError::precondition(format!(
            "gcd({n}, {b}) != 1: the expansion is not purely periodic"
        )));
    }
    if x == 0 || x >= n {
        return Err(MidyError::precondition(format!("numerator {x} must lie in (0, {n})")));
    }
    if gcd(x, n) != 1 {
        return Err(MidyError::precondition(format!("numerator {x} is not a unit modulo {n}")));
    }
    let mut digits = Vec::new();
    long_division(x, n, base, &mut digits)?;
    Ok(PeriodExpansion {
        base: b,
        modulus: n,
        numerator: x,
        digits,
    })
}

impl PeriodExpansion {
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The integer `A` whose base-`b` digits are the period.
    pub fn value(&self) -> BigUint {
        digits_value(&self.digits, self.base)
    }

    /// Renders the digits as a plain string when every digit is below 10,
    /// otherwise as a bracketed list of decimal digit values.
    pub fn render(&self) -> String {
        render_digits(&self.digits)
    }
}

pub fn render_digits(digits: &[u32]) -> String {
    if digits.iter().all(|&d| d < 10) {
        digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        let inner: Vec<String> = digits.iter().map(u32::to_string).collect();
        format!("[{}]", inner.join(","))
    }
}

fn digits_value(digits: &[u32], b: Natural) -> BigUint {
    let base = BigUint::from(b);
    digits
        .iter()
        .fold(BigUint::zero(), |acc, &d| acc * &base + BigUint::from(d))
}

/// Splits the period into `d` equal blocks and sums them.
pub fn blocks_and_sum(e: &PeriodExpansion, d: usize) -> Result<BlockDecomposition> {
    let len = e.len();
    if d == 0 || len % d != 0 {
        return Err(MidyError::precondition(format!(
            "block count {d} does not divide the period length {len}"
        )));
    }
    let k = len / d;
    let blocks: Vec<BigUint> = e.digits.chunks(k).map(|c| digits_value(c, e.base)).collect();
    let sum = blocks.iter().sum();
    Ok(BlockDecomposition { d, k, blocks, sum })
}

/// Whether the sum of the `k`-digit blocks of `digits` is a multiple of
/// `b^k - 1`.
///
/// Blocks are added with end-around carry, which keeps a `k`-digit residue
/// of the sum modulo `b^k - 1`; the sum is a multiple exactly when that
/// residue is all zeros or all `b - 1`.
pub(crate) fn block_sum_is_multiple(digits: &[u32], k: usize, b: u32) -> bool {
    debug_assert!(k > 0 && digits.len() % k == 0);
    let b = b as u64;
    let mut acc = vec![0u64; k];
    for block in digits.chunks(k) {
        let mut carry = 0u64;
        for (a, &digit) in acc.iter_mut().zip(block).rev() {
            let t = *a + digit as u64 + carry;
            *a = t % b;
            carry = t / b;
        }
        while carry > 0 {
            for a in acc.iter_mut().rev() {
                let t = *a + carry;
                *a = t % b;
                carry = t / b;
                if carry == 0 {
                    break;
                }
            }
        }
    }
    acc.iter().all(|&a| a == 0) || acc.iter().all(|&a| a == b - 1)
}

fn check_direct_preconditions(b: Natural, n: Natural, d: Natural) -> Result<(u32, usize)> {
    let base = check_base(b)?;
    if d <= 1 {
        return Err(MidyError::precondition(format!("block count {d} must exceed 1")));
    }
    let order = order_mod(b, n)?;
    if order % d != 0 {
        return Err(MidyError::precondition(format!("{d} does not divide |{b}|_{n} = {order}")));
    }
    let order = usize::try_from(order)
        .ok()
        .filter(|&l| l <= MAX_PERIOD)
        .ok_or_else(|| MidyError::domain(format!("period |{b}|_{n} = {order} is too long to expand")))?;
    Ok((base, order / d as usize))
}

/// Smallest `x ∈ U_N` whose block sum is not a multiple of `b^k - 1`, or
/// `None` when `N` has Midy's property for `b` and `d`.
///
/// Every unit is examined in ascending order; the first failure is
/// returned.
pub fn direct_counterexample(b: Natural, n: Natural, d: Natural) -> Result<Option<Natural>> {
    let (base, k) = check_direct_preconditions(b, n, d)?;
    let mut digits = Vec::with_capacity(k * d as usize);
    for x in 1..n {
        if gcd(x, n) != 1 {
            continue;
        }
        digits.clear();
        long_division(x, n, base, &mut digits)?;
        debug_assert_eq!(digits.len(), k * d as usize);
        if !block_sum_is_multiple(&digits, k, base) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Midy's property by exhaustive definition over all of `U_N`.
pub fn midy_direct(b: Natural, n: Natural, d: Natural) -> Result<bool> {
    Ok(direct_counterexample(b, n, d)?.is_none())
}
