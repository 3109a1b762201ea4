//! Exact integer kernel.
//!
//! All values are [`Natural`]s, i.e. `u128`. Operations that could overflow
//! are checked and report [`MidyError::Overflow`]; powers such as `b^k - 1`
//! are never materialized, they are reduced modulo `N` first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{MidyError, Result};

pub type Natural = u128;

/// Primes below this bound are removed by trial division before falling back
/// to Pollard rho.
const TRIAL_DIVISION_BOUND: Natural = 1 << 12;

/// Miller-Rabin with the first 13 primes as witnesses is exact below this
/// value (Sorenson & Webster).
pub const DETERMINISTIC_PRIMALITY_LIMIT: Natural = 3_317_044_064_679_887_385_961_981;

const WITNESSES: [Natural; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const EXTRA_WITNESSES: [Natural; 12] = [43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

pub fn gcd(mut a: Natural, mut b: Natural) -> Natural {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Least common multiple, `lcm(0, n) = 0`.
pub fn lcm(a: Natural, b: Natural) -> Result<Natural> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| MidyError::overflow(format!("lcm({a}, {b})")))
}

pub fn checked_pow(base: Natural, exp: u32) -> Result<Natural> {
    base.checked_pow(exp)
        .ok_or_else(|| MidyError::overflow(format!("{base}^{exp}")))
}

#[inline]
fn add_mod(a: Natural, b: Natural, m: Natural) -> Natural {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

/// `a * b mod m` for `a, b < m`.
#[inline]
pub(crate) fn mul_mod(a: Natural, b: Natural, m: Natural) -> Natural {
    if m <= u64::MAX as Natural {
        return (a * b) % m;
    }
    // 128-bit modulus: double-and-add keeps every intermediate below 2m.
    let (mut a, mut b) = (a, b);
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut acc = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

/// Modular power for a modulus already known to be non-zero.
pub(crate) fn powm(base: Natural, mut exp: Natural, m: Natural) -> Natural {
    debug_assert!(m >= 1);
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        exp >>= 1;
        if exp > 0 {
            base = mul_mod(base, base, m);
        }
    }
    acc
}

/// `base^exp mod modulus`; `exp = 0` yields `1 mod modulus`.
pub fn pow_mod(base: Natural, exp: Natural, modulus: Natural) -> Result<Natural> {
    if modulus == 0 {
        return Err(MidyError::domain("pow_mod with modulus 0"));
    }
    Ok(powm(base, exp, modulus))
}

/// `gcd(b^k - 1, n)` without materializing `b^k - 1`.
pub fn gcd_power_minus_one(b: Natural, k: Natural, n: Natural) -> Result<Natural> {
    if n == 0 {
        return Err(MidyError::domain("gcd(b^k - 1, 0) is not supported"));
    }
    let r = powm(b, k, n);
    Ok(gcd((r + n - 1) % n, n))
}

/// Exponent of `p` in `n`, without checking that `p` is prime.
pub(crate) fn nu(p: Natural, mut n: Natural) -> u32 {
    debug_assert!(p >= 2 && n >= 1);
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Largest `e` such that `p^e` divides `n`.
pub fn valuation(p: Natural, n: Natural) -> Result<u32> {
    if n == 0 {
        return Err(MidyError::domain("valuation of 0 is undefined"));
    }
    if !is_prime(p) {
        return Err(MidyError::precondition(format!("{p} is not prime")));
    }
    Ok(nu(p, n))
}

/// How much a primality verdict can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    /// Exact: trial division or a deterministic witness set.
    Proven,
    /// Strong probable prime to 25 fixed bases; the input exceeds the
    /// range where the witness set is known to be deterministic.
    Probable,
}

fn strong_probable_prime(n: Natural, a: Natural) -> bool {
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    let mut x = powm(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality verdict together with its [`Certainty`].
pub fn primality(n: Natural) -> (bool, Certainty) {
    if n < 2 {
        return (false, Certainty::Proven);
    }
    for &p in WITNESSES.iter().chain(EXTRA_WITNESSES.iter()) {
        if n == p {
            return (true, Certainty::Proven);
        }
        if n % p == 0 {
            return (false, Certainty::Proven);
        }
    }
    if n < 97 * 97 {
        return (true, Certainty::Proven);
    }
    if !WITNESSES.iter().all(|&a| strong_probable_prime(n, a)) {
        return (false, Certainty::Proven);
    }
    if n < DETERMINISTIC_PRIMALITY_LIMIT {
        return (true, Certainty::Proven);
    }
    if EXTRA_WITNESSES.iter().all(|&a| strong_probable_prime(n, a)) {
        (true, Certainty::Probable)
    } else {
        (false, Certainty::Proven)
    }
}

pub fn is_prime(n: Natural) -> bool {
    primality(n).0
}

/// Canonical prime factorization: primes strictly increasing, exponents
/// positive. The empty factorization represents 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Factorization {
    factors: Vec<(Natural, u32)>,
    /// `false` when some listed prime is only a strong probable prime.
    #[serde(default = "proven")]
    proven: bool,
}

fn proven() -> bool {
    true
}

impl Factorization {
    /// Builds a factorization from arbitrary `(prime, exponent)` pairs,
    /// merging repeated primes and dropping zero exponents. Every base is
    /// checked for primality.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Natural, u32)>) -> Result<Self> {
        let mut factors: Vec<(Natural, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable();
        let mut merged: Vec<(Natural, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        let mut proven = true;
        for &(p, _) in &merged {
            match primality(p) {
                (false, _) => return Err(MidyError::precondition(format!("{p} is not prime"))),
                (true, Certainty::Probable) => proven = false,
                (true, Certainty::Proven) => {}
            }
        }
        let f = Factorization { factors: merged, proven };
        f.checked_value()?;
        Ok(f)
    }

    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = Natural> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: Natural) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_proven(&self) -> bool {
        self.proven
    }

    fn checked_value(&self) -> Result<Natural> {
        self.factors.iter().try_fold(1 as Natural, |acc, &(p, e)| {
            checked_pow(p, e)?
                .checked_mul(acc)
                .ok_or_else(|| MidyError::overflow("factorization product"))
        })
    }

    /// The number this factorization represents.
    pub fn value(&self) -> Natural {
        self.checked_value()
            .expect("factorization product was checked on construction")
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<Natural> {
        let mut divs = vec![1 as Natural];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for Factorization {
    /// `p^e*p^e...`; the empty factorization prints as nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}

fn pollard_brent(n: Natural) -> Natural {
    // Deterministic: walk through polynomial constants c = 1, 2, ...
    let mut c: Natural = 1;
    loop {
        let f = |x: Natural| add_mod(mul_mod(x, x, n), c, n);
        let mut y: Natural = 2;
        let mut r: u64 = 1;
        let mut q: Natural = 1;
        let mut g: Natural = 1;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: Natural, out: &mut Vec<(Natural, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push((n, 1));
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization by trial division below a small bound, then Pollard
/// rho (Brent's variant) on the remaining cofactor.
pub fn factor(n: Natural) -> Result<Factorization> {
    if n == 0 {
        return Err(MidyError::domain("cannot factor 0"));
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    for p in [2, 3, 5] {
        let e = if rest % p == 0 { nu(p, rest) } else { 0 };
        if e > 0 {
            rest /= checked_pow(p, e)?;
            pairs.push((p, e));
        }
    }
    // 2·3·5 wheel.
    const STEPS: [Natural; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p: Natural = 7;
    let mut i = 0;
    while p < TRIAL_DIVISION_BOUND && p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        p += STEPS[i];
        i = (i + 1) % STEPS.len();
    }
    if rest > 1 {
        if p * p > rest {
            pairs.push((rest, 1));
        } else {
            split_into(rest, &mut pairs);
        }
    }
    Factorization::from_pairs(pairs)
}

/// Divisors of `n`, ascending.
pub fn divisors(n: Natural) -> Result<Vec<Natural>> {
    Ok(factor(n)?.divisors())
}
