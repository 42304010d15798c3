//! Integer combinatorics shared by every module: exact factorials and
//! binomials, their logarithms, and lexicographic subset enumeration.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default upper bound on the number of index sets a sampling routine will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Exact binomial coefficient with `C(a, b) = 0` whenever `b < 0`, `a < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for k in 0..b {
        acc *= a - k;
        acc /= k + 1;
    }
    acc
}

/// Binomial as a `u128` when it fits; used for capacity checks.
pub fn binomial_u128(a: u64, b: u64) -> Option<u128> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for k in 0..b {
        // acc * (a - k) is divisible by (k + 1) at every step.
        acc = acc.checked_mul((a - k) as u128)? / (k as u128 + 1);
    }
    Some(acc)
}

pub fn ln_factorial(n: u64) -> f64 {
    statrs::function::factorial::ln_factorial(n)
}

/// `ln C(a, b)`; `-inf` when the binomial vanishes by convention.
pub fn ln_binomial(a: i64, b: i64) -> f64 {
    if a < 0 || b < 0 || b > a {
        return f64::NEG_INFINITY;
    }
    ln_factorial(a as u64) - ln_factorial(b as u64) - ln_factorial((a - b) as u64)
}

/// Number of `k`-subsets of `[1, r]`, refusing anything above `cap`.
pub fn checked_subset_count(r: usize, k: usize, cap: u64) -> Result<usize> {
    match binomial_u128(r as u64, k as u64) {
        Some(c) if c <= cap as u128 => Ok(c as usize),
        Some(c) => Err(Error::Capacity(format!("C({r}, {k}) = {c} index sets exceeds the enumeration cap {cap}"))),
        None => Err(Error::Capacity(format!("C({r}, {k}) overflows; enumeration cap is {cap}"))),
    }
}

/// Lexicographic iterator over the `k`-element subsets of `{1, ..., r}`,
/// each yielded as a strictly increasing vector.
#[derive(Debug, Clone)]
pub struct Subsets {
    r: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    pub fn new(r: usize, k: usize) -> Self {
        let current = (k <= r).then(|| (1..=k).collect());
        Subsets { r, current }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let k = next.len();
        // rightmost position that can still be incremented
        let mut i = k;
        while i > 0 {
            if next[i - 1] < self.r - (k - i) {
                next[i - 1] += 1;
                for j in i..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
            i -= 1;
        }
        Some(out)
    }
}

/// Position of `subset` in the lexicographic order produced by [`Subsets`].
pub fn subset_rank(r: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (pos, &s) in subset.iter().enumerate() {
        for skipped in prev + 1..s {
            let remaining = k - pos - 1;
            rank += binomial_u128((r - skipped) as u64, remaining as u64).unwrap_or(0) as usize;
        }
        prev = s;
    }
    rank
}
