//! Counting the ways `N` indistinguishable uses fall on `G` distinguishable
//! words, and the entropy that count defines.
//!
//! The exact count is the stars-and-bars binomial `(N+G-1)! / (N! (G-1)!)`.
//! For the large-`N`, large-`G` regime the logarithm is taken through
//! log-gamma, and [`stirling_entropy`] gives the Stirling-approximated form
//! `G [(1+n) ln(1+n) - n ln n]` with `n = N / G`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Tuples [`enumerate_configurations`] is willing to produce.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Classes with `N + G` at or below this use the exact integer count in
/// [`ln_count`]; larger ones go through log-gamma.
pub const EXACT_LN_LIMIT: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConfigurationCount(BigUint);

impl ConfigurationCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn ln(&self) -> f64 {
        match self.0.to_f64() {
            Some(v) if v.is_finite() => v.ln(),
            // Past f64 range: ln(m * 2^e) from the leading 64 bits.
            _ => {
                let bits = self.0.bits();
                let shift = bits - 64;
                let mantissa = (&self.0 >> shift).to_f64().unwrap();
                mantissa.ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }

    /// Number of decimal digits.
    pub fn digits(&self) -> usize {
        self.0.to_str_radix(10).len()
    }
}

impl fmt::Display for ConfigurationCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq<u64> for ConfigurationCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

/// Exact number of ways to distribute `n` uses over `g` words.
pub fn count_configurations_exact(n: u64, g: u64) -> Result<ConfigurationCount> {
    if g == 0 {
        return Err(Error::Domain("class size G must be at least 1".into()));
    }
    let top = n + g - 1;
    let k = n.min(g - 1);
    let mut acc = BigUint::one();
    // acc = C(top - k + i, i) after step i; each division is exact.
    for i in 1..=k {
        acc *= top - k + i;
        acc /= i;
    }
    Ok(ConfigurationCount(acc))
}

/// Every `g`-tuple of nonnegative integers summing to `n`, in lexicographic
/// order. Intended as a test oracle, so it refuses large outputs.
pub fn enumerate_configurations(n: u64, g: u64) -> Result<Vec<Vec<u64>>> {
    let count = count_configurations_exact(n, g)?;
    if count.value() > &BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::OracleTooLarge {
            count: count.to_string(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count.value().to_usize().unwrap());
    let mut prefix = Vec::with_capacity(g as usize);
    fill(n, g as usize, &mut prefix, &mut out);
    Ok(out)
}

fn fill(remaining: u64, slots: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if slots == 1 {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=remaining {
        prefix.push(first);
        fill(remaining - first, slots - 1, prefix, out);
        prefix.pop();
    }
}

/// `ln C(n+g-1, n)` through log-gamma.
pub fn ln_count_lgamma(n: u64, g: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (n, g) = (n as f64, g as f64);
    ln_gamma(n + g) - ln_gamma(n + 1.0) - ln_gamma(g)
}

/// `ln C(n+g-1, n)` for one class, exact for small classes.
pub fn ln_count(n: u64, g: u64) -> Result<f64> {
    if g == 0 {
        return Err(Error::Domain("class size G must be at least 1".into()));
    }
    if n + g <= EXACT_LN_LIMIT {
        Ok(count_configurations_exact(n, g)?.ln())
    } else {
        Ok(ln_count_lgamma(n, g))
    }
}

/// Log of the total number of configurations over all classes, the product
/// of the per-class counts. Summed in the given class order.
pub fn ln_count_total(stats: &[(u64, u64)]) -> Result<f64> {
    stats
        .iter()
        .try_fold(0.0, |acc, &(n, g)| Ok(acc + ln_count(n, g)?))
}

/// Exact product of the per-class counts.
pub fn count_total_exact(stats: &[(u64, u64)]) -> Result<ConfigurationCount> {
    let mut acc = BigUint::one();
    for &(n, g) in stats {
        acc *= count_configurations_exact(n, g)?.0;
    }
    Ok(ConfigurationCount(acc))
}

/// Per-slot entropy `(1+n) ln(1+n) - n ln n` at occupancy `n >= 0`.
pub fn entropy_density(n: f64) -> f64 {
    if n == 0.0 {
        return 0.0;
    }
    n.ln_1p() + n * n.recip().ln_1p()
}

/// Stirling-approximated entropy over `(N, G)` pairs (real-valued, so that
/// fitted fractional occupations can be evaluated too). Classes with `N = 0`
/// contribute nothing.
pub fn stirling_entropy(stats: &[(f64, f64)]) -> f64 {
    stats
        .iter()
        .filter(|&&(n, _)| n != 0.0)
        .map(|&(n, g)| g * entropy_density(n / g))
        .sum()
}

/// [`stirling_entropy`] for integer statistics.
pub fn stirling_entropy_counts(stats: &[(u64, u64)]) -> f64 {
    let real: Vec<(f64, f64)> = stats.iter().map(|&(n, g)| (n as f64, g as f64)).collect();
    stirling_entropy(&real)
}
