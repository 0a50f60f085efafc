//! Specific entropy in the thermodynamic limit, Shannon entropy, the
//! small-occupancy (Boltzmann) limit, and a side-by-side comparison.

use serde::Serialize;

use crate::combinatorics::stirling_entropy_counts;
use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

fn x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Inputs of the per-token entropy: usage shares `p`, size shares `g`, and
/// the tokens-per-slot ratio `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecificEntropyInput {
    p: Vec<f64>,
    g: Vec<f64>,
    rho: f64,
}

impl SpecificEntropyInput {
    pub fn new(p: Vec<f64>, g: Vec<f64>, rho: f64) -> Result<Self> {
        if p.len() != g.len() {
            return Err(Error::Domain(format!(
                "p has {} entries but g has {}",
                p.len(),
                g.len()
            )));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Domain(format!("rho must be positive, got {rho}")));
        }
        for (name, v) in [("p", &p), ("g", &g)] {
            if v.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::Domain(format!("{name} entries must lie in [0, 1]")));
            }
            let sum: f64 = v.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::Domain(format!("{name} sums to {sum}, not 1")));
            }
        }
        if p.iter().zip(&g).any(|(&pi, &gi)| pi + gi / rho <= 0.0) {
            return Err(Error::Domain("every p_i + g_i/rho must be positive".into()));
        }
        Ok(Self { p, g, rho })
    }

    /// Shares induced by integer statistics: `p_i = N_i/N`, `g_i = G_i/M`,
    /// `rho = N/M`.
    pub fn from_counts(stats: &[(u64, u64)]) -> Result<Self> {
        let n: u64 = stats.iter().map(|s| s.0).sum();
        let m: u64 = stats.iter().map(|s| s.1).sum();
        if n == 0 || m == 0 {
            return Err(Error::Domain("need at least one token and one slot".into()));
        }
        let p = stats.iter().map(|s| s.0 as f64 / n as f64).collect();
        let g = stats.iter().map(|s| s.1 as f64 / m as f64).collect();
        Self::new(p, g, n as f64 / m as f64)
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Per-token entropy
/// `sum_i (p_i + g_i/rho) ln(p_i + g_i/rho) - p_i ln p_i - (g_i/rho) ln(g_i/rho)`.
pub fn specific_entropy(input: &SpecificEntropyInput) -> f64 {
    input
        .p
        .iter()
        .zip(&input.g)
        .map(|(&p, &g)| {
            let q = g / input.rho;
            x_ln_x(p + q) - x_ln_x(p) - x_ln_x(q)
        })
        .sum()
}

pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(x) = p.iter().find(|&&x| x < 0.0 || x.is_nan()) {
        return Err(Error::Domain(format!("negative probability {x}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Domain(format!("probabilities sum to {sum}, not 1")));
    }
    Ok(-p.iter().map(|&x| x_ln_x(x)).sum::<f64>())
}

/// The `N/G -> 0` limit of the Stirling entropy, `sum_i N_i (1 + ln(G_i/N_i))`.
/// Takes real `(N, G)` pairs; classes with `N = 0` contribute nothing.
pub fn boltzmann_limit_entropy(stats: &[(f64, f64)]) -> f64 {
    stats
        .iter()
        .filter(|&&(n, _)| n > 0.0)
        .map(|&(n, g)| n * (1.0 + (g / n).ln()))
        .sum()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct EntropyComparison {
    pub be_total: f64,
    pub shannon: f64,
    pub boltzmann_limit: f64,
    pub max_occupancy: f64,
}

/// Stirling entropy, Shannon entropy of the class usage shares, and the
/// Boltzmann limit for the same `(N_i, G_i)` statistics.
pub fn compare_entropies(stats: &[(u64, u64)]) -> Result<EntropyComparison> {
    if stats.iter().any(|&(_, g)| g == 0) {
        return Err(Error::Domain("class size G must be at least 1".into()));
    }
    let total: u64 = stats.iter().map(|s| s.0).sum();
    let shannon = if total == 0 {
        0.0
    } else {
        let p: Vec<f64> = stats.iter().map(|s| s.0 as f64 / total as f64).collect();
        shannon_entropy(&p)?
    };
    let real: Vec<(f64, f64)> = stats.iter().map(|&(n, g)| (n as f64, g as f64)).collect();
    Ok(EntropyComparison {
        be_total: stirling_entropy_counts(stats),
        shannon,
        boltzmann_limit: boltzmann_limit_entropy(&real),
        max_occupancy: stats
            .iter()
            .map(|&(n, g)| n as f64 / g as f64)
            .fold(0.0, f64::max),
    })
}
