//! Lagrange-multiplier machinery for the descriptor system.
//!
//! Holding the total usage `N = sum G_i n_i` and the total price
//! `E = sum eps_i G_i n_i` fixed, the stationary points of
//! `F = E - theta S + alpha sum G_i n_i` (with `S` the Stirling entropy) are
//! the Bose-Einstein occupations `n_i = 1 / (exp(beta (alpha + eps_i)) - 1)`,
//! `beta = 1 / theta`. This module evaluates that law, fits `(beta, alpha)`
//! to given `(N, E)` targets, and inverts the law to price each class given
//! its observed occupancy.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};

use crate::combinatorics::stirling_entropy;
use crate::error::{Error, Result};

/// Iteration cap for each bracketing or bisection loop of the fit.
pub const MAX_ITERATIONS: usize = 200;

/// Which occupation law to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccupationLaw {
    /// `1 / (exp(beta (alpha + eps)) - 1)`.
    #[default]
    BoseEinstein,
    /// `1 / (beta (alpha + eps) - 1)`, the linear form without the
    /// exponential. Kept for comparison runs only; it is not a stationary
    /// point of `F`.
    Printed,
}

impl std::str::FromStr for OccupationLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bose-einstein" => Ok(OccupationLaw::BoseEinstein),
            "printed" => Ok(OccupationLaw::Printed),
            other => Err(Error::Domain(format!("unknown occupation law `{other}`"))),
        }
    }
}

impl std::fmt::Display for OccupationLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OccupationLaw::BoseEinstein => "bose-einstein",
            OccupationLaw::Printed => "printed",
        })
    }
}

/// Scale and shift convention for informatibility values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gauge {
    pub theta: f64,
    pub alpha: f64,
}

impl Default for Gauge {
    fn default() -> Self {
        Self {
            theta: 1.0,
            alpha: 0.0,
        }
    }
}

impl Gauge {
    pub fn new(theta: f64, alpha: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "gauge needs theta > 0 and finite alpha, got theta = {theta}, alpha = {alpha}"
            )));
        }
        Ok(Self { theta, alpha })
    }

    pub fn beta(&self) -> f64 {
        self.theta.recip()
    }
}

/// Price levels `eps_i` with degeneracies `G_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevels {
    epsilon: Vec<f64>,
    degeneracy: Vec<f64>,
}

impl EnergyLevels {
    pub fn new(epsilon: Vec<f64>, degeneracy: Vec<u64>) -> Result<Self> {
        if epsilon.is_empty() || epsilon.len() != degeneracy.len() {
            return Err(Error::Domain(format!(
                "need matching nonempty level lists, got {} energies and {} degeneracies",
                epsilon.len(),
                degeneracy.len()
            )));
        }
        if degeneracy.contains(&0) {
            return Err(Error::Domain("degeneracies must be positive".into()));
        }
        if epsilon.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("energies must be finite".into()));
        }
        Ok(Self {
            epsilon,
            degeneracy: degeneracy.into_iter().map(|g| g as f64).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.epsilon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilon.is_empty()
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn degeneracy(&self) -> &[f64] {
        &self.degeneracy
    }

    /// `sum G_i n_i`.
    pub fn total_usage(&self, occupations: &[f64]) -> f64 {
        self.degeneracy.iter().zip(occupations).map(|(g, n)| g * n).sum()
    }

    /// `sum eps_i G_i n_i`.
    pub fn total_energy(&self, occupations: &[f64]) -> f64 {
        self.epsilon
            .iter()
            .zip(&self.degeneracy)
            .zip(occupations)
            .map(|((e, g), n)| e * g * n)
            .sum()
    }

    /// Stirling entropy of the occupations over these degeneracies.
    pub fn entropy(&self, occupations: &[f64]) -> f64 {
        let pairs: Vec<(f64, f64)> = self
            .degeneracy
            .iter()
            .zip(occupations)
            .map(|(&g, &n)| (g * n, g))
            .collect();
        stirling_entropy(&pairs)
    }
}

pub fn occupation(eps: f64, beta: f64, alpha: f64) -> Result<f64> {
    occupation_with(OccupationLaw::BoseEinstein, eps, beta, alpha)
}

pub fn occupation_with(law: OccupationLaw, eps: f64, beta: f64, alpha: f64) -> Result<f64> {
    let exponent = beta * (alpha + eps);
    match law {
        OccupationLaw::BoseEinstein if exponent > 0.0 => Ok(exponent.exp_m1().recip()),
        OccupationLaw::Printed if exponent > 1.0 => Ok((exponent - 1.0).recip()),
        _ => Err(Error::Divergence { exponent }),
    }
}

/// `F = E - theta S + alpha sum G_i n_i` at the given occupations.
pub fn lagrange_value(levels: &EnergyLevels, occupations: &[f64], theta: f64, alpha: f64) -> f64 {
    assert_eq!(levels.len(), occupations.len(), "one occupation per level");
    levels.total_energy(occupations) - theta * levels.entropy(occupations)
        + alpha * levels.total_usage(occupations)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumSolution {
    pub beta: f64,
    pub alpha: f64,
    pub theta: f64,
    pub occupations: Vec<f64>,
    /// `sum G_i n_i - N_target`.
    pub residual_n: f64,
    /// `sum eps_i G_i n_i - E_target`.
    pub residual_e: f64,
}

impl EquilibriumSolution {
    fn from_multipliers(levels: &EnergyLevels, beta: f64, alpha: f64, n: f64, e: f64) -> Result<Self> {
        let occupations = levels
            .epsilon
            .iter()
            .map(|&eps| occupation(eps, beta, alpha))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            beta,
            alpha,
            theta: beta.recip(),
            residual_n: levels.total_usage(&occupations) - n,
            residual_e: levels.total_energy(&occupations) - e,
            occupations,
        })
    }

    pub fn gauge(&self) -> Gauge {
        Gauge {
            theta: self.theta,
            alpha: self.alpha,
        }
    }
}

/// Occupations at `beta`, parametrised by `x0 = beta (alpha + eps_min) > 0`.
struct Profile<'a> {
    levels: &'a EnergyLevels,
    eps_min: f64,
}

impl Profile<'_> {
    fn usage(&self, beta: f64, x0: f64) -> f64 {
        self.levels
            .epsilon
            .iter()
            .zip(&self.levels.degeneracy)
            .map(|(&e, &g)| g / (x0 + beta * (e - self.eps_min)).exp_m1())
            .sum()
    }

    fn usage_and_energy(&self, beta: f64, x0: f64) -> (f64, f64) {
        self.levels
            .epsilon
            .iter()
            .zip(&self.levels.degeneracy)
            .fold((0.0, 0.0), |(n, en), (&e, &g)| {
                let occ = g / (x0 + beta * (e - self.eps_min)).exp_m1();
                (n + occ, en + e * occ)
            })
    }

    /// Solves `usage(beta, x0) = target` for `x0`; usage falls strictly in `x0`.
    fn solve_x0(&self, beta: f64, target: f64) -> Result<f64> {
        let (lo, hi) = bracket(1.0, |x| self.usage(beta, x) > target)?;
        bisect(lo, hi, |x| self.usage(beta, x) > target)
    }

    fn mean_energy(&self, beta: f64, target_n: f64) -> Result<f64> {
        let x0 = self.solve_x0(beta, target_n)?;
        let (n, e) = self.usage_and_energy(beta, x0);
        Ok(e / n)
    }
}

fn not_converged() -> Error {
    Error::Convergence {
        iterations: MAX_ITERATIONS,
        residual_n: f64::NAN,
        residual_e: f64::NAN,
    }
}

/// Finds `lo < hi` with `below(lo)` true and `below(hi)` false by doubling
/// or halving from `start`. `below` must be true on an interval `(0, root)`.
fn bracket(start: f64, below: impl Fn(f64) -> bool) -> Result<(f64, f64)> {
    let mut x = start;
    if below(x) {
        for _ in 0..MAX_ITERATIONS {
            let next = 2.0 * x;
            if !below(next) {
                return Ok((x, next));
            }
            x = next;
        }
    } else {
        for _ in 0..MAX_ITERATIONS {
            let next = 0.5 * x;
            if below(next) {
                return Ok((next, x));
            }
            x = next;
        }
    }
    Err(not_converged())
}

/// Bisects `[lo, hi]` down to adjacent floats.
fn bisect(mut lo: f64, mut hi: f64, below: impl Fn(f64) -> bool) -> Result<f64> {
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(not_converged())
}

/// Fits `(beta, alpha)` so that the Bose-Einstein occupations of `levels`
/// carry `n_target` uses at total price `e_target`.
///
/// The achievable mean price `E/N` for `beta > 0` is the open interval between
/// the lowest level and the degeneracy-weighted mean level. Inside it, the
/// usage constraint is solved for `alpha` at fixed `beta` by monotone
/// bisection, and an outer bisection on `beta` matches the mean price. With
/// all levels equal, any solution of the usage constraint works; the one with
/// `alpha = 0` is returned when the level is positive.
pub fn fit_equilibrium(
    levels: &EnergyLevels,
    n_target: f64,
    e_target: f64,
) -> Result<EquilibriumSolution> {
    if !(n_target > 0.0 && n_target.is_finite()) || !e_target.is_finite() {
        return Err(Error::Domain(format!(
            "targets must be finite with N > 0, got N = {n_target}, E = {e_target}"
        )));
    }
    let mean = e_target / n_target;
    let eps_min = levels.epsilon.iter().copied().fold(f64::INFINITY, f64::min);
    let eps_max = levels.epsilon.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total_g: f64 = levels.degeneracy.iter().sum();

    if eps_min == eps_max {
        let c = eps_min;
        if (mean - c).abs() > 1e-12 * c.abs().max(1.0) {
            return Err(Error::Infeasible {
                mean,
                low: c,
                high: c,
            });
        }
        let x = (total_g / n_target).ln_1p();
        let (beta, alpha) = if c > 0.0 { (x / c, 0.0) } else { (1.0, x - c) };
        return EquilibriumSolution::from_multipliers(levels, beta, alpha, n_target, e_target);
    }

    let high = levels.total_energy(&vec![1.0; levels.len()]) / total_g;
    if !(mean > eps_min && mean < high) {
        return Err(Error::Infeasible {
            mean,
            low: eps_min,
            high,
        });
    }

    let profile = Profile { levels, eps_min };
    // Mean price decreases in beta: too hot while it is above the target.
    let too_hot = |beta: f64| -> Result<bool> { Ok(profile.mean_energy(beta, n_target)? > mean) };
    let probe = |beta: f64| too_hot(beta).unwrap_or(false);
    too_hot(1.0)?;
    let (lo, hi) = bracket(1.0, probe)?;
    let beta = bisect(lo, hi, probe)?;

    let x0 = profile.solve_x0(beta, n_target)?;
    let alpha = x0 / beta - eps_min;
    let solution = EquilibriumSolution::from_multipliers(levels, beta, alpha, n_target, e_target)?;
    let tolerance = 1e-10;
    if solution.residual_n.abs() > tolerance * n_target
        || solution.residual_e.abs() > tolerance * e_target.abs().max(f64::MIN_POSITIVE)
    {
        return Err(Error::Convergence {
            iterations: MAX_ITERATIONS,
            residual_n: solution.residual_n,
            residual_e: solution.residual_e,
        });
    }
    Ok(solution)
}

/// Price of one class. `epsilon` is `None` for unoccupied classes, whose
/// informatibility is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassPrice {
    pub epsilon: Option<f64>,
    /// `N_i eps_i`, zero for unoccupied classes.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InformatibilityAssignment {
    pub gauge: Gauge,
    pub law: OccupationLaw,
    pub prices: Vec<ClassPrice>,
}

impl InformatibilityAssignment {
    pub fn total_cost(&self) -> f64 {
        crate::sum::exact_sum(self.prices.iter().map(|p| p.cost))
    }

    /// Indices of classes with infinite informatibility.
    pub fn unoccupied(&self) -> impl Iterator<Item = usize> + '_ {
        self.prices
            .iter()
            .enumerate()
            .filter(|(_, p)| p.epsilon.is_none())
            .map(|(i, _)| i)
    }
}

/// Inverse of the occupation law at one occupancy.
pub fn price_of(law: OccupationLaw, occupancy: f64, gauge: Gauge) -> Result<f64> {
    if !(occupancy > 0.0) {
        return Err(Error::Domain(format!(
            "occupancy must be positive, got {occupancy}"
        )));
    }
    let inverse = occupancy.recip();
    Ok(match law {
        OccupationLaw::BoseEinstein => gauge.theta * inverse.ln_1p() - gauge.alpha,
        OccupationLaw::Printed => gauge.theta * (1.0 + inverse) - gauge.alpha,
    })
}

/// Prices `eps_i = theta ln(1 + 1/n_i) - alpha` for classes given as
/// `(N_i, G_i)`, with costs `N_i eps_i`.
pub fn informatibility(stats: &[(f64, f64)], gauge: Gauge) -> Result<InformatibilityAssignment> {
    informatibility_with(OccupationLaw::BoseEinstein, stats, gauge)
}

pub fn informatibility_with(
    law: OccupationLaw,
    stats: &[(f64, f64)],
    gauge: Gauge,
) -> Result<InformatibilityAssignment> {
    let prices = stats
        .iter()
        .map(|&(n, g)| {
            if n == 0.0 {
                return Ok(ClassPrice {
                    epsilon: None,
                    cost: 0.0,
                });
            }
            let eps = price_of(law, n / g, gauge)?;
            Ok(ClassPrice {
                epsilon: Some(eps),
                cost: n * eps,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InformatibilityAssignment { gauge, law, prices })
}

/// Gauge with `alpha = 0` and `theta` scaled so that the total cost
/// `sum N_i eps_i` equals `e_target`. Unoccupied classes are ignored.
pub fn calibrate_gauge(occupations: &[f64], degeneracy: &[f64], e_target: f64) -> Result<Gauge> {
    if occupations.len() != degeneracy.len() {
        return Err(Error::Domain("one degeneracy per occupation".into()));
    }
    if !(e_target > 0.0 && e_target.is_finite()) {
        return Err(Error::Domain(format!("E_0 must be positive, got {e_target}")));
    }
    let unit_cost: f64 = occupations
        .iter()
        .zip(degeneracy)
        .filter(|(&n, _)| n > 0.0)
        .map(|(&n, &g)| g * n * n.recip().ln_1p())
        .sum();
    if !(unit_cost > 0.0) {
        return Err(Error::Domain("no occupied class to calibrate against".into()));
    }
    Gauge::new(e_target / unit_cost, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaSensitivity {
    /// Central difference of `F` in `theta` at fixed occupations.
    pub derivative: f64,
    /// `-S` at the same occupations, the analytic value of the derivative.
    pub minus_entropy: f64,
}

pub fn theta_sensitivity(
    levels: &EnergyLevels,
    occupations: &[f64],
    gauge: Gauge,
    h: f64,
) -> Result<ThetaSensitivity> {
    if !(1e-8..=1e-3).contains(&h) {
        return Err(Error::Domain(format!("step {h} outside [1e-8, 1e-3]")));
    }
    let f = |theta| lagrange_value(levels, occupations, theta, gauge.alpha);
    Ok(ThetaSensitivity {
        derivative: (f(gauge.theta + h) - f(gauge.theta - h)) / (2.0 * h),
        minus_entropy: -levels.entropy(occupations),
    })
}

/// `dF/dn_i` in closed form: `G_i (eps_i + alpha - theta ln(1 + 1/n_i))`.
pub fn lagrange_gradient(levels: &EnergyLevels, occupations: &[f64], gauge: Gauge) -> Vec<f64> {
    levels
        .epsilon
        .iter()
        .zip(&levels.degeneracy)
        .zip(occupations)
        .map(|((&e, &g), &n)| g * (e + gauge.alpha - gauge.theta * n.recip().ln_1p()))
        .collect()
}
