//! The JSON report document.
//!
//! Keys come out in struct declaration order and every real number is
//! rounded to 12 significant digits, so repeated runs on the same inputs
//! produce byte-identical files.

use serde::{Serialize, Serializer};

use bose_lex_core::compression::CompressionPlan;
use bose_lex_core::entropy::EntropyComparison;
use bose_lex_core::equilibrium::{EquilibriumSolution, Gauge, ThetaSensitivity};
use bose_lex_core::ingest::CoverageCurve;

pub const REPORT_VERSION: &str = "bose-lex/1";
pub const SIGNIFICANT_DIGITS: usize = 12;

/// A real number rendered with [`SIGNIFICANT_DIGITS`]; non-finite values
/// become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn rounded(self) -> Option<f64> {
        if !self.0.is_finite() {
            return None;
        }
        let text = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, self.0);
        let v: f64 = text.parse().expect("formatted float parses");
        // no negative zero in reports
        Some(if v == 0.0 { 0.0 } else { v })
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num(v)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.rounded() {
            Some(v) => s.serialize_f64(v),
            None => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeBlock {
    pub theta: Num,
    pub alpha: Num,
}

impl From<Gauge> for GaugeBlock {
    fn from(g: Gauge) -> Self {
        Self {
            theta: g.theta.into(),
            alpha: g.alpha.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Totals {
    pub total_tokens: u64,
    pub covered_tokens: u64,
    pub unassigned_tokens: u64,
    pub unassigned_words: usize,
    pub classes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub id: String,
    #[serde(rename = "N")]
    pub usage: u64,
    #[serde(rename = "G")]
    pub size: u64,
    pub declared_size: u64,
    pub occupancy: Num,
    /// `null` for unoccupied classes (infinite informatibility).
    pub epsilon: Option<Num>,
    pub cost: Num,
    pub ln_configurations: Num,
    /// Exact configuration count when it is short enough to print.
    pub configurations: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigurationsBlock {
    pub ln_count_nats: Num,
    pub exact_count: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyBlock {
    pub be_total_nats: Num,
    pub shannon_nats: Num,
    pub boltzmann_limit_nats: Num,
    pub max_occupancy: Num,
    /// Per-token entropy of the induced shares; `null` for an empty corpus.
    pub specific_nats: Option<Num>,
}

impl EntropyBlock {
    pub fn new(cmp: &EntropyComparison, specific: Option<f64>) -> Self {
        Self {
            be_total_nats: cmp.be_total.into(),
            shannon_nats: cmp.shannon.into(),
            boltzmann_limit_nats: cmp.boltzmann_limit.into(),
            max_occupancy: cmp.max_occupancy.into(),
            specific_nats: specific.map(Num),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InformatibilityBlock {
    pub law: String,
    pub gauge: GaugeBlock,
    pub gauge_source: String,
    pub total_cost: Num,
    pub infinite_classes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelRow {
    pub id: String,
    pub epsilon: Num,
    pub occupancy: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct SensitivityBlock {
    pub d_f_d_theta: Num,
    pub minus_entropy: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumBlock {
    #[serde(rename = "N_target")]
    pub n_target: Num,
    #[serde(rename = "E_target")]
    pub e_target: Num,
    pub beta: Num,
    pub alpha: Num,
    pub theta: Num,
    #[serde(rename = "residual_N")]
    pub residual_n: Num,
    #[serde(rename = "residual_E")]
    pub residual_e: Num,
    pub theta_sensitivity: SensitivityBlock,
    pub classes: Vec<LevelRow>,
}

impl EquilibriumBlock {
    pub fn new(
        n_target: f64,
        e_target: f64,
        sol: &EquilibriumSolution,
        ids: &[String],
        epsilon: &[f64],
        sensitivity: ThetaSensitivity,
    ) -> Self {
        Self {
            n_target: n_target.into(),
            e_target: e_target.into(),
            beta: sol.beta.into(),
            alpha: sol.alpha.into(),
            theta: sol.theta.into(),
            residual_n: sol.residual_n.into(),
            residual_e: sol.residual_e.into(),
            theta_sensitivity: SensitivityBlock {
                d_f_d_theta: sensitivity.derivative.into(),
                minus_entropy: sensitivity.minus_entropy.into(),
            },
            classes: ids
                .iter()
                .zip(epsilon)
                .zip(&sol.occupations)
                .map(|((id, &e), &n)| LevelRow {
                    id: id.clone(),
                    epsilon: e.into(),
                    occupancy: n.into(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageRow {
    pub rank: usize,
    pub fraction: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageBlock {
    pub vocabulary_size: usize,
    pub points: Vec<CoverageRow>,
}

impl CoverageBlock {
    pub fn new(vocabulary_size: usize, curve: &CoverageCurve) -> Self {
        Self {
            vocabulary_size,
            points: curve
                .points
                .iter()
                .map(|p| CoverageRow {
                    rank: p.rank,
                    fraction: p.cumulative_fraction.into(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LossesBlock {
    pub dropped_cost: Num,
    pub dropped_tokens: u64,
    pub entropy_before: Num,
    pub entropy_after: Num,
    pub coverage_after: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompressionBlock {
    pub rule: String,
    pub law: String,
    pub gauge: GaugeBlock,
    pub ordering: Vec<String>,
    pub kept: Vec<String>,
    pub dropped: Vec<String>,
    pub kept_cost: Num,
    pub total_cost: Num,
    pub losses: LossesBlock,
}

impl From<&CompressionPlan> for CompressionBlock {
    fn from(plan: &CompressionPlan) -> Self {
        Self {
            rule: plan.rule.to_string(),
            law: plan.law.to_string(),
            gauge: plan.gauge.into(),
            ordering: plan.ordering.clone(),
            kept: plan.kept.iter().cloned().collect(),
            dropped: plan.dropped.iter().cloned().collect(),
            kept_cost: plan.kept_cost.into(),
            total_cost: plan.total_cost.into(),
            losses: LossesBlock {
                dropped_cost: plan.losses.dropped_cost.into(),
                dropped_tokens: plan.losses.dropped_tokens,
                entropy_before: plan.losses.entropy_before.into(),
                entropy_after: plan.losses.entropy_after.into(),
                coverage_after: plan.losses.coverage_after.into(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<C: Serialize> {
    pub version: &'static str,
    pub tool_version: &'static str,
    pub config: C,
    pub totals: Totals,
    pub classes: Vec<ClassRow>,
    pub configurations: ConfigurationsBlock,
    pub entropy: EntropyBlock,
    pub informatibility: InformatibilityBlock,
    pub equilibrium: Option<EquilibriumBlock>,
    pub coverage: CoverageBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compression: Option<CompressionBlock>,
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("report serializes");
    out.push('\n');
    out
}
