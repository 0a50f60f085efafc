//! Dropping descriptor classes with small information cost `N_i eps_i`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::combinatorics::stirling_entropy_counts;
use crate::equilibrium::{Gauge, InformatibilityAssignment, OccupationLaw};
use crate::error::{Error, Result};
use crate::lexicon::{class_statistics, ClassStatistics, DescriptorMap, DescriptorPartition, MapClass};
use crate::sum::exact_sum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompressionRule {
    /// Drop every class whose cost is below the threshold.
    Threshold(f64),
    /// Keep the given number of highest-cost classes.
    KeepTop(usize),
    /// Keep the shortest run of highest-cost classes carrying at least this
    /// fraction of the total cost.
    Budget(f64),
}

impl std::str::FromStr for CompressionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRule(format!("`{s}` (expected threshold:t, top:m or budget:f)"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "threshold" => value.parse().map(CompressionRule::Threshold).map_err(|_| bad()),
            "top" => value.parse().map(CompressionRule::KeepTop).map_err(|_| bad()),
            "budget" => value.parse().map(CompressionRule::Budget).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for CompressionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompressionRule::Threshold(t) => write!(f, "threshold:{t}"),
            CompressionRule::KeepTop(m) => write!(f, "top:{m}"),
            CompressionRule::Budget(b) => write!(f, "budget:{b}"),
        }
    }
}

impl Serialize for CompressionRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl CompressionRule {
    fn validate(&self, classes: usize) -> Result<()> {
        let ok = match *self {
            CompressionRule::Threshold(t) => t >= 0.0 && t.is_finite(),
            CompressionRule::KeepTop(m) => (1..=classes).contains(&m),
            CompressionRule::Budget(f) => f > 0.0 && f <= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidRule(format!("{self} with {classes} classes")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassCost {
    pub id: String,
    pub cost: f64,
}

/// `N_i eps_i` per class, in class order. Unoccupied classes cost nothing.
pub fn information_cost(
    assignment: &InformatibilityAssignment,
    stats: &[ClassStatistics],
) -> Result<Vec<ClassCost>> {
    if assignment.prices.len() != stats.len() {
        return Err(Error::Domain(format!(
            "{} prices for {} classes",
            assignment.prices.len(),
            stats.len()
        )));
    }
    stats
        .iter()
        .zip(&assignment.prices)
        .map(|(row, price)| {
            let cost = match (row.usage, price.epsilon) {
                (0, _) => 0.0,
                (_, Some(_)) => price.cost,
                (_, None) => return Err(Error::IncompleteAssignment(row.id.clone())),
            };
            Ok(ClassCost {
                id: row.id.clone(),
                cost,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionLosses {
    pub dropped_cost: f64,
    pub dropped_tokens: u64,
    pub entropy_before: f64,
    pub entropy_after: f64,
    pub coverage_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionPlan {
    pub rule: CompressionRule,
    pub gauge: Gauge,
    pub law: OccupationLaw,
    /// Class ids by ascending cost, ties by id.
    pub ordering: Vec<String>,
    pub kept: BTreeSet<String>,
    pub dropped: BTreeSet<String>,
    pub kept_cost: f64,
    pub total_cost: f64,
    pub losses: CompressionLosses,
}

impl CompressionPlan {
    pub fn is_identity(&self) -> bool {
        self.dropped.is_empty()
    }
}

fn cmp_ascending(a: &ClassCost, b: &ClassCost) -> std::cmp::Ordering {
    a.cost.total_cmp(&b.cost).then_with(|| a.id.cmp(&b.id))
}

/// Applies `rule` to the classes of `partition` priced by `assignment`.
pub fn compress(
    partition: &DescriptorPartition,
    assignment: &InformatibilityAssignment,
    rule: CompressionRule,
) -> Result<CompressionPlan> {
    let stats = class_statistics(partition);
    let costs = information_cost(assignment, &stats)?;
    rule.validate(costs.len())?;

    let mut ascending = costs.clone();
    ascending.sort_by(cmp_ascending);

    let kept: BTreeSet<String> = match rule {
        CompressionRule::Threshold(t) => costs
            .iter()
            .filter(|c| c.cost >= t)
            .map(|c| c.id.clone())
            .collect(),
        CompressionRule::KeepTop(m) => ascending[ascending.len() - m..]
            .iter()
            .map(|c| c.id.clone())
            .collect(),
        CompressionRule::Budget(fraction) => {
            let mut descending = costs.clone();
            descending.sort_by(|a, b| b.cost.total_cmp(&a.cost).then_with(|| a.id.cmp(&b.id)));
            let target = fraction * exact_sum(costs.iter().map(|c| c.cost));
            let mut taken = 0;
            let mut prefix = crate::sum::ExactSum::new();
            while taken < descending.len() && prefix.value() < target {
                prefix.add(descending[taken].cost);
                taken += 1;
            }
            descending[..taken].iter().map(|c| c.id.clone()).collect()
        }
    };

    let dropped: BTreeSet<String> = costs
        .iter()
        .filter(|c| !kept.contains(&c.id))
        .map(|c| c.id.clone())
        .collect();
    let cost_of = |set: &BTreeSet<String>| {
        exact_sum(costs.iter().filter(|c| set.contains(&c.id)).map(|c| c.cost))
    };

    let all_pairs: Vec<(u64, u64)> = stats.iter().map(|s| (s.usage, s.size)).collect();
    let kept_rows: Vec<&ClassStatistics> = stats.iter().filter(|s| kept.contains(&s.id)).collect();
    let kept_pairs: Vec<(u64, u64)> = kept_rows.iter().map(|s| (s.usage, s.size)).collect();
    let kept_tokens: u64 = kept_rows.iter().map(|s| s.usage).sum();
    let dropped_tokens = partition.covered_tokens() - kept_tokens;
    let total_tokens = partition.covered_tokens() + partition.unassigned_tokens();

    Ok(CompressionPlan {
        rule,
        gauge: assignment.gauge,
        law: assignment.law,
        ordering: ascending.into_iter().map(|c| c.id).collect(),
        kept_cost: cost_of(&kept),
        total_cost: exact_sum(costs.iter().map(|c| c.cost)),
        losses: CompressionLosses {
            dropped_cost: cost_of(&dropped),
            dropped_tokens,
            entropy_before: stirling_entropy_counts(&all_pairs),
            entropy_after: stirling_entropy_counts(&kept_pairs),
            coverage_after: if total_tokens == 0 {
                0.0
            } else {
                kept_tokens as f64 / total_tokens as f64
            },
        },
        kept,
        dropped,
    })
}

/// The descriptor map restricted to the classes the plan keeps.
pub fn emit_compressed_dictionary(plan: &CompressionPlan, partition: &DescriptorPartition) -> DescriptorMap {
    DescriptorMap::new(
        partition
            .classes()
            .iter()
            .filter(|c| plan.kept.contains(c.id()))
            .map(|c| MapClass {
                id: c.id().to_string(),
                members: c.members().iter().cloned().collect(),
            })
            .collect(),
    )
}
