//! Frequency dictionaries, descriptor maps and the partition that binds them.
//!
//! A [`FrequencyDictionary`] is the natural-language side: surface words with
//! their occurrence counts. A [`DescriptorMap`] groups surface words into
//! descriptor classes, each of which stands for a single word of the
//! compressed vocabulary. [`build_partition`] binds the two and derives, per
//! class, the usage `N` (total occurrences of all members), the degeneracy
//! `G` (number of member slots) and the occupancy `N / G`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version tag carried by every descriptor-map document.
pub const MAP_VERSION: &str = "bose-lex-map/1";

/// Word counts over a corpus. Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyDictionary {
    entries: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl FrequencyDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a dictionary from `(word, count)` pairs, summing repeated words.
    /// Pairs with a zero count are skipped.
    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut dict = Self::new();
        for (word, count) in counts {
            dict.add(word, count);
        }
        dict
    }

    pub fn add(&mut self, word: impl Into<String>, count: u64) {
        if count == 0 {
            return;
        }
        *self.entries.entry(word.into()).or_insert(0) += count;
        self.total_tokens += count;
    }

    /// Sums the counts of `other` into `self`. Merging is associative and
    /// commutative, so partial dictionaries can be combined in any order.
    pub fn merge(&mut self, other: &FrequencyDictionary) {
        for (word, &count) in &other.entries {
            self.add(word.clone(), count);
        }
    }

    pub fn count(&self, word: &str) -> u64 {
        self.entries.get(word).copied().unwrap_or(0)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Number of distinct words.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates words in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Words sorted by count descending, ties broken by word ascending.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut ranked: Vec<_> = self.iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked
    }
}

/// One class entry of a descriptor-map document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapClass {
    pub id: String,
    pub members: Vec<String>,
}

/// The descriptor-map document: `{version, classes: [{id, members[]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorMap {
    pub version: String,
    pub classes: Vec<MapClass>,
}

impl DescriptorMap {
    pub fn new(classes: Vec<MapClass>) -> Self {
        Self {
            version: MAP_VERSION.to_string(),
            classes,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedMap(e.to_string()))
    }

    /// Canonical rendering: classes sorted by id, members sorted, pretty
    /// printed with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut canonical = self.clone();
        for class in &mut canonical.classes {
            class.members.sort();
        }
        canonical.classes.sort_by(|a, b| a.id.cmp(&b.id));
        let mut out = serde_json::to_string_pretty(&canonical).expect("map serializes");
        out.push('\n');
        out
    }
}

/// How the degeneracy `G` of a class is taken.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GMode {
    /// Number of members listed in the map.
    #[default]
    Declared,
    /// Number of members that actually occur in the corpus (at least 1).
    Observed,
}

impl std::str::FromStr for GMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "declared" => Ok(GMode::Declared),
            "observed" => Ok(GMode::Observed),
            other => Err(Error::Domain(format!("unknown g-mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for GMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GMode::Declared => "declared",
            GMode::Observed => "observed",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorClass {
    id: String,
    members: BTreeSet<String>,
    declared_size: u64,
    observed_size: u64,
    size: u64,
    usage: u64,
}

impl DescriptorClass {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn members(&self) -> &BTreeSet<String> {
        &self.members
    }

    /// Number of members listed in the map.
    pub fn declared_size(&self) -> u64 {
        self.declared_size
    }

    /// Number of members with a nonzero corpus count.
    pub fn observed_size(&self) -> u64 {
        self.observed_size
    }

    /// Effective degeneracy `G` under the partition's [`GMode`].
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Usage `N`: total occurrences of all members.
    pub fn usage(&self) -> u64 {
        self.usage
    }

    /// Occupancy `N / G`, the correctly rounded `f64` quotient.
    pub fn occupancy(&self) -> f64 {
        self.usage as f64 / self.size as f64
    }
}

/// Per-class row produced by [`class_statistics`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStatistics {
    pub id: String,
    pub usage: u64,
    pub size: u64,
    pub occupancy: f64,
}

/// Disjoint descriptor classes bound to a frequency dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorPartition {
    classes: Vec<DescriptorClass>,
    unassigned: Vec<String>,
    unassigned_tokens: u64,
    total_tokens: u64,
    g_mode: GMode,
}

impl DescriptorPartition {
    /// Classes in ascending id order.
    pub fn classes(&self) -> &[DescriptorClass] {
        &self.classes
    }

    pub fn class(&self, id: &str) -> Option<&DescriptorClass> {
        self.classes
            .binary_search_by(|c| c.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.classes[i])
    }

    /// Corpus words not covered by any class, in lexicographic order.
    pub fn unassigned(&self) -> &[String] {
        &self.unassigned
    }

    pub fn unassigned_tokens(&self) -> u64 {
        self.unassigned_tokens
    }

    pub fn covered_tokens(&self) -> u64 {
        self.classes.iter().map(|c| c.usage).sum()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn g_mode(&self) -> GMode {
        self.g_mode
    }

    /// `(N_i, G_i)` pairs in class order.
    pub fn usage_size_pairs(&self) -> Vec<(u64, u64)> {
        self.classes.iter().map(|c| (c.usage, c.size)).collect()
    }

    /// Emits the map this partition was built from, in canonical form.
    pub fn to_map(&self) -> DescriptorMap {
        DescriptorMap::new(
            self.classes
                .iter()
                .map(|c| MapClass {
                    id: c.id.clone(),
                    members: c.members.iter().cloned().collect(),
                })
                .collect(),
        )
    }
}

fn validate_map(map: &DescriptorMap) -> Result<BTreeMap<&str, BTreeSet<&str>>> {
    if map.version != MAP_VERSION {
        return Err(Error::MalformedMap(format!(
            "unsupported version `{}` (expected `{MAP_VERSION}`)",
            map.version
        )));
    }
    let mut classes: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for class in &map.classes {
        if class.id.is_empty() {
            return Err(Error::MalformedMap("class with empty id".into()));
        }
        if class.members.is_empty() {
            return Err(Error::MalformedMap(format!(
                "class `{}` has an empty member list",
                class.id
            )));
        }
        let mut members = BTreeSet::new();
        for member in &class.members {
            if member.is_empty() {
                return Err(Error::MalformedMap(format!(
                    "class `{}` has an empty member",
                    class.id
                )));
            }
            if !members.insert(member.as_str()) {
                return Err(Error::MalformedMap(format!(
                    "class `{}` lists `{member}` twice",
                    class.id
                )));
            }
        }
        if classes.insert(class.id.as_str(), members).is_some() {
            return Err(Error::MalformedMap(format!(
                "duplicate class id `{}`",
                class.id
            )));
        }
    }

    let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
    for (&id, members) in &classes {
        for &word in members {
            if let Some(first) = owner.insert(word, id) {
                return Err(Error::PartitionConflict {
                    word: word.to_string(),
                    first: first.to_string(),
                    second: id.to_string(),
                });
            }
        }
    }
    Ok(classes)
}

/// Binds `freq` to the classes of `map`.
///
/// Members absent from the corpus contribute nothing to `N` but still count
/// towards the declared size. Under [`GMode::Observed`] a class with no
/// observed member keeps `G = 1` so that every class has a valid degeneracy.
pub fn build_partition(
    freq: &FrequencyDictionary,
    map: &DescriptorMap,
    g_mode: GMode,
) -> Result<DescriptorPartition> {
    let validated = validate_map(map)?;

    let mut classes = Vec::with_capacity(validated.len());
    let mut assigned = BTreeSet::new();
    for (id, members) in validated {
        let mut usage = 0u64;
        let mut observed = 0u64;
        for &word in &members {
            let count = freq.count(word);
            if count > 0 {
                usage += count;
                observed += 1;
            }
            assigned.insert(word);
        }
        let declared = members.len() as u64;
        let size = match g_mode {
            GMode::Declared => declared,
            GMode::Observed => observed.max(1),
        };
        classes.push(DescriptorClass {
            id: id.to_string(),
            members: members.into_iter().map(str::to_string).collect(),
            declared_size: declared,
            observed_size: observed,
            size,
            usage,
        });
    }

    let mut unassigned = Vec::new();
    let mut unassigned_tokens = 0;
    for (word, count) in freq.iter() {
        if !assigned.contains(word) {
            unassigned.push(word.to_string());
            unassigned_tokens += count;
        }
    }

    Ok(DescriptorPartition {
        classes,
        unassigned,
        unassigned_tokens,
        total_tokens: freq.total_tokens(),
        g_mode,
    })
}

/// One `(id, N, G, N/G)` row per class, in class order.
pub fn class_statistics(partition: &DescriptorPartition) -> Vec<ClassStatistics> {
    partition
        .classes
        .iter()
        .map(|c| ClassStatistics {
            id: c.id.clone(),
            usage: c.usage,
            size: c.size,
            occupancy: c.occupancy(),
        })
        .collect()
}
