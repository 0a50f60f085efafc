//! Text to frequency dictionary, plus coverage curves and frequency bands.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::FrequencyDictionary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitRule {
    /// Maximal runs of Unicode alphanumeric characters.
    UnicodeAlphanumericRuns,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub split_rule: SplitRule,
    /// Minimum token length in characters.
    pub min_token_length: usize,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            lowercase: true,
            split_rule: SplitRule::UnicodeAlphanumericRuns,
            min_token_length: 1,
        }
    }
}

pub fn tokenize(text: &str, cfg: &TokenizerConfig) -> Vec<String> {
    let SplitRule::UnicodeAlphanumericRuns = cfg.split_rule;
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|run| !run.is_empty())
        .map(|run| {
            if cfg.lowercase {
                run.to_lowercase()
            } else {
                run.to_string()
            }
        })
        .filter(|tok| tok.chars().count() >= cfg.min_token_length.max(1))
        .collect()
}

/// Like [`tokenize`] but for raw bytes, rejecting invalid UTF-8.
pub fn tokenize_bytes(bytes: &[u8], cfg: &TokenizerConfig) -> Result<Vec<String>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::InvalidEncoding {
        offset: e.valid_up_to(),
    })?;
    Ok(tokenize(text, cfg))
}

pub fn count_frequencies<I, S>(tokens: I) -> FrequencyDictionary
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    FrequencyDictionary::from_counts(tokens.into_iter().map(|t| (t, 1)))
}

/// Renders the dictionary as `#total <N>` followed by `word<TAB>count`
/// lines, count descending then word ascending.
pub fn write_tsv(freq: &FrequencyDictionary) -> String {
    let mut out = format!("#total {}\n", freq.total_tokens());
    for (word, count) in freq.ranked() {
        writeln!(out, "{word}\t{count}").unwrap();
    }
    out
}

pub fn parse_tsv(text: &str) -> Result<FrequencyDictionary> {
    let bad = |msg: String| Error::MalformedDictionary(msg);
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("missing `#total` header".into()))?;
    let declared: u64 = header
        .strip_prefix("#total ")
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| bad(format!("bad header `{header}`")))?;

    let mut freq = FrequencyDictionary::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let (word, count) = line
            .split_once('\t')
            .ok_or_else(|| bad(format!("line {}: expected `word<TAB>count`", lineno + 2)))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| bad(format!("line {}: bad count `{count}`", lineno + 2)))?;
        if word.is_empty() || count == 0 {
            return Err(bad(format!("line {}: empty word or zero count", lineno + 2)));
        }
        if freq.contains(word) {
            return Err(bad(format!("line {}: duplicate word `{word}`", lineno + 2)));
        }
        freq.add(word, count);
    }
    if freq.total_tokens() != declared {
        return Err(bad(format!(
            "header declares {declared} tokens but counts sum to {}",
            freq.total_tokens()
        )));
    }
    Ok(freq)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveragePoint {
    pub rank: usize,
    pub cumulative_fraction: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CoverageCurve {
    pub points: Vec<CoveragePoint>,
}

/// Fraction of all tokens covered by the `r` most frequent words, for each
/// requested rank `r`. Ranks past the vocabulary size report full coverage.
pub fn coverage_curve(freq: &FrequencyDictionary, ranks: &[usize]) -> Result<CoverageCurve> {
    if ranks.contains(&0) {
        return Err(Error::Domain("ranks start at 1".into()));
    }
    if ranks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("ranks must be strictly increasing".into()));
    }
    if freq.is_empty() {
        return Ok(CoverageCurve::default());
    }
    let ranked = freq.ranked();
    let total = freq.total_tokens() as f64;
    let mut points = Vec::with_capacity(ranks.len());
    let mut covered = 0u64;
    let mut taken = 0usize;
    for &rank in ranks {
        while taken < rank.min(ranked.len()) {
            covered += ranked[taken].1;
            taken += 1;
        }
        points.push(CoveragePoint {
            rank,
            cumulative_fraction: covered as f64 / total,
        });
    }
    Ok(CoverageCurve { points })
}

/// Coverage at every rank from 1 to the vocabulary size.
pub fn full_coverage_curve(freq: &FrequencyDictionary) -> CoverageCurve {
    let ranks: Vec<usize> = (1..=freq.len()).collect();
    coverage_curve(freq, &ranks).expect("ranks are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandMode {
    /// One band per distinct count.
    EqualCount,
    /// Consecutive windows of the given width over the rank-sorted list.
    RankWindow(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BandKey {
    Count(u64),
    /// Inclusive 1-based rank interval.
    Ranks { first: usize, last: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequencyBand {
    pub band_index: usize,
    pub key: BandKey,
    pub words: Vec<String>,
}

/// Partitions the vocabulary into frequency bands, walking words in rank
/// order (count descending, word ascending).
pub fn band_by_frequency(freq: &FrequencyDictionary, mode: BandMode) -> Result<Vec<FrequencyBand>> {
    let ranked = freq.ranked();
    let mut bands: Vec<FrequencyBand> = Vec::new();
    match mode {
        BandMode::EqualCount => {
            for (word, count) in ranked {
                match bands.last_mut() {
                    Some(band) if band.key == BandKey::Count(count) => {
                        band.words.push(word.to_string())
                    }
                    _ => bands.push(FrequencyBand {
                        band_index: bands.len(),
                        key: BandKey::Count(count),
                        words: vec![word.to_string()],
                    }),
                }
            }
        }
        BandMode::RankWindow(0) => {
            return Err(Error::Domain("rank window width must be positive".into()))
        }
        BandMode::RankWindow(width) => {
            for (i, chunk) in ranked.chunks(width).enumerate() {
                bands.push(FrequencyBand {
                    band_index: i,
                    key: BandKey::Ranks {
                        first: i * width + 1,
                        last: i * width + chunk.len(),
                    },
                    words: chunk.iter().map(|(w, _)| w.to_string()).collect(),
                });
            }
        }
    }
    Ok(bands)
}
