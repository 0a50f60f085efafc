use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use bose_lex_core::combinatorics::{count_total_exact, ln_count, ln_count_total};
use bose_lex_core::compression::{compress, emit_compressed_dictionary, CompressionPlan};
use bose_lex_core::entropy::{compare_entropies, specific_entropy, SpecificEntropyInput};
use bose_lex_core::equilibrium::{
    calibrate_gauge, fit_equilibrium, informatibility_with, theta_sensitivity, EnergyLevels, Gauge,
    InformatibilityAssignment, OccupationLaw,
};
use bose_lex_core::ingest::{count_frequencies, coverage_curve, parse_tsv, tokenize_bytes, write_tsv, TokenizerConfig};
use bose_lex_core::lexicon::{build_partition, DescriptorMap, DescriptorPartition, FrequencyDictionary, GMode};
use bose_lex_core::Error as CoreError;

use crate::args::{AnalyzeArgs, CompressArgs, FitTargets, IngestArgs};
use crate::report::{
    ClassRow, CompressionBlock, ConfigurationsBlock, CoverageBlock, EntropyBlock, EquilibriumBlock,
    GaugeBlock, InformatibilityBlock, Num, Report, Totals, REPORT_VERSION,
};

/// Exact counts with more digits than this are reported as `null`.
pub const EXACT_COUNT_MAX_DIGITS: usize = 64;

const SENSITIVITY_STEP: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: CoreError },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 0 ok, 2 usage or I/O, 3 encoding, 4 data conflict, 5 infeasible
    /// model, 6 convergence failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Input { source, .. } | CliError::Core(source) => match source {
                CoreError::InvalidEncoding { .. } => 3,
                CoreError::Infeasible { .. } | CoreError::Divergence { .. } => 5,
                CoreError::Convergence { .. } => 6,
                _ => 4,
            },
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        source: CoreError::InvalidEncoding {
            offset: e.utf8_error().valid_up_to(),
        },
    })
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Counts the tokens of all `args.paths` and renders the TSV dictionary.
pub fn ingest(args: &IngestArgs) -> Result<String, CliError> {
    let cfg = TokenizerConfig {
        lowercase: !args.keep_case,
        min_token_length: args.min_len as usize,
        ..TokenizerConfig::default()
    };
    let mut freq = FrequencyDictionary::new();
    for path in &args.paths {
        let bytes = read_bytes(path)?;
        let tokens = tokenize_bytes(&bytes, &cfg).map_err(|source| CliError::Input {
            path: path.clone(),
            source,
        })?;
        freq.merge(&count_frequencies(tokens));
    }
    Ok(write_tsv(&freq))
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeConfig {
    pub source: &'static str,
    pub theta: Option<Num>,
    pub alpha: Option<Num>,
    pub e0: Option<Num>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitConfig {
    #[serde(rename = "N")]
    pub n: Num,
    #[serde(rename = "E")]
    pub e: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub freq: String,
    pub map: String,
    pub g_mode: GMode,
    pub law: OccupationLaw,
    pub gauge: GaugeConfig,
    pub fit: Option<FitConfig>,
    pub coverage_ranks: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_map: Option<String>,
}

impl RunConfig {
    fn new(command: &'static str, args: &AnalyzeArgs) -> Self {
        let gauge = match args.e0 {
            Some(e0) => GaugeConfig {
                source: "e0",
                theta: None,
                alpha: None,
                e0: Some(Num(e0)),
            },
            None => GaugeConfig {
                source: "explicit",
                theta: Some(Num(args.theta.unwrap_or(1.0))),
                alpha: Some(Num(args.alpha.unwrap_or(0.0))),
                e0: None,
            },
        };
        Self {
            command,
            freq: args.freq.display().to_string(),
            map: args.map.display().to_string(),
            g_mode: args.g_mode,
            law: args.law,
            gauge,
            fit: args.fit.map(|f| FitConfig {
                n: Num(f.n),
                e: Num(f.e),
            }),
            coverage_ranks: args.ranks.clone(),
            rule: None,
            out_map: None,
        }
    }
}

/// Everything computed from one set of analyze inputs.
pub struct Analysis {
    pub freq: FrequencyDictionary,
    pub partition: DescriptorPartition,
    pub assignment: InformatibilityAssignment,
    pub report: Report<RunConfig>,
}

fn resolve_gauge(args: &AnalyzeArgs, partition: &DescriptorPartition) -> Result<Gauge, CliError> {
    match args.e0 {
        Some(e0) => {
            if args.law != OccupationLaw::BoseEinstein {
                return Err(CliError::Usage("--e0 calibration needs --law bose-einstein".into()));
            }
            let occupancy: Vec<f64> = partition.classes().iter().map(|c| c.occupancy()).collect();
            let sizes: Vec<f64> = partition.classes().iter().map(|c| c.size() as f64).collect();
            Ok(calibrate_gauge(&occupancy, &sizes, e0)?)
        }
        None => Ok(Gauge::new(args.theta.unwrap_or(1.0), args.alpha.unwrap_or(0.0))?),
    }
}

fn exact_count_text(stats: &[(u64, u64)], ln: f64) -> Result<Option<String>, CoreError> {
    if ln / std::f64::consts::LN_10 >= EXACT_COUNT_MAX_DIGITS as f64 {
        return Ok(None);
    }
    let text = count_total_exact(stats)?.to_string();
    Ok((text.len() <= EXACT_COUNT_MAX_DIGITS).then_some(text))
}

fn equilibrium_block(
    partition: &DescriptorPartition,
    assignment: &InformatibilityAssignment,
    fit: FitTargets,
) -> Result<EquilibriumBlock, CoreError> {
    let mut ids = Vec::new();
    let mut eps = Vec::new();
    let mut sizes = Vec::new();
    for (class, price) in partition.classes().iter().zip(&assignment.prices) {
        if let Some(e) = price.epsilon {
            ids.push(class.id().to_string());
            eps.push(e);
            sizes.push(class.size());
        }
    }
    if ids.is_empty() {
        return Err(CoreError::Domain("no occupied class to fit".into()));
    }
    let levels = EnergyLevels::new(eps.clone(), sizes)?;
    let solution = fit_equilibrium(&levels, fit.n, fit.e)?;
    let sensitivity = theta_sensitivity(&levels, &solution.occupations, solution.gauge(), SENSITIVITY_STEP)?;
    Ok(EquilibriumBlock::new(fit.n, fit.e, &solution, &ids, &eps, sensitivity))
}

pub fn analyze_with(command: &'static str, args: &AnalyzeArgs) -> Result<Analysis, CliError> {
    let freq = parse_tsv(&read_text(&args.freq)?).map_err(|source| CliError::Input {
        path: args.freq.clone(),
        source,
    })?;
    let map = DescriptorMap::from_json(&read_text(&args.map)?).map_err(|source| CliError::Input {
        path: args.map.clone(),
        source,
    })?;
    let partition = build_partition(&freq, &map, args.g_mode).map_err(|source| CliError::Input {
        path: args.map.clone(),
        source,
    })?;

    let gauge = resolve_gauge(args, &partition)?;
    let real: Vec<(f64, f64)> = partition
        .classes()
        .iter()
        .map(|c| (c.usage() as f64, c.size() as f64))
        .collect();
    let assignment = informatibility_with(args.law, &real, gauge)?;

    let stats = partition.usage_size_pairs();
    let mut classes = Vec::with_capacity(stats.len());
    for (class, price) in partition.classes().iter().zip(&assignment.prices) {
        let ln = ln_count(class.usage(), class.size())?;
        let configurations = exact_count_text(&[(class.usage(), class.size())], ln)?;
        classes.push(ClassRow {
            id: class.id().to_string(),
            usage: class.usage(),
            size: class.size(),
            declared_size: class.declared_size(),
            occupancy: Num(class.occupancy()),
            epsilon: price.epsilon.map(Num),
            cost: Num(price.cost),
            ln_configurations: Num(ln),
            configurations,
        });
    }

    let ln_total = ln_count_total(&stats)?;
    let comparison = compare_entropies(&stats)?;
    let specific = SpecificEntropyInput::from_counts(&stats)
        .ok()
        .map(|input| specific_entropy(&input));

    let equilibrium = args
        .fit
        .map(|fit| equilibrium_block(&partition, &assignment, fit))
        .transpose()?;

    let mut ranks = args.ranks.clone();
    ranks.sort_unstable();
    ranks.dedup();
    let curve = coverage_curve(&freq, &ranks)?;

    let report = Report {
        version: REPORT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        config: RunConfig::new(command, args),
        totals: Totals {
            total_tokens: freq.total_tokens(),
            covered_tokens: partition.covered_tokens(),
            unassigned_tokens: partition.unassigned_tokens(),
            unassigned_words: partition.unassigned().len(),
            classes: partition.classes().len(),
        },
        classes,
        configurations: ConfigurationsBlock {
            ln_count_nats: Num(ln_total),
            exact_count: exact_count_text(&stats, ln_total)?,
        },
        entropy: EntropyBlock::new(&comparison, specific),
        informatibility: InformatibilityBlock {
            law: assignment.law.to_string(),
            gauge: GaugeBlock::from(assignment.gauge),
            gauge_source: if args.e0.is_some() { "e0" } else { "explicit" }.to_string(),
            total_cost: Num(assignment.total_cost()),
            infinite_classes: assignment
                .unoccupied()
                .map(|i| partition.classes()[i].id().to_string())
                .collect(),
        },
        equilibrium,
        coverage: CoverageBlock::new(freq.len(), &curve),
        compression: None,
    };

    Ok(Analysis {
        freq,
        partition,
        assignment,
        report,
    })
}

/// Renders the analyze report.
pub fn analyze(args: &AnalyzeArgs) -> Result<String, CliError> {
    Ok(crate::report::render(&analyze_with("analyze", args)?.report))
}

pub struct CompressOutput {
    pub plan: CompressionPlan,
    pub map_json: String,
    pub report_json: String,
}

pub fn compress_command(args: &CompressArgs) -> Result<CompressOutput, CliError> {
    let mut analysis = analyze_with("compress", &args.analyze)?;
    let plan = compress(&analysis.partition, &analysis.assignment, args.rule)?;
    let map_json = emit_compressed_dictionary(&plan, &analysis.partition).to_json();

    analysis.report.config.rule = Some(args.rule.to_string());
    analysis.report.config.out_map = Some(args.out_map.display().to_string());
    analysis.report.compression = Some(CompressionBlock::from(&plan));
    Ok(CompressOutput {
        plan,
        map_json,
        report_json: crate::report::render(&analysis.report),
    })
}
