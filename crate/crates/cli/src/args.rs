use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use bose_lex_core::compression::CompressionRule;
use bose_lex_core::equilibrium::OccupationLaw;
use bose_lex_core::lexicon::GMode;

#[derive(Debug, Parser)]
#[command(name = "bose-lex", version, about = "Descriptor-class vocabulary analysis and compression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count words in UTF-8 text files and write a frequency dictionary.
    Ingest(IngestArgs),
    /// Report class statistics, entropies and informatibility.
    Analyze(AnalyzeArgs),
    /// Drop low-cost classes and write the compressed descriptor map.
    Compress(CompressArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Input text files; counts are merged.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Keep letter case instead of lowercasing tokens.
    #[arg(long)]
    pub keep_case: bool,
    /// Minimum token length in characters.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_len: u64,
    /// Output file (stdout when absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitTargets {
    pub n: f64,
    pub e: f64,
}

fn parse_fit(s: &str) -> Result<FitTargets, String> {
    let (n, e) = s.split_once(',').ok_or("expected N,E")?;
    let n: f64 = n.trim().parse().map_err(|_| format!("bad N `{n}`"))?;
    let e: f64 = e.trim().parse().map_err(|_| format!("bad E `{e}`"))?;
    Ok(FitTargets { n, e })
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Frequency dictionary (TSV written by `ingest`).
    #[arg(long)]
    pub freq: PathBuf,
    /// Descriptor map (JSON).
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long, default_value = "declared")]
    pub g_mode: GMode,
    /// Gauge scale for informatibility.
    #[arg(long, conflicts_with = "e0")]
    pub theta: Option<f64>,
    /// Gauge shift for informatibility.
    #[arg(long, conflicts_with = "e0")]
    pub alpha: Option<f64>,
    /// Calibrate theta (with alpha = 0) so the total cost equals this value.
    #[arg(long)]
    pub e0: Option<f64>,
    /// Occupation law used to invert occupancies into prices.
    #[arg(long, default_value = "bose-einstein")]
    pub law: OccupationLaw,
    /// Fit an equilibrium to total usage N and total price E.
    #[arg(long, value_name = "N,E", value_parser = parse_fit)]
    pub fit: Option<FitTargets>,
    /// Ranks at which to report coverage.
    #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000,10000")]
    pub ranks: Vec<usize>,
    /// Output file (stdout when absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub analyze: AnalyzeArgs,
    /// threshold:t, top:m or budget:f
    #[arg(long)]
    pub rule: CompressionRule,
    /// Where to write the compressed descriptor map.
    #[arg(long)]
    pub out_map: PathBuf,
}
