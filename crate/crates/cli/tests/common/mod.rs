#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/de-finibus-liber-primus.txt")
}
pub const LATIN_MAP: &str = "latin-descriptors.json";

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    fixtures().join("golden")
}

/// Runs the binary from `dir` so that paths echoed into reports stay relative.
pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bose-lex"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn run_ok(dir: &Path, args: &[&str]) -> Output {
    let out = run_in(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// The four artefacts of one ingest -> analyze -> compress pass.
#[derive(Debug, PartialEq, Eq)]
pub struct PipelineOutput {
    pub freq: Vec<u8>,
    pub report: Vec<u8>,
    pub compress_report: Vec<u8>,
    pub compressed_map: Vec<u8>,
}

pub const PIPELINE_FILES: [&str; 4] = [
    "latin.tsv",
    "latin-report.json",
    "latin-compress-report.json",
    "latin-compressed-map.json",
];

impl PipelineOutput {
    pub fn files(&self) -> [(&'static str, &[u8]); 4] {
        [
            (PIPELINE_FILES[0], &self.freq),
            (PIPELINE_FILES[1], &self.report),
            (PIPELINE_FILES[2], &self.compress_report),
            (PIPELINE_FILES[3], &self.compressed_map),
        ]
    }
}

/// Runs the pipeline on the bundled corpus inside a scratch copy of the
/// fixtures directory.
pub fn latin_pipeline() -> PipelineOutput {
    let scratch = tempfile::tempdir().unwrap();
    let work = scratch.path().join("fixtures");
    std::fs::create_dir_all(&work).unwrap();
    std::fs::copy(fixtures().join(LATIN_MAP), work.join(LATIN_MAP)).unwrap();
    let data = scratch.path().join("data");
    std::fs::create_dir_all(&data).unwrap();
    std::fs::copy(
        corpus(),
        data.join("de-finibus-liber-primus.txt"),
    )
    .unwrap();
    run_ok(&work, &["ingest", "../data/de-finibus-liber-primus.txt", "-o", "latin.tsv"]);
    run_ok(
        &work,
        &["analyze", "--freq", "latin.tsv", "--map", LATIN_MAP, "--ranks", "1,10,100,1000", "-o", "latin-report.json"],
    );
    run_ok(
        &work,
        &[
            "compress", "--freq", "latin.tsv", "--map", LATIN_MAP, "--ranks", "1,10,100,1000",
            "--rule", "budget:0.9", "--out-map", "latin-compressed-map.json", "-o", "latin-compress-report.json",
        ],
    );
    let read = |name: &str| std::fs::read(work.join(name)).unwrap();
    PipelineOutput {
        freq: read("latin.tsv"),
        report: read("latin-report.json"),
        compress_report: read("latin-compress-report.json"),
        compressed_map: read("latin-compressed-map.json"),
    }
}

/// Compares against the stored golden files; `BOSE_LEX_BLESS=1` rewrites them.
pub fn golden_mismatches(out: &PipelineOutput) -> Vec<String> {
    let dir = golden_dir();
    let bless = std::env::var_os("BOSE_LEX_BLESS").is_some();
    let mut bad = Vec::new();
    for (name, bytes) in out.files() {
        let path = dir.join(name);
        if bless {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, bytes).unwrap();
            continue;
        }
        match std::fs::read(&path) {
            Ok(expected) if expected == bytes => {}
            Ok(_) => bad.push(format!("{name} differs")),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    bad
}
