mod common;

use std::fs;
use std::path::Path;

use serde_json::Value;

use common::{fixtures, latin_pipeline, run_in, run_ok, LATIN_MAP};

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn stdout(dir: &Path, args: &[&str]) -> String {
    String::from_utf8(run_ok(dir, args).stdout).unwrap()
}

fn exit_code(dir: &Path, args: &[&str]) -> i32 {
    run_in(dir, args).status.code().expect("exited normally")
}

#[test]
fn ingest_counts_a_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.txt"), "Ab, ab! x1 y").unwrap();
    let tsv = stdout(dir.path(), &["ingest", "t.txt"]);
    assert_eq!(tsv, "#total 4\nab\t2\nx1\t1\ny\t1\n");
    let tsv = stdout(dir.path(), &["ingest", "--min-len", "2", "--keep-case", "t.txt"]);
    assert_eq!(tsv, "#total 3\nAb\t1\nab\t1\nx1\t1\n");
}

#[test]
fn ingest_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.txt"), "").unwrap();
    assert_eq!(stdout(dir.path(), &["ingest", "empty.txt"]), "#total 0\n");
}

#[test]
fn ingest_merges_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.txt"), "a b").unwrap();
    fs::write(dir.path().join("b.txt"), "b c").unwrap();
    let tsv = stdout(dir.path(), &["ingest", "a.txt", "b.txt"]);
    assert_eq!(tsv, "#total 4\nb\t2\na\t1\nc\t1\n");
    assert_eq!(tsv, stdout(dir.path(), &["ingest", "b.txt", "a.txt"]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.txt"), b"ok \xff\xfe").unwrap();
    fs::write(d.join("f.tsv"), "#total 3\na\t2\nb\t1\n").unwrap();
    fs::write(
        d.join("clash.json"),
        r#"{"version":"bose-lex-map/1","classes":[{"id":"x","members":["a"]},{"id":"y","members":["a","b"]}]}"#,
    )
    .unwrap();
    fs::copy(fixtures().join("two-word-class.json"), d.join("m.json")).unwrap();

    assert_eq!(exit_code(d, &["ingest"]), 2);
    assert_eq!(exit_code(d, &["ingest", "missing.txt"]), 2);
    assert_eq!(exit_code(d, &["analyze", "--freq", "f.tsv", "--map", "m.json", "--theta", "1", "--e0", "2"]), 2);
    assert_eq!(exit_code(d, &["ingest", "bad.txt"]), 3);
    assert_eq!(exit_code(d, &["analyze", "--freq", "f.tsv", "--map", "clash.json"]), 4);
    assert_eq!(
        exit_code(d, &["compress", "--freq", "f.tsv", "--map", "m.json", "--rule", "top:5", "--out-map", "o.json"]),
        4
    );
    // a single level cannot carry mean price 5 with eps = ln 2
    assert_eq!(exit_code(d, &["analyze", "--freq", "f.tsv", "--map", "m.json", "--fit", "3,15"]), 5);
    let err = String::from_utf8(run_in(d, &["ingest", "bad.txt"]).stderr).unwrap();
    assert!(err.starts_with("bose-lex: "), "{err}");
}

#[test]
fn worked_example_report() {
    let dir = fixtures();
    let freq = tempfile::tempdir().unwrap();
    let tsv = freq.path().join("two.tsv");
    run_ok(&dir, &["ingest", "two-uses.txt", "-o", tsv.to_str().unwrap()]);
    let report = json(stdout(&dir, &["analyze", "--freq", tsv.to_str().unwrap(), "--map", "two-word-class.json"]).as_bytes());
    let class = &report["classes"][0];
    assert_eq!(class["id"], "alpha");
    assert_eq!(class["N"], 2);
    assert_eq!(class["G"], 2);
    assert_eq!(class["occupancy"], 1.0);
    assert_eq!(class["configurations"], "3");
    assert_eq!(report["configurations"]["exact_count"], "3");
    let ln3 = report["configurations"]["ln_count_nats"].as_f64().unwrap();
    assert!((ln3 - 3f64.ln()).abs() < 1e-11);
    let eps = class["epsilon"].as_f64().unwrap();
    assert!((eps - std::f64::consts::LN_2).abs() < 1e-11);
    let be = report["entropy"]["be_total_nats"].as_f64().unwrap();
    assert!((be - 4.0 * std::f64::consts::LN_2).abs() < 1e-10);
    assert_eq!(report["entropy"]["boltzmann_limit_nats"], 2.0);
}

/// Writes the Latin frequency dictionary next to a copy of the map.
fn latin_workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixtures().join(LATIN_MAP), dir.path().join(LATIN_MAP)).unwrap();
    let corpus = common::corpus();
    run_ok(dir.path(), &["ingest", corpus.to_str().unwrap(), "-o", "latin.tsv"]);
    dir
}

fn costs(report: &Value) -> Vec<(String, f64)> {
    report["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["id"].as_str().unwrap().to_owned(), c["cost"].as_f64().unwrap()))
        .collect()
}

#[test]
fn calibrated_gauge_hits_target_cost() {
    let dir = latin_workspace();
    let report = json(stdout(dir.path(), &["analyze", "--freq", "latin.tsv", "--map", LATIN_MAP, "--e0", "100"]).as_bytes());
    let info = &report["informatibility"];
    assert_eq!(info["gauge_source"], "e0");
    assert_eq!(info["gauge"]["alpha"], 0.0);
    assert!((info["total_cost"].as_f64().unwrap() - 100.0).abs() < 1e-9);
}

#[test]
fn compress_top_one_leaves_one_class() {
    let dir = latin_workspace();
    let d = dir.path();
    let report = json(
        stdout(d, &["compress", "--freq", "latin.tsv", "--map", LATIN_MAP, "--rule", "top:1", "--out-map", "one.json"]).as_bytes(),
    );
    let map = json(&fs::read(d.join("one.json")).unwrap());
    let classes = map["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 1);
    let priciest = costs(&report)
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert_eq!(classes[0]["id"], priciest.0.as_str());
    assert_eq!(report["compression"]["kept"], serde_json::json!([priciest.0]));
}

#[test]
fn compress_threshold_zero_is_identity() {
    let dir = latin_workspace();
    let d = dir.path();
    run_ok(d, &["compress", "--freq", "latin.tsv", "--map", LATIN_MAP, "--rule", "threshold:0", "--out-map", "same.json"]);
    let original = json(&fs::read(d.join(LATIN_MAP)).unwrap());
    let emitted = json(&fs::read(d.join("same.json")).unwrap());
    let members = |v: &Value| {
        let mut rows: Vec<(String, Vec<String>)> = v["classes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                let mut m: Vec<String> = c["members"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_owned()).collect();
                m.sort();
                (c["id"].as_str().unwrap().to_owned(), m)
            })
            .collect();
        rows.sort();
        rows
    };
    assert_eq!(members(&original), members(&emitted));
}

#[test]
fn budget_keeps_smallest_sufficient_set() {
    let dir = latin_workspace();
    let d = dir.path();
    let report = json(
        stdout(d, &["compress", "--freq", "latin.tsv", "--map", LATIN_MAP, "--rule", "budget:0.9", "--out-map", "b.json"]).as_bytes(),
    );
    let rows = costs(&report);
    let k = rows.len();
    let total: f64 = rows.iter().map(|r| r.1).sum();
    // exhaustive: the fewest classes reaching 90% of the cost, then the
    // richest such set
    let mut best: Option<(usize, f64)> = None;
    for mask in 1u32..(1 << k) {
        let size = mask.count_ones() as usize;
        let cost: f64 = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| rows[i].1).sum();
        if cost < 0.9 * total * (1.0 - 1e-9) {
            continue;
        }
        best = match best {
            Some((s, c)) if s < size || (s == size && c >= cost) => Some((s, c)),
            _ => Some((size, cost)),
        };
    }
    let (size, cost) = best.unwrap();
    let block = &report["compression"];
    assert_eq!(block["kept"].as_array().unwrap().len(), size);
    assert!((block["kept_cost"].as_f64().unwrap() - cost).abs() <= 1e-9 * total);
}

#[test]
fn compressed_map_reproduces_kept_statistics() {
    let dir = latin_workspace();
    let d = dir.path();
    let before = json(
        stdout(d, &["compress", "--freq", "latin.tsv", "--map", LATIN_MAP, "--rule", "top:4", "--out-map", "small.json"]).as_bytes(),
    );
    let after = json(stdout(d, &["analyze", "--freq", "latin.tsv", "--map", "small.json"]).as_bytes());
    let kept: Vec<&str> = before["compression"]["kept"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let rows = after["classes"].as_array().unwrap();
    assert_eq!(rows.len(), kept.len());
    for row in rows {
        let id = row["id"].as_str().unwrap();
        assert!(kept.contains(&id));
        let original = before["classes"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap();
        assert_eq!(row, original, "class {id}");
    }
    let coverage = after["totals"]["covered_tokens"].as_f64().unwrap() / after["totals"]["total_tokens"].as_f64().unwrap();
    let planned = before["compression"]["losses"]["coverage_after"].as_f64().unwrap();
    assert!((coverage - planned).abs() < 1e-11);
}

#[test]
fn fit_reports_small_residuals() {
    let dir = latin_workspace();
    let report = json(stdout(dir.path(), &["analyze", "--freq", "latin.tsv", "--map", LATIN_MAP, "--fit", "1128,60"]).as_bytes());
    let eq = &report["equilibrium"];
    assert!(eq["residual_N"].as_f64().unwrap().abs() < 1e-10 * 1128.0);
    assert!(eq["residual_E"].as_f64().unwrap().abs() < 1e-10 * 60.0);
    let s = &eq["theta_sensitivity"];
    let (d, m) = (s["d_f_d_theta"].as_f64().unwrap(), s["minus_entropy"].as_f64().unwrap());
    assert!((d - m).abs() < 1e-5 * (1.0 - m));
}

#[test]
fn pipeline_is_deterministic_and_matches_golden() {
    let first = latin_pipeline();
    let second = latin_pipeline();
    assert_eq!(first, second);
    let bad = common::golden_mismatches(&first);
    assert!(bad.is_empty(), "{bad:?}");
}
