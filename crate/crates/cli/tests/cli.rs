mod common;

use std::path::Path;

use common::{code, embguard, expect_code, output_digests, run_pipeline, stderr};
use tempfile::TempDir;

fn watermarked_dir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for args in &common::PIPELINE[..2] {
        expect_code(&embguard(dir.path(), 0, args), 0);
    }
    dir
}

fn attack(dir: &Path, extra: &[&str], out: &str) -> i32 {
    let report = format!("{out}.suspicion.json");
    let mut args = vec![
        "attack-cse",
        "--provided",
        "provided.emb",
        "--standard",
        "w/standard.emb",
        "--out",
        out,
        "--report",
        &report,
    ];
    args.extend_from_slice(extra);
    code(&embguard(dir, 0, &args))
}

fn verify(dir: &Path, suspect: &str) -> i32 {
    let report = format!("{suspect}.report.json");
    let o = embguard(
        dir,
        0,
        &[
            "verify",
            "--suspect",
            suspect,
            "--corpus",
            "w/corpus.jsonl",
            "--key",
            "key.json",
            "--report",
            &report,
        ],
    );
    code(&o)
}

#[test]
fn invalid_config_exits_2_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("sim.json"), r#"{"zipf_exponent": 0.0}"#).unwrap();
    let o = embguard(dir.path(), 0, &["gen-data", "--config", "sim.json", "--out-dir", "w"]);
    expect_code(&o, 2);
    assert!(stderr(&o).contains("zipf_exponent"), "{}", stderr(&o));

    std::fs::write(dir.path().join("typo.json"), r#"{"zipf": 1.0}"#).unwrap();
    let o = embguard(dir.path(), 0, &["gen-data", "--config", "typo.json", "--out-dir", "w"]);
    expect_code(&o, 2);
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("taken"), "not a directory").unwrap();
    expect_code(&embguard(dir.path(), 0, &["gen-data", "--out-dir", "taken"]), 3);
    let o = embguard(dir.path(), 0, &["hist", "--embeddings", "missing.emb", "--key", "k.json", "--out", "h.csv"]);
    expect_code(&o, 3);
}

#[test]
fn too_few_triggers_for_many_watermarks_exits_4() {
    let dir = watermarked_dir();
    let o = embguard(
        dir.path(),
        0,
        &[
            "watermark",
            "--corpus",
            "w/corpus.jsonl",
            "--embeddings",
            "w/semantic.emb",
            "--key-out",
            "k10.json",
            "--out",
            "p10.emb",
            "--R",
            "10",
            "--n-triggers",
            "20",
        ],
    );
    expect_code(&o, 4);
    assert!(!dir.path().join("k10.json").exists());
}

#[test]
fn mismatched_ids_exit_5() {
    let dir = watermarked_dir();
    std::fs::write(dir.path().join("small.json"), r#"{"doc_count": 300}"#).unwrap();
    expect_code(
        &embguard(dir.path(), 0, &["gen-data", "--config", "small.json", "--out-dir", "small"]),
        0,
    );
    let o = embguard(
        dir.path(),
        0,
        &[
            "attack-cse",
            "--provided",
            "provided.emb",
            "--standard",
            "small/standard.emb",
            "--out",
            "c.emb",
            "--report",
            "s.json",
        ],
    );
    expect_code(&o, 5);
}

#[test]
fn verdicts_map_to_exit_codes() {
    let dir = watermarked_dir();
    assert_eq!(verify(dir.path(), "provided.emb"), 0);
    assert_eq!(attack(dir.path(), &[], "clean.emb"), 0);
    assert_eq!(verify(dir.path(), "clean.emb"), 10);
    assert_eq!(verify(dir.path(), "w/semantic.emb"), 10);
}

#[test]
fn two_components_are_not_enough_to_remove_the_watermark() {
    let dir = watermarked_dir();
    assert_eq!(attack(dir.path(), &["--K", "2"], "k2.emb"), 0);
    assert_eq!(verify(dir.path(), "k2.emb"), 0);
}

#[test]
fn gmm_and_kmeans_reach_the_same_verdict() {
    let dir = watermarked_dir();
    assert_eq!(attack(dir.path(), &[], "km.emb"), 0);
    assert_eq!(attack(dir.path(), &["--algo", "gmm"], "gmm.emb"), 0);
    assert_eq!(verify(dir.path(), "km.emb"), verify(dir.path(), "gmm.emb"));
}

#[test]
fn pipeline_is_reproducible_and_replayable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_pipeline(a.path(), 0);
    run_pipeline(b.path(), 0);
    let da = output_digests(a.path());
    assert_eq!(da, output_digests(b.path()));

    for m in ["provided.emb.manifest.json", "post.json.manifest.json", "w/manifest.json"] {
        let o = embguard(a.path(), 0, &["replay", m]);
        expect_code(&o, 0);
        assert!(String::from_utf8_lossy(&o.stdout).contains("identical"));
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(a.path().join("post.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["exit_code"], 10);
    assert_eq!(manifest["outputs"][0]["sha256"], da["post.json"].as_str());

    std::fs::write(a.path().join("provided.emb"), "tampered").unwrap();
    let o = embguard(a.path(), 0, &["replay", "clean.emb.manifest.json"]);
    assert_ne!(code(&o), 0);
}

#[test]
fn hist_counts_partition_every_row() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(dir.path(), 0);
    let mut rdr = csv::Reader::from_path(dir.path().join("hist.csv")).unwrap();
    let header = rdr.headers().unwrap().clone();
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        ["watermark", "bin", "lo", "hi", "suspected", "watermarked", "unsuspected"]
    );
    let (mut bins, mut total, mut suspected) = (0, 0u64, 0u64);
    let mut prev_hi = None;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let n = |i: usize| rec[i].parse::<u64>().unwrap();
        let lo: f64 = rec[2].parse().unwrap();
        if let Some(h) = prev_hi {
            assert_eq!(lo, h);
        }
        prev_hi = Some(rec[3].parse::<f64>().unwrap());
        bins += 1;
        suspected += n(4);
        total += n(4) + n(5) + n(6);
    }
    assert_eq!(bins, 40);
    assert_eq!(total, 2000);
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("suspicion.json")).unwrap()).unwrap();
    assert_eq!(suspected, report["suspects"].as_array().unwrap().len() as u64);
}

#[test]
fn sweep_writes_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(dir.path(), 0);
    let mut rdr = csv::Reader::from_path(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "R",
            "K",
            "n",
            "delta_cos",
            "delta_l2",
            "p_value",
            "min_recon_cos",
            "utility_score",
            "seeds",
            "verdicts_true"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!((&rows[0][1], &rows[1][1]), ("2", "50"));
    assert_eq!((&rows[0][9], &rows[1][9]), ("1", "0"));
    let recon: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(recon[1] > recon[0]);
}

#[test]
fn emitted_probes_respect_the_trigger_split() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(dir.path(), 0);
    let key: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("key.json")).unwrap()).unwrap();
    let triggers: Vec<String> = key["partition"]["subsets"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_str().unwrap().to_owned())
        .collect();
    let text = std::fs::read_to_string(dir.path().join("probes.jsonl")).unwrap();
    let (mut backdoor, mut benign) = (0, 0);
    for line in text.lines() {
        let doc: serde_json::Value = serde_json::from_str(line).unwrap();
        let tokens: Vec<&str> = doc["tokens"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect();
        assert_eq!(tokens.len(), 4);
        let in_t = tokens.iter().filter(|t| triggers.iter().any(|x| x == *t)).count();
        if doc["id"].as_str().unwrap().starts_with("probe_b") {
            backdoor += 1;
            assert_eq!(in_t, 4);
        } else {
            benign += 1;
            assert_eq!(in_t, 0);
        }
    }
    assert_eq!((backdoor, benign), (200, 200));
}
