#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use embguard_core::io::sha256_hex;

pub fn embguard(dir: &Path, threads: usize, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_embguard"))
        .args(args)
        .current_dir(dir)
        .env("EMBGUARD_THREADS", threads.to_string())
        .output()
        .expect("spawn embguard")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[track_caller]
pub fn expect_code(o: &Output, want: i32) {
    assert_eq!(
        code(o),
        want,
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&o.stdout),
        stderr(o)
    );
}

/// One invocation of every subcommand, all paths relative to the working directory.
pub const PIPELINE: &[&[&str]] = &[
    &["gen-data", "--out-dir", "w"],
    &[
        "watermark",
        "--corpus",
        "w/corpus.jsonl",
        "--embeddings",
        "w/semantic.emb",
        "--key-out",
        "key.json",
        "--out",
        "provided.emb",
    ],
    &[
        "attack-cse",
        "--provided",
        "provided.emb",
        "--standard",
        "w/standard.emb",
        "--out",
        "clean.emb",
        "--report",
        "suspicion.json",
    ],
    &[
        "verify",
        "--suspect",
        "provided.emb",
        "--corpus",
        "w/corpus.jsonl",
        "--key",
        "key.json",
        "--report",
        "pre.json",
    ],
    &[
        "verify",
        "--suspect",
        "clean.emb",
        "--corpus",
        "w/corpus.jsonl",
        "--key",
        "key.json",
        "--report",
        "post.json",
    ],
    &[
        "verify",
        "--suspect",
        "provided.emb",
        "--corpus",
        "w/corpus.jsonl",
        "--key",
        "key.json",
        "--mode",
        "simulate",
        "--basis",
        "clean.emb.basis.emb",
        "--report",
        "simulate.json",
    ],
    &[
        "verify",
        "--suspect",
        "clean.emb",
        "--corpus",
        "w/corpus.jsonl",
        "--key",
        "key.json",
        "--emit-probes",
        "probes.jsonl",
    ],
    &[
        "hist",
        "--embeddings",
        "provided.emb",
        "--key",
        "key.json",
        "--corpus",
        "w/corpus.jsonl",
        "--suspicion",
        "suspicion.json",
        "--out",
        "hist.csv",
    ],
    &["sweep", "--vary", "K=2,50", "--seeds", "7", "--out", "sweep.csv"],
];

pub const PIPELINE_CODES: &[i32] = &[0, 0, 0, 0, 10, 0, 0, 0, 0];

/// Runs every step of [`PIPELINE`] in `dir` and checks exit codes.
pub fn run_pipeline(dir: &Path, threads: usize) {
    for (args, &want) in PIPELINE.iter().zip(PIPELINE_CODES) {
        let o = embguard(dir, threads, args);
        assert_eq!(code(&o), want, "{args:?}\n{}", stderr(&o));
    }
}

/// Digest of every regular file under `dir` except run manifests, keyed by relative path.
pub fn output_digests(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if !p.to_string_lossy().ends_with("manifest.json") {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, sha256_hex(&std::fs::read(&p).unwrap()));
            }
        }
    }
    out
}
