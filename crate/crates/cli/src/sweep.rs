//! Scenario sweeps along one axis, one CSV row per setting.

use serde::{Deserialize, Serialize};

use embguard_core::scenario::{run_scenario, ScenarioConfig, ScenarioOutcome};
use embguard_core::{Error, Result};

use crate::job::{csv_error, Outcome, SweepJob};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// Number of watermarks.
    R,
    /// Elimination components.
    K,
    /// Clusters.
    #[serde(rename = "n")]
    N,
}

pub fn parse_vary(s: &str) -> Result<(Axis, Vec<usize>)> {
    let (name, values) = s
        .split_once('=')
        .ok_or_else(|| Error::config("vary", format!("expected AXIS=v1,v2,... in {s:?}")))?;
    let axis = match name.trim() {
        "R" => Axis::R,
        "K" => Axis::K,
        "n" => Axis::N,
        other => return Err(Error::config("vary", format!("unknown axis {other:?}; use R, K or n"))),
    };
    let values: Vec<usize> = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::config("vary", format!("{v:?} is not a positive integer")))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() || values.contains(&0) {
        return Err(Error::config("vary", "values must be positive integers"));
    }
    Ok((axis, values))
}

pub fn configure(base: &ScenarioConfig, axis: Axis, value: usize, seed: u64) -> ScenarioConfig {
    let mut c = base.with_seed(seed);
    match axis {
        Axis::R => c.watermark.r = value,
        Axis::K => c.attack.k = value,
        Axis::N => c.attack.clusters = value,
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub n: usize,
    pub delta_cos: f64,
    pub delta_l2: f64,
    pub p_value: f64,
    pub min_recon_cos: f64,
    pub utility_score: f64,
    pub seeds: String,
    pub verdicts_true: usize,
}

/// Means over seeds, except `min_recon_cos` (minimum) and `verdicts_true` (count).
pub fn aggregate(cfg: &ScenarioConfig, seeds: &[u64], runs: &[ScenarioOutcome]) -> SweepRow {
    let n = runs.len() as f64;
    let mean = |f: &dyn Fn(&ScenarioOutcome) -> f64| runs.iter().map(f).sum::<f64>() / n;
    SweepRow {
        r: cfg.watermark.r,
        k: cfg.attack.k,
        n: cfg.attack.clusters,
        delta_cos: mean(&|o| o.post_attack.combined.delta_cos),
        delta_l2: mean(&|o| o.post_attack.combined.delta_l2),
        p_value: mean(&|o| o.post_attack.combined.p_value),
        min_recon_cos: runs.iter().map(|o| o.min_recon_cos).fold(f64::INFINITY, f64::min),
        utility_score: mean(&|o| o.utility),
        seeds: seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        verdicts_true: runs.iter().filter(|o| o.post_attack.verdict).count(),
    }
}

pub fn run(j: &SweepJob) -> Result<Outcome> {
    let mut w = csv::Writer::from_path(&j.out).map_err(|e| csv_error(&j.out, e))?;
    for &v in &j.values {
        let mut runs = Vec::with_capacity(j.seeds.len());
        for &seed in &j.seeds {
            let cfg = configure(&j.scenario, j.axis, v, seed);
            let o = run_scenario(&cfg)?.outcome;
            eprintln!(
                "{:?}={v} seed {seed}: dcos {:.4} p {:.3e} recon {:.4} utility {:.3}",
                j.axis, o.post_attack.combined.delta_cos, o.post_attack.combined.p_value, o.min_recon_cos, o.utility
            );
            runs.push(o);
        }
        let cfg = configure(&j.scenario, j.axis, v, j.seeds[0]);
        w.serialize(aggregate(&cfg, &j.seeds, &runs))
            .map_err(|e| csv_error(&j.out, e))?;
    }
    w.flush().map_err(|e| Error::io(&j.out, e))?;
    println!("wrote {} rows to {}", j.values.len(), j.out.display());
    Ok(Outcome {
        outputs: vec![j.out.clone()],
        seeds: j
            .seeds
            .iter()
            .enumerate()
            .map(|(i, &s)| (format!("seed{:02}", i + 1), s))
            .collect(),
        ..Outcome::default()
    })
}
