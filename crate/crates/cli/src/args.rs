use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "embguard", version, about = "Embedding watermarking, removal and verification toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic corpus with semantic and standard embeddings.
    GenData(GenDataArgs),
    /// Select triggers, draw a key and watermark an embedding store.
    Watermark(WatermarkArgs),
    /// Run the clustering, selection and elimination attack.
    AttackCse(AttackArgs),
    /// Run copyright verification against a suspect.
    Verify(VerifyArgs),
    /// Run end-to-end scenarios along one parameter axis.
    Sweep(SweepArgs),
    /// Histogram cosine-to-target per embedding class.
    Hist(HistArgs),
    /// Re-run a manifest and compare output digests.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    /// JSON simulation config; missing fields take defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct WatermarkArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub key_out: PathBuf,
    /// Watermarked store.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long = "R", default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 4)]
    pub m: u32,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub orthogonalize: bool,
    #[arg(long, default_value = "0.005,0.01", value_parser = parse_pair)]
    pub trigger_interval: (f64, f64),
    #[arg(long, default_value_t = 20)]
    pub n_triggers: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Kmeans,
    Gmm,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long)]
    pub provided: PathBuf,
    #[arg(long)]
    pub standard: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub clusters: usize,
    #[arg(long, value_enum, default_value_t = Algo::Kmeans)]
    pub algo: Algo,
    #[arg(long, default_value_t = 99.0)]
    pub percentile: f64,
    #[arg(long, default_value_t = 1)]
    pub min_pair_count: usize,
    #[arg(long = "K", default_value_t = 50)]
    pub k: usize,
    #[arg(long, default_value_t = embguard_core::cse::DEFAULT_PAIR_CAP)]
    pub pair_cap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cleansed store.
    #[arg(long)]
    pub out: PathBuf,
    /// Suspicion report JSON.
    #[arg(long)]
    pub report: PathBuf,
    /// Elimination basis; defaults to `<out>.basis.emb`.
    #[arg(long)]
    pub basis_out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Query a surrogate trained on (corpus, suspect store).
    Imitation,
    /// Surrogate of a clean store, then watermark, then the optional basis scrub.
    Simulate,
    /// Look probes up by id in the suspect store.
    Lookup,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suspect: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub key: PathBuf,
    /// Probes per class.
    #[arg(long, default_value_t = 200)]
    pub probes: usize,
    /// p_max,dcos_min,dl2_max
    #[arg(long, default_value = "0.001,0.01,-0.02", value_parser = parse_triple, allow_hyphen_values = true)]
    pub thresholds: (f64, f64, f64),
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Imitation)]
    pub mode: Mode,
    /// Surrogate extraction noise.
    #[arg(long, default_value_t = embguard_core::scenario::DEFAULT_ETA)]
    pub eta: f64,
    /// Removal basis applied in simulate mode.
    #[arg(long)]
    pub basis: Option<PathBuf>,
    /// Band the benign probe vocabulary is drawn from.
    #[arg(long, default_value = "0.005,0.01", value_parser = parse_pair)]
    pub trigger_interval: (f64, f64),
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Write the probe documents as JSONL and stop.
    #[arg(long)]
    pub emit_probes: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Axis and values, e.g. R=1,2,4,8 or K=2,10,50 or n=3,10,20.
    #[arg(long)]
    pub vary: String,
    /// JSON scenario config; missing fields take defaults.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value = "7,8,9,10,11", value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HistArgs {
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    /// Corpus for the ground-truth watermarked class.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Suspicion report for the suspected class.
    #[arg(long)]
    pub suspicion: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let xs: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if xs.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", xs.len()));
    }
    Ok(xs)
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), String> {
    let v = parse_floats(s, 3)?;
    Ok((v[0], v[1], v[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn number_lists() {
        assert_eq!(parse_pair("0.005,0.01").unwrap(), (0.005, 0.01));
        assert_eq!(parse_triple("0.001,0.01,-0.02").unwrap(), (0.001, 0.01, -0.02));
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("a,b").is_err());
    }
}
