//! Fully resolved subcommand parameters and their execution.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use embguard_core::corpus::Corpus;
use embguard_core::cse::{run_attack, AttackConfig, ClusterAlgo, EliminationBasis, SelectionParams};
use embguard_core::io::{key_fingerprint, read_json, write_json};
use embguard_core::linalg::cosine;
use embguard_core::rng::derive_seed;
use embguard_core::scenario::ScenarioConfig;
use embguard_core::simkit::{gen_world, SimConfig};
use embguard_core::store::EmbeddingStore;
use embguard_core::triggers::{partition_triggers, select_triggers, token_doc_frequencies};
use embguard_core::verify::{
    benign_vocabulary, build_probes, verify_with_probes, ImitationEmbedder, StoreLookup, SuspectEmbedder, Thresholds,
    VerificationReport, VerifyConfig, WatermarkedEmbedder,
};
use embguard_core::watermark::{generate_key, watermark_store, WatermarkKey};
use embguard_core::{Error, Result, SuspicionReport};

use crate::args::{Algo, Command, Mode};
use crate::sweep::{self, Axis};

/// Exit code for a completed verification whose verdict is false.
pub const EXIT_VERDICT_FALSE: i32 = 10;

/// Smallest `R` at which the trigger-count guard applies.
pub const GUARD_MIN_R: usize = 10;
/// Triggers required per watermark once the guard applies.
pub const GUARD_TRIGGERS_PER_WATERMARK: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Job {
    GenData(GenDataJob),
    Watermark(WatermarkJob),
    AttackCse(AttackJob),
    Verify(VerifyJob),
    Sweep(SweepJob),
    Hist(HistJob),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenDataJob {
    pub sim: SimConfig,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WatermarkJob {
    pub corpus: PathBuf,
    pub embeddings: PathBuf,
    pub key_out: PathBuf,
    pub out: PathBuf,
    #[serde(rename = "R")]
    pub r: usize,
    pub m: u32,
    pub orthogonalize: bool,
    pub trigger_interval: (f64, f64),
    pub n_triggers: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackJob {
    pub provided: PathBuf,
    pub standard: PathBuf,
    pub out: PathBuf,
    pub report: PathBuf,
    pub basis_out: PathBuf,
    pub attack: AttackConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Imitation,
    Simulate,
    Lookup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyJob {
    pub suspect: PathBuf,
    pub corpus: PathBuf,
    pub key: PathBuf,
    pub report: Option<PathBuf>,
    pub emit_probes: Option<PathBuf>,
    pub mode: VerifyMode,
    pub eta: f64,
    pub basis: Option<PathBuf>,
    pub trigger_interval: (f64, f64),
    pub seed: u64,
    pub verify: VerifyConfig,
    pub imitation_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepJob {
    pub axis: Axis,
    pub values: Vec<usize>,
    pub scenario: ScenarioConfig,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistJob {
    pub embeddings: PathBuf,
    pub key: PathBuf,
    pub out: PathBuf,
    pub bins: usize,
    pub corpus: Option<PathBuf>,
    pub suspicion: Option<PathBuf>,
}

/// What a finished job read and wrote.
#[derive(Debug, Default)]
pub struct Outcome {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub seeds: BTreeMap<String, u64>,
    pub exit_code: i32,
}

/// Resolves command-line arguments into a job plus its manifest path.
pub fn resolve(cmd: Command) -> Result<(Job, PathBuf)> {
    Ok(match cmd {
        Command::GenData(a) => {
            let mut sim: SimConfig = match &a.config {
                Some(p) => read_json(p)?,
                None => SimConfig::default(),
            };
            if let Some(s) = a.seed {
                sim.seed = s;
            }
            let manifest = a.out_dir.join("manifest.json");
            (Job::GenData(GenDataJob { sim, out_dir: a.out_dir }), manifest)
        }
        Command::Watermark(a) => {
            let manifest = manifest_path(a.manifest, &a.out);
            let job = WatermarkJob {
                corpus: a.corpus,
                embeddings: a.embeddings,
                key_out: a.key_out,
                out: a.out,
                r: a.r,
                m: a.m,
                orthogonalize: a.orthogonalize,
                trigger_interval: a.trigger_interval,
                n_triggers: a.n_triggers,
                seed: a.seed,
            };
            (Job::Watermark(job), manifest)
        }
        Command::AttackCse(a) => {
            let manifest = manifest_path(a.manifest, &a.out);
            let basis_out = a.basis_out.unwrap_or_else(|| suffixed(&a.out, ".basis.emb"));
            let attack = AttackConfig {
                clusters: a.clusters,
                algo: match a.algo {
                    Algo::Kmeans => ClusterAlgo::Kmeans,
                    Algo::Gmm => ClusterAlgo::Gmm,
                },
                percentile: a.percentile,
                min_pair_count: a.min_pair_count,
                k: a.k,
                pair_cap: a.pair_cap,
                seed: a.seed,
            };
            let job = AttackJob {
                provided: a.provided,
                standard: a.standard,
                out: a.out,
                report: a.report,
                basis_out,
                attack,
            };
            (Job::AttackCse(job), manifest)
        }
        Command::Verify(a) => {
            let primary = match (&a.report, &a.emit_probes) {
                (_, Some(p)) | (Some(p), None) => p.clone(),
                (None, None) => return Err(Error::config("report", "--report is required unless --emit-probes is given")),
            };
            let manifest = manifest_path(a.manifest, &primary);
            let (p_max, dcos_min, dl2_max) = a.thresholds;
            let job = VerifyJob {
                suspect: a.suspect,
                corpus: a.corpus,
                key: a.key,
                report: a.report,
                emit_probes: a.emit_probes,
                mode: match a.mode {
                    Mode::Imitation => VerifyMode::Imitation,
                    Mode::Simulate => VerifyMode::Simulate,
                    Mode::Lookup => VerifyMode::Lookup,
                },
                eta: a.eta,
                basis: a.basis,
                trigger_interval: a.trigger_interval,
                seed: a.seed,
                verify: VerifyConfig {
                    probes: a.probes,
                    seed: derive_seed(a.seed, "probes"),
                    thresholds: Thresholds {
                        p_max,
                        dcos_min,
                        dl2_max,
                    },
                },
                imitation_seed: derive_seed(a.seed, "imitation"),
            };
            (Job::Verify(job), manifest)
        }
        Command::Sweep(a) => {
            let manifest = manifest_path(a.manifest, &a.out);
            let (axis, values) = sweep::parse_vary(&a.vary)?;
            let scenario: ScenarioConfig = match &a.scenario {
                Some(p) => read_json(p)?,
                None => ScenarioConfig::default(),
            };
            if a.seeds.is_empty() {
                return Err(Error::config("seeds", "at least one seed is required"));
            }
            let job = SweepJob {
                axis,
                values,
                scenario,
                seeds: a.seeds,
                out: a.out,
            };
            (Job::Sweep(job), manifest)
        }
        Command::Hist(a) => {
            let manifest = manifest_path(a.manifest, &a.out);
            let job = HistJob {
                embeddings: a.embeddings,
                key: a.key,
                out: a.out,
                bins: a.bins,
                corpus: a.corpus,
                suspicion: a.suspicion,
            };
            (Job::Hist(job), manifest)
        }
        Command::Replay(_) => unreachable!("replay is dispatched before resolution"),
    })
}

fn suffixed(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn manifest_path(explicit: Option<PathBuf>, primary: &Path) -> PathBuf {
    explicit.unwrap_or_else(|| suffixed(primary, ".manifest.json"))
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::GenData(_) => "gen-data",
            Job::Watermark(_) => "watermark",
            Job::AttackCse(_) => "attack-cse",
            Job::Verify(_) => "verify",
            Job::Sweep(_) => "sweep",
            Job::Hist(_) => "hist",
        }
    }

    pub fn run(&self) -> Result<Outcome> {
        match self {
            Job::GenData(j) => gen_data(j),
            Job::Watermark(j) => watermark(j),
            Job::AttackCse(j) => attack(j),
            Job::Verify(j) => verify(j),
            Job::Sweep(j) => sweep::run(j),
            Job::Hist(j) => hist(j),
        }
    }
}

fn gen_data(j: &GenDataJob) -> Result<Outcome> {
    j.sim.validate()?;
    std::fs::create_dir_all(&j.out_dir).map_err(|e| Error::io(&j.out_dir, e))?;
    let world = gen_world(&j.sim)?;
    let corpus = j.out_dir.join("corpus.jsonl");
    let semantic = j.out_dir.join("semantic.emb");
    let standard = j.out_dir.join("standard.emb");
    world.corpus.corpus.write_jsonl(&corpus)?;
    world.semantic.write(&semantic)?;
    world.standard.write(&standard)?;
    println!(
        "generated {} documents, dim {}, in {}",
        world.semantic.len(),
        world.semantic.dim(),
        j.out_dir.display()
    );
    Ok(Outcome {
        outputs: vec![corpus, semantic, standard],
        seeds: BTreeMap::from([("sim".to_owned(), j.sim.seed)]),
        ..Outcome::default()
    })
}

fn watermark(j: &WatermarkJob) -> Result<Outcome> {
    if j.r >= GUARD_MIN_R && j.n_triggers < GUARD_TRIGGERS_PER_WATERMARK * j.r {
        return Err(Error::TooFewTriggers {
            triggers: j.n_triggers,
            count: j.r,
            needed: GUARD_TRIGGERS_PER_WATERMARK * j.r,
        });
    }
    let corpus = Corpus::read_jsonl(&j.corpus)?;
    let store = EmbeddingStore::read(&j.embeddings)?;
    let freqs = token_doc_frequencies(&corpus)?;
    let seeds = BTreeMap::from([
        ("triggers".to_owned(), derive_seed(j.seed, "triggers")),
        ("partition".to_owned(), derive_seed(j.seed, "partition")),
        ("key".to_owned(), derive_seed(j.seed, "key")),
    ]);
    let trig = select_triggers(&freqs, j.trigger_interval, j.n_triggers, seeds["triggers"])?;
    let part = partition_triggers(&trig, j.r, seeds["partition"])?;
    let key = generate_key(store.dim(), j.r, seeds["key"], j.orthogonalize, part, j.m)?;
    let (provided, summary) = watermark_store(&store, &corpus, &key)?;
    provided.write(&j.out)?;
    write_json(&j.key_out, &key)?;
    println!(
        "trigger exposure: {:.4} ({} of {} rows)",
        summary.exposure(),
        summary.watermarked,
        summary.rows
    );
    Ok(Outcome {
        inputs: vec![j.corpus.clone(), j.embeddings.clone()],
        outputs: vec![j.out.clone(), j.key_out.clone()],
        seeds,
        ..Outcome::default()
    })
}

fn attack(j: &AttackJob) -> Result<Outcome> {
    let provided = EmbeddingStore::read(&j.provided)?;
    let standard = EmbeddingStore::read(&j.standard)?;
    let out = run_attack(&provided, &standard, &j.attack)?;
    out.cleansed.store.write(&j.out)?;
    out.basis.to_store()?.write(&j.basis_out)?;
    let params = SelectionParams {
        percentile: j.attack.percentile,
        min_pair_count: j.attack.min_pair_count,
    };
    let report = SuspicionReport::new(provided.ids(), &out.pairs, &out.selection, params);
    write_json(&j.report, &report)?;
    println!(
        "{} suspects from {} flagged pairs; basis of {} components{}",
        report.suspects.len(),
        report.flagged_pairs,
        out.basis.components.len(),
        if out.basis.rank_deficient { " (rank deficient)" } else { "" }
    );
    if !out.cleansed.degenerate.is_empty() {
        println!("{} degenerate rows replaced", out.cleansed.degenerate.len());
    }
    Ok(Outcome {
        inputs: vec![j.provided.clone(), j.standard.clone()],
        outputs: vec![j.out.clone(), j.report.clone(), j.basis_out.clone()],
        seeds: BTreeMap::from([("attack".to_owned(), j.attack.seed)]),
        ..Outcome::default()
    })
}

/// Report file layout: the verification report plus seeds and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    #[serde(flatten)]
    pub report: VerificationReport,
    pub mode: VerifyMode,
    pub seeds: BTreeMap<String, u64>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub key_fingerprint: String,
    pub suspect_sha256: String,
    pub corpus_sha256: String,
    pub toolkit_version: String,
}

fn verify(j: &VerifyJob) -> Result<Outcome> {
    let key_bytes = std::fs::read(&j.key).map_err(|e| Error::io(&j.key, e))?;
    let key = WatermarkKey::read(&j.key)?;
    let corpus = Corpus::read_jsonl(&j.corpus)?;
    let vocab = benign_vocabulary(&corpus, &key, j.trigger_interval)?;
    let probes = build_probes(&key, &vocab, j.verify.probes, j.verify.seed)?;
    let mut seeds = BTreeMap::from([
        ("seed".to_owned(), j.seed),
        ("probes".to_owned(), j.verify.seed),
    ]);
    let mut inputs = vec![j.key.clone(), j.corpus.clone()];
    if let Some(path) = &j.emit_probes {
        let docs = probes.all_docs().cloned().collect();
        Corpus::new(docs)?.write_jsonl(path)?;
        println!("wrote {} probe documents", probes.all_docs().count());
        return Ok(Outcome {
            inputs,
            outputs: vec![path.clone()],
            seeds,
            exit_code: 0,
        });
    }
    let report_path = j
        .report
        .as_ref()
        .ok_or_else(|| Error::config("report", "--report is required unless --emit-probes is given"))?;
    let suspect = EmbeddingStore::read(&j.suspect)?;
    inputs.push(j.suspect.clone());
    let report = match j.mode {
        VerifyMode::Imitation => {
            seeds.insert("imitation".to_owned(), j.imitation_seed);
            let emb = ImitationEmbedder::fit(&corpus, &suspect, j.eta, j.imitation_seed)?;
            run_verify(&emb, &key, &probes, j)?
        }
        VerifyMode::Simulate => {
            seeds.insert("imitation".to_owned(), j.imitation_seed);
            let base = ImitationEmbedder::fit(&corpus, &suspect, j.eta, j.imitation_seed)?;
            let basis = match &j.basis {
                Some(p) => {
                    inputs.push(p.clone());
                    Some(EliminationBasis::from_store(&EmbeddingStore::read(p)?)?)
                }
                None => None,
            };
            let emb = WatermarkedEmbedder {
                base,
                key: &key,
                basis: basis.as_ref(),
                seed: j.imitation_seed,
            };
            run_verify(&emb, &key, &probes, j)?
        }
        VerifyMode::Lookup => run_verify(&StoreLookup::new(suspect), &key, &probes, j)?,
    };
    let verdict = report.verdict;
    println!(
        "verdict {}: {}",
        if verdict { "TRUE" } else { "FALSE" },
        report.rationale
    );
    let file = ReportFile {
        report,
        mode: j.mode,
        seeds: seeds.clone(),
        provenance: Provenance {
            key_fingerprint: key_fingerprint(&key_bytes),
            suspect_sha256: embguard_core::io::file_digest(&j.suspect)?,
            corpus_sha256: embguard_core::io::file_digest(&j.corpus)?,
            toolkit_version: embguard_core::VERSION.to_owned(),
        },
    };
    write_json(report_path, &file)?;
    Ok(Outcome {
        inputs,
        outputs: vec![report_path.clone()],
        seeds,
        exit_code: if verdict { 0 } else { EXIT_VERDICT_FALSE },
    })
}

fn run_verify<E: SuspectEmbedder>(
    emb: &E,
    key: &WatermarkKey,
    probes: &embguard_core::verify::ProbeSet,
    j: &VerifyJob,
) -> Result<VerificationReport> {
    verify_with_probes(emb, key, probes, &j.verify)
}

/// Embedding classes of the histogram, highest priority first.
pub const HIST_CLASSES: [&str; 3] = ["suspected", "watermarked", "unsuspected"];

fn hist(j: &HistJob) -> Result<Outcome> {
    if j.bins == 0 {
        return Err(Error::config("bins", "must be positive"));
    }
    let store = EmbeddingStore::read(&j.embeddings)?;
    let key = WatermarkKey::read(&j.key)?;
    if store.dim() != key.dim {
        return Err(Error::DimensionMismatch {
            expected: key.dim,
            found: store.dim(),
        });
    }
    let mut inputs = vec![j.embeddings.clone(), j.key.clone()];
    let suspected: HashSet<String> = match &j.suspicion {
        Some(p) => {
            inputs.push(p.clone());
            let rep: SuspicionReport = read_json(p)?;
            rep.suspects.into_iter().collect()
        }
        None => HashSet::new(),
    };
    let watermarked: HashSet<String> = match &j.corpus {
        Some(p) => {
            inputs.push(p.clone());
            Corpus::read_jsonl(p)?
                .docs()
                .iter()
                .filter(|d| !key.weights(&d.tokens).is_zero())
                .map(|d| d.id.clone())
                .collect()
        }
        None => HashSet::new(),
    };
    let class: Vec<usize> = store
        .ids()
        .iter()
        .map(|id| {
            if suspected.contains(id) {
                0
            } else if watermarked.contains(id) {
                1
            } else {
                2
            }
        })
        .collect();
    let mut w = csv::Writer::from_path(&j.out).map_err(|e| csv_error(&j.out, e))?;
    w.write_record(["watermark", "bin", "lo", "hi", HIST_CLASSES[0], HIST_CLASSES[1], HIST_CLASSES[2]])
        .map_err(|e| csv_error(&j.out, e))?;
    for (r, target) in key.targets.iter().enumerate() {
        let mut counts = vec![[0usize; 3]; j.bins];
        let mut sums = [0.0f64; 3];
        for (i, row) in store.rows().enumerate() {
            let c = cosine(row, target)?;
            counts[hist_bin(c, j.bins)][class[i]] += 1;
            sums[class[i]] += c;
        }
        for (b, cnt) in counts.iter().enumerate() {
            let (lo, hi) = bin_edges(b, j.bins);
            w.write_record([
                (r + 1).to_string(),
                b.to_string(),
                format!("{lo:.6}"),
                format!("{hi:.6}"),
                cnt[0].to_string(),
                cnt[1].to_string(),
                cnt[2].to_string(),
            ])
            .map_err(|e| csv_error(&j.out, e))?;
        }
        let sizes: Vec<usize> = (0..3).map(|k| class.iter().filter(|&&c| c == k).count()).collect();
        let means: Vec<String> = (0..3)
            .map(|k| {
                let m = if sizes[k] == 0 { f64::NAN } else { sums[k] / sizes[k] as f64 };
                format!("{}={} (mean cos {m:.4})", HIST_CLASSES[k], sizes[k])
            })
            .collect();
        println!("watermark {}: {}", r + 1, means.join(", "));
    }
    w.flush().map_err(|e| Error::io(&j.out, e))?;
    Ok(Outcome {
        inputs,
        outputs: vec![j.out.clone()],
        ..Outcome::default()
    })
}

/// Equal-width bin over [-1, 1]; 1.0 falls in the last bin.
pub fn hist_bin(c: f64, bins: usize) -> usize {
    let x = ((c.clamp(-1.0, 1.0) + 1.0) / 2.0 * bins as f64).floor() as usize;
    x.min(bins - 1)
}

pub fn bin_edges(b: usize, bins: usize) -> (f64, f64) {
    let w = 2.0 / bins as f64;
    (-1.0 + b as f64 * w, -1.0 + (b + 1) as f64 * w)
}

pub fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format {
            path: path.to_owned(),
            line: 0,
            msg: format!("{other:?}"),
        },
    }
}
