//! End-to-end synthetic runs: generate, watermark, attack, verify.

use serde::{Deserialize, Serialize};

use crate::cse::{reconstruct_target, run_attack, AttackConfig, AttackOutcome};
use crate::error::Result;
use crate::rng::derive_seed;
use crate::simkit::{gen_world, utility_score, SimConfig, SimWorld};
use crate::store::EmbeddingStore;
use crate::triggers::{partition_triggers, select_triggers, token_doc_frequencies};
use crate::verify::{benign_vocabulary, verify, ImitationEmbedder, VerificationReport, VerifyConfig};
use crate::watermark::{generate_key, watermark_store, InjectionSummary, WatermarkKey};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WatermarkParams {
    #[serde(rename = "R")]
    pub r: usize,
    pub m: u32,
    pub n_triggers: usize,
    pub trigger_interval: (f64, f64),
    pub orthogonalize: bool,
}

impl Default for WatermarkParams {
    fn default() -> Self {
        WatermarkParams {
            r: 1,
            m: 4,
            n_triggers: 20,
            trigger_interval: (0.005, 0.01),
            orthogonalize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub sim: SimConfig,
    pub watermark: WatermarkParams,
    pub attack: AttackConfig,
    pub verify: VerifyConfig,
    /// Extraction noise of the imitation embedder.
    pub eta: f64,
    pub utility_k: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            sim: SimConfig::default(),
            watermark: WatermarkParams::default(),
            attack: AttackConfig::default(),
            verify: VerifyConfig::default(),
            eta: DEFAULT_ETA,
            utility_k: 10,
        }
    }
}

pub const DEFAULT_ETA: f64 = 1.0;

impl ScenarioConfig {
    /// Same scenario with every stage reseeded from `seed`.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut c = self.clone();
        c.sim.seed = seed;
        c.attack.seed = derive_seed(seed, "attack");
        c.verify.seed = derive_seed(seed, "probes");
        c
    }

    pub fn trigger_seed(&self) -> u64 {
        derive_seed(self.sim.seed, "triggers")
    }

    pub fn partition_seed(&self) -> u64 {
        derive_seed(self.sim.seed, "partition")
    }

    pub fn key_seed(&self) -> u64 {
        derive_seed(self.sim.seed, "key")
    }

    pub fn imitation_seed(&self) -> u64 {
        derive_seed(self.sim.seed, "imitation")
    }
}

/// The provider side of a scenario.
#[derive(Debug, Clone)]
pub struct ProviderRun {
    pub world: SimWorld,
    pub key: WatermarkKey,
    pub provided: EmbeddingStore,
    pub injection: InjectionSummary,
    /// Rows that carry at least one trigger.
    pub watermarked: Vec<bool>,
}

pub fn provide(cfg: &ScenarioConfig) -> Result<ProviderRun> {
    let world = gen_world(&cfg.sim)?;
    let corpus = &world.corpus.corpus;
    let freqs = token_doc_frequencies(corpus)?;
    let w = &cfg.watermark;
    let trig = select_triggers(&freqs, w.trigger_interval, w.n_triggers, cfg.trigger_seed())?;
    let part = partition_triggers(&trig, w.r, cfg.partition_seed())?;
    let key = generate_key(cfg.sim.dim, w.r, cfg.key_seed(), w.orthogonalize, part, w.m)?;
    let (provided, injection) = watermark_store(&world.semantic, corpus, &key)?;
    let watermarked = corpus
        .docs()
        .iter()
        .map(|d| !key.weights(&d.tokens).is_zero())
        .collect();
    Ok(ProviderRun {
        world,
        key,
        provided,
        injection,
        watermarked,
    })
}

/// Verifies a model imitating `store`, trained on the scenario corpus.
pub fn verify_imitation(cfg: &ScenarioConfig, run: &ProviderRun, store: &EmbeddingStore) -> Result<VerificationReport> {
    verify_imitation_with_key(cfg, run, store, &run.key)
}

pub fn verify_imitation_with_key(
    cfg: &ScenarioConfig,
    run: &ProviderRun,
    store: &EmbeddingStore,
    key: &WatermarkKey,
) -> Result<VerificationReport> {
    let corpus = &run.world.corpus.corpus;
    let emb = ImitationEmbedder::fit(corpus, store, cfg.eta, cfg.imitation_seed())?;
    let vocab = benign_vocabulary(corpus, key, cfg.watermark.trigger_interval)?;
    verify(&emb, key, &vocab, &cfg.verify)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOutcome {
    pub seed: u64,
    pub exposure: f64,
    pub pre_attack: VerificationReport,
    pub post_attack: VerificationReport,
    pub min_recon_cos: f64,
    pub utility: f64,
    pub suspects: usize,
    pub suspect_precision: f64,
    pub suspect_recall: f64,
    pub basis_len: usize,
}

pub struct ScenarioRun {
    pub provider: ProviderRun,
    pub attack: AttackOutcome,
    pub outcome: ScenarioOutcome,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioRun> {
    let provider = provide(cfg)?;
    let attack = run_attack(&provider.provided, &provider.world.standard, &cfg.attack)?;
    let pre_attack = verify_imitation(cfg, &provider, &provider.provided)?;
    let post_attack = verify_imitation(cfg, &provider, &attack.cleansed.store)?;
    let min_recon_cos = if attack.basis.components.is_empty() {
        0.0
    } else {
        reconstruct_target(&attack.basis.components, &provider.key)?.min_cos
    };
    let utility = utility_score(&attack.cleansed.store, &provider.world.semantic, cfg.utility_k)?;
    let sus = &attack.selection.suspects;
    let hits = sus.iter().filter(|&&i| provider.watermarked[i]).count();
    let total_wm = provider.watermarked.iter().filter(|&&w| w).count();
    let outcome = ScenarioOutcome {
        seed: cfg.sim.seed,
        exposure: provider.injection.exposure(),
        pre_attack,
        post_attack,
        min_recon_cos,
        utility,
        suspects: sus.len(),
        suspect_precision: if sus.is_empty() { 0.0 } else { hits as f64 / sus.len() as f64 },
        suspect_recall: if total_wm == 0 { 0.0 } else { hits as f64 / total_wm as f64 },
        basis_len: attack.basis.components.len(),
    };
    Ok(ScenarioRun {
        provider,
        attack,
        outcome,
    })
}
