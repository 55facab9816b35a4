//! Seeded synthetic world: Zipf corpora, topic-structured semantic
//! embeddings, a rotated and noised standard model, and a kNN utility proxy.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{weighted::WeightedAliasIndex, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, gram_schmidt, normalize_in_place, ORTHO_TOL};
use crate::rng;
use crate::store::EmbeddingStore;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub vocab_size: usize,
    pub doc_count: usize,
    /// Inclusive token-count range per document.
    pub doc_len_range: [usize; 2],
    pub zipf_exponent: f64,
    /// Fine topics; each document belongs to one.
    pub topic_count: usize,
    /// Coarse topics; fine topic `t` belongs to coarse topic `t mod coarse_topic_count`.
    pub coarse_topic_count: usize,
    pub dim: usize,
    /// Squared weight of the direction shared by every anchor.
    pub common_energy: f64,
    /// Squared weight of the coarse-topic direction.
    pub coarse_energy: f64,
    /// Squared weight of the fine-topic direction.
    pub fine_energy: f64,
    /// Expected norm of the per-document Gaussian offset.
    pub semantic_noise: f64,
    /// Radians, applied in each plane of a random orthonormal frame.
    pub standard_rotation_angle: f64,
    /// Expected norm of the standard model's Gaussian offset.
    pub standard_noise: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            vocab_size: 5000,
            doc_count: 2000,
            doc_len_range: [8, 24],
            zipf_exponent: 1.1,
            topic_count: 180,
            coarse_topic_count: 20,
            dim: 256,
            common_energy: 0.62,
            coarse_energy: 0.35,
            fine_energy: 0.03,
            semantic_noise: 0.07,
            standard_rotation_angle: 0.3,
            standard_noise: 0.03,
            seed: 7,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |f: &str, r: &str| Err(Error::config(f, r));
        if !(self.zipf_exponent > 0.0 && self.zipf_exponent.is_finite()) {
            return bad("zipf_exponent", "must be positive");
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.standard_rotation_angle) {
            return bad("standard_rotation_angle", "must lie in [0, pi/2]");
        }
        for (f, v) in [
            ("semantic_noise", self.semantic_noise),
            ("standard_noise", self.standard_noise),
            ("common_energy", self.common_energy),
            ("coarse_energy", self.coarse_energy),
            ("fine_energy", self.fine_energy),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(f, "must be finite and non-negative");
            }
        }
        if self.common_energy + self.coarse_energy + self.fine_energy <= 0.0 {
            return bad("fine_energy", "anchor energies must not all be zero");
        }
        if self.vocab_size == 0 {
            return bad("vocab_size", "must be positive");
        }
        if self.doc_count == 0 {
            return bad("doc_count", "must be positive");
        }
        if self.doc_len_range[0] > self.doc_len_range[1] {
            return bad("doc_len_range", "lower bound exceeds upper bound");
        }
        if self.topic_count == 0 || self.coarse_topic_count == 0 {
            return bad("topic_count", "must be positive");
        }
        if self.dim == 0 || self.dim < self.topic_count {
            return bad("dim", "must be at least topic_count");
        }
        Ok(())
    }
}

pub fn token_name(rank: usize) -> String {
    format!("tok{:05}", rank + 1)
}

/// A corpus together with each document's latent fine topic.
#[derive(Debug, Clone, PartialEq)]
pub struct SimCorpus {
    pub corpus: Corpus,
    pub topics: Vec<usize>,
}

pub fn gen_corpus(cfg: &SimConfig) -> Result<SimCorpus> {
    cfg.validate()?;
    let weights: Vec<f64> = (1..=cfg.vocab_size)
        .map(|r| (r as f64).powf(-cfg.zipf_exponent))
        .collect();
    let zipf = WeightedAliasIndex::new(weights)
        .map_err(|e| Error::config("zipf_exponent", e.to_string()))?;
    let names: Vec<String> = (0..cfg.vocab_size).map(token_name).collect();
    let mut g = rng::derived_rng(cfg.seed, "corpus");
    let [lo, hi] = cfg.doc_len_range;
    let docs = (0..cfg.doc_count)
        .map(|i| {
            let len = g.random_range(lo..=hi);
            Document {
                id: format!("doc{:05}", i + 1),
                tokens: (0..len).map(|_| names[zipf.sample(&mut g)].clone()).collect(),
            }
        })
        .collect();
    let mut topics: Vec<usize> = (0..cfg.doc_count).map(|i| i % cfg.topic_count).collect();
    topics.shuffle(&mut rng::derived_rng(cfg.seed, "topics"));
    Ok(SimCorpus {
        corpus: Corpus::new(docs)?,
        topics,
    })
}

/// Unit anchor per fine topic.
pub fn topic_anchors(cfg: &SimConfig) -> Vec<Vec<f64>> {
    let mut g = rng::derived_rng(cfg.seed, "anchors");
    let common = rng::random_unit(&mut g, cfg.dim);
    let coarse: Vec<Vec<f64>> = (0..cfg.coarse_topic_count)
        .map(|_| rng::random_unit(&mut g, cfg.dim))
        .collect();
    let (a, b, c) = (
        cfg.common_energy.sqrt(),
        cfg.coarse_energy.sqrt(),
        cfg.fine_energy.sqrt(),
    );
    (0..cfg.topic_count)
        .map(|t| {
            let fine = rng::random_unit(&mut g, cfg.dim);
            let mut v: Vec<f64> = common.iter().map(|x| a * x).collect();
            axpy(b, &coarse[t % cfg.coarse_topic_count], &mut v);
            axpy(c, &fine, &mut v);
            normalize_in_place(&mut v).expect("anchor energies are positive");
            v
        })
        .collect()
}

pub fn gen_semantic_embeddings(sim: &SimCorpus, cfg: &SimConfig) -> Result<EmbeddingStore> {
    cfg.validate()?;
    let anchors = topic_anchors(cfg);
    let mut g = rng::derived_rng(cfg.seed, "semantic");
    let scale = cfg.semantic_noise / (cfg.dim as f64).sqrt();
    let mut data = Vec::with_capacity(sim.topics.len() * cfg.dim);
    for &t in &sim.topics {
        let mut v = anchors[t].clone();
        if cfg.semantic_noise > 0.0 {
            let n = rng::gaussian_vec(&mut g, cfg.dim);
            axpy(scale, &n, &mut v);
            normalize_in_place(&mut v).map_err(|_| Error::config("semantic_noise", "zero vector"))?;
        }
        data.extend_from_slice(&v);
    }
    let ids = sim.corpus.docs().iter().map(|d| d.id.clone()).collect();
    EmbeddingStore::from_flat(ids, cfg.dim, data)
}

/// The rotation used by the standard model, as a row-major matrix.
pub fn standard_rotation(cfg: &SimConfig) -> Result<Vec<f64>> {
    let d = cfg.dim;
    let mut g = rng::derived_rng(cfg.seed, "standard-frame");
    let raw: Vec<Vec<f64>> = (0..d).map(|_| rng::gaussian_vec(&mut g, d)).collect();
    let frame = gram_schmidt(&raw, ORTHO_TOL)?.basis.vectors;
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = 1.0;
    }
    let (c, s) = (
        cfg.standard_rotation_angle.cos(),
        cfg.standard_rotation_angle.sin(),
    );
    for pair in frame.chunks_exact(2) {
        let (a, b) = (&pair[0], &pair[1]);
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] += (c - 1.0) * (a[i] * a[j] + b[i] * b[j]) + s * (b[i] * a[j] - a[i] * b[j]);
            }
        }
    }
    Ok(m)
}

pub fn gen_standard_embeddings(semantic: &EmbeddingStore, cfg: &SimConfig) -> Result<EmbeddingStore> {
    cfg.validate()?;
    let d = semantic.dim();
    if d != cfg.dim {
        return Err(Error::DimensionMismatch {
            expected: cfg.dim,
            found: d,
        });
    }
    let rot = standard_rotation(cfg)?;
    let mut g = rng::derived_rng(cfg.seed, "standard-noise");
    let scale = cfg.standard_noise / (d as f64).sqrt();
    let mut data = Vec::with_capacity(semantic.len() * d);
    for x in semantic.rows() {
        let mut y: Vec<f64> = rot.chunks_exact(d).map(|r| dot(r, x)).collect();
        if cfg.standard_noise > 0.0 {
            let n = rng::gaussian_vec(&mut g, d);
            axpy(scale, &n, &mut y);
        }
        normalize_in_place(&mut y).map_err(|_| Error::config("standard_noise", "zero vector"))?;
        data.extend_from_slice(&y);
    }
    EmbeddingStore::from_flat(semantic.ids().to_vec(), d, data)
}

/// Indices of the `k` rows most cosine-similar to row `i`, excluding `i`.
fn knn_row(store: &EmbeddingStore, i: usize, k: usize) -> Vec<usize> {
    let x = store.row(i);
    let mut sims: Vec<(f64, usize)> = (0..store.len())
        .filter(|&j| j != i)
        .map(|j| (dot(x, store.row(j)), j))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
    if k < sims.len() {
        sims.select_nth_unstable_by(k, cmp);
        sims.truncate(k);
    }
    let mut out: Vec<usize> = sims.into_iter().map(|s| s.1).collect();
    out.sort_unstable();
    out
}

/// Mean Jaccard overlap of per-id k-nearest-neighbour sets.
pub fn utility_score(cleansed: &EmbeddingStore, reference: &EmbeddingStore, k: usize) -> Result<f64> {
    cleansed.check_same_ids(reference)?;
    let n = cleansed.len();
    if k == 0 || k >= n {
        return Err(Error::config("k", format!("must lie in 1..{n}")));
    }
    let scores: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = knn_row(cleansed, i, k);
            let b = knn_row(reference, i, k);
            let (mut p, mut q, mut inter) = (0, 0, 0);
            while p < a.len() && q < b.len() {
                match a[p].cmp(&b[q]) {
                    std::cmp::Ordering::Less => p += 1,
                    std::cmp::Ordering::Greater => q += 1,
                    std::cmp::Ordering::Equal => {
                        inter += 1;
                        p += 1;
                        q += 1;
                    }
                }
            }
            inter as f64 / (a.len() + b.len() - inter) as f64
        })
        .collect();
    Ok(scores.iter().sum::<f64>() / n as f64)
}

/// Everything `gen-data` produces.
#[derive(Debug, Clone)]
pub struct SimWorld {
    pub corpus: SimCorpus,
    pub semantic: EmbeddingStore,
    pub standard: EmbeddingStore,
}

pub fn gen_world(cfg: &SimConfig) -> Result<SimWorld> {
    let corpus = gen_corpus(cfg)?;
    let semantic = gen_semantic_embeddings(&corpus, cfg)?;
    let standard = gen_standard_embeddings(&semantic, cfg)?;
    Ok(SimWorld {
        corpus,
        semantic,
        standard,
    })
}

/// Seeded Gaussian blobs with labels, for clustering checks.
pub fn gaussian_blobs(
    centers: usize,
    per_center: usize,
    dim: usize,
    separation: f64,
    seed: u64,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut g = rng::derived_rng(seed, "blobs");
    let mut rows = Vec::with_capacity(centers * per_center);
    let mut labels = Vec::with_capacity(centers * per_center);
    for c in 0..centers {
        let mut center = vec![0.0; dim];
        center[c % dim] = separation;
        for _ in 0..per_center {
            let mut v = rng::gaussian_vec(&mut g, dim);
            axpy(1.0, &center, &mut v);
            rows.push(v);
            labels.push(c);
        }
    }
    (rows, labels)
}
