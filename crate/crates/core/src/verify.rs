//! Copyright verification: probe texts, per-watermark metrics, the
//! two-sample KS test and the combined verdict.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, normalize_in_place, OrthonormalBasis};
use crate::rng;
use crate::store::EmbeddingStore;
use crate::triggers::{frequency_band, token_doc_frequencies};
use crate::watermark::{inject, WatermarkKey};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::TooFewSamples {
            a: a.len(),
            b: b.len(),
        });
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_q(lambda),
    })
}

/// `Q(λ) = 2 Σ_{j≥1} (-1)^{j-1} exp(-2 j² λ²)`, clamped to [0, 1].
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let a = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200_000u32 {
        let jf = f64::from(j);
        let term = (a * jf * jf).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Something that turns a text into a unit embedding.
pub trait SuspectEmbedder: Sync {
    fn dim(&self) -> usize;
    fn embed(&self, doc: &Document) -> Result<Vec<f64>>;
}

/// Surrogate of a model extracted from `(corpus, store)`.
///
/// Each token maps to the mean store vector of the documents containing it.
/// A text maps to the mean of its token vectors plus isotropic noise of
/// expected norm `eta`, seeded by the text.
#[derive(Debug, Clone)]
pub struct ImitationEmbedder {
    dim: usize,
    eta: f64,
    seed: u64,
    centroids: HashMap<String, Vec<f64>>,
}

impl ImitationEmbedder {
    pub fn fit(corpus: &Corpus, store: &EmbeddingStore, eta: f64, seed: u64) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::config("eta", "must be finite and non-negative"));
        }
        let index = store.index();
        let dim = store.dim();
        let mut sums: HashMap<&str, (Vec<f64>, usize)> = HashMap::new();
        let mut matched = 0;
        for d in corpus.docs() {
            let Some(&row) = index.get(d.id.as_str()) else {
                continue;
            };
            matched += 1;
            let v = store.row(row);
            let uniq: HashSet<&str> = d.tokens.iter().map(String::as_str).collect();
            let mut uniq: Vec<&str> = uniq.into_iter().collect();
            uniq.sort_unstable();
            for t in uniq {
                let e = sums.entry(t).or_insert_with(|| (vec![0.0; dim], 0));
                axpy(1.0, v, &mut e.0);
                e.1 += 1;
            }
        }
        if matched == 0 {
            return Err(Error::IdMismatch("no corpus document has a stored embedding".into()));
        }
        let centroids = sums
            .into_iter()
            .map(|(t, (mut s, c))| {
                let inv = 1.0 / c as f64;
                s.iter_mut().for_each(|x| *x *= inv);
                (t.to_owned(), s)
            })
            .collect();
        Ok(ImitationEmbedder {
            dim,
            eta,
            seed,
            centroids,
        })
    }

    pub fn knows(&self, token: &str) -> bool {
        self.centroids.contains_key(token)
    }
}

fn text_seed(seed: u64, tokens: &[String]) -> u64 {
    rng::derive_seed(seed, &tokens.join("\u{1f}"))
}

impl SuspectEmbedder for ImitationEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, doc: &Document) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.dim];
        let mut n = 0usize;
        for t in &doc.tokens {
            if let Some(c) = self.centroids.get(t) {
                axpy(1.0, c, &mut v);
                n += 1;
            }
        }
        if n == 0 {
            return Err(Error::Embedder {
                id: doc.id.clone(),
                reason: "no known tokens".into(),
            });
        }
        let inv = 1.0 / n as f64;
        v.iter_mut().for_each(|x| *x *= inv);
        if self.eta > 0.0 {
            let mut g = rng::rng(text_seed(self.seed, &doc.tokens));
            let noise = rng::gaussian_vec(&mut g, self.dim);
            axpy(self.eta / (self.dim as f64).sqrt(), &noise, &mut v);
        }
        normalize_in_place(&mut v).map_err(|_| Error::Embedder {
            id: doc.id.clone(),
            reason: "zero embedding".into(),
        })?;
        Ok(v)
    }
}

/// Looks probes up by id in a precomputed store.
#[derive(Debug, Clone)]
pub struct StoreLookup {
    store: EmbeddingStore,
    index: HashMap<String, usize>,
}

impl StoreLookup {
    pub fn new(store: EmbeddingStore) -> Self {
        let index = store
            .ids()
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        StoreLookup { store, index }
    }
}

impl SuspectEmbedder for StoreLookup {
    fn dim(&self) -> usize {
        self.store.dim()
    }

    fn embed(&self, doc: &Document) -> Result<Vec<f64>> {
        match self.index.get(&doc.id) {
            Some(&i) => Ok(self.store.row(i).to_vec()),
            None => Err(Error::Embedder {
                id: doc.id.clone(),
                reason: "id not in store".into(),
            }),
        }
    }
}

/// Wraps a clean embedder with provider watermarking and, optionally, a
/// removal basis applied afterwards.
pub struct WatermarkedEmbedder<'a, E: SuspectEmbedder> {
    pub base: E,
    pub key: &'a WatermarkKey,
    pub basis: Option<&'a OrthonormalBasis>,
    pub seed: u64,
}

impl<E: SuspectEmbedder> SuspectEmbedder for WatermarkedEmbedder<'_, E> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn embed(&self, doc: &Document) -> Result<Vec<f64>> {
        let e = self.base.embed(doc)?;
        let mut v = inject(&e, &self.key.weights(&doc.tokens), self.key)?;
        if let Some(b) = self.basis {
            let s = text_seed(self.seed, &doc.tokens);
            crate::cse::eliminate_row(&mut v, b, s)?;
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSet {
    pub backdoor: Vec<Vec<Document>>,
    pub benign: Vec<Document>,
    pub m: u32,
}

impl ProbeSet {
    pub fn all_docs(&self) -> impl Iterator<Item = &Document> {
        self.backdoor.iter().flatten().chain(&self.benign)
    }
}

/// Backdoor probes draw `m` tokens from each trigger subset, benign probes
/// draw from `vocab` minus all triggers; both with replacement.
pub fn build_probes(key: &WatermarkKey, vocab: &[String], count: usize, seed: u64) -> Result<ProbeSet> {
    let triggers: HashSet<&str> = key.partition.all.iter().map(String::as_str).collect();
    let mut benign_vocab: Vec<&str> = vocab
        .iter()
        .map(String::as_str)
        .filter(|t| !triggers.contains(t))
        .collect();
    benign_vocab.sort_unstable();
    benign_vocab.dedup();
    if benign_vocab.is_empty() {
        return Err(Error::EmptyBenignVocab);
    }
    let m = key.m as usize;
    let mut g = rng::rng(seed);
    let mut backdoor = Vec::with_capacity(key.r);
    for (r, subset) in key.partition.subsets.iter().enumerate() {
        if subset.is_empty() {
            return Err(Error::config("partition.subsets", format!("subset {r} is empty")));
        }
        let mut sorted: Vec<&String> = subset.iter().collect();
        sorted.sort();
        let docs = (0..count)
            .map(|i| Document {
                id: format!("probe_b{:02}_{:05}", r + 1, i + 1),
                tokens: (0..m)
                    .map(|_| sorted[g.random_range(0..sorted.len())].clone())
                    .collect(),
            })
            .collect();
        backdoor.push(docs);
    }
    let benign = (0..count)
        .map(|i| Document {
            id: format!("probe_n_{:05}", i + 1),
            tokens: (0..m)
                .map(|_| benign_vocab[g.random_range(0..benign_vocab.len())].to_owned())
                .collect(),
        })
        .collect();
    Ok(ProbeSet {
        backdoor,
        benign,
        m: key.m,
    })
}

/// Corpus tokens in the trigger frequency band, minus the triggers. Falls
/// back to every non-trigger token when the band is empty.
pub fn benign_vocabulary(corpus: &Corpus, key: &WatermarkKey, interval: (f64, f64)) -> Result<Vec<String>> {
    let freqs: BTreeMap<String, f64> = token_doc_frequencies(corpus)?;
    let trig: HashSet<&str> = key.partition.all.iter().map(String::as_str).collect();
    let band: Vec<String> = frequency_band(&freqs, interval.0, interval.1)
        .into_iter()
        .filter(|t| !trig.contains(t.as_str()))
        .collect();
    if !band.is_empty() {
        return Ok(band);
    }
    let rest: Vec<String> = freqs
        .into_keys()
        .filter(|t| !trig.contains(t.as_str()))
        .collect();
    if rest.is_empty() {
        return Err(Error::EmptyBenignVocab);
    }
    Ok(rest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WatermarkMetrics {
    pub delta_cos: f64,
    pub delta_l2: f64,
    pub p_value: f64,
    pub ks_statistic: f64,
    pub backdoor_mean_cos: f64,
    pub benign_mean_cos: f64,
}

fn embed_all<E: SuspectEmbedder + ?Sized>(embedder: &E, docs: &[Document]) -> Result<Vec<Vec<f64>>> {
    docs.par_iter()
        .map(|d| {
            let mut v = embedder.embed(d)?;
            if v.len() != embedder.dim() {
                return Err(Error::Embedder {
                    id: d.id.clone(),
                    reason: format!("returned {} components, expected {}", v.len(), embedder.dim()),
                });
            }
            normalize_in_place(&mut v).map_err(|_| Error::Embedder {
                id: d.id.clone(),
                reason: "zero embedding".into(),
            })?;
            Ok(v)
        })
        .collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn quantize(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

pub fn per_watermark_metrics<E: SuspectEmbedder + ?Sized>(
    embedder: &E,
    probes: &ProbeSet,
    key: &WatermarkKey,
) -> Result<Vec<WatermarkMetrics>> {
    if embedder.dim() != key.dim {
        return Err(Error::DimensionMismatch {
            expected: key.dim,
            found: embedder.dim(),
        });
    }
    if probes.backdoor.len() != key.r {
        return Err(Error::config(
            "probes",
            format!("{} backdoor sets for R = {}", probes.backdoor.len(), key.r),
        ));
    }
    let benign = embed_all(embedder, &probes.benign)?;
    let mut out = Vec::with_capacity(key.r);
    for (docs, w) in probes.backdoor.iter().zip(&key.targets) {
        let bd = embed_all(embedder, docs)?;
        let cos = |vs: &[Vec<f64>]| -> Vec<f64> { vs.iter().map(|v| dot(v, w).clamp(-1.0, 1.0)).collect() };
        let l2 = |vs: &[Vec<f64>]| -> Vec<f64> { vs.iter().map(|v| sq_dist(v, w)).collect() };
        let (cb, cn) = (cos(&bd), cos(&benign));
        let (lb, ln) = (l2(&bd), l2(&benign));
        let qb: Vec<f64> = cb.iter().map(|&x| quantize(x)).collect();
        let qn: Vec<f64> = cn.iter().map(|&x| quantize(x)).collect();
        let ks = ks_two_sample(&qb, &qn)?;
        out.push(WatermarkMetrics {
            delta_cos: mean(&cb) - mean(&cn),
            delta_l2: mean(&lb) - mean(&ln),
            p_value: ks.p_value,
            ks_statistic: ks.statistic,
            backdoor_mean_cos: mean(&cb),
            benign_mean_cos: mean(&cn),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Combined {
    pub delta_cos: f64,
    pub delta_l2: f64,
    pub p_value: f64,
}

/// Max Δcos, min Δl2, min p over watermarks.
pub fn combine(per: &[WatermarkMetrics]) -> Combined {
    assert!(!per.is_empty(), "combine needs at least one watermark");
    Combined {
        delta_cos: per.iter().map(|m| m.delta_cos).fold(f64::NEG_INFINITY, f64::max),
        delta_l2: per.iter().map(|m| m.delta_l2).fold(f64::INFINITY, f64::min),
        p_value: per.iter().map(|m| m.p_value).fold(f64::INFINITY, f64::min),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub p_max: f64,
    pub dcos_min: f64,
    pub dl2_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            p_max: 1e-3,
            dcos_min: 0.01,
            dl2_max: -0.02,
        }
    }
}

impl Thresholds {
    fn pass(&self, p: f64, dcos: f64, dl2: f64) -> bool {
        p <= self.p_max && dcos >= self.dcos_min && dl2 <= self.dl2_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: bool,
    pub rationale: String,
    /// 1-based indices of watermarks that pass every threshold on their own.
    pub fired: Vec<usize>,
}

pub fn verdict(combined: &Combined, per: &[WatermarkMetrics], t: &Thresholds) -> Verdict {
    let ok = t.pass(combined.p_value, combined.delta_cos, combined.delta_l2);
    let fired: Vec<usize> = per
        .iter()
        .enumerate()
        .filter(|(_, m)| t.pass(m.p_value, m.delta_cos, m.delta_l2))
        .map(|(i, _)| i + 1)
        .collect();
    let argbest = |f: &dyn Fn(&WatermarkMetrics) -> f64, want: f64| {
        per.iter().position(|m| f(m) == want).map_or(0, |i| i + 1)
    };
    let ip = argbest(&|m| m.p_value, combined.p_value);
    let ic = argbest(&|m| m.delta_cos, combined.delta_cos);
    let il = argbest(&|m| m.delta_l2, combined.delta_l2);
    let checks = format!(
        "p={:.3e} (watermark {ip}) {} {:.0e}, dcos={:.5} (watermark {ic}) {} {}, dl2={:.5} (watermark {il}) {} {}",
        combined.p_value,
        if combined.p_value <= t.p_max { "<=" } else { ">" },
        t.p_max,
        combined.delta_cos,
        if combined.delta_cos >= t.dcos_min { ">=" } else { "<" },
        t.dcos_min,
        combined.delta_l2,
        if combined.delta_l2 <= t.dl2_max { "<=" } else { ">" },
        t.dl2_max,
    );
    let rationale = match (ok, fired.as_slice()) {
        (true, []) => format!("combined metrics pass: {checks}"),
        (true, f) => format!("watermark {} fired: {checks}", join(f)),
        (false, _) => format!("no watermark fired: {checks}"),
    };
    Verdict {
        verdict: ok,
        rationale,
        fired,
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub probes: usize,
    pub seed: u64,
    pub thresholds: Thresholds,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            probes: 200,
            seed: 1,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub per_watermark: Vec<WatermarkMetrics>,
    pub combined: Combined,
    pub verdict: bool,
    pub rationale: String,
    pub fired: Vec<usize>,
    pub thresholds: Thresholds,
    pub probes_per_class: usize,
    pub probe_seed: u64,
}

pub fn verify_with_probes<E: SuspectEmbedder + ?Sized>(
    embedder: &E,
    key: &WatermarkKey,
    probes: &ProbeSet,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let per = per_watermark_metrics(embedder, probes, key)?;
    let combined = combine(&per);
    let v = verdict(&combined, &per, &cfg.thresholds);
    Ok(VerificationReport {
        per_watermark: per,
        combined,
        verdict: v.verdict,
        rationale: v.rationale,
        fired: v.fired,
        thresholds: cfg.thresholds,
        probes_per_class: cfg.probes,
        probe_seed: cfg.seed,
    })
}

pub fn verify<E: SuspectEmbedder + ?Sized>(
    embedder: &E,
    key: &WatermarkKey,
    vocab: &[String],
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let probes = build_probes(key, vocab, cfg.probes, cfg.seed)?;
    verify_with_probes(embedder, key, &probes, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triggers::TriggerPartition;

    fn metrics(dc: f64, dl: f64, p: f64) -> WatermarkMetrics {
        WatermarkMetrics {
            delta_cos: dc,
            delta_l2: dl,
            p_value: p,
            ks_statistic: 0.0,
            backdoor_mean_cos: 0.0,
            benign_mean_cos: 0.0,
        }
    }

    #[test]
    fn ks_equal_samples() {
        let a = [0.3, 0.1, 0.2, 0.2];
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn ks_disjoint_samples() {
        let r = ks_two_sample(&[0.0; 100], &[1.0; 100]).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(r.p_value < 1e-10);
        assert!(matches!(
            ks_two_sample(&[1.0], &[1.0, 2.0]),
            Err(Error::TooFewSamples { a: 1, b: 2 })
        ));
    }

    #[test]
    fn kolmogorov_reference_points() {
        // Q(1) = 0.26999967..., Q(0.5) = 0.96394524...
        assert!((kolmogorov_q(1.0) - 0.269_999_671_677_202_6).abs() < 1e-10);
        assert!((kolmogorov_q(0.5) - 0.963_945_243_664_875_8).abs() < 1e-9);
        assert_eq!(kolmogorov_q(0.0), 1.0);
        assert!(kolmogorov_q(0.01) <= 1.0);
    }

    #[test]
    fn combine_examples() {
        let c = combine(&[metrics(0.1, -0.2, 0.5), metrics(0.8, -1.6, 1e-5)]);
        assert_eq!((c.delta_cos, c.delta_l2, c.p_value), (0.8, -1.6, 1e-5));
        let c = combine(&[metrics(0.1, -0.2, 0.5)]);
        assert_eq!((c.delta_cos, c.delta_l2, c.p_value), (0.1, -0.2, 0.5));
        let c = combine(&[metrics(0.0, 0.0, 0.5), metrics(0.0, 0.0, 0.2)]);
        assert_eq!((c.delta_cos, c.delta_l2, c.p_value), (0.0, 0.0, 0.2));
    }

    #[test]
    fn verdict_examples() {
        let t = Thresholds::default();
        let per = [metrics(0.05, -0.10, 1e-6)];
        let v = verdict(&combine(&per), &per, &t);
        assert!(v.verdict);
        assert_eq!(v.fired, vec![1]);
        assert!(v.rationale.contains("watermark 1 fired"));
        let per = [metrics(0.001, -0.002, 0.5)];
        assert!(!verdict(&combine(&per), &per, &t).verdict);
        let per = [metrics(0.0, 0.0, 1e-6)];
        assert!(!verdict(&combine(&per), &per, &t).verdict);
        let per = [metrics(0.0, 0.0, 0.3), metrics(0.2, -0.4, 1e-9)];
        let v = verdict(&combine(&per), &per, &t);
        assert!(v.verdict);
        assert!(v.rationale.contains("watermark 2 fired"));
    }

    fn key_r2() -> WatermarkKey {
        WatermarkKey {
            dim: 2,
            r: 2,
            m: 4,
            seed: 0,
            orthogonalized: true,
            targets: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            partition: TriggerPartition {
                all: vec!["x".into(), "y".into()],
                subsets: vec![vec!["x".into()], vec!["y".into()]],
                seed: 0,
            },
        }
    }

    #[test]
    fn probe_examples() {
        let key = key_r2();
        let vocab: Vec<String> = ["a", "b", "x"].iter().map(|s| s.to_string()).collect();
        let p = build_probes(&key, &vocab, 100, 5).unwrap();
        assert_eq!(p.backdoor.len(), 2);
        assert_eq!(p.backdoor.iter().map(Vec::len).sum::<usize>(), 200);
        assert_eq!(p.benign.len(), 100);
        assert!(p.backdoor[0].iter().all(|d| d.tokens == vec!["x"; 4]));
        assert!(p.benign.iter().all(|d| d.tokens.iter().all(|t| t != "x" && t != "y")));
        assert_eq!(build_probes(&key, &vocab, 100, 5).unwrap(), p);
        assert!(matches!(
            build_probes(&key, &["x".to_string()], 10, 5),
            Err(Error::EmptyBenignVocab)
        ));
    }

    struct Fixed(Vec<f64>, Vec<f64>);
    impl SuspectEmbedder for Fixed {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn embed(&self, doc: &Document) -> Result<Vec<f64>> {
            Ok(if doc.id.starts_with("probe_b") {
                self.0.clone()
            } else {
                self.1.clone()
            })
        }
    }

    #[test]
    fn metric_extremes() {
        let mut key = key_r2();
        key.r = 1;
        key.targets.truncate(1);
        key.partition.subsets.truncate(1);
        key.partition.all.truncate(1);
        let vocab = vec!["a".to_string(), "b".to_string()];
        let probes = build_probes(&key, &vocab, 50, 1).unwrap();
        let m = per_watermark_metrics(&Fixed(vec![1.0, 0.0], vec![-1.0, 0.0]), &probes, &key).unwrap();
        assert_eq!(m[0].delta_cos, 2.0);
        assert_eq!(m[0].delta_l2, -4.0);
        let u = vec![0.6, 0.8];
        let m = per_watermark_metrics(&Fixed(u.clone(), u), &probes, &key).unwrap();
        assert_eq!((m[0].delta_cos, m[0].delta_l2, m[0].p_value), (0.0, 0.0, 1.0));
    }
}
