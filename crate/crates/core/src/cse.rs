//! The clustering, selection and elimination attack, plus target
//! reconstruction for evaluation.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    axpy, cosine, dot, gram_schmidt, normalize, remove_component_in_place, solve_least_squares,
    top_k_singular_vectors, OrthonormalBasis, ORTHO_TOL,
};
use crate::rng;
use crate::store::EmbeddingStore;
use crate::watermark::WatermarkKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ClusterAlgo {
    #[default]
    Kmeans,
    Gmm,
}

impl std::str::FromStr for ClusterAlgo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kmeans" => Ok(ClusterAlgo::Kmeans),
            "gmm" => Ok(ClusterAlgo::Gmm),
            _ => Err(Error::config("algo", format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    /// Cluster index per store row.
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub algo: ClusterAlgo,
    pub n: usize,
    pub seed: u64,
    pub iterations: usize,
}

impl Clustering {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (i, &c) in self.assignments.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

const MAX_ITER: usize = 300;
const SHIFT_TOL: f64 = 1e-6;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn cluster(store: &EmbeddingStore, n: usize, algo: ClusterAlgo, seed: u64) -> Result<Clustering> {
    if n == 0 || n > store.len() {
        return Err(Error::TooManyClusters {
            clusters: n,
            rows: store.len(),
        });
    }
    let km = kmeans(store, n, seed);
    match algo {
        ClusterAlgo::Kmeans => Ok(km),
        ClusterAlgo::Gmm => Ok(gmm(store, km)),
    }
}

fn kmeans_pp(store: &EmbeddingStore, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut g = rng::derived_rng(seed, "kmeans++");
    let rows = store.len();
    let first = g.random_range(0..rows);
    let mut centroids = vec![store.row(first).to_vec()];
    let mut d2: Vec<f64> = (0..rows)
        .into_par_iter()
        .map(|i| sq_dist(store.row(i), &centroids[0]))
        .collect();
    let mut chosen = vec![false; rows];
    chosen[first] = true;
    while centroids.len() < n {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut x = g.random::<f64>() * total;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 {
                    pick = Some(i);
                    if x < d {
                        break;
                    }
                    x -= d;
                }
            }
            pick.expect("positive total")
        } else {
            let free: Vec<usize> = (0..rows).filter(|&i| !chosen[i]).collect();
            free[g.random_range(0..free.len())]
        };
        chosen[pick] = true;
        let c = store.row(pick).to_vec();
        d2.par_iter_mut()
            .enumerate()
            .for_each(|(i, d)| *d = d.min(sq_dist(store.row(i), &c)));
        centroids.push(c);
    }
    centroids
}

fn nearest(x: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut bd = f64::INFINITY;
    for (k, c) in centroids.iter().enumerate() {
        let d = sq_dist(x, c);
        if d < bd {
            bd = d;
            best = k;
        }
    }
    best
}

fn assign(store: &EmbeddingStore, centroids: &[Vec<f64>]) -> Vec<usize> {
    (0..store.len())
        .into_par_iter()
        .map(|i| nearest(store.row(i), centroids))
        .collect()
}

/// Means of members; empty clusters keep their previous centroid.
fn member_means(store: &EmbeddingStore, assignments: &[usize], prev: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = store.dim();
    let mut sums = vec![vec![0.0; dim]; prev.len()];
    let mut counts = vec![0usize; prev.len()];
    for (i, &c) in assignments.iter().enumerate() {
        axpy(1.0, store.row(i), &mut sums[c]);
        counts[c] += 1;
    }
    sums.into_iter()
        .zip(counts)
        .zip(prev)
        .map(|((mut s, c), p)| {
            if c == 0 {
                p.clone()
            } else {
                let inv = 1.0 / c as f64;
                s.iter_mut().for_each(|x| *x *= inv);
                s
            }
        })
        .collect()
}

fn kmeans(store: &EmbeddingStore, n: usize, seed: u64) -> Clustering {
    let mut centroids = kmeans_pp(store, n, seed);
    let mut assignments = assign(store, &centroids);
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        let next = member_means(store, &assignments, &centroids);
        let shift = next
            .iter()
            .zip(&centroids)
            .map(|(a, b)| sq_dist(a, b).sqrt())
            .fold(0.0, f64::max);
        centroids = next;
        assignments = assign(store, &centroids);
        if shift < SHIFT_TOL {
            break;
        }
    }
    centroids = member_means(store, &assignments, &centroids);
    Clustering {
        assignments,
        centroids,
        algo: ClusterAlgo::Kmeans,
        n,
        seed,
        iterations,
    }
}

/// Diagonal-covariance EM started from a k-means solution.
fn gmm(store: &EmbeddingStore, init: Clustering) -> Clustering {
    const VAR_FLOOR: f64 = 1e-6;
    let dim = store.dim();
    let n = init.n;
    let rows = store.len();
    let mut means = init.centroids.clone();
    let mut vars = vec![vec![0.0; dim]; n];
    let mut weights = vec![0.0; n];
    {
        let mut counts = vec![0usize; n];
        for (i, &c) in init.assignments.iter().enumerate() {
            counts[c] += 1;
            for (d, v) in vars[c].iter_mut().enumerate() {
                let x = store.row(i)[d] - means[c][d];
                *v += x * x;
            }
        }
        for k in 0..n {
            let c = counts[k].max(1) as f64;
            vars[k].iter_mut().for_each(|v| *v = *v / c + VAR_FLOOR);
            weights[k] = (counts[k] as f64 / rows as f64).max(1e-12);
        }
    }
    let ln2pi = (2.0 * std::f64::consts::PI).ln();
    let mut resp: Vec<Vec<f64>> = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_ITER {
        iterations += 1;
        let consts: Vec<f64> = (0..n)
            .map(|k| weights[k].ln() - 0.5 * vars[k].iter().map(|v| ln2pi + v.ln()).sum::<f64>())
            .collect();
        resp = (0..rows)
            .into_par_iter()
            .map(|i| {
                let x = store.row(i);
                let ll: Vec<f64> = (0..n)
                    .map(|k| {
                        let q: f64 = x
                            .iter()
                            .zip(&means[k])
                            .zip(&vars[k])
                            .map(|((a, m), v)| (a - m) * (a - m) / v)
                            .sum();
                        consts[k] - 0.5 * q
                    })
                    .collect();
                let mx = ll.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let z: f64 = ll.iter().map(|l| (l - mx).exp()).sum();
                ll.iter().map(|l| (l - mx).exp() / z).collect()
            })
            .collect();
        let mut nk = vec![0.0; n];
        let mut new_means = vec![vec![0.0; dim]; n];
        for (i, r) in resp.iter().enumerate() {
            for k in 0..n {
                nk[k] += r[k];
                axpy(r[k], store.row(i), &mut new_means[k]);
            }
        }
        for k in 0..n {
            if nk[k] > 1e-12 {
                new_means[k].iter_mut().for_each(|x| *x /= nk[k]);
            } else {
                new_means[k] = means[k].clone();
            }
        }
        let mut new_vars = vec![vec![0.0; dim]; n];
        for (i, r) in resp.iter().enumerate() {
            let x = store.row(i);
            for k in 0..n {
                for d in 0..dim {
                    let e = x[d] - new_means[k][d];
                    new_vars[k][d] += r[k] * e * e;
                }
            }
        }
        for k in 0..n {
            let c = nk[k].max(1e-12);
            new_vars[k].iter_mut().for_each(|v| *v = *v / c + VAR_FLOOR);
            weights[k] = (nk[k] / rows as f64).max(1e-12);
        }
        let shift = new_means
            .iter()
            .zip(&means)
            .map(|(a, b)| sq_dist(a, b).sqrt())
            .fold(0.0, f64::max);
        means = new_means;
        vars = new_vars;
        if shift < SHIFT_TOL {
            break;
        }
    }
    let assignments: Vec<usize> = resp
        .iter()
        .map(|r| {
            let mut best = 0;
            for k in 1..n {
                if r[k] > r[best] {
                    best = k;
                }
            }
            best
        })
        .collect();
    Clustering {
        assignments,
        centroids: means,
        algo: ClusterAlgo::Gmm,
        n,
        seed: init.seed,
        iterations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDisparity {
    /// Store rows of the pair, `a < b`.
    pub a: usize,
    pub b: usize,
    pub d_v: f64,
    pub d_s: f64,
    pub disparity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterPairs {
    pub cluster: usize,
    pub size: usize,
    /// Set when the pair list was subsampled down to the cap.
    pub subsampled: bool,
    pub pairs: Vec<PairDisparity>,
}

pub const DEFAULT_PAIR_CAP: usize = 200_000;

/// Ascending average ranks mapped to [0, 1] by `(rank - 1) / (P - 1)`.
pub fn normalized_ranks(xs: &[f64]) -> Vec<f64> {
    let p = xs.len();
    if p <= 1 {
        return vec![0.0; p];
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]).then(i.cmp(&j)));
    let mut ranks = vec![0.0; p];
    let mut s = 0;
    while s < p {
        let mut e = s + 1;
        while e < p && xs[order[e]] == xs[order[s]] {
            e += 1;
        }
        // 1-based average rank of positions s..e
        let avg = (s + 1 + e) as f64 / 2.0;
        for &i in &order[s..e] {
            ranks[i] = (avg - 1.0) / (p - 1) as f64;
        }
        s = e;
    }
    ranks
}

/// `normalized_rank(d_v) - normalized_rank(d_s)` elementwise.
pub fn rank_disparities(d_v: &[f64], d_s: &[f64]) -> Vec<f64> {
    let rv = normalized_ranks(d_v);
    let rs = normalized_ranks(d_s);
    rv.iter().zip(&rs).map(|(a, b)| a - b).collect()
}

/// Within-cluster pair rank disparities between the provided and the
/// standard embeddings.
pub fn pair_disparities(
    clustering: &Clustering,
    provided: &EmbeddingStore,
    standard: &EmbeddingStore,
    pair_cap: usize,
    seed: u64,
) -> Result<Vec<ClusterPairs>> {
    provided.check_same_ids(standard)?;
    if clustering.assignments.len() != provided.len() {
        return Err(Error::IdMismatch(format!(
            "clustering covers {} rows, store has {}",
            clustering.assignments.len(),
            provided.len()
        )));
    }
    let members = clustering.members();
    members
        .into_par_iter()
        .enumerate()
        .map(|(c, idx)| {
            let s = idx.len();
            let total = s * s.saturating_sub(1) / 2;
            let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(total.min(pair_cap));
            let subsampled = total > pair_cap;
            if subsampled {
                let mut g = rng::derived_rng(seed, &format!("pairs/{c}"));
                let mut picked = rand::seq::index::sample(&mut g, total, pair_cap).into_vec();
                picked.sort_unstable();
                let mut it = picked.into_iter().peekable();
                let mut flat = 0;
                'outer: for i in 0..s {
                    for j in i + 1..s {
                        match it.peek() {
                            None => break 'outer,
                            Some(&p) if p == flat => {
                                pairs.push((idx[i], idx[j]));
                                it.next();
                            }
                            _ => {}
                        }
                        flat += 1;
                    }
                }
            } else {
                for i in 0..s {
                    for j in i + 1..s {
                        pairs.push((idx[i], idx[j]));
                    }
                }
            }
            let d_v: Vec<f64> = pairs
                .iter()
                .map(|&(a, b)| dot(provided.row(a), provided.row(b)).clamp(-1.0, 1.0))
                .collect();
            let d_s: Vec<f64> = pairs
                .iter()
                .map(|&(a, b)| dot(standard.row(a), standard.row(b)).clamp(-1.0, 1.0))
                .collect();
            let disp = rank_disparities(&d_v, &d_s);
            let pairs = pairs
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| PairDisparity {
                    a,
                    b,
                    d_v: d_v[k],
                    d_s: d_s[k],
                    disparity: disp[k],
                })
                .collect();
            Ok(ClusterPairs {
                cluster: c,
                size: s,
                subsampled,
                pairs,
            })
        })
        .collect()
}

/// Linear-interpolated percentile of unsorted data.
pub fn percentile(xs: &[f64], p: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = p / 100.0 * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    /// Store rows, ordered by flagged-pair count descending then id.
    pub suspects: Vec<usize>,
    pub flagged_counts: Vec<usize>,
    pub threshold: f64,
    pub flagged_pairs: usize,
}

pub fn select_suspects(
    clusters: &[ClusterPairs],
    ids: &[String],
    percentile_cut: f64,
    min_pair_count: usize,
) -> Result<Selection> {
    if !(percentile_cut > 0.0 && percentile_cut < 100.0) {
        return Err(Error::config("percentile", "must lie strictly between 0 and 100"));
    }
    let all: Vec<f64> = clusters
        .iter()
        .flat_map(|c| c.pairs.iter().map(|p| p.disparity))
        .collect();
    if all.is_empty() {
        return Ok(Selection {
            suspects: Vec::new(),
            flagged_counts: Vec::new(),
            threshold: f64::NAN,
            flagged_pairs: 0,
        });
    }
    let threshold = percentile(&all, percentile_cut);
    let mut counts: HashMap<usize, usize> = HashMap::new();
    let mut flagged_pairs = 0;
    for p in clusters.iter().flat_map(|c| &c.pairs) {
        if p.disparity >= threshold {
            flagged_pairs += 1;
            *counts.entry(p.a).or_default() += 1;
            *counts.entry(p.b).or_default() += 1;
        }
    }
    let mut sus: Vec<(usize, usize)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_pair_count.max(1))
        .collect();
    sus.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| ids[a.0].cmp(&ids[b.0])));
    Ok(Selection {
        suspects: sus.iter().map(|s| s.0).collect(),
        flagged_counts: sus.iter().map(|s| s.1).collect(),
        threshold,
        flagged_pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationBasis {
    pub components: OrthonormalBasis,
    pub k: usize,
    pub fitted_on: Vec<String>,
    pub singular_values: Vec<f64>,
    pub rank_deficient: bool,
}

impl EliminationBasis {
    /// Basis vectors as a store with ids `pc_0001`, ...
    pub fn to_store(&self) -> Result<EmbeddingStore> {
        let ids = (1..=self.components.len()).map(|i| format!("pc_{i:04}")).collect();
        EmbeddingStore::new(ids, self.components.vectors.clone())
    }

    pub fn from_store(store: &EmbeddingStore) -> Result<OrthonormalBasis> {
        let basis = OrthonormalBasis {
            vectors: store.rows().map(<[f64]>::to_vec).collect(),
            tol: ORTHO_TOL,
        };
        if !basis.is_valid() {
            return Err(Error::config("basis", "vectors are not orthonormal"));
        }
        Ok(basis)
    }
}

/// Top-`k` uncentered principal directions of the suspect rows. Fewer
/// suspects than `k` yields the achievable prefix with the rank flag set.
pub fn fit_basis(provided: &EmbeddingStore, suspects: &[usize], k: usize) -> Result<EliminationBasis> {
    if k == 0 {
        return Err(Error::InvalidK { k, max: 0 });
    }
    if suspects.is_empty() {
        return Ok(EliminationBasis {
            components: OrthonormalBasis {
                vectors: Vec::new(),
                tol: ORTHO_TOL,
            },
            k,
            fitted_on: Vec::new(),
            singular_values: Vec::new(),
            rank_deficient: true,
        });
    }
    let sub = provided.select(suspects)?;
    let m = sub.to_matrix()?;
    let kk = k.min(m.nrows()).min(m.ncols());
    let sv = top_k_singular_vectors(&m, kk)?;
    Ok(EliminationBasis {
        rank_deficient: sv.rank_deficient || kk < k,
        k,
        fitted_on: sub.ids().to_vec(),
        singular_values: sv.singular_values,
        components: sv.basis,
    })
}

/// Iteratively removes each basis direction from `v` with renormalization.
/// A vanishing residual is replaced by a seeded random unit vector
/// orthogonal to the basis; returns whether that happened.
pub fn eliminate_row(v: &mut [f64], basis: &OrthonormalBasis, seed: u64) -> Result<bool> {
    for c in &basis.vectors {
        if c.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: c.len(),
            });
        }
        match remove_component_in_place(v, c) {
            Ok(()) => {}
            Err(Error::DegenerateResidual) => {
                let fill = orthogonal_fill(basis, v.len(), seed)?;
                v.copy_from_slice(&fill);
                return Ok(true);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(false)
}

fn orthogonal_fill(basis: &OrthonormalBasis, dim: usize, seed: u64) -> Result<Vec<f64>> {
    if basis.len() >= dim {
        return Err(Error::DegenerateResidual);
    }
    let mut g = rng::rng(seed);
    loop {
        let mut v = rng::random_unit(&mut g, dim);
        for _ in 0..2 {
            for c in &basis.vectors {
                let s = dot(c, &v);
                axpy(-s, c, &mut v);
            }
        }
        if let Ok(u) = normalize(&v) {
            if crate::linalg::norm(&v) > 1e-6 {
                return Ok(u);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Elimination {
    pub store: EmbeddingStore,
    /// Ids whose residual vanished and were refilled.
    pub degenerate: Vec<String>,
}

pub fn eliminate(store: &EmbeddingStore, basis: &OrthonormalBasis, seed: u64) -> Result<Elimination> {
    if let Some(d) = basis.dim() {
        if d != store.dim() {
            return Err(Error::DimensionMismatch {
                expected: store.dim(),
                found: d,
            });
        }
    }
    let rows: Vec<(Vec<f64>, bool)> = (0..store.len())
        .into_par_iter()
        .map(|i| {
            let mut v = store.row(i).to_vec();
            let s = rng::derive_seed(seed, &store.ids()[i]);
            eliminate_row(&mut v, basis, s).map(|d| (v, d))
        })
        .collect::<Result<_>>()?;
    let degenerate = rows
        .iter()
        .zip(store.ids())
        .filter(|(r, _)| r.1)
        .map(|(_, id)| id.clone())
        .collect();
    let data = rows.into_iter().flat_map(|r| r.0).collect();
    Ok(Elimination {
        store: EmbeddingStore::from_flat(store.ids().to_vec(), store.dim(), data)?,
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetReconstruction {
    pub alpha: Vec<f64>,
    /// `None` when the basis is orthogonal to the target.
    pub recovered: Option<Vec<f64>>,
    pub cos_to_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub per_target: Vec<TargetReconstruction>,
    pub min_cos: f64,
}

/// Least-squares recovery of each target from the basis.
pub fn reconstruct_target(basis: &OrthonormalBasis, key: &WatermarkKey) -> Result<ReconstructionResult> {
    if basis.is_empty() {
        return Err(Error::InvalidK { k: 0, max: 0 });
    }
    let mut per_target = Vec::with_capacity(key.r);
    for w in &key.targets {
        let ls = solve_least_squares(&basis.vectors, w)?;
        let mut sum = vec![0.0; w.len()];
        for (a, c) in ls.alpha.iter().zip(&basis.vectors) {
            axpy(*a, c, &mut sum);
        }
        let (recovered, cos_to_target) = match normalize(&sum) {
            Ok(u) => {
                let c = cosine(&u, w)?;
                (Some(u), c)
            }
            Err(_) => (None, 0.0),
        };
        per_target.push(TargetReconstruction {
            alpha: ls.alpha,
            recovered,
            cos_to_target,
        });
    }
    let min_cos = per_target
        .iter()
        .map(|t| t.cos_to_target)
        .fold(f64::INFINITY, f64::min);
    Ok(ReconstructionResult { per_target, min_cos })
}

/// Elimination along the (orthonormalized) secret targets.
pub fn known_target_eliminate(store: &EmbeddingStore, key: &WatermarkKey, seed: u64) -> Result<Elimination> {
    if key.dim != store.dim() {
        return Err(Error::DimensionMismatch {
            expected: store.dim(),
            found: key.dim,
        });
    }
    let gs = gram_schmidt(&key.targets, ORTHO_TOL)?;
    eliminate(store, &gs.basis, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttackConfig {
    pub clusters: usize,
    pub algo: ClusterAlgo,
    pub percentile: f64,
    pub min_pair_count: usize,
    pub k: usize,
    pub pair_cap: usize,
    pub seed: u64,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            clusters: 20,
            algo: ClusterAlgo::Kmeans,
            percentile: 99.0,
            min_pair_count: 1,
            k: 50,
            pair_cap: DEFAULT_PAIR_CAP,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AttackOutcome {
    pub clustering: Clustering,
    pub pairs: Vec<ClusterPairs>,
    pub selection: Selection,
    pub basis: EliminationBasis,
    pub cleansed: Elimination,
}

/// Runs clustering, selection and elimination end to end.
pub fn run_attack(provided: &EmbeddingStore, standard: &EmbeddingStore, cfg: &AttackConfig) -> Result<AttackOutcome> {
    provided.check_same_ids(standard)?;
    let clustering = cluster(provided, cfg.clusters, cfg.algo, cfg.seed)?;
    let pairs = pair_disparities(&clustering, provided, standard, cfg.pair_cap, cfg.seed)?;
    let selection = select_suspects(&pairs, provided.ids(), cfg.percentile, cfg.min_pair_count)?;
    let basis = fit_basis(provided, &selection.suspects, cfg.k)?;
    let cleansed = eliminate(provided, &basis.components, cfg.seed)?;
    Ok(AttackOutcome {
        clustering,
        pairs,
        selection,
        basis,
        cleansed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub a: String,
    pub b: String,
    pub d_v: f64,
    pub d_s: f64,
    pub disparity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub cluster: usize,
    pub size: usize,
    pub subsampled: bool,
    pub pairs: Vec<PairRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionParams {
    pub percentile: f64,
    pub min_pair_count: usize,
}

/// Serializable form of the selection stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspicionReport {
    pub params: SelectionParams,
    pub threshold: f64,
    pub flagged_pairs: usize,
    pub suspects: Vec<String>,
    pub flagged_counts: Vec<usize>,
    pub clusters: Vec<ClusterRecord>,
}

impl SuspicionReport {
    pub fn new(ids: &[String], pairs: &[ClusterPairs], sel: &Selection, params: SelectionParams) -> Self {
        let clusters = pairs
            .iter()
            .map(|c| ClusterRecord {
                cluster: c.cluster,
                size: c.size,
                subsampled: c.subsampled,
                pairs: c
                    .pairs
                    .iter()
                    .map(|p| PairRecord {
                        a: ids[p.a].clone(),
                        b: ids[p.b].clone(),
                        d_v: p.d_v,
                        d_s: p.d_s,
                        disparity: p.disparity,
                    })
                    .collect(),
            })
            .collect();
        SuspicionReport {
            params,
            threshold: sel.threshold,
            flagged_pairs: sel.flagged_pairs,
            suspects: sel.suspects.iter().map(|&i| ids[i].clone()).collect(),
            flagged_counts: sel.flagged_counts.clone(),
            clusters,
        }
    }
}
