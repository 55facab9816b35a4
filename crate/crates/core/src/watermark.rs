//! Provider-side keys and watermark injection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::linalg::{dot, gram_schmidt, normalize_in_place, EPS_ZERO, ORTHO_TOL};
use crate::rng;
use crate::store::EmbeddingStore;
use crate::triggers::{weights_indexed, TriggerPartition, WeightVector};

/// The provider secret.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WatermarkKey {
    pub dim: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub m: u32,
    pub seed: u64,
    pub orthogonalized: bool,
    pub targets: Vec<Vec<f64>>,
    pub partition: TriggerPartition,
}

impl WatermarkKey {
    pub fn validate(&self) -> Result<()> {
        self.partition.validate()?;
        if self.r != self.targets.len() || self.r != self.partition.len() {
            return Err(Error::config(
                "R",
                format!(
                    "R = {} but {} targets and {} trigger subsets",
                    self.r,
                    self.targets.len(),
                    self.partition.len()
                ),
            ));
        }
        if self.m == 0 {
            return Err(Error::config("m", "must be at least 1"));
        }
        for (i, t) in self.targets.iter().enumerate() {
            if t.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: t.len(),
                });
            }
            crate::linalg::check_vector(t)?;
            if (crate::linalg::norm(t) - 1.0).abs() > 1e-10 {
                return Err(Error::config("targets", format!("target {i} is not unit-norm")));
            }
            if self.orthogonalized {
                for u in &self.targets[i + 1..] {
                    if dot(t, u).abs() > ORTHO_TOL {
                        return Err(Error::config("targets", "targets are not orthogonal"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn weights(&self, tokens: &[String]) -> WeightVector {
        weights_indexed(tokens, &self.partition.index(), self.r, self.m)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let key: WatermarkKey = crate::io::read_json(path)?;
        key.validate()?;
        Ok(key)
    }
}

/// Draws `r` isotropic unit targets, optionally orthogonalized.
pub fn generate_key(
    dim: usize,
    r: usize,
    seed: u64,
    orthogonalize: bool,
    partition: TriggerPartition,
    m: u32,
) -> Result<WatermarkKey> {
    if orthogonalize && r > dim {
        return Err(Error::TooManyWatermarks { count: r, dim });
    }
    if dim == 0 {
        return Err(Error::config("dim", "must be positive"));
    }
    let mut g = rng::rng(seed);
    let mut targets: Vec<Vec<f64>> = Vec::with_capacity(r);
    while targets.len() < r {
        let v = rng::random_unit(&mut g, dim);
        if !orthogonalize {
            targets.push(v);
            continue;
        }
        let mut all = targets.clone();
        all.push(v);
        let gs = gram_schmidt(&all, ORTHO_TOL)?;
        if gs.dropped.is_empty() {
            targets.push(gs.basis.vectors.into_iter().last().expect("nonempty"));
        }
    }
    let key = WatermarkKey {
        dim,
        r,
        m,
        seed,
        orthogonalized: orthogonalize,
        targets,
        partition,
    };
    key.validate()?;
    Ok(key)
}

/// `Norm((1 - Σλ_r) e_o + Σ λ_r w_r)`
pub fn inject(e_o: &[f64], weights: &WeightVector, key: &WatermarkKey) -> Result<Vec<f64>> {
    if e_o.len() != key.dim {
        return Err(Error::DimensionMismatch {
            expected: key.dim,
            found: e_o.len(),
        });
    }
    if weights.lambdas.len() != key.r {
        return Err(Error::DimensionMismatch {
            expected: key.r,
            found: weights.lambdas.len(),
        });
    }
    if weights.lambdas.iter().all(|&l| l == 0.0) {
        return Ok(e_o.to_vec());
    }
    if let Some(r) = weights.lambdas.iter().position(|&l| l == 1.0) {
        return Ok(key.targets[r].clone());
    }
    let keep = 1.0 - weights.lambdas.iter().sum::<f64>();
    let mut v: Vec<f64> = e_o.iter().map(|x| keep * x).collect();
    for (l, w) in weights.lambdas.iter().zip(&key.targets) {
        if *l != 0.0 {
            crate::linalg::axpy(*l, w, &mut v);
        }
    }
    if crate::linalg::norm(&v) <= EPS_ZERO {
        return Err(Error::DegenerateMix);
    }
    normalize_in_place(&mut v)?;
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectionSummary {
    /// Rows that received a nonzero weight.
    pub watermarked: usize,
    pub rows: usize,
}

impl InjectionSummary {
    pub fn exposure(&self) -> f64 {
        if self.rows == 0 {
            0.0
        } else {
            self.watermarked as f64 / self.rows as f64
        }
    }
}

/// Row-wise injection using each row's document text.
pub fn watermark_store(
    store: &EmbeddingStore,
    corpus: &Corpus,
    key: &WatermarkKey,
) -> Result<(EmbeddingStore, InjectionSummary)> {
    if store.dim() != key.dim {
        return Err(Error::DimensionMismatch {
            expected: key.dim,
            found: store.dim(),
        });
    }
    let docs: std::collections::HashMap<&str, &[String]> = corpus
        .docs()
        .iter()
        .map(|d| (d.id.as_str(), d.tokens.as_slice()))
        .collect();
    let missing: Vec<String> = store
        .ids()
        .iter()
        .filter(|id| !docs.contains_key(id.as_str()))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingDocument(missing));
    }
    let index = key.partition.index();
    let rows: Vec<(Vec<f64>, bool)> = (0..store.len())
        .into_par_iter()
        .map(|i| {
            let w = weights_indexed(docs[store.ids()[i].as_str()], &index, key.r, key.m);
            let hit = !w.is_zero();
            inject(store.row(i), &w, key).map(|v| (v, hit))
        })
        .collect::<Result<_>>()?;
    let watermarked = rows.iter().filter(|r| r.1).count();
    let data = rows.into_iter().flat_map(|r| r.0).collect();
    let out = EmbeddingStore::from_flat(store.ids().to_vec(), store.dim(), data)?;
    Ok((
        out,
        InjectionSummary {
            watermarked,
            rows: store.len(),
        },
    ))
}
