//! Trigger-word selection and the per-text watermark weights.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::rng;

/// Fraction of documents containing each token.
pub fn token_doc_frequencies(corpus: &Corpus) -> Result<BTreeMap<String, f64>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for d in corpus.docs() {
        let uniq: HashSet<&str> = d.tokens.iter().map(String::as_str).collect();
        for t in uniq {
            *counts.entry(t.to_owned()).or_default() += 1;
        }
    }
    let n = corpus.len() as f64;
    Ok(counts
        .into_iter()
        .map(|(t, c)| (t, c as f64 / n))
        .collect())
}

/// Tokens whose frequency lies in `[lo, hi]`, in lexicographic order.
pub fn frequency_band(freqs: &BTreeMap<String, f64>, lo: f64, hi: f64) -> Vec<String> {
    freqs
        .iter()
        .filter(|(_, &f)| f >= lo && f <= hi)
        .map(|(t, _)| t.clone())
        .collect()
}

/// Samples `n` tokens from the frequency band without replacement.
/// The result is sorted.
pub fn select_triggers(
    freqs: &BTreeMap<String, f64>,
    interval: (f64, f64),
    n: usize,
    seed: u64,
) -> Result<Vec<String>> {
    let cand = frequency_band(freqs, interval.0, interval.1);
    if cand.len() < n {
        return Err(Error::InsufficientCandidates {
            found: cand.len(),
            needed: n,
        });
    }
    let mut r = rng::rng(seed);
    let picked = rand::seq::index::sample(&mut r, cand.len(), n);
    let mut out: Vec<String> = picked.into_iter().map(|i| cand[i].clone()).collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggerPartition {
    pub all: Vec<String>,
    pub subsets: Vec<Vec<String>>,
    pub seed: u64,
}

impl TriggerPartition {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.subsets.is_empty() {
            return Err(Error::config("partition.subsets", "at least one subset required"));
        }
        let mut seen = HashSet::new();
        for (r, s) in self.subsets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::config("partition.subsets", format!("subset {r} is empty")));
            }
            for t in s {
                if !seen.insert(t.as_str()) {
                    return Err(Error::config(
                        "partition.subsets",
                        format!("token {t:?} appears twice"),
                    ));
                }
            }
        }
        let all: HashSet<&str> = self.all.iter().map(String::as_str).collect();
        if all != seen || all.len() != self.all.len() {
            return Err(Error::config("partition.all", "does not equal the union of subsets"));
        }
        Ok(())
    }

    /// Token to subset lookup.
    pub fn index(&self) -> HashMap<&str, usize> {
        self.subsets
            .iter()
            .enumerate()
            .flat_map(|(r, s)| s.iter().map(move |t| (t.as_str(), r)))
            .collect()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.all.iter().any(|t| t == token)
    }
}

/// Seeded shuffle followed by round-robin assignment into `r` subsets.
pub fn partition_triggers(triggers: &[String], r: usize, seed: u64) -> Result<TriggerPartition> {
    if r == 0 || triggers.len() < r {
        return Err(Error::TooManySubsets {
            tokens: triggers.len(),
            subsets: r,
        });
    }
    let mut all = triggers.to_vec();
    all.sort();
    all.dedup();
    if all.len() < r {
        return Err(Error::TooManySubsets {
            tokens: all.len(),
            subsets: r,
        });
    }
    let mut shuffled = all.clone();
    shuffled.shuffle(&mut rng::rng(seed));
    let mut subsets = vec![Vec::new(); r];
    for (i, t) in shuffled.into_iter().enumerate() {
        subsets[i % r].push(t);
    }
    Ok(TriggerPartition { all, subsets, seed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub lambdas: Vec<f64>,
    pub m: u32,
    /// Trigger occurrences per subset.
    pub counts: Vec<u32>,
}

impl WeightVector {
    /// `min(total occurrences, m) / m`
    pub fn total(&self) -> f64 {
        let c: u32 = self.counts.iter().sum();
        f64::from(c.min(self.m)) / f64::from(self.m)
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }
}

pub fn trigger_weights(tokens: &[String], partition: &TriggerPartition, m: u32) -> WeightVector {
    weights_indexed(tokens, &partition.index(), partition.len(), m)
}

pub(crate) fn weights_indexed(
    tokens: &[String],
    index: &HashMap<&str, usize>,
    r: usize,
    m: u32,
) -> WeightVector {
    assert!(m >= 1, "cap m must be positive");
    let mut counts = vec![0u32; r];
    for t in tokens {
        if let Some(&k) = index.get(t.as_str()) {
            counts[k] += 1;
        }
    }
    let c_tot: u32 = counts.iter().sum();
    let mut lambdas = vec![0.0; r];
    if c_tot > 0 {
        let total = f64::from(c_tot.min(m)) / f64::from(m);
        for (l, &c) in lambdas.iter_mut().zip(&counts) {
            *l = total * f64::from(c) / f64::from(c_tot);
        }
        // The last nonzero weight absorbs rounding so the weights sum to
        // `total` exactly under left-to-right summation. A rounding tie can
        // make that impossible, in which case the first weight moves one ulp.
        let first = counts.iter().position(|&c| c > 0).expect("c_tot > 0");
        let last = counts.iter().rposition(|&c| c > 0).expect("c_tot > 0");
        for _ in 0..8 {
            if absorb_rounding(&mut lambdas, last, total) || first == last {
                break;
            }
            lambdas[first] = lambdas[first].next_down();
        }
    }
    WeightVector { lambdas, m, counts }
}

fn absorb_rounding(lambdas: &mut [f64], last: usize, total: f64) -> bool {
    let prefix: f64 = lambdas[..last].iter().sum();
    lambdas[last] = total - prefix;
    for _ in 0..8 {
        let sum: f64 = lambdas.iter().sum();
        if sum == total {
            return true;
        }
        lambdas[last] = if sum < total {
            lambdas[last].next_up()
        } else {
            lambdas[last].next_down()
        };
    }
    false
}
