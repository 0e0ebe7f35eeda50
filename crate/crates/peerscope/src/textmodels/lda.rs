//! Latent Dirichlet Allocation via collapsed Gibbs sampling, used to
//! cluster applications into topic-based peer groups from their
//! descriptions alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::peergroup::{GroupingRun, PeerGroup, Strategy};

pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_ITERATIONS: usize = 1000;
/// Default topic-membership threshold: a document dominated by one topic
/// among four or more assigns to exactly that topic.
pub const DEFAULT_ASSIGNMENT_THRESHOLD: f64 = 0.25;

/// A trained topic model: smoothed topic-word matrix, per-document topic
/// proportions, and the final assignment counts they were derived from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LdaModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub vocabulary: Vec<String>,
    pub doc_ids: Vec<String>,
    /// K x V, each row sums to 1.
    pub topic_word: Vec<Vec<f64>>,
    /// D x K, each row sums to 1.
    pub doc_topic: Vec<Vec<f64>>,
    pub topic_word_counts: Vec<Vec<u64>>,
    pub doc_topic_counts: Vec<Vec<u64>>,
    pub topic_totals: Vec<u64>,
    pub doc_lengths: Vec<u64>,
}

/// The collapsed Gibbs sampler state, exposed so callers (and tests) can
/// run sweeps incrementally and inspect count conservation.
#[derive(Debug)]
pub struct GibbsSampler {
    k: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
    vocabulary: Vec<String>,
    doc_ids: Vec<String>,
    /// Documents as vocabulary indices.
    docs: Vec<Vec<usize>>,
    /// Topic assignment per token position.
    assignments: Vec<Vec<usize>>,
    doc_topic: Vec<Vec<u64>>,
    topic_word: Vec<Vec<u64>>,
    topic_totals: Vec<u64>,
    sweeps_done: usize,
    rng: ChaCha8Rng,
}

impl GibbsSampler {
    /// Builds the sampler from `(doc id, tokens)` pairs. Requires K >= 2
    /// and a nonempty vocabulary; K larger than the document count is
    /// permitted with a warning.
    pub fn new(
        docs: &[(String, Vec<String>)],
        k: usize,
        alpha: Option<f64>,
        beta: f64,
        seed: u64,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::Config("topic count K must be at least 2".into()));
        }
        if beta <= 0.0 {
            return Err(Error::Config("beta must be positive".into()));
        }
        let vocabulary: Vec<String> = {
            let set: BTreeSet<&String> = docs.iter().flat_map(|(_, t)| t.iter()).collect();
            set.into_iter().cloned().collect()
        };
        if vocabulary.is_empty() {
            return Err(Error::Data(
                "no vocabulary: corpus is empty after preprocessing".into(),
            ));
        }
        if k > docs.len() {
            log::warn!("topic count {k} exceeds document count {}", docs.len());
        }
        let alpha = alpha.unwrap_or(50.0 / k as f64);
        if alpha <= 0.0 {
            return Err(Error::Config("alpha must be positive".into()));
        }

        let index: BTreeMap<&String, usize> = vocabulary.iter().zip(0..).collect();
        let doc_ids: Vec<String> = docs.iter().map(|(id, _)| id.clone()).collect();
        let docs_idx: Vec<Vec<usize>> = docs
            .iter()
            .map(|(_, tokens)| tokens.iter().map(|t| index[t]).collect())
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = vocabulary.len();
        let mut doc_topic = vec![vec![0u64; k]; docs_idx.len()];
        let mut topic_word = vec![vec![0u64; v]; k];
        let mut topic_totals = vec![0u64; k];
        let assignments: Vec<Vec<usize>> = docs_idx
            .iter()
            .enumerate()
            .map(|(d, words)| {
                words
                    .iter()
                    .map(|&w| {
                        let z = rng.gen_range(0..k);
                        doc_topic[d][z] += 1;
                        topic_word[z][w] += 1;
                        topic_totals[z] += 1;
                        z
                    })
                    .collect()
            })
            .collect();

        Ok(GibbsSampler {
            k,
            alpha,
            beta,
            seed,
            vocabulary,
            doc_ids,
            docs: docs_idx,
            assignments,
            doc_topic,
            topic_word,
            topic_totals,
            sweeps_done: 0,
            rng,
        })
    }

    /// One full Gibbs sweep over every token position.
    pub fn sweep(&mut self) {
        let v_beta = self.vocabulary.len() as f64 * self.beta;
        let mut weights = vec![0.0f64; self.k];
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.assignments[d][i];
                self.doc_topic[d][old] -= 1;
                self.topic_word[old][w] -= 1;
                self.topic_totals[old] -= 1;

                let mut total = 0.0;
                for (z, weight) in weights.iter_mut().enumerate() {
                    let p = (self.doc_topic[d][z] as f64 + self.alpha)
                        * (self.topic_word[z][w] as f64 + self.beta)
                        / (self.topic_totals[z] as f64 + v_beta);
                    *weight = p;
                    total += p;
                }
                let mut target = self.rng.gen::<f64>() * total;
                let mut new = self.k - 1;
                for (z, p) in weights.iter().enumerate() {
                    target -= p;
                    if target <= 0.0 {
                        new = z;
                        break;
                    }
                }

                self.assignments[d][i] = new;
                self.doc_topic[d][new] += 1;
                self.topic_word[new][w] += 1;
                self.topic_totals[new] += 1;
            }
        }
        self.sweeps_done += 1;
    }

    /// Total token count currently assigned across all topics; conserved
    /// by every sweep.
    pub fn assigned_tokens(&self) -> u64 {
        self.topic_totals.iter().sum()
    }

    pub fn corpus_tokens(&self) -> u64 {
        self.docs.iter().map(|d| d.len() as u64).sum()
    }

    /// Per-document assignment totals; each must equal the document length.
    pub fn doc_assignment_totals(&self) -> Vec<u64> {
        self.doc_topic.iter().map(|row| row.iter().sum()).collect()
    }

    /// Freezes the counts into a smoothed model.
    pub fn into_model(self) -> LdaModel {
        let v = self.vocabulary.len();
        let v_beta = v as f64 * self.beta;
        let k_alpha = self.k as f64 * self.alpha;

        let topic_word: Vec<Vec<f64>> = (0..self.k)
            .map(|z| {
                let denom = self.topic_totals[z] as f64 + v_beta;
                (0..v)
                    .map(|w| (self.topic_word[z][w] as f64 + self.beta) / denom)
                    .collect()
            })
            .collect();
        let doc_lengths: Vec<u64> = self.docs.iter().map(|d| d.len() as u64).collect();
        let doc_topic: Vec<Vec<f64>> = self
            .doc_topic
            .iter()
            .enumerate()
            .map(|(d, counts)| {
                let denom = doc_lengths[d] as f64 + k_alpha;
                counts
                    .iter()
                    .map(|&c| (c as f64 + self.alpha) / denom)
                    .collect()
            })
            .collect();

        LdaModel {
            k: self.k,
            alpha: self.alpha,
            beta: self.beta,
            iterations: self.sweeps_done,
            seed: self.seed,
            vocabulary: self.vocabulary,
            doc_ids: self.doc_ids,
            topic_word,
            doc_topic,
            topic_word_counts: self.topic_word,
            doc_topic_counts: self.doc_topic,
            topic_totals: self.topic_totals,
            doc_lengths,
        }
    }
}

/// Trains a topic model with `iterations` full Gibbs sweeps. Deterministic
/// for a fixed seed.
pub fn lda_train(
    docs: &[(String, Vec<String>)],
    k: usize,
    alpha: Option<f64>,
    beta: f64,
    iterations: usize,
    seed: u64,
) -> Result<LdaModel> {
    let mut sampler = GibbsSampler::new(docs, k, alpha, beta, seed)?;
    for _ in 0..iterations {
        sampler.sweep();
    }
    Ok(sampler.into_model())
}

/// The `n` highest-probability words of topic `k`, descending, ties broken
/// lexicographically.
pub fn lda_top_words(model: &LdaModel, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
    if topic >= model.k {
        return Err(Error::Config(format!(
            "topic {topic} out of range (K = {})",
            model.k
        )));
    }
    let mut words: Vec<(String, f64)> = model
        .vocabulary
        .iter()
        .cloned()
        .zip(model.topic_word[topic].iter().copied())
        .collect();
    words.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    words.truncate(n);
    Ok(words)
}

/// A document's topic mixture and the topics above the threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopicAssignment {
    pub app_id: String,
    pub probabilities: Vec<f64>,
    pub assigned: Vec<usize>,
}

/// The topic assignment for one document of the model.
pub fn topic_assignment(model: &LdaModel, doc_index: usize, threshold: f64) -> TopicAssignment {
    let probabilities = model.doc_topic[doc_index].clone();
    let assigned = probabilities
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > threshold)
        .map(|(k, _)| k)
        .collect();
    TopicAssignment {
        app_id: model.doc_ids[doc_index].clone(),
        probabilities,
        assigned,
    }
}

/// One peer group per topic, containing every app whose topic probability
/// strictly exceeds the threshold. Apps may land in several groups or in
/// none; uncovered apps are listed in the run.
pub fn groups_by_lda(
    model: &LdaModel,
    corpus: &Corpus,
    assignment_threshold: f64,
) -> Result<GroupingRun> {
    let doc_index: BTreeMap<&str, usize> = model
        .doc_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    for id in corpus.ids() {
        if !doc_index.contains_key(id) {
            return Err(Error::Data(format!(
                "model does not cover corpus document '{id}'"
            )));
        }
    }

    let mut members: Vec<BTreeSet<String>> = vec![BTreeSet::new(); model.k];
    for id in corpus.ids() {
        let d = doc_index[id];
        for (k, p) in model.doc_topic[d].iter().enumerate() {
            if *p > assignment_threshold {
                members[k].insert(id.to_string());
            }
        }
    }

    let groups: Vec<PeerGroup> = members
        .into_iter()
        .enumerate()
        .filter(|(_, members)| !members.is_empty())
        .map(|(k, members)| {
            let top = lda_top_words(model, k, 3)
                .expect("topic in range")
                .into_iter()
                .map(|(w, _)| w)
                .collect::<Vec<_>>()
                .join(" ");
            PeerGroup {
                group_id: format!("lda:{k:03}"),
                strategy: Strategy::Lda,
                anchor: None,
                members,
                label: format!("topic {k}: {top}"),
            }
        })
        .collect();

    GroupingRun::new(Strategy::Lda, groups, corpus.ids().map(|s| s.to_string()))
}

impl LdaModel {
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).expect("model serializes");
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Data(format!("{}: invalid model dump: {e}", path.display())))
    }
}
