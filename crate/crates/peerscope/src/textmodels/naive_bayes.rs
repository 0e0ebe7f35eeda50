//! Multinomial Naive Bayes over description tokens with Laplace smoothing,
//! used to assign applications to categories from text alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textmodels::preprocess::{preprocess, TokenPipelineConfig};

/// Laplace smoothing constant.
const ALPHA: f64 = 1.0;

/// A trained classifier. Log likelihoods are dense over the training
/// vocabulary so that, per class, the likelihoods of all vocabulary tokens
/// sum to one exactly (up to float error).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    classes: Vec<String>,
    log_prior: Vec<f64>,
    /// Per class: token -> log P(token | class), over the full vocabulary.
    log_likelihood: Vec<BTreeMap<String, f64>>,
    vocabulary: BTreeSet<String>,
    pipeline: TokenPipelineConfig,
}

/// Trains a classifier from `(label, description)` pairs.
pub fn nb_train(
    labeled: &[(String, String)],
    cfg: &TokenPipelineConfig,
) -> Result<NaiveBayesModel> {
    cfg.validate()?;
    if labeled.is_empty() {
        return Err(Error::Data("empty training set".into()));
    }

    let mut vocabulary: BTreeSet<String> = BTreeSet::new();
    let mut class_docs: BTreeMap<&str, usize> = BTreeMap::new();
    let mut class_token_counts: BTreeMap<&str, BTreeMap<String, usize>> = BTreeMap::new();

    for (label, text) in labeled {
        *class_docs.entry(label).or_insert(0) += 1;
        let counts = class_token_counts.entry(label).or_default();
        for token in preprocess(text, cfg) {
            vocabulary.insert(token.clone());
            *counts.entry(token).or_insert(0) += 1;
        }
    }

    let classes: Vec<String> = class_docs.keys().map(|s| s.to_string()).collect();
    let total_docs = labeled.len() as f64;
    let v = vocabulary.len() as f64;

    let mut log_prior = Vec::with_capacity(classes.len());
    let mut log_likelihood = Vec::with_capacity(classes.len());
    for class in &classes {
        log_prior.push((class_docs[class.as_str()] as f64 / total_docs).ln());
        let counts = &class_token_counts[class.as_str()];
        let total_tokens: usize = counts.values().sum();
        let denom = total_tokens as f64 + ALPHA * v;
        let table: BTreeMap<String, f64> = vocabulary
            .iter()
            .map(|token| {
                let c = counts.get(token).copied().unwrap_or(0) as f64;
                (token.clone(), ((c + ALPHA) / denom).ln())
            })
            .collect();
        log_likelihood.push(table);
    }

    Ok(NaiveBayesModel {
        classes,
        log_prior,
        log_likelihood,
        vocabulary,
        pipeline: cfg.clone(),
    })
}

impl NaiveBayesModel {
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    pub fn log_likelihood(&self, class_index: usize) -> &BTreeMap<String, f64> {
        &self.log_likelihood[class_index]
    }

    pub fn pipeline(&self) -> &TokenPipelineConfig {
        &self.pipeline
    }

    /// Classifies a raw description. Returns the argmax label and the
    /// per-class log-posterior scores (unnormalized), aligned with
    /// `classes()`. Out-of-vocabulary tokens carry no evidence; ties go to
    /// the lexicographically first class.
    ///
    /// Tokens are aggregated into counts before summing, so the scores are
    /// exactly invariant under token permutation.
    pub fn classify(&self, description: &str) -> (String, Vec<f64>) {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for token in preprocess(description, &self.pipeline) {
            *counts.entry(token).or_insert(0) += 1;
        }
        let scores: Vec<f64> = (0..self.classes.len())
            .map(|c| {
                let table = &self.log_likelihood[c];
                self.log_prior[c]
                    + counts
                        .iter()
                        .filter_map(|(t, n)| table.get(t).map(|ll| *n as f64 * ll))
                        .sum::<f64>()
            })
            .collect();
        let mut best = 0;
        for (i, s) in scores.iter().enumerate() {
            if *s > scores[best] {
                best = i;
            }
        }
        (self.classes[best].clone(), scores)
    }

    /// Accuracy and confusion matrix over a labeled test set.
    pub fn evaluate(&self, test: &[(String, String)]) -> Result<Evaluation> {
        if test.is_empty() {
            return Err(Error::Data("empty test set".into()));
        }
        let mut confusion: BTreeMap<(String, String), usize> = BTreeMap::new();
        let mut correct = 0usize;
        for (actual, text) in test {
            let (predicted, _) = self.classify(text);
            if predicted == *actual {
                correct += 1;
            }
            *confusion.entry((actual.clone(), predicted)).or_insert(0) += 1;
        }
        Ok(Evaluation {
            accuracy: correct as f64 / test.len() as f64,
            confusion,
        })
    }

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

/// Result of evaluating a classifier on labeled data.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub accuracy: f64,
    /// (actual, predicted) -> count.
    pub confusion: BTreeMap<(String, String), usize>,
}
