//! Description preprocessing: lowercase, split on non-alphabetic
//! characters, stopword and length filters, deterministic suffix-stripping
//! stemmer, optional dictionary filter.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Built-in English stopword list used when no file is supplied.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "about", "after", "all", "also", "an", "and", "any", "are", "as", "at", "be", "because",
    "been", "but", "by", "can", "could", "did", "do", "does", "for", "from", "get", "had", "has",
    "have", "he", "her", "him", "his", "how", "if", "in", "into", "is", "it", "its", "just",
    "like", "may", "more", "most", "my", "no", "not", "now", "of", "on", "once", "one", "only",
    "or", "other", "our", "out", "over", "she", "should", "so", "some", "such", "than", "that",
    "the", "their", "them", "then", "there", "these", "they", "this", "those", "through", "to",
    "too", "under", "up", "use", "very", "was", "we", "well", "were", "what", "when", "where",
    "which", "while", "who", "why", "will", "with", "would", "you", "your",
];

/// Configuration for the token pipeline. The stemmer itself is fixed; all
/// other stages are data-driven and deterministic for a fixed config.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenPipelineConfig {
    pub stopwords: BTreeSet<String>,
    pub min_token_len: usize,
    /// When present, only stemmed tokens found in the dictionary survive.
    pub dictionary: Option<BTreeSet<String>>,
}

impl Default for TokenPipelineConfig {
    fn default() -> Self {
        TokenPipelineConfig {
            stopwords: DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            min_token_len: 3,
            dictionary: None,
        }
    }
}

impl TokenPipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_token_len == 0 {
            return Err(Error::Config("min_token_len must be at least 1".into()));
        }
        Ok(())
    }

    /// Replaces the stopword list with the contents of a one-word-per-line
    /// file.
    pub fn with_stopword_file(mut self, path: &Path) -> Result<Self> {
        self.stopwords = load_word_list(path)?;
        Ok(self)
    }

    pub fn with_dictionary_file(mut self, path: &Path) -> Result<Self> {
        self.dictionary = Some(load_word_list(path)?);
        Ok(self)
    }
}

/// Loads a UTF-8 word list, one word per line; blank lines are skipped.
pub fn load_word_list(path: &Path) -> Result<BTreeSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

/// Deterministic suffix-stripping stemmer. A light replacement for a full
/// lemmatizer: strips plural endings, then at most one derivational
/// suffix, never leaving a stem shorter than three characters.
pub fn stem(token: &str) -> String {
    let mut t = token.to_string();

    // Plural pass.
    if t.ends_with("sses") {
        t.truncate(t.len() - 2);
    } else if t.ends_with("ies") && t.len() > 4 {
        t.truncate(t.len() - 3);
        t.push('y');
    } else if t.ends_with('s') && !t.ends_with("ss") && !t.ends_with("us") && t.len() > 3 {
        t.truncate(t.len() - 1);
    }

    // One derivational suffix, longest first.
    const SUFFIXES: &[&str] = &[
        "ization", "ational", "fulness", "iveness", "ation", "ment", "ness", "able", "ible", "ing",
        "ion", "ful", "est", "ed", "er", "ly",
    ];
    for suffix in SUFFIXES {
        if let Some(base) = t.strip_suffix(suffix) {
            if base.chars().count() >= 3 {
                t = base.to_string();
            }
            break;
        }
    }
    t
}

/// Runs the full pipeline, preserving token order:
/// lowercase -> split on non-alphabetic -> drop stopwords -> drop short
/// tokens -> stem -> dictionary filter (when configured).
pub fn preprocess(text: &str, cfg: &TokenPipelineConfig) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty())
        .filter(|t| !cfg.stopwords.contains(*t))
        .filter(|t| t.chars().count() >= cfg.min_token_len)
        .map(stem)
        .filter(|t| match &cfg.dictionary {
            Some(dict) => dict.contains(t),
            None => true,
        })
        .collect()
}
