//! Text models over application descriptions: the shared preprocessing
//! pipeline, a supervised Naive Bayes category classifier, and
//! unsupervised LDA topic clustering. Both classifiers produce peer
//! grouping runs with the same shape as the metadata-based strategies.

pub mod lda;
pub mod naive_bayes;
pub mod preprocess;

use crate::corpus::Corpus;
use crate::error::Result;
use crate::peergroup::{GroupingRun, PeerGroup, Strategy};

pub use lda::{
    groups_by_lda, lda_top_words, lda_train, topic_assignment, GibbsSampler, LdaModel,
    TopicAssignment, DEFAULT_ASSIGNMENT_THRESHOLD, DEFAULT_BETA, DEFAULT_ITERATIONS,
};
pub use naive_bayes::{nb_train, Evaluation, NaiveBayesModel};
pub use preprocess::{preprocess, stem, TokenPipelineConfig, DEFAULT_STOPWORDS};

/// `(app id, preprocessed tokens)` for every app, in id order. The common
/// input for LDA training over a corpus.
pub fn tokenized_descriptions(
    corpus: &Corpus,
    cfg: &TokenPipelineConfig,
) -> Vec<(String, Vec<String>)> {
    corpus
        .apps()
        .map(|app| (app.app_id.clone(), preprocess(&app.description, cfg)))
        .collect()
}

/// `(category label, description)` pairs for supervised training.
pub fn labeled_descriptions(corpus: &Corpus) -> Vec<(String, String)> {
    corpus
        .apps()
        .map(|app| (app.category.clone(), app.description.clone()))
        .collect()
}

/// Partitions the corpus by the classifier's predicted category: same
/// shape as the category strategy, but labels come from text.
pub fn groups_by_naive_bayes(model: &NaiveBayesModel, corpus: &Corpus) -> Result<GroupingRun> {
    let mut members: std::collections::BTreeMap<String, std::collections::BTreeSet<String>> =
        Default::default();
    for app in corpus.apps() {
        let (label, _) = model.classify(&app.description);
        members.entry(label).or_default().insert(app.app_id.clone());
    }
    let groups = members
        .into_iter()
        .map(|(label, members)| PeerGroup {
            group_id: format!("nb:{label}"),
            strategy: Strategy::NaiveBayes,
            anchor: None,
            members,
            label,
        })
        .collect();
    GroupingRun::new(
        Strategy::NaiveBayes,
        groups,
        corpus.ids().map(|s| s.to_string()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_synthetic, AppRecord, SyntheticSpec};

    #[test]
    fn nb_grouping_is_a_partition() {
        let spec = SyntheticSpec::new(100, 4, 21);
        let (corpus, truth) = generate_synthetic(&spec).unwrap();
        let cfg = TokenPipelineConfig::default();
        let model = nb_train(&labeled_descriptions(&corpus), &cfg).unwrap();
        let run = groups_by_naive_bayes(&model, &corpus).unwrap();

        for app in corpus.apps() {
            assert_eq!(run.groups_of(&app.app_id).count(), 1);
        }
        assert!(run.unassigned.is_empty());

        // Group-private vocabularies make the partition match the planted one.
        for app in corpus.apps() {
            let gid: Vec<&str> = run.groups_of(&app.app_id).collect();
            assert_eq!(gid[0], format!("nb:{}", truth.group_of[&app.app_id]));
        }
    }

    #[test]
    fn single_class_model_groups_everything_together() {
        let records = vec![
            {
                let mut a = AppRecord::new("x");
                a.description = "lorem ipsum dolor".into();
                a
            },
            {
                let mut a = AppRecord::new("y");
                a.description = "totally different words".into();
                a
            },
        ];
        let corpus = Corpus::from_records(records, "t");
        let model = nb_train(
            &[("only".to_string(), "lorem ipsum".to_string())],
            &TokenPipelineConfig::default(),
        )
        .unwrap();
        let run = groups_by_naive_bayes(&model, &corpus).unwrap();
        assert_eq!(run.len(), 1);
        assert_eq!(run.groups().next().unwrap().size(), 2);
    }
}
