//! Cluster applications into topic-based peer groups with LDA: train a
//! topic model over the descriptions, print each topic's top words, and
//! build the (possibly overlapping) topic groups.
//!
//! ```bash
//! cargo run -p peerscope --example topic_clusters
//! ```

use peerscope::corpus::{generate_synthetic, SyntheticSpec};
use peerscope::textmodels::{
    groups_by_lda, lda_top_words, lda_train, tokenized_descriptions, TokenPipelineConfig,
    DEFAULT_ASSIGNMENT_THRESHOLD,
};

fn main() -> peerscope::Result<()> {
    let (corpus, _) = generate_synthetic(&SyntheticSpec::new(300, 3, 5))?;
    let docs = tokenized_descriptions(&corpus, &TokenPipelineConfig::default());

    let model = lda_train(&docs, 3, None, 0.01, 400, 17)?;
    for k in 0..model.k {
        let words: Vec<String> = lda_top_words(&model, k, 8)?
            .into_iter()
            .map(|(w, p)| format!("{w} ({p:.3})"))
            .collect();
        println!("topic {k}: {}", words.join(", "));
    }

    let run = groups_by_lda(&model, &corpus, DEFAULT_ASSIGNMENT_THRESHOLD)?;
    println!("\ntopic groups at threshold {DEFAULT_ASSIGNMENT_THRESHOLD}:");
    for group in run.groups() {
        println!(
            "  {:<10} {:>4} members  [{}]",
            group.group_id,
            group.size(),
            group.label
        );
    }
    println!("apps in no topic group: {}", run.unassigned.len());
    Ok(())
}
