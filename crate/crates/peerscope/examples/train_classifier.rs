//! Train the Naive Bayes category classifier on a 60/40 split and print
//! the held-out accuracy with the confusion matrix.
//!
//! ```bash
//! cargo run -p peerscope --example train_classifier
//! ```

use rand::seq::SliceRandom;
use rand::SeedableRng;

use peerscope::corpus::{generate_synthetic, SyntheticSpec};
use peerscope::textmodels::{nb_train, TokenPipelineConfig};

fn main() -> peerscope::Result<()> {
    let (corpus, _) = generate_synthetic(&SyntheticSpec::new(1000, 5, 99))?;

    let mut labeled: Vec<(String, String)> = corpus
        .apps()
        .map(|a| (a.category.clone(), a.description.clone()))
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    labeled.shuffle(&mut rng);
    let (train, test) = labeled.split_at((labeled.len() as f64 * 0.6) as usize);

    let model = nb_train(train, &TokenPipelineConfig::default())?;
    let eval = model.evaluate(test)?;

    println!(
        "trained on {} docs, {} classes, vocabulary {}",
        train.len(),
        model.classes().len(),
        model.vocabulary().len()
    );
    println!("held-out accuracy: {:.4}\n", eval.accuracy);

    println!("confusion (actual -> predicted):");
    for ((actual, predicted), count) in &eval.confusion {
        let marker = if actual == predicted {
            ""
        } else {
            "  <-- miss"
        };
        println!("  {actual} -> {predicted}: {count}{marker}");
    }

    let (label, _) = model.classify("wabxaa wabxab wabxac");
    println!("\nclassify a fresh snippet of group-1 vocabulary: {label}");
    Ok(())
}
