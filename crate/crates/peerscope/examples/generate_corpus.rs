//! Generate a seeded synthetic corpus with planted over-privileged
//! outliers and write it to disk together with its ground truth, catalog
//! and API map.
//!
//! ```bash
//! cargo run -p peerscope --example generate_corpus
//! ```

use peerscope::corpus::{
    generate_synthetic, save_corpus, synthetic_api_map, synthetic_catalog, SyntheticSpec,
};

fn main() -> peerscope::Result<()> {
    let spec = SyntheticSpec {
        outlier_fraction: 0.05,
        spurious_perms_per_outlier: 3,
        ..SyntheticSpec::new(2000, 8, 42)
    };
    let (corpus, truth) = generate_synthetic(&spec)?;

    let dir = std::env::temp_dir().join("peerscope-demo");
    std::fs::create_dir_all(&dir).expect("temp dir");
    save_corpus(&corpus, &dir.join("corpus.jsonl"))?;
    synthetic_catalog(&corpus).save(&dir.join("catalog.json"))?;
    synthetic_api_map(&corpus).save(&dir.join("api_map.json"))?;
    std::fs::write(
        dir.join("truth.json"),
        serde_json::to_string_pretty(&truth).expect("serializable"),
    )
    .expect("writable");

    println!(
        "wrote {} apps across {} groups to {}",
        corpus.len(),
        corpus.category_set.len(),
        dir.display()
    );
    println!("planted outliers: {}", truth.outliers.len());
    let (first, spurious) = truth.outliers.iter().next().expect("outliers planted");
    println!(
        "example: {} carries {} foreign permissions: {:?}",
        first,
        spurious.len(),
        spurious
    );
    Ok(())
}
