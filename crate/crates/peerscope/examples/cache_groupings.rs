//! Cache a grouping run between pipeline passes: build groups once, save
//! them as JSONL, reload, and verify the scores are identical.
//!
//! ```bash
//! cargo run -p peerscope --example cache_groupings
//! ```

use peerscope::corpus::{generate_synthetic, synthetic_catalog, SyntheticSpec};
use peerscope::peergroup::{groups_by_related, GroupingRun};
use peerscope::ratio::Ratio;
use peerscope::scoring::{score_corpus, ScoringConfig};

fn main() -> peerscope::Result<()> {
    let spec = SyntheticSpec {
        outlier_fraction: 0.05,
        ..SyntheticSpec::new(500, 4, 314)
    };
    let (corpus, _) = generate_synthetic(&spec)?;
    let catalog = synthetic_catalog(&corpus);

    let run = groups_by_related(&corpus);
    let path = std::env::temp_dir().join("peerscope-groups.jsonl");
    run.save(&path)?;
    println!("cached {} groups to {}", run.len(), path.display());

    let reloaded = GroupingRun::load(&path, &corpus)?;
    assert_eq!(run, reloaded);

    let cfg = ScoringConfig::new(&catalog).with_threshold(Ratio::new(1, 20)?);
    let fresh = score_corpus(&run, &corpus, &cfg)?;
    let cached = score_corpus(&reloaded, &corpus, &cfg)?;
    assert_eq!(fresh, cached);
    println!(
        "scores from the cached run match: {} reports, {} flagged",
        cached.len(),
        cached.iter().filter(|r| r.score > 0.0).count()
    );
    Ok(())
}
