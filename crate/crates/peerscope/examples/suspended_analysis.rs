//! Relate unexpectedness scores to market suspensions: draw a balanced
//! live/suspended sample and tabulate the suspended share per score,
//! plus the score x group-size bubble table.
//!
//! ```bash
//! cargo run -p peerscope --example suspended_analysis
//! ```

use peerscope::corpus::{generate_synthetic, synthetic_catalog, SuspensionBias, SyntheticSpec};
use peerscope::experiments::{spearman, suspended_correlation, SampleSpec};
use peerscope::peergroup::groups_by_category;
use peerscope::ratio::Ratio;
use peerscope::scoring::ScoringConfig;

fn main() -> peerscope::Result<()> {
    let spec = SyntheticSpec {
        outlier_fraction: 0.08,
        spurious_perms_per_outlier: 3,
        suspension_bias: SuspensionBias::new(vec![(0, 0.05), (1, 0.4), (2, 0.7), (3, 0.95)])?,
        ..SyntheticSpec::new(5000, 8, 2024)
    };
    let (corpus, _) = generate_synthetic(&spec)?;
    let catalog = synthetic_catalog(&corpus);
    let run = groups_by_category(&corpus);
    let cfg = ScoringConfig::new(&catalog).with_threshold(Ratio::new(1, 20)?);

    let sample = SampleSpec {
        n_live: 300,
        n_suspended: 300,
        seed: 4,
    };
    let result = suspended_correlation(&run, &corpus, &cfg, &sample)?;

    println!("{:>7} {:>6} {:>14}", "score", "n", "% suspended");
    let mut pairs = Vec::new();
    for row in &result.rows {
        let pct = row.pct_suspended.unwrap_or(0.0);
        println!("{:>7} {:>6} {:>13.1}%", row.axis, row.n, pct);
        pairs.push((row.axis.parse::<f64>().unwrap_or(0.0), pct));
    }
    println!(
        "\nSpearman rho(score, % suspended) = {:.3}",
        spearman(&pairs)
    );

    println!(
        "\nbubble table (score, group size) cells: {}",
        result.bubble.len()
    );
    for cell in result.bubble.iter().take(5) {
        println!(
            "  score {:>2} size {:>4}: {:>5.1}% suspended over {} apps",
            cell.score, cell.group_size, cell.pct_suspended, cell.n
        );
    }
    Ok(())
}
