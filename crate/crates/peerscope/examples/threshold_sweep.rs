//! Sweep the relative-frequency threshold and watch the flagged fraction
//! grow: a small threshold flags almost nothing, a large one flags most
//! of the market.
//!
//! ```bash
//! cargo run -p peerscope --example threshold_sweep
//! ```

use peerscope::corpus::{generate_synthetic, synthetic_catalog, SyntheticSpec};
use peerscope::experiments::threshold_sweep;
use peerscope::peergroup::groups_by_category;
use peerscope::ratio::Ratio;
use peerscope::scoring::ScoringConfig;

fn main() -> peerscope::Result<()> {
    let spec = SyntheticSpec {
        outlier_fraction: 0.05,
        ..SyntheticSpec::new(3000, 6, 123)
    };
    let (corpus, truth) = generate_synthetic(&spec)?;
    let catalog = synthetic_catalog(&corpus);
    let run = groups_by_category(&corpus);
    let cfg = ScoringConfig::new(&catalog);

    let thresholds: Vec<Ratio> = ["0.01", "0.02", "0.05", "0.10", "0.25", "0.50"]
        .iter()
        .map(|s| s.parse())
        .collect::<peerscope::Result<_>>()?;
    let result = threshold_sweep(&run, &corpus, &cfg, &thresholds)?;

    println!(
        "{} apps, {} planted outliers ({:.1}%)",
        corpus.len(),
        truth.outliers.len(),
        100.0 * truth.outliers.len() as f64 / corpus.len() as f64
    );
    println!("{:>10} {:>12} {:>12}", "threshold", "% flagged", "% clean");
    for row in &result.rows {
        println!(
            "{:>10} {:>11.2}% {:>11.2}%",
            row.axis, row.pct_flagged, row.pct_clean
        );
    }
    Ok(())
}
