//! Score a small market snapshot against related-items peer groups and
//! print the ranked triage table.
//!
//! ```bash
//! cargo run -p peerscope --example score_market
//! ```

use peerscope::demo::{demo_catalog, demo_corpus};
use peerscope::peergroup::groups_by_related;
use peerscope::ratio::Ratio;
use peerscope::scoring::{rank, score_corpus, ScoringConfig};

fn main() -> peerscope::Result<()> {
    let corpus = demo_corpus();
    let catalog = demo_catalog();

    // Each app is compared against the group formed by its related items.
    let run = groups_by_related(&corpus);
    let cfg = ScoringConfig::new(&catalog).with_threshold(Ratio::new(1, 4)?);
    let reports = rank(score_corpus(&run, &corpus, &cfg)?);

    println!(
        "{:<28} {:>5}  {:<6}  unexpected privileges",
        "app", "score", "band"
    );
    println!("{}", "-".repeat(72));
    for report in &reports {
        let privileges: Vec<&str> = report
            .unexpected
            .iter()
            .map(|u| u.permission.as_str())
            .collect();
        println!(
            "{:<28} {:>5}  {:<6}  {}",
            report.app_id,
            report.score,
            report.color.to_string(),
            privileges.join(", ")
        );
    }
    Ok(())
}
