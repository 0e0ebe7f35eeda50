//! Extract each peer group's baseline: the privileges common enough to be
//! expected for the functionality. A developer entering the group can
//! treat the baseline as the set to aim for.
//!
//! ```bash
//! cargo run -p peerscope --example baseline_privileges
//! ```

use peerscope::demo::{demo_catalog, demo_corpus};
use peerscope::peergroup::groups_by_category;
use peerscope::ratio::Ratio;
use peerscope::scoring::{baseline_privileges, compute_frequencies, ScoringConfig};

fn main() -> peerscope::Result<()> {
    let corpus = demo_corpus();
    let catalog = demo_catalog();
    let run = groups_by_category(&corpus);
    let cfg = ScoringConfig::new(&catalog).with_threshold(Ratio::new(1, 4)?);

    let frequencies = compute_frequencies(&run, &corpus, &cfg)?;
    for (group_id, freq) in &frequencies {
        let baseline = baseline_privileges(freq, &cfg);
        println!("{group_id} ({} members)", freq.n_g);
        println!("  baseline: {:?}", baseline);
        let rare: Vec<&String> = freq
            .counts
            .keys()
            .filter(|p| !baseline.contains(*p))
            .collect();
        println!("  rare:     {rare:?}");
    }
    Ok(())
}
