//! Build peer groups from developer categories and from related-items
//! lists, and print the group-size histogram for each strategy.
//!
//! ```bash
//! cargo run -p peerscope --example peer_groups
//! ```

use peerscope::corpus::{generate_synthetic, SyntheticSpec};
use peerscope::peergroup::{group_size_histogram, groups_by_category, groups_by_related};

fn main() -> peerscope::Result<()> {
    let (corpus, _) = generate_synthetic(&SyntheticSpec::new(400, 6, 7))?;

    let by_category = groups_by_category(&corpus);
    println!(
        "category strategy: {} groups (a partition)",
        by_category.len()
    );
    for group in by_category.groups() {
        println!("  {:<24} {} members", group.label, group.size());
    }

    let by_related = groups_by_related(&corpus);
    println!(
        "\nrelated-items strategy: {} groups (one per app, overlapping)",
        by_related.len()
    );
    println!("group-size histogram:");
    for (size, count) in group_size_histogram(&by_related) {
        println!("  size {size:>3}: {count} groups");
    }
    Ok(())
}
