//! Compare the four privilege estimates: manifest-requested permissions,
//! permissions statically estimated from API calls, their intersection,
//! and the raw API-call universe.
//!
//! ```bash
//! cargo run -p peerscope --example privilege_modes
//! ```

use peerscope::corpus::{generate_synthetic, synthetic_api_map, synthetic_catalog, SyntheticSpec};
use peerscope::experiments::privilege_mode_comparison;
use peerscope::peergroup::groups_by_category;
use peerscope::privilege::{privileges_of, PrivilegeKind};
use peerscope::ratio::Ratio;
use peerscope::scoring::ScoringConfig;

fn main() -> peerscope::Result<()> {
    let spec = SyntheticSpec {
        outlier_fraction: 0.05,
        ..SyntheticSpec::new(3000, 6, 9)
    };
    let (corpus, _) = generate_synthetic(&spec)?;
    let catalog = synthetic_catalog(&corpus);
    let api_map = synthetic_api_map(&corpus);

    // One app's privileges under each estimate.
    let app = corpus.apps().next().expect("nonempty corpus");
    for mode in [
        PrivilegeKind::Requested,
        PrivilegeKind::Estimated,
        PrivilegeKind::Intersection,
        PrivilegeKind::ApiCallsRaw,
    ] {
        let set = privileges_of(app, mode, &catalog, Some(&api_map))?;
        println!("{}: {} on {} entries", app.app_id, mode, set.len());
    }

    // Clean percentage per mode under the same grouping and threshold.
    let run = groups_by_category(&corpus);
    let cfg = ScoringConfig::new(&catalog)
        .with_threshold(Ratio::new(1, 20)?)
        .with_api_map(&api_map);
    let modes = [
        PrivilegeKind::Requested,
        PrivilegeKind::Estimated,
        PrivilegeKind::Intersection,
    ];
    let result = privilege_mode_comparison(&run, &corpus, &cfg, &modes)?;
    println!("\n{:>14} {:>12}", "mode", "% clean");
    for row in &result.rows {
        println!("{:>14} {:>11.2}%", row.axis, row.pct_clean);
    }
    Ok(())
}
