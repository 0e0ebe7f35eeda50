//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its runtime (visible under `cargo test -- --nocapture`). Budgets
//! are asserted, not just printed.
//!
//! Criteria:
//!   1. Golden scores on the hand-built two-group market fixture.
//!   2. Exact equivalence with a brute-force scoring oracle.
//!   3. Flagged fraction nondecreasing across thresholds (10k apps).
//!   4. Planted-outlier precision/recall and top-50 ranking.
//!   5. Intersection mode never scores above requested mode.
//!   6. Suspended share rises with the score (Spearman > 0.8).
//!   7. Naive Bayes separability on group-private vocabularies.
//!   8. LDA topic purity and seed determinism.
//!   9. Invariant spot checks (the full suite lives in the property tests).

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use peerscope::cli::{cmd_score, PipelineArgs, ScoreArgs};
use peerscope::corpus::{
    generate_synthetic, save_corpus, synthetic_api_map, synthetic_catalog, AppRecord, Corpus,
    PlantedTruth, SyntheticSpec,
};
use peerscope::demo::{demo_catalog, demo_corpus};
use peerscope::experiments::{spearman, suspended_correlation, threshold_sweep, SampleSpec};
use peerscope::peergroup::groups_by_category;
use peerscope::privilege::{
    intersect, normalize_requested, ApiPermissionMap, PermissionCatalog, PrivilegeKind,
    PrivilegeSet,
};
use peerscope::ratio::Ratio;
use peerscope::scoring::{rank, score_corpus, ScoringConfig};
use peerscope::textmodels::{
    lda_top_words, lda_train, nb_train, tokenized_descriptions, GibbsSampler, TokenPipelineConfig,
};

/// The shared evaluation corpus: 10k apps, 10 groups, 5% planted outliers
/// carrying 3 spurious permissions each, suspension bias rising with the
/// planted count.
fn evaluation_corpus() -> &'static (Corpus, PlantedTruth, PermissionCatalog, ApiPermissionMap) {
    static CORPUS: OnceLock<(Corpus, PlantedTruth, PermissionCatalog, ApiPermissionMap)> =
        OnceLock::new();
    CORPUS.get_or_init(|| {
        let spec = SyntheticSpec {
            outlier_fraction: 0.05,
            spurious_perms_per_outlier: 3,
            ..SyntheticSpec::new(10_000, 10, 0xC0FFEE)
        };
        let (corpus, truth) = generate_synthetic(&spec).expect("spec is feasible");
        let catalog = synthetic_catalog(&corpus);
        let api_map = synthetic_api_map(&corpus);
        (corpus, truth, catalog, api_map)
    })
}

fn pass(criterion: usize, detail: &str, elapsed: Duration, budget: Duration) {
    println!("ACCEPTANCE {criterion}: PASS — {detail} ({elapsed:.2?}, budget {budget:.0?})");
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

/// Criterion 1: the two reconstructed peer groups reproduce the expected
/// scores (0,0,1,3,3) and (0,1,2,2,3,3,3,4) and the exact unexpected
/// privilege sets through the score command at threshold 1/4.
#[test]
fn criterion_1_golden_fixture_scores() {
    let start = Instant::now();
    let budget = Duration::from_secs(1);

    let dir = tempfile::tempdir().unwrap();
    let corpus_path = dir.path().join("market.jsonl");
    let catalog_path = dir.path().join("catalog.json");
    save_corpus(&demo_corpus(), &corpus_path).unwrap();
    demo_catalog().save(&catalog_path).unwrap();

    let out_dir = dir.path().join("out");
    cmd_score(&ScoreArgs {
        pipeline: PipelineArgs {
            corpus: corpus_path,
            catalog: Some(catalog_path),
            api_map: None,
            strategy: "related".into(),
            mode: "requested".into(),
            threshold: "1/4".into(),
            min_group_size: 5,
            yellow_max: 2.0,
            aggregation: "max".into(),
            enable_lda: false,
            model: None,
            lda_topics: 2,
            lda_alpha: None,
            lda_beta: 0.01,
            lda_iterations: 10,
            assignment_threshold: 0.25,
            stopwords: None,
            dictionary: None,
            seed: 0,
            jobs: None,
            out_dir: out_dir.clone(),
        },
        format: "csv".into(),
        include_baseline: false,
    })
    .unwrap();

    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    let mut scores = std::collections::BTreeMap::new();
    let mut unexpected = std::collections::BTreeMap::new();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        scores.insert(fields[0].to_string(), fields[3].to_string());
        unexpected.insert(fields[0].to_string(), fields[4].to_string());
    }

    let expected: &[(&str, &str, &str)] = &[
        ("docs-pdfpowerpoint-viewer", "0", ""),
        ("pdfescape-free-pdf-editor", "0", ""),
        ("beeline-reader", "1", "webNavigation"),
        (
            "pdf-viewer",
            "3",
            "WebNavigation;webRequest;webRequestBlocking",
        ),
        (
            "chrome-office-viewer-beta",
            "3",
            "clipboardWrite;fileBrowserHandler;fileSystem",
        ),
        ("tab-manager", "0", ""),
        ("project-tab-manager", "1", "bookmarks"),
        ("awesome-tab-manager", "2", "bookmarks;unlimitedStorage"),
        ("toomanytabs-for-chrome", "2", "bookmarks;unlimitedStorage"),
        ("tabs-outliner", "3", "idle;notifications;storage"),
        ("tabman-tabs-manager", "3", "history;topsites;webNavigation"),
        (
            "fruumo-tab-manager",
            "3",
            "bookmarks;history;unlimitedStorage",
        ),
        (
            "session-box-tabs-manager",
            "4",
            "clipboardWrite;cookies;management;unlimitedStorage",
        ),
    ];
    assert_eq!(scores.len(), expected.len());
    for (id, score, privileges) in expected {
        assert_eq!(scores[*id], *score, "score of {id}");
        assert_eq!(unexpected[*id], *privileges, "unexpected set of {id}");
    }

    // Per-group score multisets.
    let pdf: Vec<&str> = [
        "docs-pdfpowerpoint-viewer",
        "pdfescape-free-pdf-editor",
        "beeline-reader",
        "pdf-viewer",
        "chrome-office-viewer-beta",
    ]
    .iter()
    .map(|id| scores[*id].as_str())
    .collect();
    let mut pdf_sorted = pdf.clone();
    pdf_sorted.sort_unstable();
    assert_eq!(pdf_sorted, vec!["0", "0", "1", "3", "3"]);
    let tab: Vec<&str> = [
        "tab-manager",
        "project-tab-manager",
        "awesome-tab-manager",
        "toomanytabs-for-chrome",
        "tabs-outliner",
        "tabman-tabs-manager",
        "fruumo-tab-manager",
        "session-box-tabs-manager",
    ]
    .iter()
    .map(|id| scores[*id].as_str())
    .collect();
    let mut tab_sorted = tab.clone();
    tab_sorted.sort_unstable();
    assert_eq!(tab_sorted, vec!["0", "1", "2", "2", "3", "3", "3", "4"]);

    pass(
        1,
        "golden fixture scores and unexpected sets exact",
        start.elapsed(),
        budget,
    );
}

/// Criterion 2: for 1000 random groups (size <= 50, random privilege sets,
/// random rational thresholds) the implementation matches a literal
/// brute-force unexpectedness recount exactly.
#[test]
fn criterion_2_bruteforce_oracle_equivalence() {
    let start = Instant::now();
    let budget = Duration::from_secs(10);

    let perm_names: Vec<String> = (0..12).map(|i| format!("perm-{i:02}")).collect();
    let catalog = PermissionCatalog::covering(perm_names.iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_001);

    for case in 0..1000 {
        let n_members = rng.gen_range(1..=50usize);
        let members: Vec<BTreeSet<usize>> = (0..n_members)
            .map(|_| {
                let k = rng.gen_range(0..=6usize);
                (0..k).map(|_| rng.gen_range(0..perm_names.len())).collect()
            })
            .collect();
        let t_den = rng.gen_range(1..=40u64);
        let t_num = rng.gen_range(1..=t_den);

        let records: Vec<AppRecord> = members
            .iter()
            .enumerate()
            .map(|(i, perms)| {
                let mut a = AppRecord::new(format!("app-{i:03}"));
                a.category = "g".into();
                a.declared_permissions = perms.iter().map(|&p| perm_names[p].clone()).collect();
                a
            })
            .collect();
        let corpus = Corpus::from_records(records, "oracle");
        let cfg = ScoringConfig::new(&catalog).with_threshold(Ratio::new(t_num, t_den).unwrap());
        let run = groups_by_category(&corpus);
        let reports = score_corpus(&run, &corpus, &cfg).unwrap();

        // Literal re-implementation: recount holders per privilege, exact
        // rational comparison, unit weights.
        for (i, report) in reports.iter().enumerate() {
            let mut expected = 0.0;
            for &p in &members[i] {
                let n_gp = members.iter().filter(|m| m.contains(&p)).count() as u128;
                if n_gp * (t_den as u128) < (t_num as u128) * (n_members as u128) {
                    expected += 1.0;
                }
            }
            assert_eq!(
                report.score, expected,
                "case {case}, app {i}: {} vs oracle {expected}",
                report.score
            );
        }
    }

    pass(
        2,
        "1000 random groups equal the brute-force oracle",
        start.elapsed(),
        budget,
    );
}

/// Criterion 3: on the 10k-app corpus the flagged fraction is
/// nondecreasing across thresholds 0.01 .. 0.50.
#[test]
fn criterion_3_threshold_monotonicity() {
    let (corpus, _, catalog, _) = evaluation_corpus();
    let start = Instant::now();
    let budget = Duration::from_secs(30);

    let run = groups_by_category(corpus);
    let cfg = ScoringConfig::new(catalog);
    let thresholds: Vec<Ratio> = ["0.01", "0.02", "0.05", "0.10", "0.20", "0.50"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let result = threshold_sweep(&run, corpus, &cfg, &thresholds).unwrap();
    assert_eq!(result.rows.len(), 6);
    for pair in result.rows.windows(2) {
        assert!(
            pair[0].pct_flagged <= pair[1].pct_flagged,
            "{} flagged {}% > {} flagged {}%",
            pair[0].axis,
            pair[0].pct_flagged,
            pair[1].axis,
            pair[1].pct_flagged
        );
    }

    pass(
        3,
        "flagged fraction nondecreasing over 6 thresholds",
        start.elapsed(),
        budget,
    );
}

/// Criterion 4: with threshold 0.05 and the category strategy, flagged
/// apps recover the planted outliers with precision and recall >= 0.95,
/// and at least 45 of the top-50 ranks are planted outliers.
#[test]
fn criterion_4_planted_outlier_recovery() {
    let (corpus, truth, catalog, _) = evaluation_corpus();
    let start = Instant::now();
    let budget = Duration::from_secs(60);

    let run = groups_by_category(corpus);
    let cfg = ScoringConfig::new(catalog).with_threshold(Ratio::new(1, 20).unwrap());
    let reports = rank(score_corpus(&run, corpus, &cfg).unwrap());

    let flagged: BTreeSet<&str> = reports
        .iter()
        .filter(|r| r.score > 0.0)
        .map(|r| r.app_id.as_str())
        .collect();
    let planted: BTreeSet<&str> = truth.outliers.keys().map(|s| s.as_str()).collect();
    assert_eq!(planted.len(), 500);

    let true_positives = flagged.intersection(&planted).count();
    let precision = true_positives as f64 / flagged.len().max(1) as f64;
    let recall = true_positives as f64 / planted.len() as f64;
    assert!(precision >= 0.95, "precision {precision}");
    assert!(recall >= 0.95, "recall {recall}");

    let top50_outliers = reports
        .iter()
        .take(50)
        .filter(|r| planted.contains(r.app_id.as_str()))
        .count();
    assert!(
        top50_outliers >= 45,
        "only {top50_outliers} outliers in the top 50"
    );

    pass(
        4,
        &format!(
            "precision {precision:.3}, recall {recall:.3}, {top50_outliers}/50 outliers on top"
        ),
        start.elapsed(),
        budget,
    );
}

/// Criterion 5: requested privileges contain the intersection estimate for
/// every app, every per-app score satisfies score(intersection) <=
/// score(requested), and the clean percentage is at least as high under
/// intersection.
#[test]
fn criterion_5_privilege_mode_ordering() {
    let (corpus, _, catalog, api_map) = evaluation_corpus();
    let start = Instant::now();
    let budget = Duration::from_secs(60);

    let run = groups_by_category(corpus);
    let threshold = Ratio::new(1, 20).unwrap();
    let cfg_requested = ScoringConfig::new(catalog).with_threshold(threshold);
    let cfg_intersection = ScoringConfig::new(catalog)
        .with_threshold(threshold)
        .with_mode(PrivilegeKind::Intersection)
        .with_api_map(api_map);

    // Set containment per app.
    for app in corpus.apps() {
        let requested = normalize_requested(&app.declared_permissions, catalog);
        let estimated = peerscope::privilege::estimate_from_api_calls(&app.api_calls, api_map).0;
        let inter = intersect(&requested, &estimated).unwrap();
        assert!(
            inter.permissions.is_subset(&requested.permissions),
            "{}",
            app.app_id
        );
    }

    let by_requested = score_corpus(&run, corpus, &cfg_requested).unwrap();
    let by_intersection = score_corpus(&run, corpus, &cfg_intersection).unwrap();
    assert_eq!(by_requested.len(), by_intersection.len());
    for (req, int) in by_requested.iter().zip(&by_intersection) {
        assert_eq!(req.app_id, int.app_id);
        assert!(
            int.score <= req.score,
            "{}: intersection {} > requested {}",
            req.app_id,
            int.score,
            req.score
        );
    }

    let clean_requested = by_requested.iter().filter(|r| r.score == 0.0).count();
    let clean_intersection = by_intersection.iter().filter(|r| r.score == 0.0).count();
    assert!(clean_intersection >= clean_requested);

    pass(
        5,
        &format!(
            "score(intersection) <= score(requested) for all {} apps; clean {} vs {}",
            by_requested.len(),
            clean_intersection,
            clean_requested
        ),
        start.elapsed(),
        budget,
    );
}

/// Criterion 6: on a balanced 500+500 live/suspended sample with a fixed
/// seed, the per-score suspended percentage correlates with the score at
/// Spearman rho > 0.8.
#[test]
fn criterion_6_suspended_correlation() {
    let (corpus, _, catalog, _) = evaluation_corpus();
    let start = Instant::now();
    let budget = Duration::from_secs(30);

    let run = groups_by_category(corpus);
    let cfg = ScoringConfig::new(catalog).with_threshold(Ratio::new(1, 20).unwrap());
    let sample = SampleSpec {
        n_live: 500,
        n_suspended: 500,
        seed: 7,
    };
    let result = suspended_correlation(&run, corpus, &cfg, &sample).unwrap();

    let pairs: Vec<(f64, f64)> = result
        .rows
        .iter()
        .map(|row| (row.axis.parse::<f64>().unwrap(), row.pct_suspended.unwrap()))
        .collect();
    assert!(
        pairs.len() >= 2,
        "need at least two score levels, got {pairs:?}"
    );
    let rho = spearman(&pairs);
    assert!(rho > 0.8, "Spearman rho {rho} over {pairs:?}");

    pass(
        6,
        &format!("Spearman rho {rho:.3} over {} score levels", pairs.len()),
        start.elapsed(),
        budget,
    );
}

/// Criterion 7: a 60/40 split over the group-private vocabularies trains a
/// Naive Bayes classifier with held-out accuracy >= 0.95.
#[test]
fn criterion_7_nb_separability() {
    let (corpus, _, _, _) = evaluation_corpus();
    let start = Instant::now();
    let budget = Duration::from_secs(30);

    let mut labeled: Vec<(String, String)> = corpus
        .apps()
        .map(|a| (a.category.clone(), a.description.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    labeled.shuffle(&mut rng);
    let n_train = (labeled.len() as f64 * 0.6).round() as usize;
    let (train, test) = labeled.split_at(n_train);

    let model = nb_train(train, &TokenPipelineConfig::default()).unwrap();
    let eval = model.evaluate(test).unwrap();
    assert!(eval.accuracy >= 0.95, "accuracy {}", eval.accuracy);

    pass(
        7,
        &format!("held-out accuracy {:.4} on a 60/40 split", eval.accuracy),
        start.elapsed(),
        budget,
    );
}

/// Criterion 8: K=2 LDA on a 500-document corpus drawn from two disjoint
/// vocabularies reaches top-10 word purity >= 0.9 per topic after 1000
/// sweeps, and identical seeds give identical models.
#[test]
fn criterion_8_lda_purity_and_determinism() {
    let start = Instant::now();
    let budget = Duration::from_secs(60);

    let spec = SyntheticSpec::new(500, 2, 0xF00D);
    let (corpus, _) = generate_synthetic(&spec).unwrap();
    let docs = tokenized_descriptions(&corpus, &TokenPipelineConfig::default());

    let model = lda_train(&docs, 2, None, 0.01, 1000, 31).unwrap();
    for k in 0..2 {
        let top = lda_top_words(&model, k, 10).unwrap();
        let group0 = top.iter().filter(|(w, _)| w.starts_with("waax")).count();
        let purity = (group0.max(top.len() - group0)) as f64 / top.len() as f64;
        assert!(purity >= 0.9, "topic {k} purity {purity}: {top:?}");
    }

    let again = lda_train(&docs, 2, None, 0.01, 1000, 31).unwrap();
    assert_eq!(model.topic_word, again.topic_word);
    assert_eq!(model.doc_topic, again.doc_topic);

    pass(
        8,
        "two pure topics at 1000 sweeps; identical seeds, identical models",
        start.elapsed(),
        budget,
    );
}

/// Criterion 9: invariant spot checks. The exhaustive randomized versions
/// live in tests/properties.rs; this criterion pins the named cases.
#[test]
fn criterion_9_invariant_suite() {
    let start = Instant::now();
    let budget = Duration::from_secs(30);

    // Strict inequality at the boundary: X == threshold is expected.
    let mut records: Vec<AppRecord> = (0..9)
        .map(|i| {
            let mut a = AppRecord::new(format!("a{i}"));
            a.category = "g".into();
            a.declared_permissions = ["common".to_string()].into_iter().collect();
            a
        })
        .collect();
    let mut edge = AppRecord::new("a9");
    edge.category = "g".into();
    edge.declared_permissions = ["common".to_string(), "edge".to_string()]
        .into_iter()
        .collect();
    records.push(edge);
    let corpus = Corpus::from_records(records, "boundary");
    let catalog = PermissionCatalog::covering(["common", "edge"].iter().map(|s| s.to_string()));
    let cfg = ScoringConfig::new(&catalog).with_threshold(Ratio::new(1, 10).unwrap());
    let run = groups_by_category(&corpus);
    let reports = score_corpus(&run, &corpus, &cfg).unwrap();
    assert!(reports.iter().all(|r| r.score == 0.0));

    // Zero-score characterization on the same fixture, threshold raised.
    let cfg_high = ScoringConfig::new(&catalog).with_threshold(Ratio::new(1, 5).unwrap());
    let reports = score_corpus(&run, &corpus, &cfg_high).unwrap();
    for r in &reports {
        let has_weighted_rare = r.app_id == "a9"; // only "edge" is rare
        assert_eq!(r.score > 0.0, has_weighted_rare);
    }

    // Weight linearity with rank preservation.
    let mut doubled = catalog.clone();
    doubled.weights.insert("common".into(), 2.0);
    doubled.weights.insert("edge".into(), 2.0);
    let cfg_doubled = ScoringConfig {
        catalog: &doubled,
        ..cfg_high.clone()
    };
    let ranked = rank(score_corpus(&run, &corpus, &cfg_high).unwrap());
    let ranked2 = rank(score_corpus(&run, &corpus, &cfg_doubled).unwrap());
    for (a, b) in ranked.iter().zip(&ranked2) {
        assert_eq!(a.app_id, b.app_id);
        assert_eq!(b.score, 2.0 * a.score);
    }

    // Membership-order invariance.
    let mut shuffled: Vec<AppRecord> = corpus.apps().cloned().collect();
    shuffled.reverse();
    let corpus2 = Corpus::from_records(shuffled, "boundary");
    let reports2 = score_corpus(&groups_by_category(&corpus2), &corpus2, &cfg_high).unwrap();
    assert_eq!(reports, reports2);

    // intersect is a lower bound of both operands.
    let r = PrivilegeSet {
        kind: PrivilegeKind::Requested,
        permissions: ["a", "b", "c"].iter().map(|s| s.to_string()).collect(),
    };
    let e = PrivilegeSet {
        kind: PrivilegeKind::Estimated,
        permissions: ["b", "c", "d"].iter().map(|s| s.to_string()).collect(),
    };
    let i = intersect(&r, &e).unwrap();
    assert!(i.permissions.is_subset(&r.permissions) && i.permissions.is_subset(&e.permissions));

    // Normalization idempotence over a host-pattern-laden manifest.
    let raw: BTreeSet<String> = [
        "tabs",
        "bogus",
        "https://example.com/*",
        "all_urls",
        "*://*/x",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let norm_catalog = PermissionCatalog::covering(["tabs".to_string()]);
    let once = normalize_requested(&raw, &norm_catalog);
    let twice = normalize_requested(&once.permissions, &norm_catalog);
    assert_eq!(once.permissions, twice.permissions);

    // LDA count conservation after every sweep.
    let docs: Vec<(String, Vec<String>)> = (0..20)
        .map(|d| {
            let tokens = (0..15)
                .map(|j| format!("tok{}", (d + j) % 7))
                .collect::<Vec<String>>();
            (format!("d{d:02}"), tokens)
        })
        .collect();
    let mut sampler = GibbsSampler::new(&docs, 3, None, 0.01, 1).unwrap();
    let total = sampler.corpus_tokens();
    for _ in 0..25 {
        sampler.sweep();
        assert_eq!(sampler.assigned_tokens(), total);
    }

    // NB prior and likelihood normalization within 1e-9.
    let model = nb_train(
        &[
            ("a".to_string(), "alpha beta beta".to_string()),
            ("b".to_string(), "gamma delta".to_string()),
            ("b".to_string(), "delta epsilon".to_string()),
        ],
        &TokenPipelineConfig::default(),
    )
    .unwrap();
    let prior_sum: f64 = model.log_prior().iter().map(|p| p.exp()).sum();
    assert!((prior_sum - 1.0).abs() < 1e-9);
    for c in 0..model.classes().len() {
        let sum: f64 = model.log_likelihood(c).values().map(|l| l.exp()).sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    pass(
        9,
        "boundary, linearity, order, subset, idempotence, conservation, normalization",
        start.elapsed(),
        budget,
    );
}
