//! Evaluation procedures over scored corpora: threshold sweeps, group-size
//! sensitivity, privilege-mode comparison, and suspended-app correlation.
//! Each experiment emits a plot-ready table; all percentages derive from
//! the scoring module's reports, never from a private re-scoring path.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::peergroup::GroupingRun;
use crate::privilege::PrivilegeKind;
use crate::ratio::Ratio;
use crate::scoring::{score_corpus, ScoringConfig, UnexpectednessReport};

/// Which evaluation procedure a result came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Threshold,
    GroupSize,
    PrivilegeMode,
    Suspended,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExperimentKind::Threshold => "threshold",
            ExperimentKind::GroupSize => "groupsize",
            ExperimentKind::PrivilegeMode => "privmode",
            ExperimentKind::Suspended => "suspended",
        };
        f.write_str(s)
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "threshold" => Ok(ExperimentKind::Threshold),
            "groupsize" => Ok(ExperimentKind::GroupSize),
            "privmode" => Ok(ExperimentKind::PrivilegeMode),
            "suspended" => Ok(ExperimentKind::Suspended),
            other => Err(Error::Config(format!(
                "unknown experiment kind '{other}' (expected threshold, groupsize, privmode or suspended)"
            ))),
        }
    }
}

/// One row of an experiment table: an axis value, the sample size behind
/// it, and the percentages (0..=100) observed there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: String,
    pub n: usize,
    /// Percentage of apps with at least one unexpected privilege.
    pub pct_flagged: f64,
    /// Percentage of apps with none.
    pub pct_clean: f64,
    /// Percentage suspended (suspended-correlation experiment only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pct_suspended: Option<f64>,
}

/// One cell of the score x group-size table for bubble plots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BubbleRow {
    pub score: f64,
    pub group_size: usize,
    pub n: usize,
    pub pct_suspended: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: ExperimentKind,
    pub rows: Vec<SweepRow>,
    /// Populated by the suspended-correlation experiment.
    pub bubble: Vec<BubbleRow>,
}

/// An inclusive group-size range, open-ended when `hi` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeBucket {
    pub lo: usize,
    pub hi: Option<usize>,
}

impl SizeBucket {
    pub fn contains(&self, size: usize) -> bool {
        size >= self.lo && self.hi.is_none_or(|hi| size <= hi)
    }

    fn overlaps(&self, other: &SizeBucket) -> bool {
        let self_hi = self.hi.unwrap_or(usize::MAX);
        let other_hi = other.hi.unwrap_or(usize::MAX);
        self.lo <= other_hi && other.lo <= self_hi
    }
}

impl fmt::Display for SizeBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(hi) if hi == self.lo => write!(f, "{}", self.lo),
            Some(hi) => write!(f, "{}-{hi}", self.lo),
            None => write!(f, "{}+", self.lo),
        }
    }
}

impl FromStr for SizeBucket {
    type Err = Error;

    /// Accepts `lo-hi`, a single size `n`, and open-ended `lo+` or `lo-`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse '{s}' as a size bucket"));
        if let Some(lo) = s.strip_suffix('+').or_else(|| s.strip_suffix('-')) {
            return Ok(SizeBucket {
                lo: lo.parse().map_err(|_| bad())?,
                hi: None,
            });
        }
        if let Some((lo, hi)) = s.split_once('-') {
            let bucket = SizeBucket {
                lo: lo.parse().map_err(|_| bad())?,
                hi: Some(hi.parse().map_err(|_| bad())?),
            };
            if bucket.hi.unwrap() < bucket.lo {
                return Err(bad());
            }
            return Ok(bucket);
        }
        let n: usize = s.parse().map_err(|_| bad())?;
        Ok(SizeBucket { lo: n, hi: Some(n) })
    }
}

/// Balanced-sample parameters for the suspended-correlation experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n_live: usize,
    pub n_suspended: usize,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            n_live: 500,
            n_suspended: 500,
            seed: 0,
        }
    }
}

fn pct(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Percentage of flagged (score > 0) apps for each threshold. Nondecreasing
/// in the threshold.
pub fn threshold_sweep(
    run: &GroupingRun,
    corpus: &Corpus,
    cfg: &ScoringConfig,
    thresholds: &[Ratio],
) -> Result<SweepResult> {
    let mut rows = Vec::with_capacity(thresholds.len());
    for t in thresholds {
        if !t.in_unit_interval() {
            return Err(Error::Config(format!("threshold {t} outside (0, 1]")));
        }
        let cfg_t = ScoringConfig {
            threshold: *t,
            ..cfg.clone()
        };
        let reports = score_corpus(run, corpus, &cfg_t)?;
        let flagged = reports.iter().filter(|r| r.score > 0.0).count();
        rows.push(SweepRow {
            axis: t.to_string(),
            n: reports.len(),
            pct_flagged: pct(flagged, reports.len()),
            pct_clean: pct(reports.len() - flagged, reports.len()),
            pct_suspended: None,
        });
    }
    Ok(SweepResult {
        kind: ExperimentKind::Threshold,
        rows,
        bubble: vec![],
    })
}

/// Percentage of clean (score 0) apps per group-size bucket. An app is
/// attributed to the size of its headline group; ungrouped apps are
/// skipped.
pub fn group_size_sweep(
    run: &GroupingRun,
    corpus: &Corpus,
    cfg: &ScoringConfig,
    buckets: &[SizeBucket],
) -> Result<SweepResult> {
    for (i, a) in buckets.iter().enumerate() {
        for b in &buckets[i + 1..] {
            if a.overlaps(b) {
                return Err(Error::Config(format!("size buckets {a} and {b} overlap")));
            }
        }
    }
    let reports = score_corpus(run, corpus, cfg)?;
    let rows = buckets
        .iter()
        .map(|bucket| {
            let in_bucket: Vec<&UnexpectednessReport> = reports
                .iter()
                .filter(|r| {
                    run.group(&r.group_id)
                        .is_some_and(|g| bucket.contains(g.size()))
                })
                .collect();
            let clean = in_bucket.iter().filter(|r| r.score == 0.0).count();
            SweepRow {
                axis: bucket.to_string(),
                n: in_bucket.len(),
                pct_flagged: pct(in_bucket.len() - clean, in_bucket.len()),
                pct_clean: pct(clean, in_bucket.len()),
                pct_suspended: None,
            }
        })
        .collect();
    Ok(SweepResult {
        kind: ExperimentKind::GroupSize,
        rows,
        bubble: vec![],
    })
}

/// Percentage of clean apps under each privilege-estimation mode, with
/// grouping and threshold held fixed.
pub fn privilege_mode_comparison(
    run: &GroupingRun,
    corpus: &Corpus,
    cfg: &ScoringConfig,
    modes: &[PrivilegeKind],
) -> Result<SweepResult> {
    let mut rows = Vec::with_capacity(modes.len());
    for mode in modes {
        let cfg_m = ScoringConfig {
            mode: *mode,
            ..cfg.clone()
        };
        let reports = score_corpus(run, corpus, &cfg_m)?;
        let clean = reports.iter().filter(|r| r.score == 0.0).count();
        rows.push(SweepRow {
            axis: mode.to_string(),
            n: reports.len(),
            pct_flagged: pct(reports.len() - clean, reports.len()),
            pct_clean: pct(clean, reports.len()),
            pct_suspended: None,
        });
    }
    Ok(SweepResult {
        kind: ExperimentKind::PrivilegeMode,
        rows,
        bubble: vec![],
    })
}

/// Draws a balanced live/suspended sample with the given seed, scores the
/// corpus once, and tabulates the percentage suspended per score value
/// plus the score x group-size bubble table.
pub fn suspended_correlation(
    run: &GroupingRun,
    corpus: &Corpus,
    cfg: &ScoringConfig,
    sample_spec: &SampleSpec,
) -> Result<SweepResult> {
    let suspended_ids: Vec<&str> = corpus
        .apps()
        .filter(|a| a.suspended)
        .map(|a| a.app_id.as_str())
        .collect();
    let live_ids: Vec<&str> = corpus
        .apps()
        .filter(|a| !a.suspended)
        .map(|a| a.app_id.as_str())
        .collect();
    if suspended_ids.len() < sample_spec.n_suspended {
        return Err(Error::Data(format!(
            "corpus has only {} suspended apps, sample needs {}",
            suspended_ids.len(),
            sample_spec.n_suspended
        )));
    }
    if live_ids.len() < sample_spec.n_live {
        return Err(Error::Data(format!(
            "corpus has only {} live apps, sample needs {}",
            live_ids.len(),
            sample_spec.n_live
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(sample_spec.seed);
    let mut sampled: Vec<&str> = Vec::with_capacity(sample_spec.n_live + sample_spec.n_suspended);
    sampled.extend(
        sample(&mut rng, suspended_ids.len(), sample_spec.n_suspended)
            .into_iter()
            .map(|i| suspended_ids[i]),
    );
    sampled.extend(
        sample(&mut rng, live_ids.len(), sample_spec.n_live)
            .into_iter()
            .map(|i| live_ids[i]),
    );
    let in_sample: std::collections::BTreeSet<&str> = sampled.into_iter().collect();

    let reports = score_corpus(run, corpus, cfg)?;

    // Group sampled reports by exact score value.
    let mut by_score: BTreeMap<u64, (f64, usize, usize)> = BTreeMap::new();
    let mut by_cell: BTreeMap<(u64, usize), (f64, usize, usize)> = BTreeMap::new();
    for r in &reports {
        if !in_sample.contains(r.app_id.as_str()) {
            continue;
        }
        let suspended = corpus.app(&r.app_id).expect("report app exists").suspended;
        let key = r.score.to_bits();
        let entry = by_score.entry(key).or_insert((r.score, 0, 0));
        entry.1 += 1;
        entry.2 += usize::from(suspended);

        let size = run.group(&r.group_id).map_or(0, |g| g.size());
        let cell = by_cell.entry((key, size)).or_insert((r.score, 0, 0));
        cell.1 += 1;
        cell.2 += usize::from(suspended);
    }

    let mut rows: Vec<SweepRow> = by_score
        .values()
        .map(|(score, n, suspended)| SweepRow {
            axis: format!("{score}"),
            n: *n,
            pct_flagged: if *score > 0.0 { 100.0 } else { 0.0 },
            pct_clean: if *score > 0.0 { 0.0 } else { 100.0 },
            pct_suspended: Some(pct(*suspended, *n)),
        })
        .collect();
    rows.sort_by(|a, b| {
        a.axis
            .parse::<f64>()
            .unwrap_or(0.0)
            .total_cmp(&b.axis.parse::<f64>().unwrap_or(0.0))
    });

    let mut bubble: Vec<BubbleRow> = by_cell
        .iter()
        .map(|((_, size), (score, n, suspended))| BubbleRow {
            score: *score,
            group_size: *size,
            n: *n,
            pct_suspended: pct(*suspended, *n),
        })
        .collect();
    bubble.sort_by(|a, b| {
        a.score
            .total_cmp(&b.score)
            .then_with(|| a.group_size.cmp(&b.group_size))
    });

    Ok(SweepResult {
        kind: ExperimentKind::Suspended,
        rows,
        bubble,
    })
}

/// Spearman rank correlation with average ranks for ties. Returns 0 for
/// fewer than two points or when either side is constant.
pub fn spearman(pairs: &[(f64, f64)]) -> f64 {
    if pairs.len() < 2 {
        return 0.0;
    }
    let xs: Vec<f64> = pairs.iter().map(|(x, _)| *x).collect();
    let ys: Vec<f64> = pairs.iter().map(|(_, y)| *y).collect();
    let rx = average_ranks(&xs);
    let ry = average_ranks(&ys);
    pearson(&rx, &ry)
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return 0.0;
    }
    cov / (var_x * var_y).sqrt()
}

/// Writes the experiment table as CSV. Suspended results gain a
/// `pct_suspended` column; the axis column is named after the kind.
pub fn write_sweep_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::Data(format!("{}: cannot write CSV: {e}", path.display())))?;
    let axis_name = match result.kind {
        ExperimentKind::Threshold => "threshold",
        ExperimentKind::GroupSize => "group_size",
        ExperimentKind::PrivilegeMode => "mode",
        ExperimentKind::Suspended => "score",
    };
    let with_suspended = matches!(result.kind, ExperimentKind::Suspended);
    let mut header = vec![axis_name, "n", "pct_flagged", "pct_clean"];
    if with_suspended {
        header.push("pct_suspended");
    }
    writer
        .write_record(&header)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    for row in &result.rows {
        let mut record = vec![
            row.axis.clone(),
            row.n.to_string(),
            format!("{}", row.pct_flagged),
            format!("{}", row.pct_clean),
        ];
        if with_suspended {
            record.push(format!("{}", row.pct_suspended.unwrap_or(0.0)));
        }
        writer
            .write_record(&record)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Writes the score x group-size bubble table:
/// `score,group_size,pct_suspended,n`.
pub fn write_bubble_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::Data(format!("{}: cannot write CSV: {e}", path.display())))?;
    writer
        .write_record(["score", "group_size", "pct_suspended", "n"])
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    for row in &result.bubble {
        writer
            .write_record([
                format!("{}", row.score),
                row.group_size.to_string(),
                format!("{}", row.pct_suspended),
                row.n.to_string(),
            ])
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AppRecord, Corpus};
    use crate::peergroup::groups_by_category;
    use crate::privilege::PermissionCatalog;

    fn app_with(id: &str, category: &str, perms: &[&str], suspended: bool) -> AppRecord {
        let mut a = AppRecord::new(id);
        a.category = category.to_string();
        a.declared_permissions = perms.iter().map(|s| s.to_string()).collect();
        a.suspended = suspended;
        a
    }

    fn covering(corpus: &Corpus) -> PermissionCatalog {
        PermissionCatalog::covering(
            corpus
                .apps()
                .flat_map(|a| a.declared_permissions.iter().cloned()),
        )
    }

    fn uniform_corpus() -> Corpus {
        Corpus::from_records(
            (0..20)
                .map(|i| app_with(&format!("a{i:02}"), "g", &["p", "q"], false))
                .collect(),
            "t",
        )
    }

    #[test]
    fn identical_groups_flag_nothing_at_any_threshold() {
        let corpus = uniform_corpus();
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let thresholds: Vec<Ratio> = ["0.01", "0.05", "0.10", "0.50", "1"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let result = threshold_sweep(&run, &corpus, &cfg, &thresholds).unwrap();
        for row in &result.rows {
            assert_eq!(row.pct_flagged, 0.0);
            assert_eq!(row.pct_clean, 100.0);
        }
    }

    #[test]
    fn tiny_threshold_flags_nothing() {
        // With threshold below 1/N_g, no held privilege can be rare.
        let mut records: Vec<AppRecord> = (0..10)
            .map(|i| app_with(&format!("a{i}"), "g", &["p"], false))
            .collect();
        records.push(app_with("odd", "g", &["p", "z"], false));
        let corpus = Corpus::from_records(records, "t");
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let t = vec![Ratio::new(1, 1000).unwrap()];
        let result = threshold_sweep(&run, &corpus, &cfg, &t).unwrap();
        assert_eq!(result.rows[0].pct_flagged, 0.0);
    }

    #[test]
    fn sweep_is_monotone_in_threshold() {
        let mut records = Vec::new();
        for i in 0..30 {
            let perms: &[&str] = match i % 10 {
                0 => &["p", "rare1"],
                1 => &["p", "rare2"],
                _ => &["p"],
            };
            records.push(app_with(&format!("a{i:02}"), "g", perms, false));
        }
        let corpus = Corpus::from_records(records, "t");
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let thresholds: Vec<Ratio> = ["0.01", "0.05", "0.2", "0.5", "1"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let result = threshold_sweep(&run, &corpus, &cfg, &thresholds).unwrap();
        for pair in result.rows.windows(2) {
            assert!(pair[0].pct_flagged <= pair[1].pct_flagged);
        }
    }

    #[test]
    fn singleton_buckets_are_always_clean() {
        let corpus = Corpus::from_records(
            vec![
                app_with("solo", "alone", &["p"], false),
                app_with("a", "pair", &["p"], false),
                app_with("b", "pair", &["q"], false),
            ],
            "t",
        );
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let buckets = vec![
            SizeBucket { lo: 1, hi: Some(1) },
            SizeBucket { lo: 2, hi: None },
        ];
        let result = group_size_sweep(&run, &corpus, &cfg, &buckets).unwrap();
        assert_eq!(result.rows[0].pct_clean, 100.0);
        assert_eq!(result.rows[0].n, 1);
    }

    #[test]
    fn bucket_percentages_aggregate_to_the_overall_rate() {
        let mut records = Vec::new();
        // Group of 4 with one odd member, group of 8 with one odd member.
        for i in 0..4 {
            let perms: &[&str] = if i == 0 { &["p", "x"] } else { &["p"] };
            records.push(app_with(&format!("s{i}"), "small", perms, false));
        }
        for i in 0..8 {
            let perms: &[&str] = if i == 0 { &["p", "y"] } else { &["p"] };
            records.push(app_with(&format!("l{i}"), "large", perms, false));
        }
        let corpus = Corpus::from_records(records, "t");
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog).with_threshold(Ratio::new(1, 2).unwrap());
        let run = groups_by_category(&corpus);
        let buckets = vec![
            SizeBucket { lo: 1, hi: Some(5) },
            SizeBucket { lo: 6, hi: None },
        ];
        let result = group_size_sweep(&run, &corpus, &cfg, &buckets).unwrap();
        let weighted: f64 = result
            .rows
            .iter()
            .map(|r| r.pct_clean * r.n as f64)
            .sum::<f64>()
            / corpus.len() as f64;
        let reports = score_corpus(&run, &corpus, &cfg).unwrap();
        let overall =
            100.0 * reports.iter().filter(|r| r.score == 0.0).count() as f64 / reports.len() as f64;
        assert!((weighted - overall).abs() < 1e-9);

        // One odd member drags a small group down further than a large one.
        assert!(result.rows[0].pct_clean < result.rows[1].pct_clean);
    }

    #[test]
    fn overlapping_buckets_are_rejected() {
        let corpus = uniform_corpus();
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let buckets = vec![
            SizeBucket { lo: 1, hi: Some(5) },
            SizeBucket { lo: 5, hi: None },
        ];
        assert!(group_size_sweep(&run, &corpus, &cfg, &buckets).is_err());
    }

    #[test]
    fn bucket_parsing() {
        assert_eq!(
            "1-4".parse::<SizeBucket>().unwrap(),
            SizeBucket { lo: 1, hi: Some(4) }
        );
        assert_eq!(
            "15+".parse::<SizeBucket>().unwrap(),
            SizeBucket { lo: 15, hi: None }
        );
        assert_eq!(
            "7".parse::<SizeBucket>().unwrap(),
            SizeBucket { lo: 7, hi: Some(7) }
        );
        assert!("4-1".parse::<SizeBucket>().is_err());
        assert!("x".parse::<SizeBucket>().is_err());
    }

    #[test]
    fn empty_manifests_are_fully_clean_in_requested_mode() {
        let corpus = Corpus::from_records(
            (0..6)
                .map(|i| app_with(&format!("a{i}"), "g", &[], false))
                .collect(),
            "t",
        );
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let result =
            privilege_mode_comparison(&run, &corpus, &cfg, &[PrivilegeKind::Requested]).unwrap();
        assert_eq!(result.rows[0].pct_clean, 100.0);
    }

    #[test]
    fn suspended_requires_enough_candidates() {
        let corpus = uniform_corpus();
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let spec = SampleSpec {
            n_live: 5,
            n_suspended: 5,
            seed: 1,
        };
        assert!(suspended_correlation(&run, &corpus, &cfg, &spec).is_err());
    }

    #[test]
    fn all_suspended_at_zero_score_makes_zero_the_peak() {
        let mut records = Vec::new();
        for i in 0..10 {
            // Suspended apps hold only the common privilege (score 0).
            records.push(app_with(&format!("s{i}"), "g", &["p"], true));
        }
        for i in 0..8 {
            records.push(app_with(&format!("l{i}"), "g", &["p"], false));
        }
        records.push(app_with("flagged1", "g", &["p", "x"], false));
        records.push(app_with("flagged2", "g", &["p", "y"], false));
        let corpus = Corpus::from_records(records, "t");
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let spec = SampleSpec {
            n_live: 10,
            n_suspended: 10,
            seed: 3,
        };
        let result = suspended_correlation(&run, &corpus, &cfg, &spec).unwrap();
        let zero_row = result.rows.iter().find(|r| r.axis == "0").unwrap();
        for row in &result.rows {
            if row.axis != "0" {
                assert!(zero_row.pct_suspended.unwrap() > row.pct_suspended.unwrap());
            }
        }
    }

    #[test]
    fn independent_suspension_stays_near_half_on_a_balanced_sample() {
        // Suspension assigned independently of privileges: on a balanced
        // sample the per-score suspended share stays within binomial noise
        // of 50%. With n = 160 per score bucket, 4 sigma is ~16 points.
        let mut records = Vec::new();
        for i in 0..400 {
            let perms: &[&str] = if i % 2 == 0 { &["p"] } else { &["p", "rare"] };
            records.push(app_with(&format!("a{i:03}"), "g", perms, i % 5 == 0));
        }
        let corpus = Corpus::from_records(records, "t");
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let spec = SampleSpec {
            n_live: 80,
            n_suspended: 80,
            seed: 17,
        };
        let result = suspended_correlation(&run, &corpus, &cfg, &spec).unwrap();
        for row in &result.rows {
            let p = row.pct_suspended.unwrap();
            assert!((30.0..=70.0).contains(&p), "axis {} at {p}%", row.axis);
        }

        // Same seed, same table.
        let again = suspended_correlation(&run, &corpus, &cfg, &spec).unwrap();
        assert_eq!(result, again);
    }

    #[test]
    fn spearman_basics() {
        assert_eq!(spearman(&[(1.0, 2.0), (2.0, 4.0), (3.0, 9.0)]), 1.0);
        assert_eq!(spearman(&[(1.0, 9.0), (2.0, 4.0), (3.0, 2.0)]), -1.0);
        assert_eq!(spearman(&[(1.0, 5.0)]), 0.0);
        assert_eq!(spearman(&[(1.0, 5.0), (2.0, 5.0)]), 0.0);
        let rho = spearman(&[(0.0, 10.0), (1.0, 30.0), (2.0, 20.0), (3.0, 40.0)]);
        assert!((rho - 0.8).abs() < 1e-12);
    }

    #[test]
    fn csv_writers_emit_documented_headers() {
        let corpus = uniform_corpus();
        let catalog = covering(&corpus);
        let cfg = ScoringConfig::new(&catalog);
        let run = groups_by_category(&corpus);
        let result = threshold_sweep(
            &run,
            &corpus,
            &cfg,
            &[Ratio::new(1, 10).unwrap(), Ratio::new(1, 2).unwrap()],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_sweep_csv(&result, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "threshold,n,pct_flagged,pct_clean"
        );
        assert_eq!(text.lines().count(), 3);
    }
}
