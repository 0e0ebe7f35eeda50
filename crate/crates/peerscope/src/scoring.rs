//! Unexpectedness scoring: pass one computes per-group privilege relative
//! frequencies, pass two scores each application by summing the weights of
//! its privileges whose relative frequency falls strictly below the
//! threshold. Privileges at or above the threshold form the group's
//! baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{AppRecord, Corpus};
use crate::error::{Error, Result};
use crate::peergroup::{GroupingRun, PeerGroup, Strategy};
use crate::privilege::{privileges_of, ApiPermissionMap, PermissionCatalog, PrivilegeKind};
use crate::ratio::{frequency_below, Ratio};

/// Default relative-frequency threshold for browser-extension corpora.
pub const DEFAULT_THRESHOLD_CHROME: (u64, u64) = (1, 10);
/// Default relative-frequency threshold for mobile-app corpora.
pub const DEFAULT_THRESHOLD_ANDROID: (u64, u64) = (1, 20);
/// Groups smaller than this are scored but flagged low-confidence.
pub const DEFAULT_MIN_GROUP_SIZE: usize = 5;
/// Scores above zero and up to this value band yellow; higher bands red.
pub const DEFAULT_YELLOW_MAX: f64 = 2.0;

/// Per-group privilege usage counts from pass one. Relative frequencies
/// are kept as exact integer counts; permissions held by no member have no
/// entry (implicitly zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub group_id: String,
    /// Member count N_g.
    pub n_g: u64,
    /// Permission -> number of members holding it (N_gp).
    pub counts: BTreeMap<String, u64>,
}

impl FrequencyTable {
    pub fn count(&self, permission: &str) -> u64 {
        self.counts.get(permission).copied().unwrap_or(0)
    }

    /// X_gp as a float, for reporting only; comparisons go through the
    /// exact rational path.
    pub fn relative_frequency(&self, permission: &str) -> f64 {
        self.count(permission) as f64 / self.n_g as f64
    }

    /// True when the permission's relative frequency is strictly below the
    /// threshold (the unexpectedness test).
    pub fn is_rare(&self, permission: &str, threshold: Ratio) -> bool {
        frequency_below(self.count(permission), self.n_g, threshold)
    }
}

/// How to combine per-group scores when a strategy places one app in
/// several groups.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    #[default]
    Max,
    Sum,
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Aggregation::Max),
            "sum" => Ok(Aggregation::Sum),
            other => Err(Error::Config(format!(
                "unknown aggregation '{other}' (expected max or sum)"
            ))),
        }
    }
}

/// Everything pass one and pass two need besides the corpus and grouping.
#[derive(Debug, Clone)]
pub struct ScoringConfig<'a> {
    pub threshold: Ratio,
    pub mode: PrivilegeKind,
    pub aggregation: Aggregation,
    pub min_group_size: usize,
    pub yellow_max: f64,
    pub include_baseline: bool,
    pub catalog: &'a PermissionCatalog,
    pub api_map: Option<&'a ApiPermissionMap>,
}

impl<'a> ScoringConfig<'a> {
    pub fn new(catalog: &'a PermissionCatalog) -> Self {
        ScoringConfig {
            threshold: Ratio::new(DEFAULT_THRESHOLD_CHROME.0, DEFAULT_THRESHOLD_CHROME.1)
                .expect("valid default"),
            mode: PrivilegeKind::Requested,
            aggregation: Aggregation::Max,
            min_group_size: DEFAULT_MIN_GROUP_SIZE,
            yellow_max: DEFAULT_YELLOW_MAX,
            include_baseline: false,
            catalog,
            api_map: None,
        }
    }

    pub fn with_threshold(mut self, threshold: Ratio) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_mode(mut self, mode: PrivilegeKind) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_api_map(mut self, map: &'a ApiPermissionMap) -> Self {
        self.api_map = Some(map);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.threshold.in_unit_interval() {
            return Err(Error::Config(format!(
                "relative frequency threshold {} outside (0, 1]",
                self.threshold
            )));
        }
        if self.yellow_max < 0.0 {
            return Err(Error::Config(
                "yellow band maximum must be nonnegative".into(),
            ));
        }
        if matches!(
            self.mode,
            PrivilegeKind::Estimated | PrivilegeKind::Intersection
        ) && self.api_map.is_none()
        {
            return Err(Error::Config(format!(
                "privilege mode '{}' requires an API map",
                self.mode
            )));
        }
        Ok(())
    }

    /// The weight W_p under this configuration. In raw-call mode every
    /// call counts with unit weight (the catalog's explicit overrides
    /// still apply); otherwise the catalog decides.
    pub fn weight(&self, permission: &str) -> f64 {
        match self.mode {
            PrivilegeKind::ApiCallsRaw => {
                self.catalog.weights.get(permission).copied().unwrap_or(1.0)
            }
            _ => self.catalog.weight(permission),
        }
    }
}

/// A privilege that contributed to an app's score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnexpectedPrivilege {
    pub permission: String,
    pub relative_frequency: f64,
    pub weight: f64,
}

/// Traffic-light band for a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorBand {
    Green,
    Yellow,
    Red,
}

impl fmt::Display for ColorBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ColorBand::Green => "green",
            ColorBand::Yellow => "yellow",
            ColorBand::Red => "red",
        };
        f.write_str(s)
    }
}

/// Green for zero, yellow up to `yellow_max`, red beyond.
pub fn color_band(score: f64, yellow_max: f64) -> ColorBand {
    if score == 0.0 {
        ColorBand::Green
    } else if score <= yellow_max {
        ColorBand::Yellow
    } else {
        ColorBand::Red
    }
}

/// One application's scoring outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnexpectednessReport {
    pub app_id: String,
    pub strategy: Strategy,
    /// The group the headline score comes from (the app's own group for
    /// partition and related strategies, the aggregation winner for
    /// overlapping ones). Empty if the app belongs to no group.
    pub group_id: String,
    /// Every group containing the app.
    pub group_ids: Vec<String>,
    pub score: f64,
    /// Rare privileges with positive weight, exactly the score summands.
    pub unexpected: Vec<UnexpectedPrivilege>,
    /// Rare privileges whose weight is zero: diagnostics only.
    pub rare_zero_weight: Vec<String>,
    /// Score per containing group, kept when strategies overlap.
    pub per_group_scores: Vec<(String, f64)>,
    /// The headline group's baseline privileges, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<Vec<String>>,
    /// Set when the headline group is smaller than the configured minimum.
    pub low_confidence: bool,
    /// 1-based position after ranking; 0 before.
    pub rank: usize,
    pub color: ColorBand,
}

/// Pass one: frequency tables for every group in the run. Fails if any
/// group member does not resolve in the corpus (grouping and corpus must
/// come from the same snapshot).
pub fn compute_frequencies(
    run: &GroupingRun,
    corpus: &Corpus,
    cfg: &ScoringConfig,
) -> Result<BTreeMap<String, FrequencyTable>> {
    cfg.validate()?;
    let privilege_sets = privilege_sets(corpus, cfg)?;
    frequencies_from_sets(run, &privilege_sets)
}

/// The per-app privilege sets under the configured mode, computed once and
/// shared by both passes.
fn privilege_sets(
    corpus: &Corpus,
    cfg: &ScoringConfig,
) -> Result<BTreeMap<String, BTreeSet<String>>> {
    corpus
        .apps()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|app| {
            privileges_of(app, cfg.mode, cfg.catalog, cfg.api_map)
                .map(|set| (app.app_id.clone(), set.permissions))
        })
        .collect()
}

fn frequencies_from_sets(
    run: &GroupingRun,
    privilege_sets: &BTreeMap<String, BTreeSet<String>>,
) -> Result<BTreeMap<String, FrequencyTable>> {
    run.groups()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|group| {
            let mut counts: BTreeMap<String, u64> = BTreeMap::new();
            for member in &group.members {
                let privileges = privilege_sets.get(member).ok_or_else(|| {
                    Error::Data(format!(
                        "group '{}' member '{member}' does not resolve in the corpus",
                        group.group_id
                    ))
                })?;
                for p in privileges {
                    *counts.entry(p.clone()).or_insert(0) += 1;
                }
            }
            Ok((
                group.group_id.clone(),
                FrequencyTable {
                    group_id: group.group_id.clone(),
                    n_g: group.members.len() as u64,
                    counts,
                },
            ))
        })
        .collect()
}

/// Pass two for a single application against a single group.
pub fn score_app(
    app: &AppRecord,
    group: &PeerGroup,
    freq: &FrequencyTable,
    cfg: &ScoringConfig,
) -> Result<UnexpectednessReport> {
    cfg.validate()?;
    if !group.members.contains(&app.app_id) {
        return Err(Error::Data(format!(
            "app '{}' is not a member of group '{}'",
            app.app_id, group.group_id
        )));
    }
    if freq.group_id != group.group_id {
        return Err(Error::Data(format!(
            "frequency table is for '{}', not '{}'",
            freq.group_id, group.group_id
        )));
    }
    let privileges = privileges_of(app, cfg.mode, cfg.catalog, cfg.api_map)?.permissions;
    Ok(score_against(&app.app_id, &privileges, group, freq, cfg))
}

/// The scoring kernel shared by `score_app` and `score_corpus`.
fn score_against(
    app_id: &str,
    privileges: &BTreeSet<String>,
    group: &PeerGroup,
    freq: &FrequencyTable,
    cfg: &ScoringConfig,
) -> UnexpectednessReport {
    let mut score = 0.0;
    let mut unexpected = Vec::new();
    let mut rare_zero_weight = Vec::new();
    for p in privileges {
        if freq.is_rare(p, cfg.threshold) {
            let weight = cfg.weight(p);
            if weight > 0.0 {
                score += weight;
                unexpected.push(UnexpectedPrivilege {
                    permission: p.clone(),
                    relative_frequency: freq.relative_frequency(p),
                    weight,
                });
            } else {
                rare_zero_weight.push(p.clone());
            }
        }
    }
    UnexpectednessReport {
        app_id: app_id.to_string(),
        strategy: group.strategy,
        group_id: group.group_id.clone(),
        group_ids: vec![group.group_id.clone()],
        score,
        unexpected,
        rare_zero_weight,
        per_group_scores: vec![(group.group_id.clone(), score)],
        baseline: cfg
            .include_baseline
            .then(|| baseline_privileges(freq, cfg).into_iter().collect()),
        low_confidence: group.members.len() < cfg.min_group_size,
        rank: 0,
        color: color_band(score, cfg.yellow_max),
    }
}

/// Pass two over the whole corpus: one report per application.
///
/// Partition strategies score each app in its unique group; the
/// related-items strategy scores each app in the group it anchors;
/// overlapping strategies score the app in every containing group and
/// aggregate. Apps in no group report a zero score with no group id.
pub fn score_corpus(
    run: &GroupingRun,
    corpus: &Corpus,
    cfg: &ScoringConfig,
) -> Result<Vec<UnexpectednessReport>> {
    cfg.validate()?;
    let privilege_sets = privilege_sets(corpus, cfg)?;
    let frequencies = frequencies_from_sets(run, &privilege_sets)?;

    corpus
        .apps()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|app| {
            let privileges = &privilege_sets[&app.app_id];
            match run.strategy {
                Strategy::RelatedItems => {
                    let group = run.anchor_group_of(&app.app_id).ok_or_else(|| {
                        Error::Data(format!("no anchor group for app '{}'", app.app_id))
                    })?;
                    Ok(score_against(
                        &app.app_id,
                        privileges,
                        group,
                        &frequencies[&group.group_id],
                        cfg,
                    ))
                }
                Strategy::Category | Strategy::NaiveBayes => {
                    let gid = run.groups_of(&app.app_id).next().ok_or_else(|| {
                        Error::Data(format!(
                            "partition strategy left app '{}' ungrouped",
                            app.app_id
                        ))
                    })?;
                    let group = run.group(gid).expect("membership index is consistent");
                    Ok(score_against(
                        &app.app_id,
                        privileges,
                        group,
                        &frequencies[gid],
                        cfg,
                    ))
                }
                Strategy::Lda => {
                    let group_ids: Vec<&str> = run.groups_of(&app.app_id).collect();
                    Ok(score_overlapping(
                        &app.app_id,
                        privileges,
                        &group_ids,
                        run,
                        &frequencies,
                        cfg,
                    ))
                }
            }
        })
        .collect()
}

/// Scores an app against every containing group and aggregates. The
/// headline group is the aggregation winner (ties to the lexicographically
/// first group id).
fn score_overlapping(
    app_id: &str,
    privileges: &BTreeSet<String>,
    group_ids: &[&str],
    run: &GroupingRun,
    frequencies: &BTreeMap<String, FrequencyTable>,
    cfg: &ScoringConfig,
) -> UnexpectednessReport {
    if group_ids.is_empty() {
        return UnexpectednessReport {
            app_id: app_id.to_string(),
            strategy: run.strategy,
            group_id: String::new(),
            group_ids: vec![],
            score: 0.0,
            unexpected: vec![],
            rare_zero_weight: vec![],
            per_group_scores: vec![],
            baseline: None,
            low_confidence: true,
            rank: 0,
            color: color_band(0.0, cfg.yellow_max),
        };
    }

    let per_group: Vec<UnexpectednessReport> = group_ids
        .iter()
        .map(|gid| {
            let group = run.group(gid).expect("membership index is consistent");
            score_against(app_id, privileges, group, &frequencies[*gid], cfg)
        })
        .collect();

    let winner = per_group
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| {
            a.score
                .total_cmp(&b.score)
                .then_with(|| b.group_id.cmp(&a.group_id))
        })
        .map(|(i, _)| i)
        .expect("nonempty");

    let per_group_scores: Vec<(String, f64)> = per_group
        .iter()
        .map(|r| (r.group_id.clone(), r.score))
        .collect();
    let score = match cfg.aggregation {
        Aggregation::Max => per_group[winner].score,
        Aggregation::Sum => per_group_scores.iter().map(|(_, s)| s).sum(),
    };

    let mut report = per_group[winner].clone();
    report.score = score;
    report.group_ids = group_ids.iter().map(|s| s.to_string()).collect();
    report.per_group_scores = per_group_scores;
    report.color = color_band(score, cfg.yellow_max);
    report
}

/// The group's expected privileges: those at or above the threshold.
pub fn baseline_privileges(freq: &FrequencyTable, cfg: &ScoringConfig) -> BTreeSet<String> {
    freq.counts
        .keys()
        .filter(|p| !freq.is_rare(p, cfg.threshold))
        .cloned()
        .collect()
}

/// Orders reports by descending score, ties broken by ascending app id,
/// and assigns 1-based ranks.
pub fn rank(mut reports: Vec<UnexpectednessReport>) -> Vec<UnexpectednessReport> {
    reports.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.app_id.cmp(&b.app_id))
    });
    for (i, report) in reports.iter_mut().enumerate() {
        report.rank = i + 1;
    }
    reports
}

/// Report CSV: `app_id,strategy,group_id,score,unexpected_privileges,low_confidence,rank,color`
/// with the unexpected privilege names semicolon-joined.
pub fn write_reports_csv(reports: &[UnexpectednessReport], path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::Data(format!("{}: cannot write CSV: {e}", path.display())))?;
    writer
        .write_record([
            "app_id",
            "strategy",
            "group_id",
            "score",
            "unexpected_privileges",
            "low_confidence",
            "rank",
            "color",
        ])
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    for r in reports {
        let privileges = r
            .unexpected
            .iter()
            .map(|u| u.permission.as_str())
            .collect::<Vec<_>>()
            .join(";");
        writer
            .write_record([
                r.app_id.as_str(),
                &r.strategy.to_string(),
                r.group_id.as_str(),
                &format!("{}", r.score),
                &privileges,
                &r.low_confidence.to_string(),
                &r.rank.to_string(),
                &r.color.to_string(),
            ])
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Reports as JSON Lines, one report per line.
pub fn write_reports_jsonl(reports: &[UnexpectednessReport], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for r in reports {
        let line = serde_json::to_string(r).expect("report serializes");
        writeln!(writer, "{line}").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Per-group baseline summary written by the score and baselines commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaselineEntry {
    pub n_g: u64,
    pub baseline: Vec<String>,
}

pub fn write_baselines_json(
    frequencies: &BTreeMap<String, FrequencyTable>,
    cfg: &ScoringConfig,
    path: &Path,
) -> Result<()> {
    let baselines: BTreeMap<&String, BaselineEntry> = frequencies
        .iter()
        .map(|(gid, freq)| {
            (
                gid,
                BaselineEntry {
                    n_g: freq.n_g,
                    baseline: baseline_privileges(freq, cfg).into_iter().collect(),
                },
            )
        })
        .collect();
    let text = serde_json::to_string_pretty(&baselines).expect("baselines serialize");
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
