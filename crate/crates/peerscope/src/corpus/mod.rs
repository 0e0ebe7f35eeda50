//! Market snapshot model: application records, JSONL loading and saving,
//! and seeded synthetic corpora with planted ground truth.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::privilege::{is_host_like, PermissionCatalog};

mod synthetic;

pub use synthetic::{
    generate_synthetic, synthetic_api_map, synthetic_catalog, PlantedTruth, SuspensionBias,
    SyntheticSpec,
};

/// One market item. Grouping-strategy agnostic: the same record feeds the
/// category, related-items and text-model strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppRecord {
    #[serde(rename = "id")]
    pub app_id: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub category: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub declared_permissions: BTreeSet<String>,
    #[serde(default)]
    pub api_calls: BTreeSet<String>,
    #[serde(default)]
    pub related_ids: Vec<String>,
    #[serde(default)]
    pub suspended: bool,
}

impl AppRecord {
    pub fn new(app_id: impl Into<String>) -> Self {
        AppRecord {
            app_id: app_id.into(),
            name: String::new(),
            category: String::new(),
            description: String::new(),
            declared_permissions: BTreeSet::new(),
            api_calls: BTreeSet::new(),
            related_ids: Vec::new(),
            suspended: false,
        }
    }

    /// Enforces the record invariants that serde cannot: related ids are
    /// deduplicated (order preserved) and never contain the app itself.
    /// Returns a warning per dropped entry.
    fn normalize(&mut self) -> Vec<String> {
        let mut warnings = Vec::new();
        let mut seen = BTreeSet::new();
        let own = self.app_id.clone();
        self.related_ids.retain(|id| {
            if *id == own {
                warnings.push(format!("{own}: related_ids contains the app itself"));
                false
            } else if !seen.insert(id.clone()) {
                warnings.push(format!("{own}: duplicate related id '{id}'"));
                false
            } else {
                true
            }
        });
        warnings
    }
}

/// An immutable snapshot of applications keyed by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    apps: BTreeMap<String, AppRecord>,
    pub category_set: BTreeSet<String>,
    pub snapshot_label: String,
}

impl Corpus {
    pub fn from_records(records: Vec<AppRecord>, snapshot_label: impl Into<String>) -> Self {
        let mut apps = BTreeMap::new();
        let mut category_set = BTreeSet::new();
        for record in records {
            category_set.insert(record.category.clone());
            apps.insert(record.app_id.clone(), record);
        }
        Corpus {
            apps,
            category_set,
            snapshot_label: snapshot_label.into(),
        }
    }

    pub fn app(&self, id: &str) -> Option<&AppRecord> {
        self.apps.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.apps.contains_key(id)
    }

    /// Applications in ascending id order.
    pub fn apps(&self) -> impl Iterator<Item = &AppRecord> {
        self.apps.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.apps.keys().map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.apps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.apps.is_empty()
    }

    /// The related ids of `app` that resolve to applications present in
    /// this corpus, in list order.
    pub fn resolvable_related<'a>(&'a self, app: &'a AppRecord) -> impl Iterator<Item = &'a str> {
        app.related_ids
            .iter()
            .filter(|id| self.apps.contains_key(*id))
            .map(|s| s.as_str())
    }
}

/// Non-fatal findings from loading a snapshot.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    /// (line number, id) of records dropped because the id was already
    /// taken; the first occurrence wins.
    pub duplicate_ids: Vec<(usize, String)>,
    /// (app id, related id) pairs whose related id does not resolve.
    pub unresolved_related: Vec<(String, String)>,
    /// Per-field warnings: dropped related entries, unknown permission
    /// names, and similar.
    pub field_warnings: Vec<String>,
}

impl LoadReport {
    pub fn is_clean(&self) -> bool {
        self.duplicate_ids.is_empty()
            && self.unresolved_related.is_empty()
            && self.field_warnings.is_empty()
    }
}

/// Loads a JSON Lines snapshot. Malformed lines are fatal (with the line
/// number); duplicate ids, unresolved related ids and odd field values are
/// recorded in the report instead.
pub fn load_corpus(path: &Path, catalog: &PermissionCatalog) -> Result<(Corpus, LoadReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();

    let mut report = LoadReport::default();
    let mut apps: BTreeMap<String, AppRecord> = BTreeMap::new();
    let mut order_seen: BTreeSet<String> = BTreeSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut record: AppRecord =
            serde_json::from_str(&line).map_err(|source| Error::MalformedLine {
                path: path.to_path_buf(),
                line: line_no,
                source,
            })?;
        if record.app_id.is_empty() {
            return Err(Error::InvalidRecord {
                path: path.to_path_buf(),
                line: line_no,
                message: "record has an empty id".into(),
            });
        }
        if order_seen.contains(&record.app_id) {
            report.duplicate_ids.push((line_no, record.app_id.clone()));
            continue;
        }
        report.field_warnings.extend(record.normalize());

        let unknown: Vec<&String> = record
            .declared_permissions
            .iter()
            .filter(|p| !catalog.is_valid(p) && !is_host_like(p) && **p != catalog.host_exception)
            .collect();
        if !unknown.is_empty() {
            report.field_warnings.push(format!(
                "{}: {} unknown permission name(s): {}",
                record.app_id,
                unknown.len(),
                unknown
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }

        order_seen.insert(record.app_id.clone());
        apps.insert(record.app_id.clone(), record);
    }

    for app in apps.values() {
        for related in &app.related_ids {
            if !apps.contains_key(related) {
                report
                    .unresolved_related
                    .push((app.app_id.clone(), related.clone()));
            }
        }
    }

    let category_set = apps.values().map(|a| a.category.clone()).collect();
    Ok((
        Corpus {
            apps,
            category_set,
            snapshot_label: label,
        },
        report,
    ))
}

/// Writes a corpus as JSON Lines, one application per line, ids ascending.
pub fn save_corpus(corpus: &Corpus, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for app in corpus.apps() {
        let line = serde_json::to_string(app).expect("record serializes");
        writeln!(writer, "{line}").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
