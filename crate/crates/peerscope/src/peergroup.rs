//! Peer groups: sets of applications expected to offer similar
//! functionality, built from developer categories or related-items lists.
//! Text-model strategies produce the same structures (see `textmodels`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Label used for apps whose category field is empty.
pub const UNCATEGORIZED: &str = "(uncategorized)";

/// How a grouping run was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Category,
    RelatedItems,
    NaiveBayes,
    Lda,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::Category => "category",
            Strategy::RelatedItems => "related",
            Strategy::NaiveBayes => "naive_bayes",
            Strategy::Lda => "lda",
        };
        f.write_str(s)
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "category" => Ok(Strategy::Category),
            "related" | "related_items" => Ok(Strategy::RelatedItems),
            "nb" | "naive_bayes" => Ok(Strategy::NaiveBayes),
            "lda" => Ok(Strategy::Lda),
            other => Err(Error::Config(format!(
                "unknown strategy '{other}' (expected category, related, naive_bayes or lda)"
            ))),
        }
    }
}

/// A named set of member app ids produced by one grouping strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeerGroup {
    pub group_id: String,
    pub strategy: Strategy,
    /// Set only for related-items groups: the app the group was built around.
    pub anchor: Option<String>,
    pub members: BTreeSet<String>,
    pub label: String,
}

impl PeerGroup {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// All groups from one strategy run plus an app -> groups index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupingRun {
    pub strategy: Strategy,
    groups: BTreeMap<String, PeerGroup>,
    membership: BTreeMap<String, BTreeSet<String>>,
    anchors: BTreeMap<String, String>,
    /// Apps that ended up in no group (possible for LDA runs).
    pub unassigned: Vec<String>,
}

impl GroupingRun {
    /// Builds the run and its membership index. `universe` supplies the
    /// full app id set so uncovered apps can be recorded.
    pub fn new(
        strategy: Strategy,
        groups: Vec<PeerGroup>,
        universe: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let mut by_id = BTreeMap::new();
        let mut membership: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut anchors: BTreeMap<String, String> = BTreeMap::new();
        for group in groups {
            if group.members.is_empty() {
                return Err(Error::Data(format!(
                    "group '{}' has no members",
                    group.group_id
                )));
            }
            if let Some(anchor) = &group.anchor {
                if !group.members.contains(anchor) {
                    return Err(Error::Data(format!(
                        "group '{}' does not contain its anchor '{anchor}'",
                        group.group_id
                    )));
                }
                if anchors
                    .insert(anchor.clone(), group.group_id.clone())
                    .is_some()
                {
                    return Err(Error::Data(format!(
                        "app '{anchor}' anchors more than one group"
                    )));
                }
            }
            for member in &group.members {
                membership
                    .entry(member.clone())
                    .or_default()
                    .insert(group.group_id.clone());
            }
            if by_id.insert(group.group_id.clone(), group).is_some() {
                return Err(Error::Data("duplicate group id in run".into()));
            }
        }
        let unassigned = universe
            .into_iter()
            .filter(|id| !membership.contains_key(id))
            .collect();
        Ok(GroupingRun {
            strategy,
            groups: by_id,
            membership,
            anchors,
            unassigned,
        })
    }

    pub fn group(&self, group_id: &str) -> Option<&PeerGroup> {
        self.groups.get(group_id)
    }

    /// Groups in ascending group-id order.
    pub fn groups(&self) -> impl Iterator<Item = &PeerGroup> {
        self.groups.values()
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// The ids of every group containing `app_id` (empty if none).
    pub fn groups_of(&self, app_id: &str) -> impl Iterator<Item = &str> {
        self.membership
            .get(app_id)
            .into_iter()
            .flatten()
            .map(|s| s.as_str())
    }

    /// The group anchored by `app_id`, if any.
    pub fn anchor_group_of(&self, app_id: &str) -> Option<&PeerGroup> {
        self.anchors
            .get(app_id)
            .and_then(|gid| self.groups.get(gid))
    }

    /// Serializes the run as JSONL for caching between pipeline passes.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut writer = BufWriter::new(file);
        for group in self.groups() {
            let line = serde_json::to_string(group).expect("group serializes");
            writeln!(writer, "{line}").map_err(|e| Error::io(path, e))?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path, corpus: &Corpus) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut groups = Vec::new();
        let mut strategy = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let group: PeerGroup =
                serde_json::from_str(&line).map_err(|source| Error::MalformedLine {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    source,
                })?;
            strategy.get_or_insert(group.strategy);
            groups.push(group);
        }
        let strategy =
            strategy.ok_or_else(|| Error::Data(format!("{}: no groups", path.display())))?;
        GroupingRun::new(strategy, groups, corpus.ids().map(|s| s.to_string()))
    }
}

/// One group per distinct category label; a partition of the corpus. Apps
/// with an empty category land in a reserved group.
pub fn groups_by_category(corpus: &Corpus) -> GroupingRun {
    let mut members: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for app in corpus.apps() {
        let label = if app.category.is_empty() {
            UNCATEGORIZED.to_string()
        } else {
            app.category.clone()
        };
        members.entry(label).or_default().insert(app.app_id.clone());
    }
    let groups = members
        .into_iter()
        .map(|(label, members)| PeerGroup {
            group_id: format!("category:{label}"),
            strategy: Strategy::Category,
            anchor: None,
            members,
            label,
        })
        .collect();
    GroupingRun::new(
        Strategy::Category,
        groups,
        corpus.ids().map(|s| s.to_string()),
    )
    .expect("category groups are structurally valid")
}

/// One group per application: the app itself plus its resolvable related
/// items. Apps therefore appear in many groups; each app's own report is
/// drawn from the group it anchors.
pub fn groups_by_related(corpus: &Corpus) -> GroupingRun {
    let groups = corpus
        .apps()
        .map(|app| {
            let mut members: BTreeSet<String> = corpus
                .resolvable_related(app)
                .map(|s| s.to_string())
                .collect();
            members.insert(app.app_id.clone());
            PeerGroup {
                group_id: format!("related:{}", app.app_id),
                strategy: Strategy::RelatedItems,
                anchor: Some(app.app_id.clone()),
                members,
                label: if app.name.is_empty() {
                    app.app_id.clone()
                } else {
                    app.name.clone()
                },
            }
        })
        .collect();
    GroupingRun::new(
        Strategy::RelatedItems,
        groups,
        corpus.ids().map(|s| s.to_string()),
    )
    .expect("related groups are structurally valid")
}

/// Exact histogram of group sizes: size -> number of groups.
pub fn group_size_histogram(run: &GroupingRun) -> BTreeMap<usize, usize> {
    let mut histogram = BTreeMap::new();
    for group in run.groups() {
        *histogram.entry(group.size()).or_insert(0) += 1;
    }
    histogram
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_synthetic, AppRecord, SyntheticSpec};

    fn app(id: &str, category: &str, related: &[&str]) -> AppRecord {
        let mut a = AppRecord::new(id);
        a.category = category.to_string();
        a.related_ids = related.iter().map(|s| s.to_string()).collect();
        a
    }

    #[test]
    fn category_partition() {
        let corpus = Corpus::from_records(
            vec![
                app("a", "news", &[]),
                app("b", "news", &[]),
                app("c", "games", &[]),
            ],
            "t",
        );
        let run = groups_by_category(&corpus);
        assert_eq!(run.len(), 2);
        let sizes: Vec<usize> = run.groups().map(|g| g.size()).collect();
        assert_eq!(sizes, vec![1, 2]); // games, news in id order

        // Partition: every app in exactly one group.
        for app in corpus.apps() {
            assert_eq!(run.groups_of(&app.app_id).count(), 1);
        }
        assert!(run.unassigned.is_empty());
    }

    #[test]
    fn empty_category_goes_to_reserved_group() {
        let corpus = Corpus::from_records(vec![app("a", "", &[])], "t");
        let run = groups_by_category(&corpus);
        let group = run.groups().next().unwrap();
        assert_eq!(group.label, UNCATEGORIZED);
        assert!(group.members.contains("a"));
    }

    #[test]
    fn related_groups_anchor_plus_resolvable() {
        let corpus = Corpus::from_records(
            vec![
                app("A", "x", &["B", "C"]),
                app("B", "x", &[]),
                app("C", "x", &["Z"]),
            ],
            "t",
        );
        let run = groups_by_related(&corpus);
        assert_eq!(run.len(), 3);

        let ga = run.group("related:A").unwrap();
        assert_eq!(ga.anchor.as_deref(), Some("A"));
        let expected: BTreeSet<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
        assert_eq!(ga.members, expected);

        // No related items -> singleton; unresolvable ids are skipped.
        assert_eq!(run.group("related:B").unwrap().size(), 1);
        assert_eq!(run.group("related:C").unwrap().size(), 1);
    }

    #[test]
    fn histogram_counts_sizes() {
        let corpus = Corpus::from_records(
            vec![
                app("A", "x", &["B", "C"]),
                app("B", "x", &["A", "C"]),
                app("C", "x", &[]),
            ],
            "t",
        );
        let run = groups_by_related(&corpus);
        let hist = group_size_histogram(&run);
        let expected: BTreeMap<usize, usize> = [(1, 1), (3, 2)].into_iter().collect();
        assert_eq!(hist, expected);
    }

    #[test]
    fn histogram_of_empty_run_is_empty() {
        let corpus = Corpus::from_records(vec![], "t");
        let run = groups_by_related(&corpus);
        assert!(group_size_histogram(&run).is_empty());
    }

    #[test]
    fn synthetic_groups_match_planted_allocation() {
        let spec = SyntheticSpec::new(200, 10, 77);
        let (corpus, truth) = generate_synthetic(&spec).unwrap();
        let run = groups_by_category(&corpus);
        assert_eq!(run.len(), 10);
        for group in run.groups() {
            let planted = truth
                .group_of
                .iter()
                .filter(|(_, label)| **label == group.label)
                .count();
            assert_eq!(group.size(), planted);
        }

        // Related histogram equals a direct recount of 1 + resolvable.
        let related = groups_by_related(&corpus);
        let hist = group_size_histogram(&related);
        let mut recount: BTreeMap<usize, usize> = BTreeMap::new();
        for app in corpus.apps() {
            let size = 1 + corpus.resolvable_related(app).count();
            *recount.entry(size).or_insert(0) += 1;
        }
        assert_eq!(hist, recount);
    }

    #[test]
    fn grouping_is_insensitive_to_record_order() {
        let records = vec![
            app("b", "news", &[]),
            app("a", "news", &["b"]),
            app("c", "games", &[]),
        ];
        let mut reversed = records.clone();
        reversed.reverse();
        let c1 = Corpus::from_records(records, "t");
        let c2 = Corpus::from_records(reversed, "t");
        assert_eq!(groups_by_category(&c1), groups_by_category(&c2));
        assert_eq!(groups_by_related(&c1), groups_by_related(&c2));
    }

    #[test]
    fn run_round_trips_through_jsonl() {
        let corpus = Corpus::from_records(vec![app("A", "x", &["B"]), app("B", "y", &[])], "t");
        let run = groups_by_related(&corpus);
        let f = tempfile::NamedTempFile::new().unwrap();
        run.save(f.path()).unwrap();
        let loaded = GroupingRun::load(f.path(), &corpus).unwrap();
        assert_eq!(run, loaded);
    }

    #[test]
    fn rejects_empty_groups_and_missing_anchors() {
        let empty = PeerGroup {
            group_id: "g".into(),
            strategy: Strategy::Category,
            anchor: None,
            members: BTreeSet::new(),
            label: "g".into(),
        };
        assert!(GroupingRun::new(Strategy::Category, vec![empty], []).is_err());

        let missing_anchor = PeerGroup {
            group_id: "g".into(),
            strategy: Strategy::RelatedItems,
            anchor: Some("x".into()),
            members: ["y".to_string()].into_iter().collect(),
            label: "g".into(),
        };
        assert!(GroupingRun::new(Strategy::RelatedItems, vec![missing_anchor], []).is_err());
    }
}
