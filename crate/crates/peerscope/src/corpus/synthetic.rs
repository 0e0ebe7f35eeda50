//! Seeded synthetic corpora with planted over-privileged outliers.
//!
//! The generator plants two contracts that downstream evaluations rely on:
//! every group-base permission is used by at least half of its group, and
//! every planted spurious permission stays strictly below 5% relative
//! frequency within the group it was planted into.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{AppRecord, Corpus};
use crate::error::{Error, Result};
use crate::privilege::{ApiPermissionMap, PermissionCatalog};

/// Planted spurious permissions must stay below 1/20 (5%) of the group.
const SPURIOUS_MAX: (u64, u64) = (1, 20);

/// Number of same-group neighbours put in each app's related list. Sized
/// so that a privilege held only by the anchor sits below a 1/20 relative
/// frequency in its related-items group.
const RELATED_NEIGHBOURS: usize = 24;

/// Probability that a member uses any given base permission of its group
/// (repaired upward afterwards so every base permission reaches half the
/// group).
const BASE_PERM_USE_PROB: f64 = 0.75;

/// Probability that an outlier's spurious permission also shows up in its
/// API calls; the rest are dropped there, so the intersection estimate
/// sheds part of the planted over-privilege.
const SPURIOUS_CALL_PROB: f64 = 0.5;

/// Monotone step map from an app's planted spurious-permission count to
/// its suspension probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspensionBias {
    steps: Vec<(usize, f64)>,
}

impl SuspensionBias {
    pub fn new(mut steps: Vec<(usize, f64)>) -> Result<Self> {
        steps.sort_by_key(|(count, _)| *count);
        steps.dedup_by_key(|(count, _)| *count);
        if steps.is_empty() {
            return Err(Error::Config(
                "suspension bias needs at least one step".into(),
            ));
        }
        let mut prev = -1.0;
        for (count, p) in &steps {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Config(format!(
                    "suspension probability {p} for count {count} outside [0, 1]"
                )));
            }
            if *p < prev {
                return Err(Error::Config(
                    "suspension bias must be nondecreasing in the spurious count".into(),
                ));
            }
            prev = *p;
        }
        Ok(SuspensionBias { steps })
    }

    /// Probability for a given planted spurious count: the value of the
    /// largest step at or below it, 0 below the first step.
    pub fn probability(&self, spurious_count: usize) -> f64 {
        self.steps
            .iter()
            .take_while(|(count, _)| *count <= spurious_count)
            .last()
            .map(|(_, p)| *p)
            .unwrap_or(0.0)
    }

    pub fn steps(&self) -> &[(usize, f64)] {
        &self.steps
    }
}

impl Default for SuspensionBias {
    fn default() -> Self {
        SuspensionBias::new(vec![(0, 0.02), (1, 0.30), (2, 0.60), (3, 0.90)]).unwrap()
    }
}

impl FromStr for SuspensionBias {
    type Err = Error;

    /// Parses `count:prob` pairs separated by commas, e.g. `0:0.02,3:0.9`.
    fn from_str(s: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for part in s.split(',') {
            let (count, prob) = part
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("bad bias step '{part}'")))?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad bias count '{count}'")))?;
            let prob: f64 = prob
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad bias probability '{prob}'")))?;
            steps.push((count, prob));
        }
        SuspensionBias::new(steps)
    }
}

/// Parameters for one synthetic corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_apps: usize,
    pub n_groups: usize,
    pub vocab_per_group: usize,
    pub perms_per_group: usize,
    pub outlier_fraction: f64,
    pub spurious_perms_per_outlier: usize,
    pub suspension_bias: SuspensionBias,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(n_apps: usize, n_groups: usize, seed: u64) -> Self {
        SyntheticSpec {
            n_apps,
            n_groups,
            vocab_per_group: 40,
            perms_per_group: 8,
            outlier_fraction: 0.0,
            spurious_perms_per_outlier: 3,
            suspension_bias: SuspensionBias::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_apps == 0 || self.n_groups == 0 {
            return Err(Error::Config("n_apps and n_groups must be positive".into()));
        }
        if self.vocab_per_group == 0 || self.perms_per_group == 0 {
            return Err(Error::Config(
                "vocab_per_group and perms_per_group must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.outlier_fraction) {
            return Err(Error::Config("outlier_fraction must lie in [0, 1]".into()));
        }
        if self.n_groups > self.n_apps {
            return Err(Error::Config("more groups than apps".into()));
        }
        Ok(())
    }
}

/// The generator's record of what it planted, used as the evaluation
/// oracle.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedTruth {
    /// Outlier app id -> the spurious permissions planted on it.
    pub outliers: BTreeMap<String, BTreeSet<String>>,
    /// App id -> its group's category label.
    pub group_of: BTreeMap<String, String>,
    /// Category label -> the group-private base permission set.
    pub base_permissions: BTreeMap<String, BTreeSet<String>>,
}

impl PlantedTruth {
    pub fn is_outlier(&self, app_id: &str) -> bool {
        self.outliers.contains_key(app_id)
    }
}

fn group_label(g: usize) -> String {
    format!("group-{g:02}")
}

fn perm_name(g: usize, j: usize) -> String {
    format!("perm.{g:02}.{j:02}")
}

/// Base-26 lowercase encoding, at least two letters, so vocabulary words
/// survive a tokenizer that splits on non-alphabetic characters.
fn letters(mut n: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (n % 26) as u8);
        n /= 26;
        if n == 0 {
            break;
        }
    }
    while out.len() < 2 {
        out.push(b'a');
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

fn vocab_word(g: usize, j: usize) -> String {
    format!("w{}x{}", letters(g), letters(j))
}

/// Deterministically generates a corpus from the spec. Identical specs
/// (including the seed) produce identical corpora.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<(Corpus, PlantedTruth)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let group_perms: Vec<Vec<String>> = (0..spec.n_groups)
        .map(|g| (0..spec.perms_per_group).map(|j| perm_name(g, j)).collect())
        .collect();
    let group_vocab: Vec<Vec<String>> = (0..spec.n_groups)
        .map(|g| {
            (0..spec.vocab_per_group)
                .map(|j| vocab_word(g, j))
                .collect()
        })
        .collect();

    // Apps are dealt to groups round-robin: app i belongs to group i % n_groups.
    let group_members: Vec<Vec<usize>> = (0..spec.n_groups)
        .map(|g| (g..spec.n_apps).step_by(spec.n_groups).collect())
        .collect();

    let outliers_per_group = allocate_outliers(spec, &group_members);

    let mut records: BTreeMap<usize, AppRecord> = BTreeMap::new();
    let mut truth = PlantedTruth::default();

    for (g, members) in group_members.iter().enumerate() {
        let label = group_label(g);
        truth
            .base_permissions
            .insert(label.clone(), group_perms[g].iter().cloned().collect());

        let n_g = members.len();
        let outlier_set: BTreeSet<usize> = {
            let k = outliers_per_group[g];
            let mut picked: Vec<usize> = sample(&mut rng, n_g, k).into_iter().collect();
            picked.sort_unstable();
            picked.into_iter().map(|pos| members[pos]).collect()
        };

        // Base permission draws, then repair so each base permission is
        // used by at least half the group.
        let mut base_use: BTreeMap<usize, BTreeSet<String>> = members
            .iter()
            .map(|&i| {
                let perms = group_perms[g]
                    .iter()
                    .filter(|_| rng.gen_bool(BASE_PERM_USE_PROB))
                    .cloned()
                    .collect();
                (i, perms)
            })
            .collect();
        for perm in &group_perms[g] {
            let mut count = base_use.values().filter(|s| s.contains(perm)).count();
            for &i in members {
                if 2 * count >= n_g {
                    break;
                }
                if base_use.get_mut(&i).unwrap().insert(perm.clone()) {
                    count += 1;
                }
            }
        }

        // Foreign pool for spurious planting: every other group's base set.
        let foreign: Vec<&String> = group_perms
            .iter()
            .enumerate()
            .filter(|(og, _)| *og != g)
            .flat_map(|(_, perms)| perms.iter())
            .collect();
        let mut spurious_counts: BTreeMap<&String, u64> = BTreeMap::new();

        for &i in members {
            let app_id = format!("app-{i:05}");
            let mut record = AppRecord::new(&app_id);
            record.name = format!("App {i}");
            record.category = label.clone();
            truth.group_of.insert(app_id.clone(), label.clone());

            let len = rng.gen_range(20..=40);
            let words: Vec<&String> = (0..len)
                .map(|_| &group_vocab[g][rng.gen_range(0..spec.vocab_per_group)])
                .collect();
            record.description = words
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join(" ");

            record.declared_permissions = base_use.remove(&i).unwrap();

            let mut spurious: BTreeSet<String> = BTreeSet::new();
            if outlier_set.contains(&i) {
                if spec.spurious_perms_per_outlier > foreign.len() {
                    return Err(Error::Config(format!(
                        "spec infeasible: {} spurious permissions requested but only {} foreign permissions exist",
                        spec.spurious_perms_per_outlier,
                        foreign.len()
                    )));
                }
                while spurious.len() < spec.spurious_perms_per_outlier {
                    let candidates: Vec<&String> = foreign
                        .iter()
                        .copied()
                        .filter(|p| {
                            !spurious.contains(*p)
                                && fits_spurious_cap(spurious_counts.get(*p).copied(), n_g)
                        })
                        .collect();
                    if candidates.is_empty() {
                        return Err(Error::Config(format!(
                            "spec infeasible: cannot plant {} spurious permissions in a group of {} without breaching the 5% frequency cap",
                            spec.spurious_perms_per_outlier, n_g
                        )));
                    }
                    let pick = candidates[rng.gen_range(0..candidates.len())];
                    spurious.insert(pick.clone());
                    *spurious_counts.entry(pick).or_insert(0) += 1;
                }
                record.declared_permissions.extend(spurious.iter().cloned());
                truth.outliers.insert(app_id.clone(), spurious.clone());
            }

            // API calls: every base permission is exercised; spurious
            // permissions only sometimes, so intersection trims them.
            for perm in &record.declared_permissions {
                let keep = !spurious.contains(perm) || rng.gen_bool(SPURIOUS_CALL_PROB);
                if keep {
                    record.api_calls.insert(format!("api::{perm}"));
                }
            }

            record.suspended = rng.gen_bool(spec.suspension_bias.probability(spurious.len()));

            records.insert(i, record);
        }
    }

    // Related ids: the next RELATED_NEIGHBOURS members of the same group,
    // cyclically, so every anchor group has a deterministic size.
    for members in &group_members {
        let n_g = members.len();
        let take = RELATED_NEIGHBOURS.min(n_g.saturating_sub(1));
        for (pos, &i) in members.iter().enumerate() {
            let related: Vec<String> = (1..=take)
                .map(|step| format!("app-{:05}", members[(pos + step) % n_g]))
                .collect();
            records.get_mut(&i).unwrap().related_ids = related;
        }
    }

    let corpus = Corpus::from_records(
        records.into_values().collect(),
        format!("synthetic-{}", spec.seed),
    );
    Ok((corpus, truth))
}

/// True when adding one more holder keeps the permission strictly below
/// the spurious frequency cap.
fn fits_spurious_cap(current: Option<u64>, n_g: usize) -> bool {
    let next = current.unwrap_or(0) + 1;
    next * SPURIOUS_MAX.1 < SPURIOUS_MAX.0 * n_g as u64
}

/// Outlier counts per group: floor of the group-size share per group, with
/// the remainder (up to the corpus-wide floor) handed to the lowest group
/// indices.
fn allocate_outliers(spec: &SyntheticSpec, group_members: &[Vec<usize>]) -> Vec<usize> {
    // The epsilon recovers exact products that f64 undershoots
    // (e.g. 100 * 0.29 = 28.999999999999996).
    let target = (spec.n_apps as f64 * spec.outlier_fraction + 1e-9).floor() as usize;
    let mut per_group: Vec<usize> = group_members
        .iter()
        .map(|m| (m.len() as f64 * spec.outlier_fraction + 1e-9).floor() as usize)
        .collect();
    let mut remainder = target.saturating_sub(per_group.iter().sum::<usize>());
    for (g, members) in group_members.iter().enumerate() {
        if remainder == 0 {
            break;
        }
        if per_group[g] < members.len() {
            per_group[g] += 1;
            remainder -= 1;
        }
    }
    per_group
}

/// A catalog covering exactly the permissions declared in the corpus, all
/// of them sensitive with weight 1.
pub fn synthetic_catalog(corpus: &Corpus) -> PermissionCatalog {
    PermissionCatalog::covering(
        corpus
            .apps()
            .flat_map(|a| a.declared_permissions.iter().cloned()),
    )
}

/// The API map matching the generator's `api::<permission>` call naming.
pub fn synthetic_api_map(corpus: &Corpus) -> ApiPermissionMap {
    let mut entries: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for app in corpus.apps() {
        for call in &app.api_calls {
            if let Some(perm) = call.strip_prefix("api::") {
                entries
                    .entry(call.clone())
                    .or_default()
                    .insert(perm.to_string());
            }
        }
    }
    ApiPermissionMap::new(entries)
}
