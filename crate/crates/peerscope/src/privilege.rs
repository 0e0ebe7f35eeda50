//! Permission catalogs and the three ways of estimating an application's
//! used privileges: requested (manifest), estimated (API calls mapped to
//! permissions), and their intersection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::AppRecord;
use crate::error::{Error, Result};

pub const DEFAULT_HOST_EXCEPTION: &str = "all_urls";

/// The universe of valid permission names together with per-permission
/// sensitivity weights. A permission's weight defaults to 1 when it is
/// listed as security sensitive and 0 otherwise; the optional weights
/// table overrides both.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermissionCatalog {
    pub valid_permissions: BTreeSet<String>,
    pub sensitive: BTreeSet<String>,
    #[serde(default)]
    pub weights: BTreeMap<String, f64>,
    #[serde(default = "default_host_exception")]
    pub host_exception: String,
}

fn default_host_exception() -> String {
    DEFAULT_HOST_EXCEPTION.to_string()
}

impl PermissionCatalog {
    pub fn new(
        valid: impl IntoIterator<Item = String>,
        sensitive: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let catalog = PermissionCatalog {
            valid_permissions: valid.into_iter().collect(),
            sensitive: sensitive.into_iter().collect(),
            weights: BTreeMap::new(),
            host_exception: default_host_exception(),
        };
        catalog.validate()?;
        Ok(catalog)
    }

    /// A catalog in which every given permission is valid and security
    /// sensitive (weight 1). Used for synthetic corpora whose permission
    /// universe is known exactly.
    pub fn covering(perms: impl IntoIterator<Item = String>) -> Self {
        let valid: BTreeSet<String> = perms.into_iter().collect();
        PermissionCatalog {
            sensitive: valid.clone(),
            valid_permissions: valid,
            weights: BTreeMap::new(),
            host_exception: default_host_exception(),
        }
    }

    /// The built-in catalog of browser-extension permissions used when no
    /// catalog file is supplied. The sensitive subset is an editorial
    /// choice; override it with a catalog file for anything serious.
    pub fn default_browser() -> Self {
        let valid = [
            "activeTab",
            "alarms",
            "all_urls",
            "background",
            "bookmarks",
            "browsingData",
            "clipboardRead",
            "clipboardWrite",
            "contentSettings",
            "contextMenus",
            "cookies",
            "debugger",
            "declarativeContent",
            "desktopCapture",
            "downloads",
            "fileBrowserHandler",
            "fileSystem",
            "fontSettings",
            "geolocation",
            "history",
            "identity",
            "idle",
            "management",
            "nativeMessaging",
            "notifications",
            "pageCapture",
            "power",
            "privacy",
            "proxy",
            "sessions",
            "storage",
            "tabCapture",
            "tabs",
            "topSites",
            "tts",
            "unlimitedStorage",
            "webNavigation",
            "webRequest",
            "webRequestBlocking",
        ];
        let sensitive = [
            "all_urls",
            "bookmarks",
            "browsingData",
            "clipboardRead",
            "clipboardWrite",
            "cookies",
            "debugger",
            "desktopCapture",
            "downloads",
            "fileBrowserHandler",
            "fileSystem",
            "geolocation",
            "history",
            "identity",
            "management",
            "nativeMessaging",
            "pageCapture",
            "privacy",
            "proxy",
            "sessions",
            "tabCapture",
            "tabs",
            "topSites",
            "unlimitedStorage",
            "webNavigation",
            "webRequest",
            "webRequestBlocking",
        ];
        PermissionCatalog {
            valid_permissions: valid.iter().map(|s| s.to_string()).collect(),
            sensitive: sensitive.iter().map(|s| s.to_string()).collect(),
            weights: BTreeMap::new(),
            host_exception: default_host_exception(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let catalog: PermissionCatalog = serde_json::from_str(&text)
            .map_err(|e| Error::Data(format!("{}: invalid catalog: {e}", path.display())))?;
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("catalog serializes");
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    fn validate(&self) -> Result<()> {
        if let Some(p) = self.sensitive.difference(&self.valid_permissions).next() {
            return Err(Error::Data(format!(
                "catalog lists '{p}' as sensitive but not as a valid permission"
            )));
        }
        if let Some((p, w)) = self.weights.iter().find(|(_, w)| **w < 0.0) {
            return Err(Error::Data(format!(
                "catalog weight for '{p}' is negative ({w})"
            )));
        }
        Ok(())
    }

    pub fn is_valid(&self, permission: &str) -> bool {
        self.valid_permissions.contains(permission)
    }

    /// The weight W_p of a permission: explicit override if present, else
    /// 1 for sensitive permissions and 0 for the rest.
    pub fn weight(&self, permission: &str) -> f64 {
        if let Some(w) = self.weights.get(permission) {
            return *w;
        }
        if self.sensitive.contains(permission) {
            1.0
        } else {
            0.0
        }
    }
}

/// Mapping from API signature to the permissions required to call it.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ApiPermissionMap {
    pub entries: BTreeMap<String, BTreeSet<String>>,
}

impl ApiPermissionMap {
    pub fn new(entries: BTreeMap<String, BTreeSet<String>>) -> Self {
        ApiPermissionMap { entries }
    }

    /// Loads a mapping file and drops any mapped permission not valid in
    /// the catalog. Dropped permissions are returned for reporting; entries
    /// left empty are removed entirely.
    pub fn load(path: &Path, catalog: &PermissionCatalog) -> Result<(Self, Vec<String>)> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let raw: BTreeMap<String, BTreeSet<String>> = serde_json::from_str(&text)
            .map_err(|e| Error::Data(format!("{}: invalid API map: {e}", path.display())))?;
        let mut violations = Vec::new();
        let mut entries = BTreeMap::new();
        for (call, perms) in raw {
            let (valid, invalid): (BTreeSet<String>, BTreeSet<String>) =
                perms.into_iter().partition(|p| catalog.is_valid(p));
            for p in invalid {
                violations.push(format!("{call} -> {p}"));
            }
            if !valid.is_empty() {
                entries.insert(call, valid);
            }
        }
        Ok((ApiPermissionMap { entries }, violations))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("api map serializes");
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Which privilege estimate to compare against the peer group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrivilegeKind {
    Requested,
    Estimated,
    Intersection,
    ApiCallsRaw,
}

pub type PrivilegeMode = PrivilegeKind;

impl fmt::Display for PrivilegeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PrivilegeKind::Requested => "requested",
            PrivilegeKind::Estimated => "estimated",
            PrivilegeKind::Intersection => "intersection",
            PrivilegeKind::ApiCallsRaw => "api_calls_raw",
        };
        f.write_str(s)
    }
}

impl FromStr for PrivilegeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "requested" => Ok(PrivilegeKind::Requested),
            "estimated" => Ok(PrivilegeKind::Estimated),
            "intersection" => Ok(PrivilegeKind::Intersection),
            "api_calls_raw" | "raw" => Ok(PrivilegeKind::ApiCallsRaw),
            other => Err(Error::Config(format!(
                "unknown privilege mode '{other}' (expected requested, estimated, intersection or api_calls_raw)"
            ))),
        }
    }
}

/// One application's privilege set under a particular estimate.
///
/// For the three permission-based kinds the members are permission names
/// valid per the active catalog (plus the host exception). For
/// `ApiCallsRaw` the members are the API-call signatures themselves,
/// treated as the privilege universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivilegeSet {
    pub kind: PrivilegeKind,
    pub permissions: BTreeSet<String>,
}

impl PrivilegeSet {
    pub fn contains(&self, p: &str) -> bool {
        self.permissions.contains(p)
    }

    pub fn len(&self) -> usize {
        self.permissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permissions.is_empty()
    }
}

/// True for entries that look like host match patterns rather than named
/// permissions: anything containing `://` or a `*` wildcard, or starting
/// with `*.`.
pub fn is_host_like(entry: &str) -> bool {
    entry.contains("://") || entry.contains('*') || entry.starts_with("*.")
}

/// Normalizes a manifest's declared permission strings: invalid names are
/// dropped, host patterns are dropped, and the all-hosts token is kept
/// when literally present.
pub fn normalize_requested(raw: &BTreeSet<String>, catalog: &PermissionCatalog) -> PrivilegeSet {
    let mut permissions: BTreeSet<String> = raw
        .iter()
        .filter(|p| !is_host_like(p) && catalog.is_valid(p))
        .cloned()
        .collect();
    if raw.contains(&catalog.host_exception) {
        permissions.insert(catalog.host_exception.clone());
    }
    PrivilegeSet {
        kind: PrivilegeKind::Requested,
        permissions,
    }
}

/// Maps API calls through the catalog's call->permission table; the union
/// of the mapped sets is the estimate. Calls absent from the map are
/// ignored; their count is returned as an advisory tally.
pub fn estimate_from_api_calls(
    calls: &BTreeSet<String>,
    map: &ApiPermissionMap,
) -> (PrivilegeSet, usize) {
    let mut permissions = BTreeSet::new();
    let mut unmapped = 0usize;
    for call in calls {
        match map.entries.get(call) {
            Some(perms) => permissions.extend(perms.iter().cloned()),
            None => unmapped += 1,
        }
    }
    (
        PrivilegeSet {
            kind: PrivilegeKind::Estimated,
            permissions,
        },
        unmapped,
    )
}

/// Intersection of the requested and estimated sets.
pub fn intersect(requested: &PrivilegeSet, estimated: &PrivilegeSet) -> Result<PrivilegeSet> {
    if requested.kind != PrivilegeKind::Requested || estimated.kind != PrivilegeKind::Estimated {
        return Err(Error::Data(format!(
            "intersect expects (requested, estimated) sets, got ({}, {})",
            requested.kind, estimated.kind
        )));
    }
    Ok(PrivilegeSet {
        kind: PrivilegeKind::Intersection,
        permissions: requested
            .permissions
            .intersection(&estimated.permissions)
            .cloned()
            .collect(),
    })
}

/// Dispatches to the selected privilege estimate for one application.
/// `Estimated` and `Intersection` require an API map.
pub fn privileges_of(
    app: &AppRecord,
    mode: PrivilegeKind,
    catalog: &PermissionCatalog,
    api_map: Option<&ApiPermissionMap>,
) -> Result<PrivilegeSet> {
    let need_map = || {
        api_map.ok_or_else(|| Error::Config(format!("privilege mode '{mode}' requires an API map")))
    };
    match mode {
        PrivilegeKind::Requested => Ok(normalize_requested(&app.declared_permissions, catalog)),
        PrivilegeKind::Estimated => {
            let (set, _) = estimate_from_api_calls(&app.api_calls, need_map()?);
            Ok(set)
        }
        PrivilegeKind::Intersection => {
            let requested = normalize_requested(&app.declared_permissions, catalog);
            let (estimated, _) = estimate_from_api_calls(&app.api_calls, need_map()?);
            intersect(&requested, &estimated)
        }
        PrivilegeKind::ApiCallsRaw => Ok(PrivilegeSet {
            kind: PrivilegeKind::ApiCallsRaw,
            permissions: app.api_calls.clone(),
        }),
    }
}
