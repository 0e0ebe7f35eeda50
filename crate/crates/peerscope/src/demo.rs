//! A small hand-curated market snapshot: two browser-extension peer groups
//! (PDF readers and tab managers) whose members share a common privilege
//! base but differ widely in extra privileges. Used by the examples and as
//! a golden fixture in tests.

use crate::corpus::{AppRecord, Corpus};
use crate::privilege::PermissionCatalog;

struct DemoApp {
    id: &'static str,
    name: &'static str,
    category: &'static str,
    description: &'static str,
    permissions: &'static [&'static str],
    related: &'static [&'static str],
}

const PDF_READERS: &[DemoApp] = &[
    DemoApp {
        id: "docs-pdfpowerpoint-viewer",
        name: "Docs PDF/PowerPoint Viewer",
        category: "pdf-reader",
        description: "View PDF and PowerPoint files right in your browser without downloading them",
        permissions: &["activeTab"],
        related: &[
            "pdfescape-free-pdf-editor",
            "beeline-reader",
            "pdf-viewer",
            "chrome-office-viewer-beta",
        ],
    },
    DemoApp {
        id: "pdfescape-free-pdf-editor",
        name: "PDFescape Free PDF Editor",
        category: "pdf-reader",
        description: "Edit and annotate PDF documents online for free",
        permissions: &["activeTab"],
        related: &[
            "docs-pdfpowerpoint-viewer",
            "beeline-reader",
            "pdf-viewer",
            "chrome-office-viewer-beta",
        ],
    },
    DemoApp {
        id: "beeline-reader",
        name: "BeeLine Reader",
        category: "pdf-reader",
        description: "Read PDFs and web pages faster with a color gradient that guides your eyes",
        permissions: &["activeTab", "webNavigation"],
        related: &[
            "docs-pdfpowerpoint-viewer",
            "pdfescape-free-pdf-editor",
            "pdf-viewer",
            "chrome-office-viewer-beta",
        ],
    },
    DemoApp {
        id: "pdf-viewer",
        name: "PDF Viewer",
        category: "pdf-reader",
        description: "Open PDF files in the browser with a fast built-in renderer",
        permissions: &[
            "activeTab",
            "WebNavigation",
            "webRequest",
            "webRequestBlocking",
        ],
        related: &[
            "docs-pdfpowerpoint-viewer",
            "pdfescape-free-pdf-editor",
            "beeline-reader",
            "chrome-office-viewer-beta",
        ],
    },
    DemoApp {
        id: "chrome-office-viewer-beta",
        name: "Chrome Office Viewer (Beta)",
        category: "pdf-reader",
        description: "View Word, Excel and PowerPoint files in the browser",
        permissions: &[
            "activeTab",
            "clipboardWrite",
            "fileBrowserHandler",
            "fileSystem",
        ],
        related: &[
            "docs-pdfpowerpoint-viewer",
            "pdfescape-free-pdf-editor",
            "beeline-reader",
            "pdf-viewer",
        ],
    },
];

const TAB_MANAGERS: &[DemoApp] = &[
    DemoApp {
        id: "tab-manager",
        name: "Tab Manager",
        category: "tab-manager",
        description: "Quickly switch, search and close your open tabs",
        permissions: &["tabs"],
        related: &[
            "project-tab-manager",
            "awesome-tab-manager",
            "toomanytabs-for-chrome",
            "tabs-outliner",
            "tabman-tabs-manager",
            "fruumo-tab-manager",
            "session-box-tabs-manager",
        ],
    },
    DemoApp {
        id: "project-tab-manager",
        name: "Project Tab Manager",
        category: "tab-manager",
        description: "Save tab sets as projects and restore them later",
        permissions: &["tabs", "bookmarks"],
        related: &[
            "tab-manager",
            "tabs-outliner",
            "tabman-tabs-manager",
            "session-box-tabs-manager",
        ],
    },
    DemoApp {
        id: "awesome-tab-manager",
        name: "Awesome Tab Manager",
        category: "tab-manager",
        description: "Organize tabs into groups and keep sessions around",
        permissions: &["tabs", "bookmarks", "unlimitedStorage"],
        related: &[
            "tab-manager",
            "tabs-outliner",
            "tabman-tabs-manager",
            "docs-pdfpowerpoint-viewer",
        ],
    },
    DemoApp {
        id: "toomanytabs-for-chrome",
        name: "TooManyTabs for Chrome",
        category: "tab-manager",
        description: "Suspend and restore tabs to reclaim memory",
        permissions: &["tabs", "bookmarks", "unlimitedStorage"],
        related: &[
            "tab-manager",
            "tabs-outliner",
            "tabman-tabs-manager",
            "pdfescape-free-pdf-editor",
        ],
    },
    DemoApp {
        id: "tabs-outliner",
        name: "Tabs Outliner",
        category: "tab-manager",
        description: "Tree-style overview of all your windows and tabs",
        permissions: &["tabs", "idle", "notifications", "storage"],
        related: &[
            "tab-manager",
            "project-tab-manager",
            "awesome-tab-manager",
            "toomanytabs-for-chrome",
        ],
    },
    DemoApp {
        id: "tabman-tabs-manager",
        name: "Tabman Tabs Manager",
        category: "tab-manager",
        description: "Jump between tabs with keyboard shortcuts and search",
        permissions: &["tabs", "history", "topsites", "webNavigation"],
        related: &[
            "tab-manager",
            "project-tab-manager",
            "awesome-tab-manager",
            "toomanytabs-for-chrome",
        ],
    },
    DemoApp {
        id: "fruumo-tab-manager",
        name: "Fruumo Tab Manager",
        category: "tab-manager",
        description: "Visual tab switcher with previews",
        permissions: &["tabs", "bookmarks", "history", "unlimitedStorage"],
        related: &[
            "tab-manager",
            "tabs-outliner",
            "docs-pdfpowerpoint-viewer",
            "pdfescape-free-pdf-editor",
        ],
    },
    DemoApp {
        id: "session-box-tabs-manager",
        name: "Session Box - Tabs Manager",
        category: "tab-manager",
        description: "Save complete browsing sessions and share them across devices",
        permissions: &[
            "tabs",
            "clipboardWrite",
            "cookies",
            "management",
            "unlimitedStorage",
        ],
        related: &[
            "tab-manager",
            "project-tab-manager",
            "tabs-outliner",
            "tabman-tabs-manager",
        ],
    },
];

/// The demo snapshot: 13 extensions across the two peer groups.
pub fn demo_corpus() -> Corpus {
    let records = PDF_READERS
        .iter()
        .chain(TAB_MANAGERS.iter())
        .map(|d| {
            let mut record = AppRecord::new(d.id);
            record.name = d.name.to_string();
            record.category = d.category.to_string();
            record.description = d.description.to_string();
            record.declared_permissions = d.permissions.iter().map(|s| s.to_string()).collect();
            record.related_ids = d.related.iter().map(|s| s.to_string()).collect();
            record
        })
        .collect();
    Corpus::from_records(records, "demo-market")
}

/// A catalog in which every permission of the demo snapshot is valid and
/// security sensitive (weight 1).
pub fn demo_catalog() -> PermissionCatalog {
    PermissionCatalog::covering(
        demo_corpus()
            .apps()
            .flat_map(|a| a.declared_permissions.iter().cloned()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_relations_resolve() {
        let corpus = demo_corpus();
        assert_eq!(corpus.len(), 13);
        for app in corpus.apps() {
            assert_eq!(
                corpus.resolvable_related(app).count(),
                app.related_ids.len()
            );
        }
    }

    #[test]
    fn demo_catalog_covers_all_permissions() {
        let corpus = demo_corpus();
        let catalog = demo_catalog();
        for app in corpus.apps() {
            for p in &app.declared_permissions {
                assert!(catalog.is_valid(p));
                assert_eq!(catalog.weight(p), 1.0);
            }
        }
    }
}
