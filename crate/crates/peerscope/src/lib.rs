//! Peer-group analysis of application privileges.
//!
//! Software markets know roughly what an application *does* (its category,
//! its related items, its description) and exactly what it *may do* (its
//! permissions). This crate clusters applications into functionality peer
//! groups, compares each application's privileges against its peers, and
//! scores how unexpected those privileges are. Apps holding privileges that
//! are rare among their peers rank as likely least-privilege violators, and
//! each group's common privileges become a baseline developers can aim for.
//!
//! The pipeline has two passes, mirroring a map-reduce deployment: pass one
//! computes per-group privilege relative frequencies, pass two scores every
//! application against its group's table. Thresholds are exact rationals so
//! the `frequency == threshold` boundary never depends on float rounding.
//!
//! Start with the `examples/` directory, one runnable example per
//! capability, or the `peerscope` binary (`generate`, `score`, `experiment`,
//! `train`, `baselines`).

pub mod cli;
pub mod corpus;
pub mod demo;
pub mod error;
pub mod experiments;
pub mod peergroup;
pub mod privilege;
pub mod ratio;
pub mod scoring;
pub mod textmodels;

pub use error::{Error, Result};
pub use ratio::Ratio;
