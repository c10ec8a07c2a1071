//! JSON run reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::fixpoint::RunStats;

/// Wall-clock figures; excluded from reports meant for byte-exact
/// comparison.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Timings {
    pub total_ms: u64,
    pub weaken_ms: u64,
    pub cti_ms: u64,
    /// Share of tracked time spent weakening, in percent.
    pub weaken_pct: f64,
}

/// The report written by a fixpoint run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub bounds: BTreeMap<String, usize>,
    pub iterations: usize,
    pub peak_size: usize,
    pub formula_count: usize,
    /// Rendered formulas of the final antichain, in ascending total order.
    pub formulas: Vec<String>,
    pub inductive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub safe: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

impl Timings {
    pub fn from_stats(stats: &RunStats, total_ms: u64) -> Self {
        Timings {
            total_ms,
            weaken_ms: (stats.weaken_nanos / 1_000_000) as u64,
            cti_ms: (stats.cti_nanos / 1_000_000) as u64,
            weaken_pct: (stats.weaken_pct() * 10.0).round() / 10.0,
        }
    }
}
