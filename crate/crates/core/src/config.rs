//! Numeric tolerances shared by every module.

use serde::{Deserialize, Serialize};

/// Tolerances and scan parameters. All geometric thresholds are relative to
/// the linkage scale (the largest bar length).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    /// Relative collinearity threshold used by orientation tests and by
    /// zero-sign (tangential) placements.
    pub geom: f64,
    /// Circle-circle discriminants at or above `-discriminant * scale^2` are
    /// clamped to zero.
    pub discriminant: f64,
    /// Candidate endpoints closer than `endpoint * scale` are merged, and
    /// interval endpoints closer than that are treated as shared.
    pub endpoint: f64,
    /// Initial number of uniform grid cells over the scanned domain.
    pub grid: usize,
    /// Cap on the number of canonical realization types enumerated.
    pub max_types: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { geom: 1e-9, discriminant: 1e-12, endpoint: 1e-7, grid: 1024, max_types: 1 << 20 }
    }
}
