use serde::{Deserialize, Serialize};

/// Provenance block attached to every estimate report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    /// Hash of the experiment config that produced the field.
    pub spec_hash: String,
    pub grid: String,
    pub eps: f64,
    pub gamma: f64,
    /// Level-set threshold used for the free boundary.
    pub threshold: f64,
    pub seed: u64,
}

/// One named scalar check; `passed` always cites the tolerance it used.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    /// What the tolerance constrains (an absolute bound, a band ratio, ...).
    pub criterion: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleRow {
    pub scale: f64,
    pub raw: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScaleTable {
    pub name: String,
    pub rows: Vec<ScaleRow>,
}

/// Quantitative estimate bundle for one field: named checks with declared
/// tolerances plus the per-scale tables behind them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimator: String,
    pub provenance: Provenance,
    pub checks: Vec<NamedCheck>,
    pub tables: Vec<ScaleTable>,
}

impl EstimateReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}
