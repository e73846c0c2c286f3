//! Machine-readable outcome of an identity sweep.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// First failing triple of a sweep, in canonical text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: String,
    pub y: String,
    pub v: String,
    pub residual: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub triples_checked: u64,
}

/// Outcome of a verification sweep. `witness` is present exactly when the
/// status is `fail`; `duration_ms` is excluded from golden comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: serde_json::Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub counts: Counts,
    pub duration_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Human-readable single line suitable for CLI output.
    pub fn summary(&self) -> String {
        match (&self.status, &self.witness) {
            (Status::Pass, _) => format!(
                "{}: pass ({} triples checked)",
                self.check, self.counts.triples_checked
            ),
            (Status::Fail, Some(w)) => format!(
                "{}: FAIL at x={} y={} v={} residual={}",
                self.check, w.x, w.y, w.v, w.residual
            ),
            (Status::Fail, None) => format!("{}: FAIL", self.check),
        }
    }
}
