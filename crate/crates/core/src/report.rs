//! Structured results of theorem-level verification runs.

use serde::Serialize;

pub const REPORT_SCHEMA: u32 = 1;

/// One graded comparison: dimensions of the two sides at a degree.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PerDegree {
    pub degree: usize,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
}

/// Result of one claim check. `verdict` is `pass`, `fail`, or `evidence` for
/// the exploratory run that records dimensions without asserting anything.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub claim: String,
    pub algebra: String,
    pub level: i64,
    pub cutoff: usize,
    pub per_degree: Vec<PerDegree>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub seconds: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass" || self.verdict == "evidence"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// JSON with the timing field zeroed, for byte-level determinism checks.
    pub fn to_json_without_timing(&self) -> String {
        let mut copy = self.clone();
        copy.seconds = 0.0;
        serde_json::to_string(&copy).expect("report serializes")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "claim {} on {} level {} cutoff {}: {}\n",
            self.claim, self.algebra, self.level, self.cutoff, self.verdict
        ));
        if !self.per_degree.is_empty() {
            out.push_str("  degree  lhs  rhs\n");
            for row in &self.per_degree {
                out.push_str(&format!(
                    "  {:>6}  {:>3}  {:>3}\n",
                    row.degree, row.lhs_dim, row.rhs_dim
                ));
            }
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("  witness: {w}\n"));
        }
        out.push_str(&format!("  seconds: {:.3}\n", self.seconds));
        out
    }
}
