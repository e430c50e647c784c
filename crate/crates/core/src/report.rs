use std::fmt;

use serde::Serialize;

use crate::spectra::Finding;

/// Outcome of a single named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

impl Verdict {
    pub fn from_witness(witness: Option<String>) -> Self {
        match witness {
            None => Verdict::Pass,
            Some(witness) => Verdict::Fail { witness },
        }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Verdict::Skipped {
            reason: reason.into(),
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail { witness } => write!(f, "FAIL ({witness})"),
            Verdict::Skipped { reason } => write!(f, "skipped ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub verdict: Verdict,
}

impl Check {
    pub fn new(id: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            id: id.into(),
            verdict,
        }
    }

    /// Pass when `holds`, otherwise fail with `witness`.
    pub fn expect(id: impl Into<String>, holds: bool, witness: impl FnOnce() -> String) -> Self {
        let verdict = if holds {
            Verdict::Pass
        } else {
            Verdict::Fail {
                witness: witness(),
            }
        };
        Self::new(id, verdict)
    }

    /// Wraps a finding; `gate` is the reason to skip, if the claim's
    /// hypotheses are not met.
    pub fn from_finding(id: impl Into<String>, f: &Finding, gate: Option<&str>) -> Self {
        let verdict = match gate {
            Some(reason) => Verdict::skipped(reason),
            None if f.holds => Verdict::Pass,
            None => Verdict::Fail {
                witness: if f.detail.is_empty() {
                    f.claim.to_string()
                } else {
                    format!("{}: {}", f.claim, f.detail)
                },
            },
        };
        Self::new(id, verdict)
    }
}
