use serde::{Deserialize, Serialize};

/// The outcome of one numerical check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub id: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ConditionResult {
    pub fn new(id: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        let pass = max_residual.is_finite() && max_residual <= tolerance;
        Self {
            id: id.into(),
            max_residual,
            tolerance,
            pass,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(id: impl Into<String>, tolerance: f64) -> Self {
        Self {
            id: id.into(),
            max_residual: f64::INFINITY,
            tolerance,
            pass: false,
        }
    }
}

/// Per-condition residuals of a verifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub conditions: Vec<ConditionResult>,
    pub overall_pass: bool,
}

impl VerificationReport {
    pub fn new(conditions: Vec<ConditionResult>) -> Self {
        let overall_pass = conditions.iter().all(|c| c.pass);
        Self {
            conditions,
            overall_pass,
        }
    }

    pub fn condition(&self, id: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }

    /// True if condition `id` is present and failed.
    pub fn fails(&self, id: &str) -> bool {
        self.condition(id).is_some_and(|c| !c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.conditions.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.conditions.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect()
    }
}
