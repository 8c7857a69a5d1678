use std::time::Instant;

use isopair_core::{ConditionResult, InstanceSpec, VerificationReport};
use serde::Serialize;

/// Exit 2 for `Input`, exit 1 for `Run`.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Run(anyhow::Error),
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

pub fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

pub fn run_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Run(e.into())
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub instance: Option<InstanceSpec>,
    pub checks: Vec<ConditionResult>,
    pub overall_pass: bool,
    pub wall_time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<serde_json::Value>,
}

pub struct ReportBuilder {
    command: String,
    instance: Option<InstanceSpec>,
    tol: Option<f64>,
    started: Instant,
    checks: Vec<ConditionResult>,
    message: Option<String>,
    output: Option<serde_json::Value>,
}

impl ReportBuilder {
    pub fn new(command: &str, tol: Option<f64>) -> Self {
        Self {
            command: command.to_string(),
            instance: None,
            tol,
            started: Instant::now(),
            checks: Vec::new(),
            message: None,
            output: None,
        }
    }

    pub fn instance(&mut self, spec: Option<&InstanceSpec>) {
        self.instance = spec.cloned();
    }

    /// Adds a check, replacing its tolerance with the `--tol` override.
    pub fn check(&mut self, id: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(ConditionResult::new(id, residual, self.tol.unwrap_or(tolerance)));
    }

    pub fn report(&mut self, prefix: &str, r: &VerificationReport) {
        for c in &r.conditions {
            self.check(format!("{prefix}{}", c.id), c.max_residual, c.tolerance);
        }
    }

    pub fn message(&mut self, m: impl Into<String>) {
        self.message = Some(m.into());
    }

    pub fn output(&mut self, v: serde_json::Value) {
        self.output = Some(v);
    }

    pub fn finish(self) -> RunReport {
        let overall_pass = !self.checks.is_empty() && self.checks.iter().all(|c| c.pass);
        RunReport {
            command: self.command,
            instance: self.instance,
            checks: self.checks,
            overall_pass,
            wall_time: self.started.elapsed().as_secs_f64(),
            message: self.message,
            output: self.output,
        }
    }
}
