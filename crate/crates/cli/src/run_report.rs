//! The record of one command run, and how it maps to an exit code.

use std::fmt;
use std::path::PathBuf;

use relkvn::report::Report;
use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<relkvn::Error> for CliError {
    fn from(e: relkvn::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// The scenario with defaults and flag overrides applied; re-running
    /// it reproduces the report.
    pub config: Scenario,
    pub reports: Vec<Report>,
    pub pass: bool,
    pub failed: Vec<String>,
    pub wall_time_s: f64,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn new(command: &str, config: Scenario, reports: Vec<Report>, artifacts: Vec<PathBuf>, wall_time_s: f64) -> Self {
        let failed: Vec<String> = reports.iter().flat_map(|r| r.failures().map(|c| format!("{}: {}", r.title, c.id))).collect();
        RunReport { command: command.to_owned(), config, pass: failed.is_empty(), failed, reports, wall_time_s, artifacts }
    }

    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.reports {
            writeln!(f, "{r}")?;
        }
        for a in &self.artifacts {
            writeln!(f, "wrote {}", a.display())?;
        }
        let asserted: usize = self.reports.iter().map(|r| r.asserted_count()).sum();
        if self.pass {
            writeln!(f, "{}: PASS ({asserted} checks, {:.2} s)", self.command, self.wall_time_s)
        } else {
            for name in &self.failed {
                writeln!(f, "failed: {name}")?;
            }
            writeln!(f, "{}: FAIL ({} of {asserted} checks failed, {:.2} s)", self.command, self.failed.len(), self.wall_time_s)
        }
    }
}
