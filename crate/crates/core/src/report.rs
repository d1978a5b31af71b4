//! Verification reports: one row per checked relation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::operator::OperatorComparison;

/// Floats that may be infinite or NaN, written as the strings `inf`,
/// `-inf` and `nan` since JSON numbers cannot hold them.
mod extended_float {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        match *x {
            x if x.is_finite() => Repr::Number(x),
            x if x.is_nan() => Repr::Text("nan".into()),
            x if x > 0.0 => Repr::Text("inf".into()),
            _ => Repr::Text("-inf".into()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("expected a number, inf, -inf or nan, got `{other}`"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(with = "extended_float")]
    pub max_residual: f64,
    #[serde(with = "extended_float")]
    pub tol: f64,
    pub probes: usize,
    pub pass: bool,
    /// Measured and reported but excluded from the overall verdict.
    pub informational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn new(id: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            max_residual: 0.0,
            tol: 0.0,
            probes: 0,
            pass: false,
            informational: false,
            note: None,
        }
    }

    pub fn measured(mut self, residual: f64, tol: f64, probes: usize) -> Self {
        self.max_residual = residual;
        self.tol = tol;
        self.probes = probes;
        self.pass = residual <= tol;
        self
    }

    pub fn compared(self, cmp: &OperatorComparison, tol: f64) -> Self {
        let mut out = self.measured(cmp.max_residual, tol, cmp.trials);
        if !out.pass {
            if let Some(m) = &cmp.worst_monomial {
                out.note = Some(format!("worst monomial {m}"));
            }
        }
        out
    }

    /// Negative control: passes when the residual exceeds the tolerance.
    pub fn measured_nonzero(mut self, residual: f64, tol: f64, probes: usize) -> Self {
        self = self.measured(residual, tol, probes);
        self.pass = residual > tol;
        self.with_note("negative control, expected nonzero")
    }

    /// Worst case over several comparisons.
    pub fn compared_all(self, outcome: crate::Result<Vec<OperatorComparison>>, tol: f64) -> Self {
        match outcome {
            Ok(cmps) => {
                let residual = cmps.iter().map(|c| c.max_residual).fold(0.0, f64::max);
                let probes = cmps.iter().map(|c| c.trials).max().unwrap_or(0);
                self.measured(residual, tol, probes)
            }
            Err(e) => self.errored(&e, tol),
        }
    }

    /// Records a failed evaluation as a failing row instead of aborting.
    pub fn errored(mut self, err: &Error, tol: f64) -> Self {
        self.max_residual = f64::INFINITY;
        self.tol = tol;
        self.pass = false;
        self.note = Some(err.to_string());
        self
    }

    pub fn from_outcome(
        self,
        outcome: crate::Result<OperatorComparison>,
        tol: f64,
    ) -> Self {
        match outcome {
            Ok(cmp) => self.compared(&cmp, tol),
            Err(e) => self.errored(&e, tol),
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    /// True when every non-informational check passes.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass || c.informational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass && !c.informational)
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .map(|c| c.max_residual)
            .fold(0.0, f64::max)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.pass && !c.informational).count()
    }

    pub fn asserted_count(&self) -> usize {
        self.checks.iter().filter(|c| !c.informational).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(8);
        writeln!(f, "{:<width$}  {:>11}  {:>8}  status", "relation", "residual", "tol")?;
        for c in &self.checks {
            let status = match (c.pass, c.informational) {
                (true, false) => "pass",
                (false, false) => "FAIL",
                (true, true) => "info pass",
                (false, true) => "info fail",
            };
            write!(f, "{:<width$}  {:>11.3e}  {:>8.1e}  {status}", c.id, c.max_residual, c.tol)?;
            if let Some(n) = &c.note {
                write!(f, "  ({n})")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "{}/{} asserted checks pass", self.passed_count(), self.asserted_count())?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
