//! Nested-commutator expansions of similarity transformations
//! `e^X Y e^{−X} = Σ [X, Y]⁽ⁿ⁾ / n!`, checked order by order against closed
//! forms.

mod boost;
mod canonical;
mod power;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use boost::{
    boost_convergence, boost_exponent, verify_boost_closed_forms, BoostKind, ConvergenceReport,
};
pub use canonical::{
    c1_exponent, gamma_inverse_coefficient, lorentz_coefficient, verify_c1_on_lambda, verify_c1_on_velocity,
    verify_c2, verify_canonical_map,
};
pub use power::PowerSeries;

use crate::error::{Error, Result};
use crate::generators::ForceField;
use crate::operator::{op_equal, OperatorExpr};
use crate::report::{CheckResult, Report};
use crate::scalar::{Number, ProbeConfig, ScalarExpr};

pub const DEFAULT_SERIES_ORDER: usize = 6;

/// Terms `[X, Y]⁽ⁿ⁾ / n!` for `n = 0..=order`: the coefficient of `εⁿ` in
/// `e^{εX} Y e^{−εX}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointSeries {
    pub base: OperatorExpr,
    pub target: OperatorExpr,
    pub terms: Vec<OperatorExpr>,
}

pub fn adjoint_series(base: &OperatorExpr, target: &OperatorExpr, order: usize) -> Result<AdjointSeries> {
    let mut terms = vec![target.clone()];
    let mut nested = target.clone();
    for n in 1..=order {
        nested = base.commutator(&nested)?;
        let term = nested.scale_number(Number::rational(1, 1).div(&factorial(n)).expect("nonzero"));
        terms.push(term);
    }
    Ok(AdjointSeries { base: base.clone(), target: target.clone(), terms })
}

fn factorial(n: usize) -> Number {
    (2..=n as i64).fold(Number::one(), |acc, k| acc.mul(&Number::int(k)))
}

impl AdjointSeries {
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, n: usize) -> &OperatorExpr {
        &self.terms[n]
    }

    /// `Σ_{k ≤ n} εᵏ term_k`.
    pub fn partial_sum(&self, n: usize, epsilon: &ScalarExpr) -> Result<OperatorExpr> {
        let mut acc = OperatorExpr::zero(self.target.representation());
        for (k, t) in self.terms.iter().take(n + 1).enumerate() {
            acc = acc.add(&t.scale(&epsilon.powi(k as i32)))?;
        }
        Ok(acc)
    }

    /// Index from which every computed term vanishes structurally.
    pub fn terminates_at(&self) -> Option<usize> {
        let last_nonzero = self.terms.iter().rposition(|t| !t.is_zero())?;
        (last_nonzero < self.order()).then_some(last_nonzero + 1)
    }
}

/// Per-order comparison rows `term_n` against `expected(n)`.
pub(crate) fn order_rows(
    report: &mut Report,
    label: &str,
    series: &AdjointSeries,
    expected: impl Fn(usize) -> Result<OperatorExpr>,
    asserted_through: usize,
    cfg: &ProbeConfig,
) {
    for n in 0..=series.order() {
        let outcome = expected(n).and_then(|e| op_equal(series.term(n), &e, cfg));
        let row = CheckResult::new(format!("{label} order {n}"), format!("term {n} of {label}"), format!("closed-form coefficient {n}"))
            .from_outcome(outcome, cfg.tol);
        report.push(if n > asserted_through { row.informational() } else { row });
    }
}

/// Identities checked by `series-check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesIdentity {
    C1Momentum,
    C1Lambda,
    C2,
    BoostVelocity,
    Boost4Vector,
    BoostPosition,
    CanonicalMap,
}

impl SeriesIdentity {
    pub const ALL: [SeriesIdentity; 7] = [
        SeriesIdentity::C1Momentum,
        SeriesIdentity::C1Lambda,
        SeriesIdentity::C2,
        SeriesIdentity::BoostVelocity,
        SeriesIdentity::Boost4Vector,
        SeriesIdentity::BoostPosition,
        SeriesIdentity::CanonicalMap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesIdentity::C1Momentum => "c1-momentum",
            SeriesIdentity::C1Lambda => "c1-lambda",
            SeriesIdentity::C2 => "c2",
            SeriesIdentity::BoostVelocity => "boost-velocity",
            SeriesIdentity::Boost4Vector => "boost-4vector",
            SeriesIdentity::BoostPosition => "boost-position",
            SeriesIdentity::CanonicalMap => "canonical-map",
        }
    }
}

impl fmt::Display for SeriesIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesIdentity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesIdentity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = SeriesIdentity::ALL.iter().map(|i| i.name()).collect();
                Error::InvalidArgument(format!("unknown identity `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

/// Inputs shared by the series checks.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesOptions {
    pub mass: f64,
    pub order: usize,
    /// Rapidity used for numeric partial-sum comparisons of boosts.
    pub rapidity: f64,
    pub field: ForceField,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            mass: 1.0,
            order: DEFAULT_SERIES_ORDER,
            rapidity: 0.3,
            field: ForceField::uniform_magnetic(1.0),
        }
    }
}

pub fn run_identity(identity: SeriesIdentity, opts: &SeriesOptions, cfg: &ProbeConfig) -> Result<Report> {
    match identity {
        SeriesIdentity::C1Momentum => verify_c1_on_velocity(opts.mass, opts.order, cfg),
        SeriesIdentity::C1Lambda => verify_c1_on_lambda(opts.mass, opts.order, cfg),
        SeriesIdentity::C2 => verify_c2(&opts.field, cfg),
        SeriesIdentity::BoostVelocity => verify_boost_closed_forms(BoostKind::Velocity, opts.rapidity, opts.order, opts.mass, cfg),
        SeriesIdentity::Boost4Vector => {
            verify_boost_closed_forms(BoostKind::EnergyMomentum, opts.rapidity, opts.order, opts.mass, cfg)
        }
        SeriesIdentity::BoostPosition => verify_boost_closed_forms(BoostKind::Position, opts.rapidity, opts.order, opts.mass, cfg),
        SeriesIdentity::CanonicalMap => verify_canonical_map(opts.mass, &opts.field, opts.order, cfg),
    }
}
