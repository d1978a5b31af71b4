//! Operational relativistic classical dynamics on a Koopman-von Neumann
//! Hilbert space.
//!
//! The crate has two halves. The symbolic half ([`scalar`], [`operator`],
//! [`generators`], [`series`]) represents phase-space differential operators
//! in normal order and checks Poincaré-algebra realizations, force
//! equations and canonical-transformation identities by seeded numeric
//! probing. The numerical half ([`flow`]) transports phase-space amplitudes
//! along characteristics, applies finite boosts to states and integrates
//! single-particle trajectories.
//!
//! Units are natural throughout (c = 1).

pub mod error;
pub mod flow;
pub mod generators;
pub mod operator;
pub mod report;
pub mod scalar;
pub mod series;
mod syntax;

pub use error::{Error, Result};
pub use operator::{DerivationMonomial, OperatorExpr, Representation};
pub use scalar::{Number, SamplePoint, ScalarExpr, Var};
