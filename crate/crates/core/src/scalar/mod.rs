//! Complex-valued functions of phase-space variables.

mod eval;
mod expr;
mod number;
pub(crate) mod parse;
pub mod probe;

pub use eval::{CompiledExpr, ExactComplex, ExactPoint, SamplePoint};
pub use expr::{inverse_lorentz_factor, lorentz_factor, speed_squared, ScalarExpr, Var};
pub use number::{big_to_f64, Number, Q};
pub use probe::{equal_numeric, probe_pairs, BatchReport, ProbeConfig, ProbeReport};
