//! Heisenberg form of the relativistic force law.

use super::field::ForceField;
use super::interacting::build_interacting_liouvillian;
use super::require_static;
use crate::error::Result;
use crate::operator::{hermiticity, op_equal, OperatorExpr, Representation};
use crate::report::{CheckResult, Report};
use crate::scalar::{lorentz_factor, Number, ProbeConfig, ScalarExpr};

/// Checks `i[L, m γ V_i] = F_i` and `i[L, X_i] = V_i` for the interacting
/// Liouvillian, plus its hermiticity.
pub fn verify_force_equation(mass: f64, field: &ForceField, cfg: &ProbeConfig) -> Result<Report> {
    require_static(field)?;
    let repr = Representation::Velocity;
    let l = build_interacting_liouvillian(mass, field)?;
    let force = field.velocity_force();
    let mgamma = lorentz_factor().scale(&Number::real(mass));
    let mut report = Report::new(format!("force equation, m0 = {mass}"));
    for i in 0..3 {
        let momentum = OperatorExpr::multiplication(&mgamma * &ScalarExpr::v(i), repr);
        let lhs = l.commutator(&momentum).map(|c| c.scale(&ScalarExpr::i()));
        let rhs = OperatorExpr::multiplication(force[i].clone(), repr);
        let outcome = lhs.and_then(|lhs| op_equal(&lhs, &rhs, cfg));
        report.push(
            CheckResult::new(format!("force {}", i + 1), format!("i[L, m0 gamma V{}]", i + 1), force[i].to_string())
                .from_outcome(outcome, cfg.tol),
        );
    }
    for i in 0..3 {
        let lhs = l.commutator(&OperatorExpr::position(i, repr)).map(|c| c.scale(&ScalarExpr::i()));
        let rhs = OperatorExpr::kinetic(i, repr);
        let outcome = lhs.and_then(|lhs| op_equal(&lhs, &rhs, cfg));
        report.push(
            CheckResult::new(format!("velocity {}", i + 1), format!("i[L, X{}]", i + 1), format!("V{}", i + 1))
                .from_outcome(outcome, cfg.tol),
        );
    }
    report.push(CheckResult::new("L hermitian", "L", "L^dagger").from_outcome(hermiticity(&l, cfg), cfg.tol));
    Ok(report)
}
