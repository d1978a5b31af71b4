//! Recovering a generating function from a Hamiltonian vector field
//! `−i(∂H/∂p·∂_x − ∂H/∂x·∂_p)`.

use super::field::ForceField;
use super::free::{build_free_momentum_generators, free_energy};
use super::momentum::{electric_liouvillian, hamiltonian_liouvillian, momentum_energy};
use super::require_static;
use crate::error::{Error, Result};
use crate::operator::{DerivationMonomial, OperatorExpr, Representation};
use crate::report::{CheckResult, Report};
use crate::scalar::{equal_numeric, ProbeConfig, ScalarExpr, Var};

fn numerically_zero(e: &ScalarExpr, cfg: &ProbeConfig) -> Result<bool> {
    if e.is_zero() {
        return Ok(true);
    }
    Ok(equal_numeric(e, &ScalarExpr::zero(), cfg)?.pass)
}

/// Returns `H` with `op = −i{·, H}` when `op` is a first-order operator of
/// Hamiltonian form, and `None` otherwise. The additive constant is fixed
/// by omitting it: `H` contains no constant term produced by integration.
pub fn poisson_correspondence(op: &OperatorExpr, cfg: &ProbeConfig) -> Result<Option<ScalarExpr>> {
    if op.representation() != Representation::Momentum {
        return Err(Error::RepresentationMismatch {
            expected: Representation::Momentum.to_string(),
            found: op.representation().to_string(),
        });
    }
    if op.order() != 1 {
        return Ok(None);
    }
    if !numerically_zero(&op.coefficient(&DerivationMonomial::IDENTITY), cfg)? {
        return Ok(None);
    }
    let i = ScalarExpr::i();
    let mut gradient = Vec::with_capacity(6);
    for k in 0..3 {
        let c = op.coefficient(&DerivationMonomial::kinetic(k));
        gradient.push((Var::X(k as u8), (&c * &i).neg()));
    }
    for k in 0..3 {
        let c = op.coefficient(&DerivationMonomial::position(k));
        gradient.push((Var::P(k as u8), &c * &i));
    }
    let mut h = ScalarExpr::zero();
    for (var, g) in &gradient {
        let residual = g - &h.diff(*var);
        if numerically_zero(&residual, cfg)? {
            continue;
        }
        match residual.antiderivative(*var) {
            Some(part) => h = &h + &part,
            None => return Ok(None),
        }
    }
    for (var, g) in &gradient {
        if !equal_numeric(&h.diff(*var), g, cfg)?.pass {
            return Ok(None);
        }
    }
    Ok(Some(h))
}

fn generator_row(
    id: &str,
    op: &OperatorExpr,
    expected: &ScalarExpr,
    cfg: &ProbeConfig,
) -> CheckResult {
    let row = CheckResult::new(id, format!("H from {id}"), expected.to_string());
    match poisson_correspondence(op, cfg) {
        Ok(Some(h)) => match equal_numeric(&h, expected, cfg) {
            Ok(r) => row.measured(r.max_residual, cfg.tol, r.trials),
            Err(e) => row.errored(&e, cfg.tol),
        },
        Ok(None) => row.measured(f64::INFINITY, cfg.tol, 0).with_note("no generating function found"),
        Err(e) => row.errored(&e, cfg.tol),
    }
}

/// Generating functions of the free Liouvillian, the rotations, and the
/// Liouvillian of a static field; a multiplicative operator has none.
pub fn verify_poisson_correspondence(mass: f64, field: &ForceField, cfg: &ProbeConfig) -> Result<Report> {
    require_static(field)?;
    let repr = Representation::Momentum;
    let set = build_free_momentum_generators(mass)?;
    let mut report = Report::new(format!("Poisson correspondence, m0 = {mass}"));
    report.push(generator_row("free L'", &set.liouvillian, &free_energy(mass), cfg));
    for k in 0..3 {
        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
        let expected = &(&ScalarExpr::x(a) * &ScalarExpr::p(b)) - &(&ScalarExpr::x(b) * &ScalarExpr::p(a));
        report.push(generator_row(&format!("J{}", k + 1), &set.rotations[k], &expected, cfg));
    }
    let interacting = if field.has_vector_potential() {
        hamiltonian_liouvillian(mass, field)?
    } else {
        electric_liouvillian(mass, field)?
    };
    let expected = &momentum_energy(mass, field) + &field.scalar_potential;
    report.push(generator_row("interacting L'", &interacting, &expected, cfg));
    let row = CheckResult::new("X1", "H from X1", "none");
    report.push(match poisson_correspondence(&OperatorExpr::position(0, repr), cfg) {
        Ok(None) => row.measured(0.0, cfg.tol, 0),
        Ok(Some(h)) => row.measured(f64::INFINITY, cfg.tol, 0).with_note(format!("unexpected generator {h}")),
        Err(e) => row.errored(&e, cfg.tol),
    });
    Ok(report)
}
