//! Lagrangian operator, canonical momentum and the Euler–Lagrange
//! superoperator.

use super::field::ForceField;
use super::free::free_velocity_liouvillian;
use super::interacting::build_interacting_liouvillian;
use super::{check_mass, require_static};
use crate::error::{Error, Result};
use crate::operator::{op_equal, OperatorComparison, OperatorExpr, Representation};
use crate::report::{CheckResult, Report};
use crate::scalar::{inverse_lorentz_factor, lorentz_factor, Number, ProbeConfig, ScalarExpr};

const REPR: Representation = Representation::Velocity;

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianStructure {
    /// `T* = m (1 − √(1 − V²))`.
    pub kinetic_coenergy: ScalarExpr,
    /// `U = φ − V·A`.
    pub potential: OperatorExpr,
    /// `𝓛 = T* − U`.
    pub lagrangian: OperatorExpr,
    /// `P_i = i[λv_i, 𝓛]`.
    pub canonical_momentum: [OperatorExpr; 3],
}

pub fn build_lagrangian_structure(mass: f64, field: &ForceField) -> Result<LagrangianStructure> {
    check_mass(mass)?;
    let m = ScalarExpr::constant(Number::real(mass));
    let kinetic_coenergy = &m - &(&m * &inverse_lorentz_factor());
    let potential = OperatorExpr::multiplication(field.generalized_potential(), REPR);
    let lagrangian = OperatorExpr::multiplication(kinetic_coenergy.clone(), REPR).sub(&potential)?;
    let momentum = |i: usize| -> Result<OperatorExpr> {
        Ok(OperatorExpr::lambda_kinetic(i, REPR).commutator(&lagrangian)?.scale(&ScalarExpr::i()))
    };
    let canonical_momentum = [momentum(0)?, momentum(1)?, momentum(2)?];
    Ok(LagrangianStructure { kinetic_coenergy, potential, lagrangian, canonical_momentum })
}

/// `Φ_α[𝓛] = −[L, [λv_α, 𝓛]] − i[λx_α, 𝓛]` for a multiplicative `𝓛`.
pub fn apply_euler_lagrange(lagrangian: &OperatorExpr, liouvillian: &OperatorExpr) -> Result<[OperatorExpr; 3]> {
    if lagrangian.as_multiplication().is_none() {
        return Err(Error::InvalidArgument("the Lagrangian operator must be multiplicative".into()));
    }
    let component = |a: usize| -> Result<OperatorExpr> {
        let inner = OperatorExpr::lambda_kinetic(a, REPR).commutator(lagrangian)?;
        let first = liouvillian.commutator(&inner)?.neg();
        let second = OperatorExpr::lambda_position(a, REPR).commutator(lagrangian)?.scale(&ScalarExpr::i());
        first.sub(&second)
    };
    Ok([component(0)?, component(1)?, component(2)?])
}

fn compare_each(ops: &[OperatorExpr; 3], expected: &[OperatorExpr; 3], cfg: &ProbeConfig) -> Result<Vec<OperatorComparison>> {
    ops.iter().zip(expected).map(|(a, b)| op_equal(a, b, cfg)).collect()
}

/// Euler–Lagrange equations for the matched and free pairs, the mismatched
/// negative control, and the canonical-momentum identities.
pub fn verify_euler_lagrange(mass: f64, field: &ForceField, cfg: &ProbeConfig) -> Result<Report> {
    require_static(field)?;
    let mut report = Report::new(format!("Euler-Lagrange, m0 = {mass}"));
    let lag = build_lagrangian_structure(mass, field)?;
    let interacting = build_interacting_liouvillian(mass, field)?;
    let free = free_velocity_liouvillian()?;
    let zero = [0, 1, 2].map(|_| OperatorExpr::zero(REPR));

    let matched = apply_euler_lagrange(&lag.lagrangian, &interacting)?;
    for a in 0..3 {
        report.push(
            CheckResult::new(format!("matched {}", a + 1), format!("Phi{}[T* - U] with L(F)", a + 1), "0")
                .from_outcome(op_equal(&matched[a], &zero[a], cfg), cfg.tol),
        );
    }
    let coenergy = OperatorExpr::multiplication(lag.kinetic_coenergy.clone(), REPR);
    let free_phi = apply_euler_lagrange(&coenergy, &free)?;
    report.push(
        CheckResult::new("free", "Phi[T*] with free L", "0").compared_all(compare_each(&free_phi, &zero, cfg), cfg.tol),
    );

    if field.is_free() {
        report.note("free field: the mismatched control coincides with the matched pair and is skipped");
    } else {
        let mismatched = apply_euler_lagrange(&coenergy, &interacting)?;
        let force = field.velocity_force().map(|f| OperatorExpr::multiplication(f, REPR));
        let nonzero = compare_each(&mismatched, &zero, cfg);
        report.push(match nonzero {
            Ok(cmps) => {
                let r = cmps.iter().map(|c| c.max_residual).fold(0.0, f64::max);
                CheckResult::new("mismatched nonzero", "Phi[T*] with L(F)", "0").measured_nonzero(r, cfg.tol, cfg.trials)
            }
            Err(e) => CheckResult::new("mismatched nonzero", "Phi[T*] with L(F)", "0").errored(&e, cfg.tol),
        });
        report.push(
            CheckResult::new("mismatched equals F", "Phi[T*] with L(F)", "F")
                .compared_all(compare_each(&mismatched, &force, cfg), cfg.tol),
        );
        let minus_force = force.each_ref().map(OperatorExpr::neg);
        report.push(
            CheckResult::new("mismatched equals -F", "Phi[T*] with L(F)", "-F")
                .compared_all(compare_each(&mismatched, &minus_force, cfg), cfg.tol)
                .informational()
                .with_note("sign convention check; the superoperator as defined yields +F"),
        );
    }

    let m = ScalarExpr::constant(Number::real(mass));
    let gamma = lorentz_factor();
    let mgamma = &m * &gamma;
    let expected_p = [0, 1, 2].map(|i| {
        OperatorExpr::multiplication(&(&mgamma * &ScalarExpr::v(i)) + &field.vector_potential[i], REPR)
    });
    report.push(
        CheckResult::new("canonical momentum", "i[Lv_i, T* - U]", "m0 gamma V_i + A_i")
            .compared_all(compare_each(&lag.canonical_momentum, &expected_p, cfg), cfg.tol),
    );

    let gamma2 = gamma.powi(2);
    let bracket = |derived: bool| -> Result<Vec<OperatorComparison>> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let lhs = lag.canonical_momentum[i].commutator(&OperatorExpr::lambda_kinetic(j, REPR))?;
                let delta = if i == j { ScalarExpr::one() } else { ScalarExpr::zero() };
                let vv = &ScalarExpr::v(i) * &ScalarExpr::v(j);
                let inner = if derived { &delta + &(&gamma2 * &vv) } else { &delta + &(&vv * &gamma) };
                let rhs = &(&mgamma * &inner) * &ScalarExpr::i();
                out.push(op_equal(&lhs, &OperatorExpr::multiplication(rhs, REPR), cfg)?);
            }
        }
        Ok(out)
    };
    report.push(
        CheckResult::new("momentum bracket", "[P_i, Lv_j]", "i m0 gamma (delta_ij + gamma^2 V_i V_j)")
            .compared_all(bracket(true), cfg.tol),
    );
    report.push(
        CheckResult::new("momentum bracket printed", "[P_i, Lv_j]", "i m0 gamma (delta_ij + V_i V_j gamma)")
            .compared_all(bracket(false), cfg.tol)
            .informational()
            .with_note("printed gamma power; differentiation of m0 gamma V gives gamma^2"),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_momentum_and_coenergy() {
        let lag = build_lagrangian_structure(1.0, &ForceField::free()).unwrap();
        let p = lag.canonical_momentum[0].as_multiplication().unwrap();
        let expected = &lorentz_factor() * &ScalarExpr::v(0);
        let cfg = ProbeConfig::default();
        assert!(crate::scalar::equal_numeric(&p, &expected, &cfg).unwrap().pass);
        let at_rest = lag.kinetic_coenergy.subst_var(crate::Var::V(0), &ScalarExpr::zero());
        let at_rest = at_rest.subst_var(crate::Var::V(1), &ScalarExpr::zero());
        let at_rest = at_rest.subst_var(crate::Var::V(2), &ScalarExpr::zero());
        assert!(at_rest.is_zero());
    }

    #[test]
    fn euler_lagrange_report() {
        let cfg = ProbeConfig::default().with_trials(30);
        for field in [ForceField::parse("x1", ["0", "0", "0"]).unwrap(), ForceField::uniform_magnetic(0.7)] {
            let r = verify_euler_lagrange(1.2, &field, &cfg).unwrap();
            assert!(r.all_pass(), "{r}");
            assert!(!r.get("mismatched equals -F").unwrap().pass);
            assert!(!r.get("momentum bracket printed").unwrap().pass);
        }
    }

    #[test]
    fn rejects_differential_lagrangian() {
        let l = free_velocity_liouvillian().unwrap();
        assert!(apply_euler_lagrange(&l, &l).is_err());
    }
}
