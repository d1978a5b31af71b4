//! Momentum-representation Liouvillians on `(X, P, λ'_x, λ_p)`.

use super::field::{dot, ForceField};
use super::free::build_free_momentum_generators;
use super::{check_mass, require_static, sum, GeneratorSet};
use crate::error::{Error, Result};
use crate::operator::{hermiticity, op_equal, OperatorComparison, OperatorExpr, Representation};
use crate::report::{CheckResult, Report};
use crate::scalar::{Number, ProbeConfig, ScalarExpr, Var};

const REPR: Representation = Representation::Momentum;

fn kinetic_momentum(field: &ForceField) -> [ScalarExpr; 3] {
    [0, 1, 2].map(|k| &ScalarExpr::p(k) - &field.vector_potential[k])
}

/// `H = √((P − A)² + m²)`.
pub fn momentum_energy(mass: f64, field: &ForceField) -> ScalarExpr {
    let pi = kinetic_momentum(field);
    let m2 = ScalarExpr::constant(Number::real(mass)).powi(2);
    (&dot(&pi, &pi) + &m2).sqrt()
}

/// `v = (P − A) / H`.
pub fn momentum_velocity(mass: f64, field: &ForceField) -> [ScalarExpr; 3] {
    let h_inv = momentum_energy(mass, field).recip();
    kinetic_momentum(field).map(|p| &p * &h_inv)
}

fn momentum_force(mass: f64, field: &ForceField) -> [ScalarExpr; 3] {
    field.lorentz_force(&momentum_velocity(mass, field))
}

fn sym(coeff: ScalarExpr, op: &OperatorExpr) -> Result<OperatorExpr> {
    OperatorExpr::multiplication(coeff, REPR).symmetrize(op)
}

/// Purely electric case: `L' = H⁻¹ P·λ'_x + F·λ_p`.
pub fn electric_liouvillian(mass: f64, field: &ForceField) -> Result<OperatorExpr> {
    check_mass(mass)?;
    if field.has_vector_potential() {
        return Err(Error::InvalidArgument("the electric Liouvillian requires A = 0".into()));
    }
    let v = momentum_velocity(mass, field);
    let e = field.electric();
    sum(
        (0..3).flat_map(|k| {
            [
                Ok(OperatorExpr::lambda_position(k, REPR).scale(&v[k])),
                Ok(OperatorExpr::lambda_kinetic(k, REPR).scale(&e[k])),
            ]
        }),
        REPR,
    )
}

/// General minimal-coupling Liouvillian, built term by term as printed:
///
/// `[H⁻¹(P_i − A_i)(λ'x_i + ∂A_j/∂X_i λp_j) + F·λ_p
///   − H⁻² {A_i (F·P) + (P_i − A_i)(F·A)} (δ_ij − P_i A_j − P_j A_i + A_i A_j) λp_j]_S`
///
/// with every function-times-generator product symmetrized.
pub fn general_liouvillian(mass: f64, field: &ForceField) -> Result<OperatorExpr> {
    check_mass(mass)?;
    let a = &field.vector_potential;
    let h = momentum_energy(mass, field);
    let h_inv = h.recip();
    let h_inv2 = h_inv.powi(2);
    let pi = kinetic_momentum(field);
    let f = momentum_force(mass, field);
    let p = [0, 1, 2].map(ScalarExpr::p);
    let fp = dot(&f, &p);
    let fa = dot(&f, a);
    let mut out = OperatorExpr::zero(REPR);
    for i in 0..3 {
        let mut shifted = OperatorExpr::lambda_position(i, REPR);
        for j in 0..3 {
            let grad = a[j].diff(Var::X(i as u8));
            shifted = shifted.add(&OperatorExpr::lambda_kinetic(j, REPR).scale(&grad))?;
        }
        out = out.add(&sym(&h_inv * &pi[i], &shifted)?)?;
        out = out.add(&sym(f[i].clone(), &OperatorExpr::lambda_kinetic(i, REPR))?)?;
    }
    for i in 0..3 {
        let bracket = &(&a[i] * &fp) + &(&pi[i] * &fa);
        for j in 0..3 {
            let delta = if i == j { ScalarExpr::one() } else { ScalarExpr::zero() };
            let metric = &(&(&delta - &(&p[i] * &a[j])) - &(&p[j] * &a[i])) + &(&a[i] * &a[j]);
            let coeff = &(&h_inv2 * &bracket) * &metric;
            if coeff.is_zero() {
                continue;
            }
            out = out.sub(&sym(coeff, &OperatorExpr::lambda_kinetic(j, REPR))?)?;
        }
    }
    Ok(out)
}

/// `L' = ∂H/∂p·λ'_x − ∂H/∂x·λ_p` for `H = √((p − A)² + m²) + φ`.
pub fn hamiltonian_liouvillian(mass: f64, field: &ForceField) -> Result<OperatorExpr> {
    check_mass(mass)?;
    let h = &momentum_energy(mass, field) + &field.scalar_potential;
    sum(
        (0..3).flat_map(|k| {
            let dp = h.diff(Var::P(k as u8));
            let dx = h.diff(Var::X(k as u8)).neg();
            [
                Ok(OperatorExpr::lambda_position(k, REPR).scale(&dp)),
                Ok(OperatorExpr::lambda_kinetic(k, REPR).scale(&dx)),
            ]
        }),
        REPR,
    )
}

/// Momentum-representation set. Rotations and boosts keep their free form;
/// the Liouvillian is the electric form when `A = 0` and the general form
/// otherwise.
pub fn build_momentum_generators(mass: f64, field: &ForceField) -> Result<GeneratorSet> {
    let mut set = build_free_momentum_generators(mass)?;
    if field.is_free() && !field.has_vector_potential() {
        return Ok(set);
    }
    set.liouvillian = if field.has_vector_potential() {
        general_liouvillian(mass, field)?
    } else {
        electric_liouvillian(mass, field)?
    };
    set.energy = Some(&momentum_energy(mass, field) + &field.scalar_potential);
    set.interacting = true;
    Ok(set)
}

fn heisenberg(l: &OperatorExpr, targets: impl Fn(usize) -> OperatorExpr, expected: &[ScalarExpr; 3], cfg: &ProbeConfig) -> Result<Vec<OperatorComparison>> {
    (0..3)
        .map(|k| {
            let lhs = l.commutator(&targets(k))?.scale(&ScalarExpr::i());
            op_equal(&lhs, &OperatorExpr::multiplication(expected[k].clone(), REPR), cfg)
        })
        .collect()
}

/// Hermiticity, Heisenberg equations and the `A → 0` reduction of the
/// momentum-representation Liouvillian for a field.
pub fn verify_momentum_liouvillian(mass: f64, field: &ForceField, cfg: &ProbeConfig) -> Result<Report> {
    require_static(field)?;
    let general = field.has_vector_potential();
    let set = build_momentum_generators(mass, field)?;
    let l = &set.liouvillian;
    let form = if general { "general" } else { "electric" };
    let mut report = Report::new(format!("momentum-representation Liouvillian ({form} form), m0 = {mass}"));
    report.push(CheckResult::new("L' hermitian", "L'", "L'^dagger").from_outcome(hermiticity(l, cfg), cfg.tol));

    let v = momentum_velocity(mass, field);
    report.push(
        CheckResult::new("position flow", "i[L', X_k]", "(P_k - A_k)/H")
            .compared_all(heisenberg(l, |k| OperatorExpr::position(k, REPR), &v, cfg), cfg.tol),
    );
    let h = &momentum_energy(mass, field) + &field.scalar_potential;
    let dp = [0, 1, 2].map(|k| h.diff(Var::X(k as u8)).neg());
    let row = CheckResult::new("momentum flow", "i[L', P_k]", "-dH/dx_k")
        .compared_all(heisenberg(l, |k| OperatorExpr::kinetic(k, REPR), &dp, cfg), cfg.tol);
    report.push(if general {
        row.informational()
            .with_note("the second line of the general form does not vanish for A != 0")
    } else {
        row
    });

    let electric_part = ForceField::new(field.scalar_potential.clone(), [0, 1, 2].map(|_| ScalarExpr::zero()));
    let reduced = general_liouvillian(mass, &electric_part)?;
    let simple = electric_liouvillian(mass, &electric_part)?;
    report.push(
        CheckResult::new("reduction A -> 0", "general L' at A = 0", "H^-1 P.Lxp + F.Lp")
            .from_outcome(op_equal(&reduced, &simple, cfg), cfg.tol),
    );
    if general {
        let hamiltonian = hamiltonian_liouvillian(mass, field)?;
        report.push(
            CheckResult::new("hamiltonian form", "general L'", "dH/dp.Lxp - dH/dx.Lp")
                .from_outcome(op_equal(l, &hamiltonian, cfg), cfg.tol)
                .informational(),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::parse_operator;

    #[test]
    fn electric_example() {
        let field = ForceField::parse("x1", ["0", "0", "0"]).unwrap();
        let l = electric_liouvillian(1.0, &field).unwrap();
        let expected = parse_operator(
            "(P1*Lxp1 + P2*Lxp2 + P3*Lxp3)/sqrt(p1^2 + p2^2 + p3^2 + 1) - Lp1",
            Representation::Momentum,
        )
        .unwrap();
        assert!(op_equal(&l, &expected, &ProbeConfig::default()).unwrap().pass);
    }

    #[test]
    fn electric_report_passes() {
        let field = ForceField::parse("x1*x2", ["0", "0", "0"]).unwrap();
        let r = verify_momentum_liouvillian(1.0, &field, &ProbeConfig::default().with_trials(30)).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn general_form_reduces_and_moves_positions() {
        let field = ForceField::uniform_magnetic(0.9);
        let r = verify_momentum_liouvillian(1.0, &field, &ProbeConfig::default().with_trials(30)).unwrap();
        assert!(r.get("reduction A -> 0").unwrap().pass);
        assert!(r.get("position flow").unwrap().pass);
        assert!(r.get("momentum flow").unwrap().informational);
    }

    #[test]
    fn hamiltonian_form_is_hermitian() {
        let field = ForceField::uniform_magnetic(0.5);
        let l = hamiltonian_liouvillian(1.0, &field).unwrap();
        assert!(hermiticity(&l, &ProbeConfig::default().with_trials(20)).unwrap().pass);
    }
}
