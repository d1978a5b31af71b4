//! Velocity-representation Liouvillian for a particle in a Lorentz-type
//! force field.

use super::field::{dot, ForceField};
use super::free::{build_free_generators, free_velocity_liouvillian};
use super::{check_mass, GeneratorSet};
use crate::error::Result;
use crate::operator::{OperatorExpr, Representation};
use crate::scalar::{inverse_lorentz_factor, Number, ScalarExpr};

/// Acceleration `(1/m) γ⁻¹ {F_i − (V·F) V_i}` driving the velocities.
pub(crate) fn velocity_acceleration(mass: f64, field: &ForceField) -> [ScalarExpr; 3] {
    let f = field.velocity_force();
    let v = [ScalarExpr::v(0), ScalarExpr::v(1), ScalarExpr::v(2)];
    let vf = dot(&v, &f);
    let prefactor = inverse_lorentz_factor().scale(&Number::real(mass).recip().expect("positive mass"));
    [0, 1, 2].map(|i| &prefactor * &(&f[i] - &(&vf * &v[i])))
}

/// `L = V·λ_x + ((1/m) γ⁻¹ {F_i − (V·F) V_i} λv_i)_S`.
pub fn build_interacting_liouvillian(mass: f64, field: &ForceField) -> Result<OperatorExpr> {
    check_mass(mass)?;
    let repr = Representation::Velocity;
    let mut l = free_velocity_liouvillian()?;
    for (i, a) in velocity_acceleration(mass, field).into_iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let term = OperatorExpr::multiplication(a, repr).symmetrize(&OperatorExpr::lambda_kinetic(i, repr))?;
        l = l.add(&term)?;
    }
    Ok(l)
}

/// Free rotations, boosts and translations with the interacting
/// Liouvillian.
pub fn build_interacting_generators(mass: f64, field: &ForceField) -> Result<GeneratorSet> {
    let free = build_free_generators(mass)?;
    let mut set = free.with_liouvillian(build_interacting_liouvillian(mass, field)?);
    set.interacting = !field.is_free();
    Ok(set)
}
