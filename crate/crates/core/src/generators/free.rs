//! Free-particle realizations in the velocity and momentum representations.

use super::{check_mass, rotation_generators, sum, GeneratorSet};
use crate::error::Result;
use crate::operator::{OperatorExpr, Representation};
use crate::scalar::{Number, ScalarExpr};

fn axes<T>(f: impl Fn(usize) -> T) -> [T; 3] {
    [f(0), f(1), f(2)]
}

/// `K_i = (X_i L)_S − Σ_j (M_ij λw_j)_S − t λx_i`.
pub(crate) fn boost_generators(
    liouvillian: &OperatorExpr,
    kinetic_matrix: impl Fn(usize, usize) -> ScalarExpr,
) -> Result<[OperatorExpr; 3]> {
    let repr = liouvillian.representation();
    let build = |i: usize| -> Result<OperatorExpr> {
        let x = OperatorExpr::position(i, repr);
        let mut k = x.symmetrize(liouvillian)?;
        for j in 0..3 {
            let m = kinetic_matrix(i, j);
            if m.is_zero() {
                continue;
            }
            let term = OperatorExpr::multiplication(m, repr).symmetrize(&OperatorExpr::lambda_kinetic(j, repr))?;
            k = k.sub(&term)?;
        }
        k.sub(&OperatorExpr::lambda_position(i, repr).scale(&ScalarExpr::t()))
    };
    Ok([build(0)?, build(1)?, build(2)?])
}

pub(crate) fn base_set(repr: Representation, mass: f64) -> Result<GeneratorSet> {
    Ok(GeneratorSet {
        repr,
        mass,
        rotations: rotation_generators(repr)?,
        boosts: axes(|_| OperatorExpr::zero(repr)),
        translations: axes(|k| OperatorExpr::lambda_position(k, repr)),
        liouvillian: OperatorExpr::zero(repr),
        positions: axes(|k| OperatorExpr::position(k, repr)),
        kinetic: axes(|k| OperatorExpr::kinetic(k, repr)),
        kinetic_translations: axes(|k| OperatorExpr::lambda_kinetic(k, repr)),
        energy: None,
        interacting: false,
    })
}

/// `L = V·λ_x`.
pub(crate) fn free_velocity_liouvillian() -> Result<OperatorExpr> {
    let repr = Representation::Velocity;
    sum((0..3).map(|k| Ok(OperatorExpr::lambda_position(k, repr).scale(&ScalarExpr::v(k)))), repr)
}

/// Velocity-representation free set: `J` by rotation of positions and
/// velocities, `L = V·λ_x`, and
/// `K_i = (X_i L − {δ_ij − V_i V_j} λv_j)_S − t λx_i`.
pub fn build_free_generators(mass: f64) -> Result<GeneratorSet> {
    check_mass(mass)?;
    let mut set = base_set(Representation::Velocity, mass)?;
    set.liouvillian = free_velocity_liouvillian()?;
    set.boosts = boost_generators(&set.liouvillian, |i, j| {
        let delta = if i == j { ScalarExpr::one() } else { ScalarExpr::zero() };
        delta - &ScalarExpr::v(i) * &ScalarExpr::v(j)
    })?;
    Ok(set)
}

/// `H = √(P² + m²)`.
pub(crate) fn free_energy(mass: f64) -> ScalarExpr {
    let m2 = ScalarExpr::constant(Number::real(mass)).powi(2);
    ((0..3).fold(m2, |acc, k| acc + ScalarExpr::p(k).powi(2))).sqrt()
}

/// Momentum-representation free set: `L' = P_i H⁻¹ λ'x_i` and
/// `K_i = (X_i L' − H λp_i)_S − t λ'x_i`.
pub fn build_free_momentum_generators(mass: f64) -> Result<GeneratorSet> {
    check_mass(mass)?;
    let repr = Representation::Momentum;
    let mut set = base_set(repr, mass)?;
    let h = free_energy(mass);
    let h_inv = h.recip();
    set.liouvillian = sum(
        (0..3).map(|k| Ok(OperatorExpr::lambda_position(k, repr).scale(&(&ScalarExpr::p(k) * &h_inv)))),
        repr,
    )?;
    set.boosts = boost_generators(&set.liouvillian, |i, j| if i == j { h.clone() } else { ScalarExpr::zero() })?;
    set.energy = Some(h);
    Ok(set)
}
