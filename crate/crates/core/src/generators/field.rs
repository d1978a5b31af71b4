//! Electromagnetic-type external fields given by potentials.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::{Number, ScalarExpr, Var};

/// Scalar potential `φ(r, t)` and vector potential `A(r, t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ForceField {
    pub scalar_potential: ScalarExpr,
    pub vector_potential: [ScalarExpr; 3],
}

/// Potentials as expression text, the form used in scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default = "zero_text")]
    pub phi: String,
    #[serde(default = "zero_vector_text")]
    pub a: [String; 3],
}

fn zero_text() -> String {
    "0".to_owned()
}

fn zero_vector_text() -> [String; 3] {
    ["0".to_owned(), "0".to_owned(), "0".to_owned()]
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { phi: zero_text(), a: zero_vector_text() }
    }
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<ForceField> {
        ForceField::parse(&self.phi, [&self.a[0], &self.a[1], &self.a[2]])
    }
}

pub(crate) fn cross(a: &[ScalarExpr; 3], b: &[ScalarExpr; 3]) -> [ScalarExpr; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub(crate) fn dot(a: &[ScalarExpr; 3], b: &[ScalarExpr; 3]) -> ScalarExpr {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

impl ForceField {
    pub fn free() -> Self {
        ForceField {
            scalar_potential: ScalarExpr::zero(),
            vector_potential: [ScalarExpr::zero(), ScalarExpr::zero(), ScalarExpr::zero()],
        }
    }

    pub fn new(scalar_potential: ScalarExpr, vector_potential: [ScalarExpr; 3]) -> Self {
        ForceField { scalar_potential, vector_potential }
    }

    pub fn parse(phi: &str, a: [&str; 3]) -> Result<Self> {
        Ok(ForceField {
            scalar_potential: ScalarExpr::parse(phi)?,
            vector_potential: [
                ScalarExpr::parse(a[0])?,
                ScalarExpr::parse(a[1])?,
                ScalarExpr::parse(a[2])?,
            ],
        })
    }

    /// Uniform force `F`, from `φ = −F·r`.
    pub fn constant(force: [f64; 3]) -> Self {
        let phi = (0..3).fold(ScalarExpr::zero(), |acc, k| {
            acc - ScalarExpr::constant(Number::real(force[k])) * ScalarExpr::x(k)
        });
        ForceField { scalar_potential: phi, ..ForceField::free() }
    }

    /// Uniform magnetic field `B ẑ` in the gauge `A = (−B x₂, 0, 0)`.
    pub fn uniform_magnetic(b: f64) -> Self {
        let a1 = ScalarExpr::constant(Number::real(-b)) * ScalarExpr::x(1);
        ForceField {
            scalar_potential: ScalarExpr::zero(),
            vector_potential: [a1, ScalarExpr::zero(), ScalarExpr::zero()],
        }
    }

    /// `E = −∇φ − ∂A/∂t`.
    pub fn electric(&self) -> [ScalarExpr; 3] {
        [0, 1, 2].map(|k| {
            self.scalar_potential.diff(Var::X(k as u8)).neg() - self.vector_potential[k].diff(Var::T)
        })
    }

    /// `B = ∇ × A`.
    pub fn magnetic(&self) -> [ScalarExpr; 3] {
        let d = |i: usize, j: u8| self.vector_potential[i].diff(Var::X(j));
        [d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)]
    }

    /// Lorentz force `E + w × B` for a given velocity vector.
    pub fn lorentz_force(&self, velocity: &[ScalarExpr; 3]) -> [ScalarExpr; 3] {
        let e = self.electric();
        let vb = cross(velocity, &self.magnetic());
        [0, 1, 2].map(|k| &e[k] + &vb[k])
    }

    /// Lorentz force as a function of position and velocity variables.
    pub fn velocity_force(&self) -> [ScalarExpr; 3] {
        self.lorentz_force(&[ScalarExpr::v(0), ScalarExpr::v(1), ScalarExpr::v(2)])
    }

    pub fn is_static(&self) -> bool {
        !self.scalar_potential.depends_on(Var::T)
            && self.vector_potential.iter().all(|a| !a.depends_on(Var::T))
    }

    pub fn has_vector_potential(&self) -> bool {
        self.vector_potential.iter().any(|a| !a.is_zero())
    }

    pub fn is_free(&self) -> bool {
        self.electric().iter().all(ScalarExpr::is_zero) && self.magnetic().iter().all(ScalarExpr::is_zero)
    }

    pub fn subst_param(&self, name: &str, value: &ScalarExpr) -> Self {
        ForceField {
            scalar_potential: self.scalar_potential.subst_param(name, value),
            vector_potential: [0, 1, 2].map(|k| self.vector_potential[k].subst_param(name, value)),
        }
    }

    /// `φ − V·A`.
    pub fn generalized_potential(&self) -> ScalarExpr {
        let v = [ScalarExpr::v(0), ScalarExpr::v(1), ScalarExpr::v(2)];
        &self.scalar_potential - dot(&v, &self.vector_potential)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_magnetic_curl() {
        let f = ForceField::uniform_magnetic(2.0);
        let b = f.magnetic();
        assert!(b[0].is_zero() && b[1].is_zero());
        assert_eq!(b[2], ScalarExpr::int(2));
        let force = f.velocity_force();
        // v × (0, 0, B) = (B v2, −B v1, 0)
        assert_eq!(force[0], ScalarExpr::int(2) * ScalarExpr::v(1));
        assert_eq!(force[1], ScalarExpr::int(-2) * ScalarExpr::v(0));
    }

    #[test]
    fn linear_potential_gives_constant_field() {
        let f = ForceField::parse("x1", ["0", "0", "0"]).unwrap();
        assert_eq!(f.electric()[0], ScalarExpr::int(-1));
        assert!(f.is_static());
        assert!(!f.has_vector_potential());
    }
}
