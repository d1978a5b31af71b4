//! Poincaré generator realizations and the algebraic checks built on them.

mod closure;
mod field;
mod force;
mod free;
mod interacting;
mod lagrangian;
mod momentum;
mod poisson;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use closure::{
    poincare_relations, verify_hermiticity, verify_poincare_closure, verify_vector_relations,
    ClosureOptions, Relation,
};
pub use field::{FieldSpec, ForceField};
pub use force::verify_force_equation;
pub use free::{build_free_generators, build_free_momentum_generators};
pub use interacting::{build_interacting_generators, build_interacting_liouvillian};
pub(crate) use interacting::velocity_acceleration;
pub use lagrangian::{apply_euler_lagrange, build_lagrangian_structure, verify_euler_lagrange, LagrangianStructure};
pub use momentum::{
    build_momentum_generators, electric_liouvillian, general_liouvillian, hamiltonian_liouvillian,
    momentum_energy, momentum_velocity, verify_momentum_liouvillian,
};
pub use poisson::{poisson_correspondence, verify_poisson_correspondence};

use crate::error::{Error, Result};
use crate::operator::{OperatorExpr, Representation};
use crate::scalar::{ScalarExpr, Var};

/// One of the ten Poincaré generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Rotation(usize),
    Boost(usize),
    Translation(usize),
    Liouvillian,
}

impl Generator {
    /// Fixed order: `J1..J3, K1..K3, Lx1..Lx3, L`.
    pub const ALL: [Generator; 10] = [
        Generator::Rotation(0),
        Generator::Rotation(1),
        Generator::Rotation(2),
        Generator::Boost(0),
        Generator::Boost(1),
        Generator::Boost(2),
        Generator::Translation(0),
        Generator::Translation(1),
        Generator::Translation(2),
        Generator::Liouvillian,
    ];

    pub fn family(self) -> Family {
        match self {
            Generator::Rotation(_) => Family::Rotation,
            Generator::Boost(_) => Family::Boost,
            Generator::Translation(_) => Family::Translation,
            Generator::Liouvillian => Family::Liouvillian,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Rotation(k) => write!(f, "J{}", k + 1),
            Generator::Boost(k) => write!(f, "K{}", k + 1),
            Generator::Translation(k) => write!(f, "Lx{}", k + 1),
            Generator::Liouvillian => write!(f, "L"),
        }
    }
}

/// Generator families; also the targets of the negative-control mutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "J")]
    Rotation,
    #[serde(rename = "K")]
    Boost,
    #[serde(rename = "Lx")]
    Translation,
    #[serde(rename = "L")]
    Liouvillian,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J" => Ok(Family::Rotation),
            "K" => Ok(Family::Boost),
            "Lx" => Ok(Family::Translation),
            "L" => Ok(Family::Liouvillian),
            _ => Err(Error::InvalidArgument(format!("unknown generator family `{s}` (expected J, K, Lx or L)"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Rotation => "J",
            Family::Boost => "K",
            Family::Translation => "Lx",
            Family::Liouvillian => "L",
        })
    }
}

/// A realization of the Poincaré algebra together with the phase-space
/// operators it is built from.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    pub repr: Representation,
    pub mass: f64,
    pub rotations: [OperatorExpr; 3],
    pub boosts: [OperatorExpr; 3],
    /// `λ_x` in the velocity representation, `λ'_x` in the momentum one.
    pub translations: [OperatorExpr; 3],
    pub liouvillian: OperatorExpr,
    pub positions: [OperatorExpr; 3],
    /// `V` or `P`.
    pub kinetic: [OperatorExpr; 3],
    /// `λ_v` or `λ_p`.
    pub kinetic_translations: [OperatorExpr; 3],
    /// Energy function `H(x, p)`; momentum representation only.
    pub energy: Option<ScalarExpr>,
    /// Built with a force field. Brackets involving `L` are then measured
    /// but not asserted.
    pub interacting: bool,
}

impl GeneratorSet {
    pub fn generator(&self, g: Generator) -> &OperatorExpr {
        match g {
            Generator::Rotation(k) => &self.rotations[k],
            Generator::Boost(k) => &self.boosts[k],
            Generator::Translation(k) => &self.translations[k],
            Generator::Liouvillian => &self.liouvillian,
        }
    }

    fn map_generators(&self, f: impl Fn(&OperatorExpr) -> OperatorExpr) -> GeneratorSet {
        GeneratorSet {
            rotations: self.rotations.each_ref().map(&f),
            boosts: self.boosts.each_ref().map(&f),
            translations: self.translations.each_ref().map(&f),
            liouvillian: f(&self.liouvillian),
            ..self.clone()
        }
    }

    /// Substitutes a numeric value for the time parameter in every generator.
    pub fn at_time(&self, t: f64) -> GeneratorSet {
        let value = ScalarExpr::real(t);
        self.map_generators(|op| op.subst_var(Var::T, &value))
    }

    /// Drops the `−t λ_x` term from every boost.
    pub fn without_boost_time_term(&self) -> Result<GeneratorSet> {
        let mut out = self.clone();
        for k in 0..3 {
            let term = self.translations[k].scale(&ScalarExpr::t());
            out.boosts[k] = self.boosts[k].add(&term)?;
        }
        Ok(out)
    }

    pub fn with_liouvillian(&self, liouvillian: OperatorExpr) -> GeneratorSet {
        GeneratorSet { liouvillian, ..self.clone() }
    }

    /// Negative control: adds `X1 X2 X3` to every generator of one family.
    pub fn mutated(&self, family: Family) -> Result<GeneratorSet> {
        let extra = OperatorExpr::multiplication(
            &(&ScalarExpr::x(0) * &ScalarExpr::x(1)) * &ScalarExpr::x(2),
            self.repr,
        );
        let mut out = self.clone();
        match family {
            Family::Rotation => {
                for op in &mut out.rotations {
                    *op = op.add(&extra)?;
                }
            }
            Family::Boost => {
                for op in &mut out.boosts {
                    *op = op.add(&extra)?;
                }
            }
            Family::Translation => {
                for op in &mut out.translations {
                    *op = op.add(&extra)?;
                }
            }
            Family::Liouvillian => out.liouvillian = out.liouvillian.add(&extra)?,
        }
        Ok(out)
    }
}

fn sum(ops: impl IntoIterator<Item = Result<OperatorExpr>>, repr: Representation) -> Result<OperatorExpr> {
    ops.into_iter().try_fold(OperatorExpr::zero(repr), |acc, op| acc.add(&op?))
}

/// Levi-Civita symbol on axis indices `0..3`.
pub(crate) fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// `J_i = ε_ijk (X_j λx_k + W_j λw_k)` for the position and kinetic pairs of
/// the given representation.
pub(crate) fn rotation_generators(repr: Representation) -> Result<[OperatorExpr; 3]> {
    let build = |i: usize| -> Result<OperatorExpr> {
        let mut acc = OperatorExpr::zero(repr);
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e == 0 {
                    continue;
                }
                let pos = OperatorExpr::lambda_position(k, repr).scale(&ScalarExpr::x(j));
                let kin = OperatorExpr::lambda_kinetic(k, repr).scale(&ScalarExpr::var(repr.kinetic(j)));
                acc = acc.add(&pos.add(&kin)?.scale(&ScalarExpr::int(e)))?;
            }
        }
        Ok(acc)
    };
    Ok([build(0)?, build(1)?, build(2)?])
}

pub(crate) fn check_mass(mass: f64) -> Result<()> {
    if mass.is_finite() && mass > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("mass must be positive and finite, got {mass}")))
    }
}

pub(crate) fn require_static(field: &ForceField) -> Result<()> {
    if field.is_static() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("symbolic checks require time-independent potentials".into()))
    }
}
