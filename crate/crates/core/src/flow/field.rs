//! Compiled characteristic vector fields on a grid's coordinates.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::generators::{build_interacting_liouvillian, momentum_energy, ForceField};
use crate::operator::{DerivationMonomial, OperatorExpr, Representation};
use crate::scalar::{CompiledExpr, ScalarExpr, Var};

/// `dy/ds = f(y, s)` restricted to selected coordinates, with the divergence
/// over those coordinates. Unselected coordinates stay frozen.
#[derive(Clone, Debug)]
pub struct CharacteristicField {
    slots: Vec<usize>,
    components: Vec<CompiledExpr>,
    divergence: Option<CompiledExpr>,
    scratch: usize,
    translation_invariant: bool,
}

fn monomial_of(var: Var) -> Result<DerivationMonomial> {
    match var {
        Var::X(k) => Ok(DerivationMonomial::position(k as usize)),
        Var::V(k) | Var::P(k) => Ok(DerivationMonomial::kinetic(k as usize)),
        Var::T => Err(Error::InvalidArgument("time has no conjugate translation".into())),
    }
}

impl CharacteristicField {
    /// Field and divergence given symbolically.
    pub fn new(vars: &[Var], components: Vec<ScalarExpr>) -> Result<Self> {
        if vars.len() != components.len() {
            return Err(Error::InvalidArgument("one component per coordinate required".into()));
        }
        let div = vars.iter().zip(&components).fold(ScalarExpr::zero(), |acc, (v, f)| acc + f.diff(*v));
        let on_positions = |e: &ScalarExpr| vars.iter().any(|v| matches!(v, Var::X(_)) && e.depends_on(*v));
        let translation_invariant = !components.iter().any(on_positions) && !on_positions(&div);
        let params = BTreeMap::new();
        let compiled = components.iter().map(|f| CompiledExpr::new(f, &params)).collect::<Result<Vec<_>>>()?;
        let divergence = if div.is_zero() { None } else { Some(CompiledExpr::new(&div, &params)?) };
        let scratch = compiled.iter().map(CompiledExpr::scratch_len).chain(divergence.iter().map(CompiledExpr::scratch_len)).max().unwrap_or(0);
        Ok(CharacteristicField { slots: vars.iter().map(|v| v.slot()).collect(), components: compiled, divergence, scratch, translation_invariant })
    }

    /// The transport field of a first-order Hermitian generator `G`, so that
    /// `∂ψ/∂s = −iGψ` moves amplitudes along `f` with the half-density
    /// factor. `G = −i(f·∂ + ½∇·f)`, hence `f_α = i·coeff(∂_α)`.
    pub fn from_generator(generator: &OperatorExpr, vars: &[Var]) -> Result<Self> {
        if generator.order() > 1 {
            return Err(Error::InvalidArgument(format!("generator of order {} is not a transport operator", generator.order())));
        }
        let components = vars
            .iter()
            .map(|v| Ok(&ScalarExpr::i() * &generator.coefficient(&monomial_of(*v)?)))
            .collect::<Result<Vec<_>>>()?;
        CharacteristicField::new(vars, components)
    }

    /// Velocity-representation characteristics `(V, a(X, V, t))` of the
    /// symmetrized Liouvillian.
    pub fn velocity_liouvillian(mass: f64, field: &ForceField, vars: &[Var]) -> Result<Self> {
        require_repr(vars, Representation::Velocity)?;
        CharacteristicField::from_generator(&build_interacting_liouvillian(mass, field)?, vars)
    }

    /// Hamiltonian flow of `H = √((P − A)² + m²) + φ` on canonical
    /// coordinates.
    pub fn hamiltonian(mass: f64, field: &ForceField, vars: &[Var]) -> Result<Self> {
        require_repr(vars, Representation::Momentum)?;
        let h = &momentum_energy(mass, field) + &field.scalar_potential;
        let components = vars
            .iter()
            .map(|v| match v {
                Var::X(k) => h.diff(Var::P(*k)),
                Var::P(k) => h.diff(Var::X(*k)).neg(),
                _ => unreachable!("checked by require_repr"),
            })
            .collect();
        CharacteristicField::new(vars, components)
    }

    pub fn dims(&self) -> usize {
        self.slots.len()
    }

    pub fn scratch_len(&self) -> usize {
        self.scratch
    }

    /// Whether neither the rates nor the divergence depend on the position
    /// coordinates among the selected ones, so that the displacement along
    /// a characteristic is the same for every position.
    pub fn is_translation_invariant(&self) -> bool {
        self.translation_invariant
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence.is_none()
    }

    /// Rates at the full slot vector `y` (time in slot 9) and the divergence.
    pub fn rates(&self, y: &[f64; 10], out: &mut [f64], scratch: &mut [f64]) -> f64 {
        for (k, f) in self.components.iter().enumerate() {
            out[k] = f.eval_with(y, scratch);
        }
        self.divergence.as_ref().map_or(0.0, |d| d.eval_with(y, scratch))
    }

    /// Classic RK4 over `steps` steps of size `h` (negative to go back in
    /// time), advancing the selected coordinates and the time slot. Returns
    /// `∫ div ds` along the path, or `None` on a non-finite state.
    pub fn integrate(&self, y: &mut [f64; 10], h: f64, steps: usize, scratch: &mut [f64]) -> Option<f64> {
        let d = self.dims();
        let mut k = [[0.0f64; 6]; 4];
        let mut kd = [0.0f64; 4];
        let mut integral = 0.0;
        for _ in 0..steps {
            let base = *y;
            for stage in 0..4 {
                let (frac, prev) = match stage {
                    0 => (0.0, None),
                    1 | 2 => (0.5, Some(stage - 1)),
                    _ => (1.0, Some(2)),
                };
                let mut probe = base;
                probe[9] = base[9] + frac * h;
                if let Some(p) = prev {
                    for c in 0..d {
                        probe[self.slots[c]] += frac * h * k[p][c];
                    }
                }
                kd[stage] = self.rates(&probe, &mut k[stage][..d], scratch);
            }
            for c in 0..d {
                y[self.slots[c]] += h / 6.0 * (k[0][c] + 2.0 * k[1][c] + 2.0 * k[2][c] + k[3][c]);
            }
            y[9] += h;
            integral += h / 6.0 * (kd[0] + 2.0 * kd[1] + 2.0 * kd[2] + kd[3]);
        }
        let finite = self.slots.iter().all(|s| y[*s].is_finite()) && integral.is_finite();
        finite.then_some(integral)
    }
}

fn require_repr(vars: &[Var], repr: Representation) -> Result<()> {
    for v in vars {
        let ok = match v {
            Var::X(_) => true,
            Var::V(_) => repr == Representation::Velocity,
            Var::P(_) => repr == Representation::Momentum,
            Var::T => false,
        };
        if !ok {
            return Err(Error::RepresentationMismatch { expected: repr.to_string(), found: format!("coordinate {}", v.name()) });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_force_divergence() {
        // a = (F/m)(1 − v²)^{3/2}, ∂a/∂v = −3(F/m) v (1 − v²)^{1/2}
        let f = CharacteristicField::velocity_liouvillian(2.0, &ForceField::constant([1.0, 0.0, 0.0]), &[Var::X(0), Var::V(0)])
            .unwrap();
        let mut y = [0.0; 10];
        y[3] = 0.6;
        let mut out = [0.0; 2];
        let mut scratch = vec![0.0; f.scratch_len()];
        let div = f.rates(&y, &mut out, &mut scratch);
        assert!((out[0] - 0.6).abs() < 1e-14);
        assert!((out[1] - 0.5 * 0.8f64.powi(3)).abs() < 1e-14);
        assert!((div + 3.0 * 0.5 * 0.6 * 0.8).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_flow_is_divergence_free() {
        let field = ForceField::parse("x1", ["-x2", "0", "0"]).unwrap();
        let vars = [Var::X(0), Var::X(1), Var::P(0), Var::P(1)];
        let f = CharacteristicField::hamiltonian(1.0, &field, &vars).unwrap();
        assert!(f.is_divergence_free());
        assert!(CharacteristicField::hamiltonian(1.0, &field, &[Var::V(0)]).is_err());
    }

    #[test]
    fn rk4_reproduces_free_motion() {
        let f = CharacteristicField::velocity_liouvillian(1.0, &ForceField::free(), &[Var::X(0), Var::V(0)]).unwrap();
        let mut y = [0.0; 10];
        y[0] = 0.3;
        y[3] = -0.4;
        let mut scratch = vec![0.0; f.scratch_len()];
        let div = f.integrate(&mut y, -0.01, 150, &mut scratch).unwrap();
        assert!((y[0] - (0.3 + 0.4 * 1.5)).abs() < 1e-12);
        assert!((y[9] + 1.5).abs() < 1e-12);
        assert_eq!(div, 0.0);
    }
}
