//! Semi-Lagrangian transport of amplitudes along characteristics.
//!
//! Each target node is pulled back along the time-reversed flow in one pass
//! and the source amplitude is interpolated there. With `G = −i(f·∂ + ½∇·f)`
//! the amplitude along a characteristic obeys `dψ/ds = −½(∇·f)ψ`, so the
//! pulled-back value is scaled by `exp(−½∫∇·f ds)`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::CharacteristicField;
use super::grid::PhaseGrid;
use super::state::PhaseSpaceState;
use crate::error::{Error, Result};
use crate::generators::{build_free_generators, ForceField};
use crate::operator::Representation;
use crate::scalar::Var;

/// How target nodes are mapped back onto the source state.
#[derive(Clone, Debug)]
pub enum Pullback {
    /// Exact free streaming in the velocity representation: `x → x − v s`.
    FreeVelocity,
    /// Exact free streaming in the momentum representation:
    /// `x → x − p s / √(p² + m²)`.
    FreeMomentum { mass: f64 },
    /// RK4 integration of a compiled field with the half-density factor.
    Field(CharacteristicField),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportOutcome {
    pub state: PhaseSpaceState,
    /// Source norm minus target norm.
    pub mass_loss: f64,
    /// Target nodes whose preimage fell outside the source grid.
    pub exited_nodes: usize,
}

impl Pullback {
    /// Source coordinates and log amplitude factor for a target node at
    /// time `y[9]`, pulled back by `duration`.
    fn trace(&self, y: &mut [f64; 10], duration: f64, dt: f64, scratch: &mut [f64]) -> Option<f64> {
        match self {
            Pullback::FreeVelocity => {
                for k in 0..3 {
                    y[k] -= y[3 + k] * duration;
                }
                y[9] -= duration;
                Some(0.0)
            }
            Pullback::FreeMomentum { mass } => {
                let e = (y[6] * y[6] + y[7] * y[7] + y[8] * y[8] + mass * mass).sqrt();
                for k in 0..3 {
                    y[k] -= y[6 + k] / e * duration;
                }
                y[9] -= duration;
                Some(0.0)
            }
            Pullback::Field(f) => {
                if duration == 0.0 {
                    return Some(0.0);
                }
                let steps = (duration.abs() / dt).ceil().max(1.0) as usize;
                let back = f.integrate(y, -duration / steps as f64, steps, scratch)?;
                Some(0.5 * back)
            }
        }
    }

    fn scratch_len(&self) -> usize {
        match self {
            Pullback::Field(f) => f.scratch_len(),
            _ => 0,
        }
    }
}

/// Transports `state` forward by `duration` onto the nodes of `target`.
pub fn transport_onto(
    state: &PhaseSpaceState,
    target: &PhaseGrid,
    pullback: &Pullback,
    duration: f64,
    dt: f64,
) -> Result<TransportOutcome> {
    if !(dt > 0.0) || !duration.is_finite() {
        return Err(Error::InvalidArgument(format!("need dt > 0 and a finite duration, got dt = {dt}, duration = {duration}")));
    }
    for a in &state.grid.axes {
        if target.axis_of(a.var).is_none() {
            return Err(Error::InvalidArgument(format!("target grid lacks axis {}", a.var.name())));
        }
    }
    let t1 = state.t + duration;
    let scratch_len = pullback.scratch_len();
    let shifts = match pullback {
        Pullback::Field(f) if f.is_translation_invariant() => Some(kinetic_shifts(target, pullback, t1, duration, dt)),
        _ => None,
    };
    let values: Vec<Option<Complex64>> = (0..target.len())
        .into_par_iter()
        .map_init(
            || vec![0.0; scratch_len],
            |scratch, idx| {
                let mut y = target.point(idx);
                y[9] = t1;
                let log_factor = match &shifts {
                    Some(table) => {
                        let (delta, log_factor) = table.lookup(target, idx)?;
                        y.iter_mut().zip(delta).for_each(|(a, d)| *a += d);
                        log_factor
                    }
                    None => pullback.trace(&mut y, duration, dt, scratch)?,
                };
                let z = state.grid.interpolate(&state.psi, &y)?;
                let out = z * log_factor.exp();
                (out.re.is_finite() && out.im.is_finite()).then_some(out)
            },
        )
        .collect();
    let exited_nodes = values.iter().filter(|v| v.is_none()).count();
    let psi = values.into_iter().map(|v| v.unwrap_or_default()).collect();
    let out = PhaseSpaceState::new(state.repr, target.clone(), psi, t1)?;
    let mass_loss = state.norm() - out.norm();
    Ok(TransportOutcome { state: out, mass_loss, exited_nodes })
}

/// Displacements and log factors per combination of non-position grid
/// indices, valid when the field does not depend on grid positions.
struct ShiftTable {
    kinetic_axes: Vec<usize>,
    entries: Vec<Option<([f64; 10], f64)>>,
}

impl ShiftTable {
    fn key(&self, target: &PhaseGrid, idx: usize) -> usize {
        let digits = target.unravel(idx);
        self.kinetic_axes.iter().fold(0, |acc, &k| acc * target.axes[k].count + digits[k])
    }

    fn lookup(&self, target: &PhaseGrid, idx: usize) -> Option<([f64; 10], f64)> {
        self.entries[self.key(target, idx)]
    }
}

fn kinetic_shifts(target: &PhaseGrid, pullback: &Pullback, t1: f64, duration: f64, dt: f64) -> ShiftTable {
    let kinetic_axes: Vec<usize> = (0..target.dims()).filter(|&k| !matches!(target.axes[k].var, Var::X(_))).collect();
    let count: usize = kinetic_axes.iter().map(|&k| target.axes[k].count).product();
    let entries = (0..count)
        .into_par_iter()
        .map_init(
            || vec![0.0; pullback.scratch_len()],
            |scratch, key| {
                let mut idx = 0;
                let mut rest = key;
                for &k in kinetic_axes.iter().rev() {
                    let n = target.axes[k].count;
                    idx += (rest % n) * target.stride(k);
                    rest /= n;
                }
                let mut y = target.point(idx);
                y[9] = t1;
                let start = y;
                let log_factor = pullback.trace(&mut y, duration, dt, scratch)?;
                let mut delta = [0.0; 10];
                for s in 0..10 {
                    delta[s] = y[s] - start[s];
                }
                Some((delta, log_factor))
            },
        )
        .collect();
    ShiftTable { kinetic_axes, entries }
}

/// Transports on the state's own grid.
pub fn transport(state: &PhaseSpaceState, pullback: &Pullback, duration: f64, dt: f64) -> Result<TransportOutcome> {
    if duration == 0.0 {
        return Ok(TransportOutcome { state: state.clone(), mass_loss: 0.0, exited_nodes: 0 });
    }
    transport_onto(state, &state.grid, pullback, duration, dt)
}

/// The characteristic flow of `field` in the state's representation:
/// the symmetrized velocity Liouvillian, or Hamilton's equations for
/// canonical coordinates. Field-free motion uses the exact shift.
pub fn dynamics_pullback(repr: Representation, mass: f64, field: &ForceField, vars: &[Var]) -> Result<Pullback> {
    match repr {
        Representation::Velocity if field.is_free() => Ok(Pullback::FreeVelocity),
        Representation::Momentum if field.is_free() && !field.has_vector_potential() => Ok(Pullback::FreeMomentum { mass }),
        Representation::Velocity => Ok(Pullback::Field(CharacteristicField::velocity_liouvillian(mass, field, vars)?)),
        Representation::Momentum => Ok(Pullback::Field(CharacteristicField::hamiltonian(mass, field, vars)?)),
    }
}

/// `ψ(t_end) = e^{−iL(t_end − t)} ψ(t)` on the state's grid.
pub fn evolve_state(state: &PhaseSpaceState, mass: f64, field: &ForceField, t_end: f64, dt: f64) -> Result<TransportOutcome> {
    let pullback = dynamics_pullback(state.repr, mass, field, &state.grid.vars())?;
    transport(state, &pullback, t_end - state.t, dt)
}

/// Snapshots at increasing `times`, each transported in one pullback from
/// the initial state so interpolation errors do not accumulate.
pub fn evolve_snapshots(
    state: &PhaseSpaceState,
    mass: f64,
    field: &ForceField,
    times: &[f64],
    dt: f64,
) -> Result<Vec<TransportOutcome>> {
    let pullback = dynamics_pullback(state.repr, mass, field, &state.grid.vars())?;
    let mut prev = state.t;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t < prev {
            return Err(Error::InvalidArgument(format!("snapshot times must increase, got {t} after {prev}")));
        }
        prev = t;
        out.push(transport(state, &pullback, t - state.t, dt)?);
    }
    Ok(out)
}

/// `ψ' = e^{−isK_axis} ψ` at `t = 0` in the velocity representation. The
/// boosted state's velocities follow the velocity-addition law with
/// `v = tanh s`.
pub fn boost_state(state: &PhaseSpaceState, axis: usize, s: f64, ds: f64) -> Result<TransportOutcome> {
    if state.repr != Representation::Velocity {
        return Err(Error::RepresentationMismatch { expected: "velocity".into(), found: state.repr.to_string() });
    }
    if axis > 2 {
        return Err(Error::InvalidArgument(format!("boost axis {axis} out of range")));
    }
    if state.t != 0.0 {
        return Err(Error::InvalidArgument(format!("boosts act at t = 0, state is at t = {}", state.t)));
    }
    if state.grid.axis_of(Var::V(axis as u8)).is_none() {
        return Err(Error::InvalidArgument(format!("boost along axis {} needs v{} on the grid", axis + 1, axis + 1)));
    }
    if s.tanh().abs() > 0.9 {
        return Err(Error::InvalidArgument(format!("rapidity {s} exceeds |tanh s| <= 0.9")));
    }
    let k = build_free_generators(1.0)?.at_time(0.0).boosts[axis].clone();
    let pullback = Pullback::Field(CharacteristicField::from_generator(&k, &state.grid.vars())?);
    let mut out = transport(state, &pullback, s, ds)?;
    out.state.t = 0.0;
    Ok(out)
}

/// Boosted velocity `(v' ∥, v' ⊥)` of a point particle under
/// `e^{isK} V e^{−isK}`: `v'_∥ = (v_∥ − u)/(1 − u v_∥)`,
/// `v'_⊥ = v_⊥ √(1 − u²)/(1 − u v_∥)` with `u = tanh s`.
pub fn boosted_velocity(v: [f64; 3], axis: usize, s: f64) -> [f64; 3] {
    let u = s.tanh();
    let denom = 1.0 - u * v[axis];
    let scale = (1.0 - u * u).sqrt() / denom;
    let mut out = v.map(|c| c * scale);
    out[axis] = (v[axis] - u) / denom;
    out
}

/// The amplitude `ψ₀(x − v t, v)` of a free state, for oracle comparisons.
pub fn free_shift_oracle(initial: impl Fn(&[f64; 10]) -> Complex64, t: f64) -> impl Fn(&[f64; 10]) -> Complex64 {
    move |p| {
        let mut q = *p;
        for k in 0..3 {
            q[k] -= p[3 + k] * t;
        }
        initial(&q)
    }
}
