//! Point-like limit of momentum-representation states: shrinking Gaussians
//! follow the Hamiltonian trajectory.

use serde::Serialize;

use super::field::CharacteristicField;
use super::grid::{GridAxis, PhaseGrid};
use super::state::{GaussianSpec, PhaseSpaceState};
use super::trajectory::integrate_trajectory;
use super::transport::{transport_onto, Pullback};
use crate::error::{Error, Result};
use crate::generators::{momentum_velocity, ForceField};
use crate::operator::Representation;
use crate::report::{CheckResult, Report};
use crate::scalar::Var;

/// Grid points per axis for each width.
const NODES: usize = 129;
/// Half-extent of the initial grid in widths.
const EXTENT: f64 = 8.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub width: f64,
    /// Distance in `(x, p)` between the density centroid and the trajectory.
    pub centroid_error: f64,
    pub cell: f64,
    pub mass_loss: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureStateLimit {
    pub rows: Vec<LimitRow>,
    /// Trajectory endpoint `(x, p)` along the active axis.
    pub trajectory: (f64, f64),
    pub report: Report,
}

fn velocity_of(mass: f64, field: &ForceField, r0: [f64; 3], p0: [f64; 3]) -> Result<[f64; 3]> {
    let mut point = crate::scalar::SamplePoint::new();
    for k in 0..3 {
        point.set(Var::X(k as u8), r0[k]);
        point.set(Var::P(k as u8), p0[k]);
    }
    point.set(Var::T, 0.0);
    let v = momentum_velocity(mass, field);
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = v[k].eval(&point)?.re;
    }
    Ok(out)
}

/// Evolves Gaussians of decreasing `widths` (same width in `x₁` and `p₁`)
/// with Hamilton's flow and compares their density centroids at `t_end`
/// against the velocity-space trajectory mapped to canonical momentum.
/// Other coordinates stay frozen at `r0`, `p0`. Each width gets its own
/// grid, and the final grid is centered on the pushed-forward initial
/// center.
pub fn pure_state_limit_check(
    mass: f64,
    field: &ForceField,
    r0: [f64; 3],
    p0: [f64; 3],
    widths: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<PureStateLimit> {
    if widths.len() < 2 || widths.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::InvalidArgument("need at least two positive widths".into()));
    }
    let v0 = velocity_of(mass, field, r0, p0)?;
    let traj = integrate_trajectory(mass, field, r0, v0, t_end, dt)?;
    let target = (traj.last_position()[0], traj.last_momentum()[0]);

    let vars = [Var::X(0), Var::P(0)];
    let flow = CharacteristicField::hamiltonian(mass, field, &vars)?;
    let frozen = |g: PhaseGrid| {
        (1..3).fold(g, |g, k| g.with_frozen(Var::X(k as u8), r0[k]).with_frozen(Var::P(k as u8), p0[k]))
    };
    let mut center = [0.0; 10];
    center[..3].copy_from_slice(&r0);
    center[6..9].copy_from_slice(&p0);
    let mut scratch = vec![0.0; flow.scratch_len()];
    let steps = (t_end / dt).ceil().max(1.0) as usize;
    flow.integrate(&mut center, t_end / steps as f64, steps, &mut scratch)
        .ok_or_else(|| Error::NonFiniteState("pushed-forward center".into()))?;

    let mut report = Report::new(format!("pure-state limit, t = {t_end}, trajectory (x1, p1) = ({:.6}, {:.6})", target.0, target.1));
    let mut rows = Vec::new();
    for &w in widths {
        let half = EXTENT * w;
        let grid = frozen(PhaseGrid::new(vec![
            GridAxis::new(Var::X(0), r0[0] - half, r0[0] + half, NODES)?,
            GridAxis::new(Var::P(0), p0[0] - half, p0[0] + half, NODES)?,
        ])?);
        let state = PhaseSpaceState::gaussian(Representation::Momentum, grid, &GaussianSpec { center: vec![r0[0], p0[0]], width: vec![w, w] })?;
        let spread = half * (1.0 + t_end);
        let out_grid = frozen(PhaseGrid::new(vec![
            GridAxis::new(Var::X(0), center[0] - spread, center[0] + spread, NODES)?,
            GridAxis::new(Var::P(0), center[6] - spread, center[6] + spread, NODES)?,
        ])?);
        let cell = out_grid.axes[0].spacing();
        let out = transport_onto(&state, &out_grid, &Pullback::Field(flow.clone()), t_end, dt)?;
        let c = out.state.centroid();
        let err = (c[0] - target.0).hypot(c[1] - target.1);
        rows.push(LimitRow { width: w, centroid_error: err, cell, mass_loss: out.mass_loss });
        report.push(
            CheckResult::new(format!("width {w}"), "density centroid", "trajectory (x1, p1)")
                .measured(err, f64::INFINITY, out_grid.len())
                .informational()
                .with_note(format!("{:.3} cells", err / cell)),
        );
    }
    for pair in rows.windows(2) {
        let ratio = pair[1].centroid_error / pair[0].centroid_error;
        report.push(
            CheckResult::new(format!("ratio {} -> {}", pair[0].width, pair[1].width), "error ratio", "< 1")
                .measured(ratio, 1.0 - f64::EPSILON, 1)
                .with_note(format!("ratio {ratio:.4}")),
        );
    }
    let last = rows.last().expect("at least two widths");
    report.push(
        CheckResult::new("smallest width", "centroid error / cell", "< 2").measured(last.centroid_error / last.cell, 2.0, 1),
    );
    Ok(PureStateLimit { rows, trajectory: target, report })
}
