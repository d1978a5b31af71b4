//! One function per subcommand, each returning its reports and artifacts.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use relkvn::flow::{
    boost_state, boosted_velocity, constant_force_oracle, evolve_snapshots, integrate_trajectory, write_snapshot, PhaseSpaceState,
};
use relkvn::generators::{
    build_free_generators, build_free_momentum_generators, build_interacting_generators, build_momentum_generators,
    momentum_velocity, verify_euler_lagrange, verify_force_equation, verify_hermiticity, verify_momentum_liouvillian,
    verify_poincare_closure, verify_poisson_correspondence, verify_vector_relations, ClosureOptions, ForceField, GeneratorSet,
};
use relkvn::report::{CheckResult, Report};
use relkvn::scalar::{SamplePoint, Var};
use relkvn::series::{run_identity, SeriesIdentity, SeriesOptions};
use relkvn::Representation;

use crate::run_report::CliError;
use crate::scenario::Scenario;

pub struct Outcome {
    pub reports: Vec<Report>,
    pub artifacts: Vec<PathBuf>,
}

fn output_dir(scenario: &Scenario) -> Result<Option<&Path>, CliError> {
    match &scenario.output.dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            Ok(Some(dir.as_path()))
        }
        None => Ok(None),
    }
}

fn closure(set: &GeneratorSet, scenario: &Scenario) -> Result<Report, CliError> {
    let set = match scenario.mutate {
        Some(family) => set.mutated(family)?,
        None => set.clone(),
    };
    let cfg = scenario.probe_config(scenario.tolerances.algebra);
    let mut report = verify_poincare_closure(&set, &cfg, &ClosureOptions::for_set(&set))?;
    if let Some(family) = scenario.mutate {
        report.note(format!("negative control: X1 X2 X3 added to every {family} generator"));
    }
    Ok(report)
}

pub fn verify_algebra(scenario: &Scenario) -> Result<Outcome, CliError> {
    let field = scenario.force_field()?;
    let mass = scenario.mass;
    let cfg = scenario.probe_config(scenario.tolerances.algebra);
    let velocity = build_free_generators(mass)?;
    let mut reports = vec![closure(&velocity, scenario)?, closure(&build_free_momentum_generators(mass)?, scenario)?];
    let checked = match scenario.mutate {
        Some(family) => velocity.mutated(family)?,
        None => velocity,
    };
    reports.push(verify_hermiticity(&checked, &cfg)?);
    reports.push(verify_vector_relations(&checked, &cfg)?);
    if !field.is_free() {
        reports.push(closure(&build_interacting_generators(mass, &field)?, scenario)?);
        reports.push(closure(&build_momentum_generators(mass, &field)?, scenario)?);
    }
    reports.push(verify_force_equation(mass, &field, &cfg)?);
    reports.push(verify_euler_lagrange(mass, &field, &cfg)?);
    reports.push(verify_momentum_liouvillian(mass, &field, &cfg)?);
    reports.push(verify_poisson_correspondence(mass, &field, &cfg)?);
    Ok(Outcome { reports, artifacts: Vec::new() })
}

pub fn series_check(scenario: &Scenario) -> Result<Outcome, CliError> {
    let identities = match &scenario.series.identity {
        Some(name) => vec![name.parse::<SeriesIdentity>().map_err(|e| CliError::Config(e.to_string()))?],
        None => SeriesIdentity::ALL.to_vec(),
    };
    let field = scenario.force_field()?;
    let mut opts = SeriesOptions { mass: scenario.mass, order: scenario.series.order, rapidity: scenario.series.rapidity, ..SeriesOptions::default() };
    if !field.is_free() {
        opts.field = field;
    }
    let cfg = scenario.probe_config(scenario.tolerances.series);
    let reports = identities.into_iter().map(|id| run_identity(id, &opts, &cfg)).collect::<relkvn::Result<Vec<_>>>()?;
    Ok(Outcome { reports, artifacts: Vec::new() })
}

/// Full phase-space point of a grid location: grid coordinates where
/// present, frozen values elsewhere.
fn phase_point(state: &PhaseSpaceState, coords: &[f64]) -> [f64; 10] {
    let mut y = state.grid.frozen;
    for (axis, c) in state.grid.axes.iter().zip(coords) {
        y[axis.var.slot()] = *c;
    }
    y
}

fn velocity_at(mass: f64, field: &ForceField, repr: Representation, y: &[f64; 10]) -> Result<[f64; 3], CliError> {
    match repr {
        Representation::Velocity => Ok([y[3], y[4], y[5]]),
        Representation::Momentum => {
            let mut point = SamplePoint::new();
            for k in 0..3u8 {
                point.set(Var::X(k), y[k as usize]);
                point.set(Var::P(k), y[6 + k as usize]);
            }
            point.set(Var::T, 0.0);
            let v = momentum_velocity(mass, field);
            let mut out = [0.0; 3];
            for k in 0..3 {
                out[k] = v[k].eval(&point)?.re;
            }
            Ok(out)
        }
    }
}

pub fn evolve(scenario: &Scenario) -> Result<Outcome, CliError> {
    let state = scenario.initial_state()?;
    let field = scenario.force_field()?;
    let tol = &scenario.tolerances;
    let (dt, t_end) = (scenario.integrator.dt, scenario.integrator.t_end);
    let mut times = Vec::new();
    if let Some(every) = scenario.integrator.snapshot_every {
        let mut k = 1;
        while (k as f64) * every < t_end - 1e-12 {
            times.push(state.t + k as f64 * every);
            k += 1;
        }
    }
    times.push(state.t + t_end);
    let snaps = evolve_snapshots(&state, scenario.mass, &field, &times, dt)?;

    let mut report = Report::new(format!("evolution of a {} state to t = {}", state.repr, state.t + t_end));
    let n0 = state.norm();
    let drift = snaps.iter().map(|o| (o.state.norm() - n0).abs()).fold(0.0, f64::max);
    let per_time = if t_end > 0.0 { drift / t_end } else { drift };
    report.push(
        CheckResult::new("norm drift", "|N(t) - N(0)| per unit time", "0").measured(per_time, tol.norm_drift, snaps.len()),
    );
    let last = &snaps.last().expect("at least the final time").state;
    if t_end == 0.0 {
        report.push(CheckResult::new("zero-step identity", "evolved state", "initial state").measured(last.l2_distance(&state)?, 1e-12, 1));
    }
    if field.is_free() && state.repr == Representation::Velocity {
        for k in 0..3u8 {
            if state.grid.axis_of(Var::X(k)).is_none() {
                continue;
            }
            let expected = state.mean(Var::X(k)) + t_end * state.mean(Var::V(k));
            report.push(
                CheckResult::new(format!("free mean x{}", k + 1), format!("<X{}>(t)", k + 1), format!("<X{0}>(0) + t <V{0}>(0)", k + 1))
                    .measured((last.mean(Var::X(k)) - expected).abs(), tol.free_mean, 1),
            );
        }
    }

    // the density peak against the point trajectory from the initial peak
    let start = phase_point(&state, &state.refined_peak());
    let v0 = velocity_at(scenario.mass, &field, state.repr, &start)?;
    let r0 = [start[0], start[1], start[2]];
    let mut rows = Vec::new();
    for o in &snaps {
        let elapsed = o.state.t - state.t;
        let traj = integrate_trajectory(scenario.mass, &field, r0, v0, elapsed, dt)?;
        let mut expected = o.state.grid.frozen;
        let (r, v, p) = (traj.last_position(), traj.last_velocity(), traj.last_momentum());
        expected[..3].copy_from_slice(&r);
        expected[3..6].copy_from_slice(&v);
        expected[6..9].copy_from_slice(&p);
        let peak = o.state.refined_peak();
        let cells = o.state.grid.axes.iter().zip(&peak).map(|(a, c)| (c - expected[a.var.slot()]).abs() / a.spacing()).fold(0.0, f64::max);
        rows.push((o.state.t, peak, cells));
        report.push(
            CheckResult::new(format!("peak t = {:.4}", o.state.t), "refined |psi|^2 peak", "trajectory from the initial peak")
                .measured(cells, tol.peak_cells, 1)
                .with_note("residual in grid cells"),
        );
    }

    let mut artifacts = Vec::new();
    if let Some(dir) = output_dir(scenario)? {
        for (k, o) in snaps.iter().enumerate() {
            let path = dir.join(format!("snapshot_{k:03}.txt"));
            write_snapshot(&o.state, BufWriter::new(File::create(&path)?))?;
            artifacts.push(path);
        }
        let path = dir.join("expectations.csv");
        let mut csv = BufWriter::new(File::create(&path)?);
        let names: Vec<String> = state.grid.vars().iter().map(|v| v.name()).collect();
        let means: Vec<String> = names.iter().map(|n| format!("mean_{n}")).collect();
        let peaks: Vec<String> = names.iter().map(|n| format!("peak_{n}")).collect();
        writeln!(csv, "t,norm,{},{}", means.join(","), peaks.join(","))?;
        for (o, (t, peak, _)) in snaps.iter().zip(&rows) {
            let means: Vec<String> = o.state.centroid().iter().map(|m| format!("{m:.12}")).collect();
            let peaks: Vec<String> = peak.iter().map(|m| format!("{m:.12}")).collect();
            writeln!(csv, "{t:.12},{:.12},{},{}", o.state.norm(), means.join(","), peaks.join(","))?;
        }
        csv.flush()?;
        artifacts.push(path);
    }
    Ok(Outcome { reports: vec![report], artifacts })
}

pub fn boost(scenario: &Scenario) -> Result<Outcome, CliError> {
    let state = scenario.initial_state()?;
    if state.repr != Representation::Velocity {
        return Err(relkvn::Error::RepresentationMismatch { expected: "velocity".into(), found: state.repr.to_string() }.into());
    }
    if scenario.boosts.is_empty() {
        return Err(CliError::Config("scenario has no boosts".into()));
    }
    let start = phase_point(&state, &state.refined_peak());
    let mut expected = [start[3], start[4], start[5]];
    let mut current = state.clone();
    for b in &scenario.boosts {
        let s = b.resolved_rapidity()?;
        current = boost_state(&current, b.axis - 1, s, b.step)?.state;
        expected = boosted_velocity(expected, b.axis - 1, s);
    }
    let peak = current.refined_peak();
    let mut report = Report::new(format!("boosted {} state, {} boost(s)", current.repr, scenario.boosts.len()));
    let cells = current
        .grid
        .axes
        .iter()
        .zip(&peak)
        .filter_map(|(a, c)| match a.var {
            Var::V(k) => Some((c - expected[k as usize]).abs() / a.spacing()),
            _ => None,
        })
        .fold(0.0, f64::max);
    let text = |v: [f64; 3]| format!("({:.4}, {:.4}, {:.4})", v[0], v[1], v[2]);
    let measured = phase_point(&current, &peak);
    report.push(
        CheckResult::new("peak velocity", "refined |psi|^2 peak", "velocity addition")
            .measured(cells, scenario.tolerances.peak_cells, 1)
            .with_note(format!("peak {} expected {}, residual in grid cells", text([measured[3], measured[4], measured[5]]), text(expected))),
    );
    report.push(
        CheckResult::new("norm change", "N after", "N before")
            .measured((current.norm() - state.norm()).abs(), f64::INFINITY, 1)
            .informational(),
    );
    let mut artifacts = Vec::new();
    if let Some(dir) = output_dir(scenario)? {
        let path = dir.join("boosted.txt");
        write_snapshot(&current, BufWriter::new(File::create(&path)?))?;
        artifacts.push(path);
    }
    Ok(Outcome { reports: vec![report], artifacts })
}

/// Components when the expression is a numeric constant.
fn constant_vector(exprs: &[relkvn::ScalarExpr; 3]) -> Option<[f64; 3]> {
    let empty = SamplePoint::new();
    let mut out = [0.0; 3];
    for k in 0..3 {
        if !exprs[k].vars().is_empty() {
            return None;
        }
        out[k] = exprs[k].eval(&empty).ok()?.re;
    }
    Some(out)
}

pub fn trajectory(scenario: &Scenario) -> Result<Outcome, CliError> {
    let spec = scenario.trajectory.clone().ok_or_else(|| CliError::Config("scenario has no trajectory".into()))?;
    let field = scenario.force_field()?;
    let (mass, dt, t_end) = (scenario.mass, scenario.integrator.dt, scenario.integrator.t_end);
    let rec = integrate_trajectory(mass, &field, spec.r0, spec.v0, t_end, dt)?;
    let tol = &scenario.tolerances;
    let mut report = Report::new(format!("trajectory, m0 = {mass}, t in [0, {t_end}], dt = {}", rec.dt));
    let top = rec.velocities.iter().map(|v| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()).fold(0.0, f64::max);
    report.push(CheckResult::new("speed limit", "max |v|", "< 1").measured(top, 1.0 - f64::EPSILON, rec.times.len()));

    let electric = constant_vector(&field.electric());
    let magnetic = constant_vector(&field.magnetic());
    if let (Some(e), Some([0.0, 0.0, 0.0]), [0.0, 0.0, 0.0]) = (electric, magnetic, spec.v0) {
        let force = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        let dir = if force > 0.0 { e.map(|c| c / force) } else { [0.0; 3] };
        let (mut dv, mut dx) = (0.0f64, 0.0f64);
        for ((t, r), v) in rec.times.iter().zip(&rec.positions).zip(&rec.velocities) {
            let (x, speed) = constant_force_oracle(mass, force, *t);
            for k in 0..3 {
                dv = dv.max((v[k] - speed * dir[k]).abs());
                dx = dx.max((r[k] - spec.r0[k] - x * dir[k]).abs());
            }
        }
        report.push(CheckResult::new("oracle velocity", "v(t)", "(Ft/m)/sqrt(1 + (Ft/m)^2)").measured(dv, tol.trajectory_velocity, rec.times.len()));
        report.push(
            CheckResult::new("oracle position", "x(t)", "(m/F)(sqrt(1 + (Ft/m)^2) - 1)").measured(dx, tol.trajectory_position, rec.times.len()),
        );
    }

    let mut artifacts = Vec::new();
    if let Some(dir) = output_dir(scenario)? {
        let path = dir.join("trajectory.csv");
        let mut out = BufWriter::new(File::create(&path)?);
        rec.write_csv(&mut out)?;
        out.flush()?;
        artifacts.push(path);
    }
    Ok(Outcome { reports: vec![report], artifacts })
}
