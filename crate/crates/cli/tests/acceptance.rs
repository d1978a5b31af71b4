//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use relkvn::flow::*;
use relkvn::generators::{
    build_free_generators, build_free_momentum_generators, verify_euler_lagrange, verify_force_equation,
    verify_momentum_liouvillian, verify_poincare_closure, ClosureOptions, ForceField,
};
use relkvn::operator::{OperatorExpr, Representation};
use relkvn::report::Report;
use relkvn::scalar::{Number, ProbeConfig, Var};
use relkvn::series::{lorentz_coefficient, verify_boost_closed_forms, verify_c1_on_velocity, verify_c2, BoostKind};

const VEL: Representation = Representation::Velocity;
const SEED: u64 = 20240611;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cfg() -> ProbeConfig {
    ProbeConfig::default().with_seed(SEED).with_trials(100).with_tol(1e-9)
}

fn within(elapsed: Duration, budget_s: f64) -> bool {
    elapsed.as_secs_f64() <= budget_s
}

fn failures(report: &Report) -> String {
    let ids: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
    if ids.is_empty() {
        String::new()
    } else {
        format!(", failed: {}", ids.join(" "))
    }
}

fn line_grid(x: (f64, f64)) -> PhaseGrid {
    PhaseGrid::new(vec![GridAxis::new(Var::X(0), x.0, x.1, 512).unwrap(), GridAxis::open_velocity(Var::V(0), 511).unwrap()]).unwrap()
}

fn gaussian(grid: PhaseGrid, center: [f64; 2], width: [f64; 2]) -> PhaseSpaceState {
    PhaseSpaceState::gaussian(VEL, grid, &GaussianSpec { center: center.to_vec(), width: width.to_vec() }).unwrap()
}

fn closure(momentum: bool) -> Outcome {
    let started = Instant::now();
    let set = if momentum { build_free_momentum_generators(1.0) } else { build_free_generators(1.0) }.unwrap();
    let opts = ClosureOptions::for_set(&set);
    let report = verify_poincare_closure(&set, &cfg(), &opts).unwrap();
    let elapsed = started.elapsed();
    let pass = report.checks.len() == 45
        && report.asserted_count() == 45
        && report.all_pass()
        && report.max_residual() <= 1e-9
        && opts.times == [0.0, 1.7]
        && within(elapsed, 60.0);
    outcome(
        pass,
        format!(
            "{}/45 brackets, max residual {:.1e}, t in {:?}, {:.1} s{}",
            report.passed_count(),
            report.max_residual(),
            opts.times,
            elapsed.as_secs_f64(),
            failures(&report)
        ),
    )
}

fn force_equation() -> Outcome {
    let fields = [
        ("constant", ForceField::constant([0.7, -0.3, 0.2])),
        ("phi = x1", ForceField::parse("x1", ["0", "0", "0"]).unwrap()),
        ("A = (-x2 B0, 0, 0)", ForceField::parse("0", ["-x2*B0", "0", "0"]).unwrap()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, field) in fields {
        let report = verify_force_equation(1.0, &field, &cfg()).unwrap();
        pass &= report.all_pass() && report.max_residual() <= 1e-9;
        parts.push(format!("{name}: {:.1e}{}", report.max_residual(), failures(&report)));
    }
    outcome(pass, parts.join("; "))
}

fn euler_lagrange() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, field) in [
        ("phi = x1", ForceField::parse("x1", ["0", "0", "0"]).unwrap()),
        ("A = (-x2 B0, 0, 0)", ForceField::parse("0", ["-x2*B0", "0", "0"]).unwrap()),
    ] {
        let report = verify_euler_lagrange(1.0, &field, &cfg()).unwrap();
        let matched = (1..=3).map(|a| report.get(&format!("matched {a}")).unwrap().max_residual).fold(0.0, f64::max);
        let control = report.get("mismatched nonzero").unwrap();
        pass &= matched <= 1e-9 && control.pass && control.max_residual > 1e-9;
        parts.push(format!("{name}: matched {matched:.1e}, mismatched {:.2e}", control.max_residual));
    }
    outcome(pass, parts.join("; "))
}

fn constant_force_trajectory() -> Outcome {
    let started = Instant::now();
    let record = integrate_trajectory(1.0, &ForceField::constant([1.0, 0.0, 0.0]), [0.0; 3], [0.0; 3], 5.0, 1e-3).unwrap();
    let elapsed = started.elapsed();
    let (mut dv, mut dx, mut speed) = (0.0f64, 0.0f64, 0.0f64);
    for ((t, r), v) in record.times.iter().zip(&record.positions).zip(&record.velocities) {
        let (x, u) = constant_force_oracle(1.0, 1.0, *t);
        dv = dv.max((v[0] - u).abs());
        dx = dx.max((r[0] - x).abs());
        speed = speed.max(v.iter().map(|c| c * c).sum::<f64>().sqrt());
    }
    let reaches_end = (record.times.last().unwrap() - 5.0).abs() < 1e-9;
    let pass = dv <= 1e-8 && dx <= 1e-7 && speed < 1.0 && reaches_end && within(elapsed, 5.0);
    outcome(
        pass,
        format!("{} samples, max |dv| {dv:.1e}, max |dx| {dx:.1e}, max |v| {speed:.6}, {:.2} s", record.times.len(), elapsed.as_secs_f64()),
    )
}

fn c1_c2_series() -> Outcome {
    let exact = [(1, 2), (3, 8), (5, 16), (35, 128), (63, 256), (231, 1024)];
    let mut pass = lorentz_coefficient(0) == Number::one();
    for (n, (num, den)) in exact.iter().enumerate() {
        pass &= lorentz_coefficient(n + 1) == Number::rational(*num, *den);
    }
    let c1 = verify_c1_on_velocity(1.0, 6, &cfg()).unwrap();
    let mut worst_exact = 0.0f64;
    let mut worst_numeric = 0.0f64;
    for n in 0..=6 {
        worst_exact = worst_exact.max(c1.get(&format!("order {n} exact")).unwrap().max_residual);
        worst_numeric = worst_numeric.max(c1.get(&format!("order {n}")).unwrap().max_residual);
    }
    pass &= c1.all_pass() && worst_exact == 0.0 && worst_numeric <= 1e-9;
    let c2 = verify_c2(&ForceField::uniform_magnetic(1.0), &cfg()).unwrap();
    pass &= c2.all_pass();
    outcome(
        pass,
        format!(
            "C1 coefficients exact through n = 6, exact residual {worst_exact:.1e}, numeric {worst_numeric:.1e}; C2 terminates{}",
            failures(&c2)
        ),
    )
}

fn boost_series() -> Outcome {
    let cfg = cfg().with_tol(1e-8);
    let mut pass = true;
    let mut parts = Vec::new();
    for (kind, order) in [(BoostKind::Velocity, 4), (BoostKind::EnergyMomentum, 4), (BoostKind::Position, 2)] {
        let report = verify_boost_closed_forms(kind, 0.3, order, 1.0, &cfg).unwrap();
        pass &= report.all_pass() && report.asserted_count() > 0;
        parts.push(format!("{kind} through {order}: {:.1e}{}", report.max_residual(), failures(&report)));
    }
    outcome(pass, parts.join("; "))
}

fn kvn_evolution() -> Outcome {
    let started = Instant::now();
    let free = ForceField::free();
    let s = gaussian(line_grid((-5.0, 6.0)), [0.0, 0.3], [0.5, 0.1]);
    let snaps = evolve_snapshots(&s, 1.0, &free, &[0.99, 1.0, 1.01, 2.0], 1e-2).unwrap();
    let end = &snaps[3].state;
    // Closed-form amplitude, scaled by the same grid normalization as `s`.
    let amplitude = |p: &[f64; 10]| Complex64::new((-(p[0] / 0.5).powi(2) / 4.0 - ((p[3] - 0.3) / 0.1).powi(2) / 4.0).exp(), 0.0);
    let scale = 1.0 / PhaseSpaceState::from_fn(VEL, s.grid.clone(), 0.0, amplitude).unwrap().norm().sqrt();
    let exact = PhaseSpaceState::from_fn(VEL, s.grid.clone(), 2.0, free_shift_oracle(move |p| amplitude(p) * scale, 2.0)).unwrap();
    let l2 = end.l2_distance(&exact).unwrap();
    let free_drift = (end.norm() - s.norm()).abs() / 2.0;
    let rate = (snaps[2].state.mean(Var::X(0)) - snaps[0].state.mean(Var::X(0))) / 0.02;
    let ehrenfest = (rate - snaps[1].state.expectation(&OperatorExpr::kinetic(0, VEL)).unwrap().re).abs();

    // Constant force F/m0 = 1: a broad state for the norm, a velocity-narrow
    // state for the peak, both on the same default grid.
    let force = ForceField::constant([1.0, 0.0, 0.0]);
    let grid = line_grid((-2.0, 4.0));
    let broad = gaussian(grid.clone(), [0.0, 0.0], [0.15, 0.15]);
    let broad_end = evolve_state(&broad, 1.0, &force, 3.0, 1e-2).unwrap().state;
    let force_drift = (broad_end.norm() - broad.norm()).abs() / 3.0;
    let narrow = gaussian(grid.clone(), [0.0, 0.0], [0.2, 0.04]);
    let times: Vec<f64> = (1..=30).map(|k| k as f64 * 0.1).collect();
    let mut peak_cells = 0.0f64;
    for snap in evolve_snapshots(&narrow, 1.0, &force, &times, 1e-2).unwrap() {
        let (x, v) = constant_force_oracle(1.0, 1.0, snap.state.t);
        let p = snap.state.refined_peak();
        peak_cells = peak_cells.max(((p[0] - x) / grid.axes[0].spacing()).abs()).max(((p[1] - v) / grid.axes[1].spacing()).abs());
    }
    let elapsed = started.elapsed();
    let pass = l2 <= 1e-3 && free_drift <= 1e-6 && force_drift <= 1e-6 && ehrenfest <= 1e-4 && peak_cells <= 2.0 && within(elapsed, 120.0);
    outcome(
        pass,
        format!(
            "free L2 {l2:.1e}, drift {free_drift:.1e}/t (force {force_drift:.1e}/t), Ehrenfest {ehrenfest:.1e}, peak {peak_cells:.2} cells, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn boost_group_law() -> Outcome {
    let grid = PhaseGrid::new(vec![GridAxis::open_velocity(Var::V(0), 255).unwrap(), GridAxis::open_velocity(Var::V(2), 255).unwrap()]).unwrap();
    let s = PhaseSpaceState::gaussian(VEL, grid.clone(), &GaussianSpec { center: vec![0.1, 0.1], width: vec![0.06, 0.06] }).unwrap();
    let twice = boost_state(&boost_state(&s, 2, 0.2, 1e-2).unwrap().state, 2, 0.2, 1e-2).unwrap().state;
    let once = boost_state(&s, 2, 0.4, 1e-2).unwrap().state;
    let (a, b) = (twice.centroid(), once.centroid());
    let cells = (a[0] - b[0]).hypot(a[1] - b[1]) / grid.axes[0].spacing();
    outcome(cells <= 2.0, format!("centroid discrepancy {cells:.2e} cells"))
}

fn pure_state_limit() -> Outcome {
    let field = ForceField::parse("x1", ["0", "0", "0"]).unwrap();
    let limit = pure_state_limit_check(1.0, &field, [0.0; 3], [0.3, 0.0, 0.0], &[0.4, 0.2, 0.1, 0.05], 1.5, 1e-2).unwrap();
    let errors: Vec<f64> = limit.rows.iter().map(|r| r.centroid_error).collect();
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[1] / w[0]).collect();
    let pass = ratios.iter().all(|r| *r < 1.0);
    outcome(pass, format!("errors {}, ratios {ratios:.2?}", errors.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(" ")))
}

fn mutation_and_reduction() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_relkvn"))
        .args(["verify-algebra", "--mutate", "K", "--seed", &SEED.to_string(), "--format", "machine"])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = doc["failed"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    let mut pass = out.status.code() == Some(1);
    let mut per_closure = Vec::new();
    for title in ["Poincare closure, velocity", "Poincare closure, momentum"] {
        let report = doc["reports"].as_array().unwrap().iter().find(|r| r["title"].as_str().unwrap().starts_with(title)).unwrap();
        let rows = report["checks"].as_array().unwrap();
        for row in rows {
            pass &= row["pass"] == !row["id"].as_str().unwrap().contains('K');
        }
        per_closure.push(rows.iter().filter(|r| r["pass"] == false).count());
    }
    pass &= failed.iter().all(|f| f.split(": ").nth(1).is_some_and(|id| id.contains('K')));

    let report = verify_momentum_liouvillian(1.0, &ForceField::parse("x1", ["-x2*B0", "0", "0"]).unwrap(), &cfg()).unwrap();
    let reduction = report.get("reduction A -> 0").unwrap();
    pass &= reduction.pass && reduction.max_residual <= 1e-9;
    outcome(
        pass,
        format!(
            "--mutate K fails {per_closure:?} closure rows, {} failures total, all K; A -> 0 reduction {:.1e}",
            failed.len(),
            reduction.max_residual
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("free velocity closure", || closure(false)),
        ("free momentum closure", || closure(true)),
        ("force equation", force_equation),
        ("Euler-Lagrange", euler_lagrange),
        ("constant-force trajectory", constant_force_trajectory),
        ("C1/C2 series", c1_c2_series),
        ("boost series", boost_series),
        ("KvN evolution", kvn_evolution),
        ("boost group law", boost_group_law),
        ("pure-state limit", pure_state_limit),
        ("mutation and A -> 0 reduction", mutation_and_reduction),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut all = true;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let started = Instant::now();
        let result = check();
        all &= result.pass;
        println!(
            "criterion {:>2} {}: {} ({}) [{:.1} s]",
            k + 1,
            if result.pass { "PASS" } else { "FAIL" },
            name,
            result.detail,
            started.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
