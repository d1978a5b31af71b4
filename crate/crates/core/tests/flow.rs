use relkvn::flow::*;
use relkvn::generators::ForceField;
use relkvn::operator::{OperatorExpr, Representation};
use relkvn::scalar::Var;

const VEL: Representation = Representation::Velocity;

fn line_grid(x: (f64, f64), nx: usize, nv: usize) -> PhaseGrid {
    PhaseGrid::new(vec![GridAxis::new(Var::X(0), x.0, x.1, nx).unwrap(), GridAxis::open_velocity(Var::V(0), nv).unwrap()]).unwrap()
}

fn gaussian(grid: PhaseGrid, center: [f64; 2], width: [f64; 2]) -> PhaseSpaceState {
    PhaseSpaceState::gaussian(VEL, grid, &GaussianSpec { center: center.to_vec(), width: width.to_vec() }).unwrap()
}

#[test]
fn free_transport_matches_exact_shift() {
    let grid = line_grid((-5.0, 6.0), 256, 255);
    let s = gaussian(grid.clone(), [0.0, 0.3], [0.5, 0.1]);
    let out = evolve_state(&s, 1.0, &ForceField::free(), 2.0, 1e-2).unwrap();
    let initial = s.clone();
    let exact = PhaseSpaceState::from_fn(VEL, grid, 2.0, free_shift_oracle(move |p| initial.grid.interpolate(&initial.psi, p).unwrap_or_default(), 2.0)).unwrap();
    assert!(out.state.l2_distance(&exact).unwrap() < 1e-6);
    assert!((out.state.norm() - 1.0).abs() < 1e-6);
    assert_eq!(out.state.t, 2.0);
}

#[test]
fn ehrenfest_position_rate_is_mean_velocity() {
    let s = gaussian(line_grid((-5.0, 6.0), 256, 255), [0.0, 0.3], [0.5, 0.1]);
    let snaps = evolve_snapshots(&s, 1.0, &ForceField::free(), &[0.99, 1.0, 1.01], 1e-2).unwrap();
    let rate = (snaps[2].state.mean(Var::X(0)) - snaps[0].state.mean(Var::X(0))) / 0.02;
    let v = snaps[1].state.expectation(&OperatorExpr::kinetic(0, VEL)).unwrap();
    assert!((rate - v.re).abs() < 1e-4, "{rate} vs {v}");
}

#[test]
fn constant_force_peak_follows_oracle() {
    let grid = line_grid((-2.0, 4.0), 256, 255);
    let s = gaussian(grid.clone(), [0.0, 0.0], [0.2, 0.04]);
    let times = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
    for o in evolve_snapshots(&s, 1.0, &ForceField::constant([1.0, 0.0, 0.0]), &times, 1e-2).unwrap() {
        let (x, v) = constant_force_oracle(1.0, 1.0, o.state.t);
        let p = o.state.refined_peak();
        assert!((p[0] - x).abs() <= 2.0 * grid.axes[0].spacing(), "t = {}: {p:?} vs ({x}, {v})", o.state.t);
        assert!((p[1] - v).abs() <= 2.0 * grid.axes[1].spacing(), "t = {}: {p:?} vs ({x}, {v})", o.state.t);
    }
}

#[test]
fn resolved_constant_force_state_keeps_its_norm() {
    let s = gaussian(line_grid((-2.0, 4.0), 256, 255), [0.0, 0.0], [0.15, 0.15]);
    let out = evolve_state(&s, 1.0, &ForceField::constant([1.0, 0.0, 0.0]), 2.0, 1e-2).unwrap();
    assert!((out.state.norm() - 1.0).abs() / 2.0 < 1e-5, "{}", out.state.norm());
}

#[test]
fn disjoint_peaks_evolve_independently() {
    let grid = line_grid((-3.0, 4.0), 128, 127);
    let a = gaussian(grid.clone(), [-1.5, -0.3], [0.15, 0.04]);
    let b = gaussian(grid.clone(), [1.5, 0.4], [0.15, 0.04]);
    let sum = PhaseSpaceState::new(VEL, grid, a.psi.iter().zip(&b.psi).map(|(x, y)| x + y).collect(), 0.0).unwrap();
    let field = ForceField::constant([0.5, 0.0, 0.0]);
    let ea = evolve_state(&a, 1.0, &field, 1.0, 1e-2).unwrap().state;
    let eb = evolve_state(&b, 1.0, &field, 1.0, 1e-2).unwrap().state;
    let es = evolve_state(&sum, 1.0, &field, 1.0, 1e-2).unwrap().state;
    for ((s, a), b) in es.born_density().iter().zip(ea.born_density()).zip(eb.born_density()) {
        assert!((s - a - b).abs() < 1e-8);
    }
}

#[test]
fn velocity_and_momentum_evolutions_agree() {
    // A = 0, constant force: map the velocity density to p = m γ v.
    let mass = 1.0;
    let field = ForceField::constant([1.0, 0.0, 0.0]);
    let vgrid = line_grid((-1.5, 2.5), 192, 383);
    let vs = gaussian(vgrid.clone(), [0.0, 0.0], [0.2, 0.1]);
    let pgrid = PhaseGrid::new(vec![GridAxis::new(Var::X(0), -1.5, 2.5, 192).unwrap(), GridAxis::new(Var::P(0), -1.0, 3.0, 383).unwrap()])
        .unwrap();
    let initial = vs.clone();
    let ps = PhaseSpaceState::from_fn(Representation::Momentum, pgrid.clone(), 0.0, |y| {
        let p = y[6];
        let v = p / (p * p + mass * mass).sqrt();
        let jacobian = mass * mass / (p * p + mass * mass).powf(1.5);
        let mut q = *y;
        q[3] = v;
        initial.grid.interpolate(&initial.psi, &q).unwrap_or_default() * jacobian.sqrt()
    })
    .unwrap();
    assert!((ps.norm() - 1.0).abs() < 1e-4);
    let ve = evolve_state(&vs, mass, &field, 1.5, 1e-2).unwrap().state;
    let pe = evolve_state(&ps, mass, &field, 1.5, 1e-2).unwrap().state;
    let (mut weight, mut mean_p) = (0.0, 0.0);
    for (i, w) in ve.born_density().into_iter().enumerate() {
        let v = ve.grid.point(i)[3];
        weight += w;
        mean_p += w * mass * v / (1.0 - v * v).sqrt();
    }
    mean_p /= weight;
    let c = pe.centroid();
    assert!((c[1] - mean_p).abs() <= 2.0 * pgrid.axes[1].spacing(), "{} vs {mean_p}", c[1]);
    assert!((c[0] - ve.centroid()[0]).abs() <= 2.0 * pgrid.axes[0].spacing());
}

#[test]
fn boost_group_law_on_states() {
    let grid = PhaseGrid::new(vec![GridAxis::open_velocity(Var::V(0), 127).unwrap(), GridAxis::open_velocity(Var::V(2), 127).unwrap()]).unwrap();
    let s = PhaseSpaceState::gaussian(VEL, grid.clone(), &GaussianSpec { center: vec![0.1, 0.1], width: vec![0.08, 0.08] }).unwrap();
    let twice = boost_state(&boost_state(&s, 2, 0.2, 1e-2).unwrap().state, 2, 0.2, 1e-2).unwrap().state;
    let once = boost_state(&s, 2, 0.4, 1e-2).unwrap().state;
    let (a, b) = (twice.centroid(), once.centroid());
    assert!((a[0] - b[0]).hypot(a[1] - b[1]) <= 2.0 * grid.axes[0].spacing());
}

#[test]
fn boost_moves_transverse_peak_per_velocity_addition() {
    let grid = PhaseGrid::new(vec![GridAxis::open_velocity(Var::V(0), 255).unwrap(), GridAxis::open_velocity(Var::V(2), 255).unwrap()]).unwrap();
    let s = PhaseSpaceState::gaussian(VEL, grid.clone(), &GaussianSpec { center: vec![0.3, 0.0], width: vec![0.03, 0.03] }).unwrap();
    let out = boost_state(&s, 2, 0.5f64.atanh(), 1e-2).unwrap().state;
    let expected = boosted_velocity([0.3, 0.0, 0.0], 2, 0.5f64.atanh());
    let p = out.refined_peak();
    assert!((p[0] - expected[0]).abs() < grid.axes[0].spacing(), "{p:?}");
    assert!((p[1] - expected[2]).abs() < grid.axes[1].spacing(), "{p:?}");
    assert!((expected[0] - 0.2598).abs() < 1e-4);
}

#[test]
fn boost_rejects_states_off_the_initial_slice() {
    let mut s = gaussian(line_grid((-1.0, 1.0), 16, 15), [0.0, 0.0], [0.3, 0.3]);
    s.t = 1.0;
    assert!(boost_state(&s, 0, 0.1, 1e-2).is_err());
}

#[test]
fn pure_state_limit_converges_for_linear_potential() {
    let field = ForceField::parse("x1", ["0", "0", "0"]).unwrap();
    let limit = pure_state_limit_check(1.0, &field, [0.0; 3], [0.3, 0.0, 0.0], &[0.4, 0.2, 0.1], 1.5, 1e-2).unwrap();
    assert!(limit.report.all_pass(), "{}", limit.report);
    assert!((limit.trajectory.1 + 1.2).abs() < 1e-9);
}

#[test]
fn snapshots_round_trip_through_files() {
    let s = gaussian(line_grid((-1.0, 1.0), 12, 11), [0.1, -0.2], [0.3, 0.2]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.txt");
    write_snapshot(&s, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_snapshot(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(back, s);
    assert_eq!(back.psi[5], s.psi[5]);
}
