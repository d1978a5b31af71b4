use proptest::prelude::*;
use relkvn::flow::*;
use relkvn::generators::ForceField;
use relkvn::operator::{hermiticity, op_equal, OperatorExpr, Representation};
use relkvn::scalar::{equal_numeric, lorentz_factor, ProbeConfig, SamplePoint, ScalarExpr, Var};

const VEL: Representation = Representation::Velocity;

fn cfg(seed: u64) -> ProbeConfig {
    ProbeConfig::default().with_seed(seed).with_trials(20)
}

fn leaf() -> impl Strategy<Value = ScalarExpr> {
    prop_oneof![
        (0..3usize).prop_map(ScalarExpr::x),
        (0..3usize).prop_map(ScalarExpr::v),
        (-3..=3i64).prop_map(ScalarExpr::int),
        Just(lorentz_factor()),
    ]
}

fn scalar() -> impl Strategy<Value = ScalarExpr> {
    leaf().prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner).prop_map(|(a, b)| a * b),
        ]
    })
}

/// First-order operators `f + g ∂` with a single derivative.
fn first_order() -> impl Strategy<Value = OperatorExpr> {
    (scalar(), scalar(), any::<bool>(), 0..3usize).prop_map(|(f, g, kinetic, axis)| {
        let d = if kinetic { OperatorExpr::lambda_kinetic(axis, VEL) } else { OperatorExpr::lambda_position(axis, VEL) };
        OperatorExpr::multiplication(f, VEL).add(&OperatorExpr::multiplication(g, VEL).compose(&d).unwrap()).unwrap()
    })
}

fn assert_zero(op: &OperatorExpr, seed: u64) -> Result<(), TestCaseError> {
    let cmp = op_equal(op, &OperatorExpr::zero(VEL), &cfg(seed)).unwrap();
    prop_assert!(cmp.max_residual <= 1e-8, "residual {} at {:?}", cmp.max_residual, cmp.worst_monomial);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_is_antisymmetric(a in first_order(), b in first_order(), seed in 0u64..1000) {
        let sum = a.commutator(&b).unwrap().add(&b.commutator(&a).unwrap()).unwrap();
        assert_zero(&sum, seed)?;
    }

    #[test]
    fn jacobi_identity_holds(a in first_order(), b in first_order(), c in first_order(), seed in 0u64..1000) {
        let abc = a.commutator(&b.commutator(&c).unwrap()).unwrap();
        let bca = b.commutator(&c.commutator(&a).unwrap()).unwrap();
        let cab = c.commutator(&a.commutator(&b).unwrap()).unwrap();
        assert_zero(&abc.add(&bca).unwrap().add(&cab).unwrap(), seed)?;
    }

    #[test]
    fn composition_is_associative(a in first_order(), b in first_order(), c in first_order(), seed in 0u64..1000) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        assert_zero(&left.sub(&right).unwrap(), seed)?;
    }

    #[test]
    fn adjoint_is_an_involution(a in first_order(), seed in 0u64..1000) {
        assert_zero(&a.adjoint().unwrap().adjoint().unwrap().sub(&a).unwrap(), seed)?;
    }

    #[test]
    fn adjoint_reverses_products(a in first_order(), b in first_order(), seed in 0u64..1000) {
        let lhs = a.compose(&b).unwrap().adjoint().unwrap();
        let rhs = b.adjoint().unwrap().compose(&a.adjoint().unwrap()).unwrap();
        assert_zero(&lhs.sub(&rhs).unwrap(), seed)?;
    }

    #[test]
    fn symmetrized_hermitian_products_are_hermitian(f in scalar(), g in scalar(), axis in 0..3usize, seed in 0u64..1000) {
        let a = OperatorExpr::multiplication(f, VEL);
        let b = OperatorExpr::kinetic(axis, VEL).symmetrize(&OperatorExpr::multiplication(g, VEL)).unwrap();
        let lx = OperatorExpr::lambda_position(axis, VEL);
        let sym = a.symmetrize(&b).unwrap().symmetrize(&lx).unwrap();
        let h = hermiticity(&sym, &cfg(seed)).unwrap();
        prop_assert!(h.max_residual <= 1e-8, "{}", h.max_residual);
    }

    #[test]
    fn derivative_matches_finite_differences(f in scalar(), axis in 0..3usize, seed in 0u64..1000) {
        let point = cfg(seed).point(0, 0, &[]).filled();
        let d = f.diff(Var::V(axis as u8)).eval(&point).unwrap().re;
        let h = 1e-5;
        let at = |dv: f64| {
            let v = point.get(Var::V(axis as u8)).unwrap();
            f.eval(&point.clone().with(Var::V(axis as u8), v + dv)).unwrap().re
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        prop_assert!((d - fd).abs() <= 1e-5 * (1.0 + d.abs()), "{d} vs {fd}");
    }

    #[test]
    fn numeric_equality_is_symmetric(a in scalar(), b in scalar(), seed in 0u64..1000) {
        let ab = equal_numeric(&a, &b, &cfg(seed)).unwrap();
        let ba = equal_numeric(&b, &a, &cfg(seed)).unwrap();
        prop_assert_eq!(ab.pass, ba.pass);
        prop_assert!((ab.max_residual - ba.max_residual).abs() <= 1e-12 * (1.0 + ab.max_residual));
        prop_assert!(equal_numeric(&a, &a, &cfg(seed)).unwrap().pass);
    }

    #[test]
    fn collinear_boosts_compose_by_rapidity_addition(
        v in prop::array::uniform3(-0.5f64..0.5), axis in 0..3usize, s1 in -1.0f64..1.0, s2 in -1.0f64..1.0,
    ) {
        let twice = boosted_velocity(boosted_velocity(v, axis, s1), axis, s2);
        let once = boosted_velocity(v, axis, s1 + s2);
        for k in 0..3 {
            prop_assert!((twice[k] - once[k]).abs() <= 1e-12, "{twice:?} vs {once:?}");
        }
        let speed: f64 = once.iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assert!(speed < 1.0);
    }

    #[test]
    fn snapshots_round_trip(
        cx in -0.5f64..0.5, cv in -0.5f64..0.5, wx in 0.2f64..0.6, wv in 0.05f64..0.3, t in 0.0f64..10.0,
    ) {
        let grid = PhaseGrid::new(vec![GridAxis::new(Var::X(0), -2.0, 2.0, 12).unwrap(), GridAxis::open_velocity(Var::V(0), 11).unwrap()])
            .unwrap()
            .with_frozen(Var::X(1), 0.25);
        let mut s = PhaseSpaceState::gaussian(VEL, grid, &GaussianSpec { center: vec![cx, cv], width: vec![wx, wv] }).unwrap();
        s.t = t;
        let mut buf = Vec::new();
        write_snapshot(&s, &mut buf).unwrap();
        let back = read_snapshot(buf.as_slice()).unwrap();
        prop_assert_eq!(back, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn free_transport_preserves_the_norm(
        cx in -0.5f64..0.5, cv in -0.4f64..0.4, wx in 0.3f64..0.6, wv in 0.08f64..0.2, t in 0.0f64..1.5,
    ) {
        let grid = PhaseGrid::new(vec![GridAxis::new(Var::X(0), -4.0, 4.0, 128).unwrap(), GridAxis::open_velocity(Var::V(0), 127).unwrap()]).unwrap();
        let s = PhaseSpaceState::gaussian(VEL, grid, &GaussianSpec { center: vec![cx, cv], width: vec![wx, wv] }).unwrap();
        let out = evolve_state(&s, 1.0, &ForceField::free(), t, 1e-2).unwrap();
        prop_assert!((out.state.norm() - s.norm()).abs() <= 1e-4, "{} vs {}", out.state.norm(), s.norm());
    }
}

#[test]
fn sample_points_are_reproducible() {
    let a = cfg(5).point(3, 0, &[]);
    let b = cfg(5).point(3, 0, &[]);
    assert_eq!(a, b);
    assert_ne!(a, SamplePoint::new());
}
