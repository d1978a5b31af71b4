use relkvn::generators::{
    build_free_generators, build_free_momentum_generators, build_interacting_generators,
    build_momentum_generators, verify_hermiticity, verify_poincare_closure, verify_vector_relations,
    ClosureOptions, Family, ForceField,
};
use relkvn::scalar::ProbeConfig;

fn cfg() -> ProbeConfig {
    ProbeConfig::default().with_seed(2024)
}

#[test]
fn free_velocity_set_closes() {
    let set = build_free_generators(1.0).unwrap();
    let report = verify_poincare_closure(&set, &cfg(), &ClosureOptions::for_set(&set)).unwrap();
    assert_eq!(report.checks.len(), 45);
    assert!(report.all_pass(), "{report}");
    assert!(report.max_residual() <= 1e-9);
}

#[test]
fn free_momentum_set_closes() {
    let set = build_free_momentum_generators(1.3).unwrap();
    let report = verify_poincare_closure(&set, &cfg(), &ClosureOptions::for_set(&set)).unwrap();
    assert!(report.all_pass(), "{report}");
}

#[test]
fn closure_survives_dropping_the_boost_time_term() {
    let set = build_free_generators(1.0).unwrap().without_boost_time_term().unwrap();
    let opts = ClosureOptions { times: vec![0.0], dynamical_informational: false };
    let report = verify_poincare_closure(&set, &cfg().with_trials(40), &opts).unwrap();
    assert!(report.all_pass(), "{report}");
}

#[test]
fn boost_mutation_fails_exactly_the_boost_relations() {
    let set = build_free_generators(1.0).unwrap().mutated(Family::Boost).unwrap();
    let opts = ClosureOptions { times: vec![0.0], dynamical_informational: false };
    let report = verify_poincare_closure(&set, &cfg().with_trials(40), &opts).unwrap();
    for check in &report.checks {
        let has_k = check.id.contains('K');
        assert_eq!(check.pass, !has_k, "{}: residual {}", check.id, check.max_residual);
    }
    assert_eq!(report.failures().count(), 24);
}

#[test]
fn interacting_sets_keep_kinematic_relations() {
    let field = ForceField::uniform_magnetic(0.6);
    for set in [
        build_interacting_generators(1.0, &field).unwrap(),
        build_momentum_generators(1.0, &ForceField::parse("x1", ["0", "0", "0"]).unwrap()).unwrap(),
    ] {
        let report = verify_poincare_closure(&set, &cfg().with_trials(30), &ClosureOptions::for_set(&set)).unwrap();
        assert!(report.all_pass(), "{report}");
        assert_eq!(report.asserted_count(), 27);
    }
}

#[test]
fn generators_are_hermitian_and_vector_operators() {
    let cfg = cfg().with_trials(30);
    for set in [
        build_free_generators(1.0).unwrap(),
        build_free_momentum_generators(2.0).unwrap(),
        build_interacting_generators(1.0, &ForceField::constant([0.4, -0.2, 0.1])).unwrap(),
    ] {
        let h = verify_hermiticity(&set, &cfg).unwrap();
        assert!(h.all_pass(), "{h}");
        let v = verify_vector_relations(&set, &cfg).unwrap();
        assert!(v.all_pass(), "{v}");
    }
}
