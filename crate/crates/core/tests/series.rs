use relkvn::generators::ForceField;
use relkvn::scalar::ProbeConfig;
use relkvn::series::{
    boost_convergence, run_identity, verify_boost_closed_forms, verify_c1_on_velocity, BoostKind, SeriesIdentity,
    SeriesOptions,
};

fn cfg() -> ProbeConfig {
    ProbeConfig::default().with_seed(77)
}

#[test]
fn every_identity_passes_at_default_order() {
    let opts = SeriesOptions::default();
    for id in SeriesIdentity::ALL {
        let report = run_identity(id, &opts, &cfg()).unwrap();
        println!("{report}");
        assert!(report.all_pass(), "{id}: {report}");
    }
}

#[test]
fn c1_velocity_has_exact_rational_coefficients() {
    let report = verify_c1_on_velocity(1.0, 6, &cfg()).unwrap();
    for n in 0..=6 {
        let exact = report.get(&format!("order {n} exact")).unwrap();
        assert_eq!(exact.max_residual, 0.0, "order {n}");
    }
}

#[test]
fn position_boost_asserts_only_through_second_order() {
    let report = verify_boost_closed_forms(BoostKind::Position, 0.3, 5, 1.0, &cfg()).unwrap();
    assert!(report.all_pass(), "{report}");
    for label in ["X1", "X2", "X3"] {
        assert!(!report.get(&format!("{label} order 2")).unwrap().informational);
        assert!(report.get(&format!("{label} order 3")).unwrap().informational);
    }
    assert!(report.get("[Kz, z] printed").unwrap().informational);
}

#[test]
fn boost_partial_sums_converge_for_three_seeds() {
    let c = boost_convergence(0.5, 6, &[11, 12, 13], &cfg()).unwrap();
    assert!(c.monotone, "{:?}", c.residuals);
}

#[test]
fn c2_is_trivial_without_vector_potential() {
    let opts = SeriesOptions { field: ForceField::parse("x1", ["0", "0", "0"]).unwrap(), ..SeriesOptions::default() };
    let report = run_identity(SeriesIdentity::C2, &opts, &cfg()).unwrap();
    assert!(report.all_pass(), "{report}");
}
