//! The unitary maps from the velocity to the momentum representation:
//! `C₁ = exp[(i/2)(V² V·λ_v)_S]` and `C₂ = exp[i A·λ_p]`.

use super::{adjoint_series, AdjointSeries};
use crate::error::{Error, Result};
use crate::generators::ForceField;
use crate::operator::{op_equal, OperatorComparison, OperatorExpr, Representation};
use crate::report::{CheckResult, Report};
use crate::scalar::{big_to_f64, speed_squared, ExactPoint, Number, ProbeConfig, ScalarExpr, Var};

const VEL: Representation = Representation::Velocity;
const MOM: Representation = Representation::Momentum;

/// `(i/2)(V² V·λ_v)_S`, which equals `½ V² V·∂_v + (5/4) V²`.
pub fn c1_exponent() -> Result<OperatorExpr> {
    let v2 = speed_squared();
    let mut acc = OperatorExpr::zero(VEL);
    for j in 0..3 {
        let coeff = OperatorExpr::multiplication(&v2 * &ScalarExpr::v(j), VEL);
        acc = acc.add(&coeff.symmetrize(&OperatorExpr::lambda_kinetic(j, VEL))?)?;
    }
    Ok(acc.scale(&ScalarExpr::constant(Number::rational(1, 2).mul(&Number::i()))))
}

/// `Π_{k=1..n} (2k−1)/(2k)`, the coefficient of `V^{2n}` in `γ`.
pub fn lorentz_coefficient(n: usize) -> Number {
    (1..=n as i64).fold(Number::one(), |acc, k| {
        acc.mul(&Number::rational(2 * k - 1, 2 * k))
    })
}

/// Coefficient of `V^{2n}` in `γ⁻¹ = √(1 − V²)`.
pub fn gamma_inverse_coefficient(n: usize) -> Number {
    (1..=n as i64).fold(Number::one(), |acc, k| acc.mul(&Number::rational(2 * k - 3, 2 * k)))
}

fn mass_expr(mass: f64) -> ScalarExpr {
    ScalarExpr::constant(Number::real(mass))
}

fn compare_all(pairs: &[(OperatorExpr, OperatorExpr)], cfg: &ProbeConfig) -> Result<Vec<OperatorComparison>> {
    pairs.iter().map(|(a, b)| op_equal(a, b, cfg)).collect()
}

fn exact_points() -> [ExactPoint; 2] {
    [
        ExactPoint::new().with(Var::V(0), 1, 3).with(Var::V(1), 1, 4).with(Var::V(2), -1, 5),
        ExactPoint::new().with(Var::V(0), -2, 7).with(Var::V(1), 1, 6).with(Var::V(2), 3, 8),
    ]
}

/// Exact agreement of two multiplicative operators at rational points.
/// Returns the largest absolute difference, zero when every value agrees
/// exactly.
fn exact_difference(a: &ScalarExpr, b: &ScalarExpr) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in exact_points() {
        let (Some(x), Some(y)) = (a.eval_exact(&p)?, b.eval_exact(&p)?) else {
            return Err(Error::InvalidArgument("expression is not exactly evaluable".into()));
        };
        if x != y {
            let d = (big_to_f64(&x.re) - big_to_f64(&y.re)).hypot(big_to_f64(&x.im) - big_to_f64(&y.im));
            worst = worst.max(d.max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

fn c1_series(target: &OperatorExpr, order: usize) -> Result<AdjointSeries> {
    adjoint_series(&c1_exponent()?, target, order)
}

/// `C₁ (m V_i) C₁⁻¹`, order by order: the `n`th term is
/// `m V_i V^{2n} Π (2k−1)/(2k)`.
pub fn verify_c1_on_velocity(mass: f64, order: usize, cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new(format!("C1 on m0 V, orders 0..={order}, m0 = {mass}"));
    let x = c1_exponent()?;
    report.push(
        CheckResult::new("exponent anti-hermitian", "X^dagger", "-X")
            .from_outcome(x.adjoint().and_then(|a| op_equal(&a, &x.neg(), cfg)), cfg.tol),
    );
    let m = mass_expr(mass);
    let series: Vec<AdjointSeries> = (0..3)
        .map(|i| c1_series(&OperatorExpr::multiplication(&m * &ScalarExpr::v(i), VEL), order))
        .collect::<Result<_>>()?;
    let v2 = speed_squared();
    for n in 0..=order {
        let c = lorentz_coefficient(n);
        let expected: Vec<ScalarExpr> = (0..3)
            .map(|i| (&(&m * &ScalarExpr::v(i)) * &v2.powi(n as i32)).scale(&c))
            .collect();
        let pairs: Vec<(OperatorExpr, OperatorExpr)> = (0..3)
            .map(|i| (series[i].term(n).clone(), OperatorExpr::multiplication(expected[i].clone(), VEL)))
            .collect();
        report.push(
            CheckResult::new(format!("order {n}"), format!("term {n} of C1 m0 V_i C1^-1"), format!("{c} m0 V_i V^{}", 2 * n))
                .compared_all(compare_all(&pairs, cfg), cfg.tol),
        );
        let exact: Result<f64> = (0..3).try_fold(0.0f64, |acc, i| {
            let term = series[i]
                .term(n)
                .as_multiplication()
                .ok_or_else(|| Error::InvalidArgument("term is not multiplicative".into()))?;
            Ok(acc.max(exact_difference(&term, &expected[i])?))
        });
        let row = CheckResult::new(format!("order {n} exact"), format!("term {n} at rational points"), format!("coefficient {c}"));
        report.push(match exact {
            Ok(d) => row.measured(d, cfg.tol, exact_points().len()),
            Err(e) => row.errored(&e, cfg.tol),
        });
    }
    Ok(report)
}

/// Weight-`(2n−1)` part of `(1/m)[γ⁻¹(λv_i − V_i V_k λv_k)]_S` with `γ⁻¹`
/// truncated to its `V^{2n}` and `V^{2n−2}` coefficients.
fn lambda_image_part(mass: f64, i: usize, n: usize) -> Result<OperatorExpr> {
    let v2 = speed_squared();
    let inv_m = ScalarExpr::constant(Number::real(mass).recip().expect("positive mass"));
    let a_n = v2.powi(n as i32).scale(&gamma_inverse_coefficient(n));
    let mut acc = OperatorExpr::multiplication(a_n, VEL).symmetrize(&OperatorExpr::lambda_kinetic(i, VEL))?;
    if n >= 1 {
        let a_prev = v2.powi(n as i32 - 1).scale(&gamma_inverse_coefficient(n - 1));
        for k in 0..3 {
            let coeff = &(&a_prev * &ScalarExpr::v(i)) * &ScalarExpr::v(k);
            let term = OperatorExpr::multiplication(coeff, VEL).symmetrize(&OperatorExpr::lambda_kinetic(k, VEL))?;
            acc = acc.sub(&term)?;
        }
    }
    Ok(acc.scale(&inv_m))
}

/// `C₁ (λv_i / m) C₁⁻¹` order by order against the homogeneous parts of
/// `(1/m)[γ⁻¹(λv_i − V_i V_k λv_k)]_S`.
pub fn verify_c1_on_lambda(mass: f64, order: usize, cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new(format!("C1 on Lv / m0, orders 0..={order}, m0 = {mass}"));
    let inv_m = ScalarExpr::constant(Number::real(mass).recip().ok_or_else(|| Error::InvalidArgument("zero mass".into()))?);
    let series: Vec<AdjointSeries> = (0..3)
        .map(|i| c1_series(&OperatorExpr::lambda_kinetic(i, VEL).scale(&inv_m), order))
        .collect::<Result<_>>()?;
    for n in 0..=order {
        let pairs: Result<Vec<_>> = (0..3)
            .map(|i| Ok((series[i].term(n).clone(), lambda_image_part(mass, i, n)?)))
            .collect();
        report.push(
            CheckResult::new(format!("order {n}"), format!("term {n} of C1 Lv_i C1^-1 / m0"), format!("V-degree {} part", 2 * n))
                .compared_all(pairs.and_then(|p| compare_all(&p, cfg)), cfg.tol),
        );
    }
    Ok(report)
}

/// `i A·λ_p` in the momentum representation.
fn c2_exponent(field: &ForceField) -> Result<OperatorExpr> {
    let mut acc = OperatorExpr::zero(MOM);
    for j in 0..3 {
        acc = acc.add(&OperatorExpr::lambda_kinetic(j, MOM).scale(&field.vector_potential[j]))?;
    }
    Ok(acc.scale(&ScalarExpr::i()))
}

/// `C₂ Π C₂⁻¹ = Π + A` and `C₂ λx_i C₂⁻¹ = λx_i − ∂A_j/∂X_i λp_j`, with the
/// series terminating after the first order.
pub fn verify_c2(field: &ForceField, cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new("C2 on kinetic momentum and translations");
    let x = c2_exponent(field)?;
    let zero = OperatorExpr::zero(MOM);
    let pi: Vec<AdjointSeries> = (0..3).map(|i| adjoint_series(&x, &OperatorExpr::kinetic(i, MOM), 3)).collect::<Result<_>>()?;
    let lx: Vec<AdjointSeries> =
        (0..3).map(|i| adjoint_series(&x, &OperatorExpr::lambda_position(i, MOM), 3)).collect::<Result<_>>()?;
    let lp: Vec<AdjointSeries> =
        (0..3).map(|i| adjoint_series(&x, &OperatorExpr::lambda_kinetic(i, MOM), 2)).collect::<Result<_>>()?;

    let a = |i: usize| OperatorExpr::multiplication(field.vector_potential[i].clone(), MOM);
    let first: Vec<_> = (0..3).map(|i| (pi[i].term(1).clone(), a(i))).collect();
    report.push(CheckResult::new("momentum order 1", "[iA.Lp, Pi_i]", "A_i").compared_all(compare_all(&first, cfg), cfg.tol));
    let higher: Vec<_> = (0..3).flat_map(|i| (2..=3).map(move |n| (i, n))).map(|(i, n)| (pi[i].term(n).clone(), zero.clone())).collect();
    report.push(CheckResult::new("momentum terminates", "terms 2..3 on Pi_i", "0").compared_all(compare_all(&higher, cfg), cfg.tol));
    let sums: Result<Vec<_>> = (0..3)
        .map(|i| Ok((pi[i].partial_sum(3, &ScalarExpr::one())?, OperatorExpr::kinetic(i, MOM).add(&a(i))?)))
        .collect();
    report.push(
        CheckResult::new("momentum shift", "C2 Pi_i C2^-1", "Pi_i + A_i").compared_all(sums.and_then(|s| compare_all(&s, cfg)), cfg.tol),
    );

    let shift = |i: usize| -> Result<OperatorExpr> {
        let mut acc = OperatorExpr::zero(MOM);
        for j in 0..3 {
            let grad = field.vector_potential[j].diff(Var::X(i as u8));
            acc = acc.sub(&OperatorExpr::lambda_kinetic(j, MOM).scale(&grad))?;
        }
        Ok(acc)
    };
    let first: Result<Vec<_>> = (0..3).map(|i| Ok((lx[i].term(1).clone(), shift(i)?))).collect();
    report.push(
        CheckResult::new("translation order 1", "[iA.Lp, Lx_i]", "-dA_j/dX_i Lp_j")
            .compared_all(first.and_then(|p| compare_all(&p, cfg)), cfg.tol),
    );
    let higher: Vec<_> = (0..3).flat_map(|i| (2..=3).map(move |n| (i, n))).map(|(i, n)| (lx[i].term(n).clone(), zero.clone())).collect();
    report.push(
        CheckResult::new("translation terminates", "terms 2..3 on Lx_i", "0").compared_all(compare_all(&higher, cfg), cfg.tol),
    );
    let unchanged: Vec<_> = (0..3).flat_map(|i| (1..=2).map(move |n| (i, n))).map(|(i, n)| (lp[i].term(n).clone(), zero.clone())).collect();
    report.push(CheckResult::new("Lp unchanged", "terms 1..2 on Lp_i", "0").compared_all(compare_all(&unchanged, cfg), cfg.tol));
    Ok(report)
}

/// `Σ_{a+b=n} [A_a, B_b]`: the `εⁿ` coefficient of the bracket of two series.
fn series_bracket(a: &AdjointSeries, b: &AdjointSeries, n: usize) -> Result<OperatorExpr> {
    let mut acc = OperatorExpr::zero(a.target.representation());
    for k in 0..=n {
        acc = acc.add(&a.term(k).commutator(b.term(n - k))?)?;
    }
    Ok(acc)
}

struct Family {
    name: &'static str,
    images: Vec<AdjointSeries>,
}

fn table_rows(report: &mut Report, stage: &str, families: &[Family], canonical: &[(usize, usize)], order: usize, cfg: &ProbeConfig) {
    let repr = families[0].images[0].target.representation();
    for a in 0..families.len() {
        for b in a..families.len() {
            let delta = canonical.contains(&(a, b));
            let outcome: Result<Vec<OperatorComparison>> = (|| {
                let mut out = Vec::new();
                for i in 0..3 {
                    for j in 0..3 {
                        for n in 0..=order {
                            let lhs = series_bracket(&families[a].images[i], &families[b].images[j], n)?;
                            let rhs = if n == 0 && delta && i == j {
                                OperatorExpr::multiplication(ScalarExpr::i(), repr)
                            } else {
                                OperatorExpr::zero(repr)
                            };
                            out.push(op_equal(&lhs, &rhs, cfg)?);
                        }
                    }
                }
                Ok(out)
            })();
            let (fa, fb) = (families[a].name, families[b].name);
            report.push(
                CheckResult::new(format!("{stage} [{fa},{fb}]"), format!("[{fa}'_i, {fb}'_j] orders 0..={order}"), if delta { "i delta_ij" } else { "0" })
                    .compared_all(outcome, cfg.tol),
            );
        }
    }
}

/// The scale step followed by `C₁` and then `C₂` maps the velocity
/// commutation table onto the momentum one. `C₁` images are power series
/// in its formal parameter and are compared order by order.
pub fn verify_canonical_map(mass: f64, field: &ForceField, order: usize, cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new(format!("canonical map C2 C1, series order {order}, m0 = {mass}"));
    let m = mass_expr(mass);
    let inv_m = ScalarExpr::constant(Number::real(mass).recip().ok_or_else(|| Error::InvalidArgument("zero mass".into()))?);
    let x1 = c1_exponent()?;
    let images = |f: &dyn Fn(usize) -> OperatorExpr, x: &OperatorExpr, n: usize| -> Result<Vec<AdjointSeries>> {
        (0..3).map(|i| adjoint_series(x, &f(i), n)).collect()
    };
    let stage1 = [
        Family { name: "X", images: images(&|i| OperatorExpr::position(i, VEL), &x1, order)? },
        Family { name: "P", images: images(&|i| OperatorExpr::kinetic(i, VEL).scale(&m), &x1, order)? },
        Family { name: "Lx", images: images(&|i| OperatorExpr::lambda_position(i, VEL), &x1, order)? },
        Family { name: "Lp", images: images(&|i| OperatorExpr::lambda_kinetic(i, VEL).scale(&inv_m), &x1, order)? },
    ];
    table_rows(&mut report, "C1", &stage1, &[(0, 2), (1, 3)], order, cfg);

    let x2 = c2_exponent(field)?;
    let stage2 = [
        Family { name: "X", images: images(&|i| OperatorExpr::position(i, MOM), &x2, 2)? },
        Family { name: "P", images: images(&|i| OperatorExpr::kinetic(i, MOM), &x2, 2)? },
        Family { name: "Lx", images: images(&|i| OperatorExpr::lambda_position(i, MOM), &x2, 2)? },
        Family { name: "Lp", images: images(&|i| OperatorExpr::lambda_kinetic(i, MOM), &x2, 2)? },
    ];
    table_rows(&mut report, "C2", &stage2, &[(0, 2), (1, 3)], 2, cfg);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_sequences() {
        let expected = [(1, 1), (1, 2), (3, 8), (5, 16), (35, 128), (63, 256), (231, 1024)];
        for (n, (p, q)) in expected.iter().enumerate() {
            assert_eq!(lorentz_coefficient(n), Number::rational(*p, *q));
        }
        let expected = [(1, 1), (-1, 2), (-1, 8), (-1, 16), (-5, 128)];
        for (n, (p, q)) in expected.iter().enumerate() {
            assert_eq!(gamma_inverse_coefficient(n), Number::rational(*p, *q));
        }
    }

    #[test]
    fn exponent_normal_form() {
        let x = c1_exponent().unwrap();
        let expected = crate::operator::parse_operator(
            "(1/2)*(V1^2 + V2^2 + V3^2)*(V1*Lv1 + V2*Lv2 + V3*Lv3)*i + (5/4)*(V1^2 + V2^2 + V3^2)",
            VEL,
        )
        .unwrap();
        assert!(op_equal(&x, &expected, &ProbeConfig::default()).unwrap().pass);
    }

    #[test]
    fn first_orders_on_velocity() {
        let r = verify_c1_on_velocity(1.0, 3, &ProbeConfig::default().with_trials(30)).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn lambda_low_orders() {
        let r = verify_c1_on_lambda(2.0, 3, &ProbeConfig::default().with_trials(30)).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn c2_for_magnetic_and_constant_potentials() {
        let cfg = ProbeConfig::default().with_trials(30);
        let r = verify_c2(&ForceField::uniform_magnetic(1.5), &cfg).unwrap();
        assert!(r.all_pass(), "{r}");
        let constant = ForceField::parse("0", ["2", "-1", "3"]).unwrap();
        let r = verify_c2(&constant, &cfg).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn magnetic_gauge_shifts_second_translation() {
        // A = (−B x2, 0, 0): λ'x2 = λx2 + B λp1
        let b = 1.5;
        let x = c2_exponent(&ForceField::uniform_magnetic(b)).unwrap();
        let s = adjoint_series(&x, &OperatorExpr::lambda_position(1, MOM), 1).unwrap();
        let expected = OperatorExpr::lambda_kinetic(0, MOM).scale(&ScalarExpr::real(b));
        assert!(op_equal(s.term(1), &expected, &ProbeConfig::default()).unwrap().pass);
    }
}
