//! Poincaré commutation table and the checks run against it.

use rayon::prelude::*;

use super::{levi_civita, Family, Generator, GeneratorSet};
use crate::error::Result;
use crate::operator::{hermiticity, op_equal, OperatorExpr};
use crate::report::{CheckResult, Report};
use crate::scalar::{ProbeConfig, ScalarExpr};

/// An ordered pair of generators `[left, right]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub left: Generator,
    pub right: Generator,
}

/// The 45 brackets between distinct generators, in the fixed generator
/// order.
pub fn poincare_relations() -> Vec<Relation> {
    let all = Generator::ALL;
    let mut out = Vec::with_capacity(45);
    for a in 0..all.len() {
        for b in a + 1..all.len() {
            out.push(Relation { left: all[a], right: all[b] });
        }
    }
    out
}

fn epsilon_sum(i: usize, j: usize, f: impl Fn(usize) -> OperatorExpr, scale: i64, zero: &OperatorExpr) -> Result<OperatorExpr> {
    let mut acc = zero.clone();
    for k in 0..3 {
        let e = levi_civita(i, j, k) * scale;
        if e != 0 {
            acc = acc.add(&f(k).scale(&(&ScalarExpr::i() * &ScalarExpr::int(e))))?;
        }
    }
    Ok(acc)
}

impl Relation {
    pub fn id(&self) -> String {
        format!("[{},{}]", self.left, self.right)
    }

    pub fn involves(&self, family: Family) -> bool {
        self.left.family() == family || self.right.family() == family
    }

    /// Brackets with the Liouvillian on either side depend on the dynamics;
    /// `[K_i, λx_j] = iδ_ij L` is one of them.
    pub fn is_dynamical(&self) -> bool {
        self.involves(Family::Liouvillian) || (self.involves(Family::Boost) && self.involves(Family::Translation))
    }

    /// Structure-constant right-hand side evaluated with the set's own
    /// generators.
    pub fn expected(&self, set: &GeneratorSet) -> Result<OperatorExpr> {
        use Generator::*;
        let zero = OperatorExpr::zero(set.repr);
        let i = ScalarExpr::i();
        match (self.left, self.right) {
            (Rotation(a), Rotation(b)) => epsilon_sum(a, b, |k| set.rotations[k].clone(), 1, &zero),
            (Rotation(a), Boost(b)) => epsilon_sum(a, b, |k| set.boosts[k].clone(), 1, &zero),
            (Rotation(a), Translation(b)) => epsilon_sum(a, b, |k| set.translations[k].clone(), 1, &zero),
            (Boost(a), Boost(b)) => epsilon_sum(a, b, |k| set.rotations[k].clone(), -1, &zero),
            (Boost(a), Translation(b)) => {
                Ok(if a == b { set.liouvillian.scale(&i) } else { zero })
            }
            (Boost(a), Liouvillian) => Ok(set.translations[a].scale(&i)),
            _ => Ok(zero),
        }
    }

    pub fn expected_text(&self) -> String {
        use Generator::*;
        let eps = |a: usize, b: usize, name: &str, sign: &str| {
            let Some(k) = (0..3).find(|&k| levi_civita(a, b, k) != 0) else {
                return "0".to_owned();
            };
            let neg = (levi_civita(a, b, k) < 0) != (sign == "-");
            format!("{}i {}{}", if neg { "-" } else { "" }, name, k + 1)
        };
        match (self.left, self.right) {
            (Rotation(a), Rotation(b)) => eps(a, b, "J", "+"),
            (Rotation(a), Boost(b)) => eps(a, b, "K", "+"),
            (Rotation(a), Translation(b)) => eps(a, b, "Lx", "+"),
            (Boost(a), Boost(b)) => eps(a, b, "J", "-"),
            (Boost(a), Translation(b)) if a == b => "i L".to_owned(),
            (Boost(a), Liouvillian) => format!("i Lx{}", a + 1),
            _ => "0".to_owned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureOptions {
    /// Values substituted for the boost time parameter; each relation's
    /// residual is the worst over all of them.
    pub times: Vec<f64>,
    /// Report brackets with `L` without asserting them.
    pub dynamical_informational: bool,
}

impl ClosureOptions {
    pub fn for_set(set: &GeneratorSet) -> Self {
        ClosureOptions { times: vec![0.0, 1.7], dynamical_informational: set.interacting }
    }
}

/// Compares all 45 brackets against the structure constants.
pub fn verify_poincare_closure(set: &GeneratorSet, cfg: &ProbeConfig, opts: &ClosureOptions) -> Result<Report> {
    let snapshots: Vec<GeneratorSet> = opts.times.iter().map(|t| set.at_time(*t)).collect();
    let relations = poincare_relations();
    let rows: Vec<CheckResult> = relations
        .par_iter()
        .map(|rel| {
            let lhs_text = rel.id();
            let outcome: Result<Vec<_>> = snapshots
                .iter()
                .map(|s| {
                    let lhs = s.generator(rel.left).commutator(s.generator(rel.right))?;
                    op_equal(&lhs, &rel.expected(s)?, cfg)
                })
                .collect();
            let row = CheckResult::new(rel.id(), lhs_text, rel.expected_text()).compared_all(outcome, cfg.tol);
            if opts.dynamical_informational && rel.is_dynamical() {
                row.informational()
            } else {
                row
            }
        })
        .collect();
    let times: Vec<String> = opts.times.iter().map(|t| t.to_string()).collect();
    let mut report = Report::new(format!(
        "Poincare closure, {} representation, t in {{{}}}",
        set.repr,
        times.join(", ")
    ));
    for row in rows {
        report.push(row);
    }
    if opts.dynamical_informational {
        report.note("brackets with the interacting Liouvillian are measured, not asserted");
    }
    Ok(report)
}

/// Hermiticity of all ten generators.
pub fn verify_hermiticity(set: &GeneratorSet, cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new(format!("hermiticity, {} representation", set.repr));
    let rows: Vec<CheckResult> = Generator::ALL
        .par_iter()
        .map(|g| {
            CheckResult::new(format!("{g} hermitian"), g.to_string(), format!("{g}^dagger"))
                .from_outcome(hermiticity(set.generator(*g), cfg), cfg.tol)
        })
        .collect();
    for row in rows {
        report.push(row);
    }
    Ok(report)
}

/// Vector-operator relations of `J` with positions, kinetic variables and
/// their translation generators, and the Heisenberg equation for positions.
pub fn verify_vector_relations(set: &GeneratorSet, cfg: &ProbeConfig) -> Result<Report> {
    let mut report = Report::new(format!("vector operators, {} representation", set.repr));
    let families: [(&str, &[OperatorExpr; 3]); 3] = [
        ("X", &set.positions),
        (if set.repr == crate::Representation::Velocity { "V" } else { "P" }, &set.kinetic),
        (if set.repr == crate::Representation::Velocity { "Lv" } else { "Lp" }, &set.kinetic_translations),
    ];
    for (name, ops) in families {
        let outcome: Result<Vec<_>> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| {
                let lhs = set.rotations[i].commutator(&ops[j])?;
                let mut rhs = OperatorExpr::zero(set.repr);
                for k in 0..3 {
                    let e = levi_civita(i, j, k);
                    if e != 0 {
                        rhs = rhs.add(&ops[k].scale(&(&ScalarExpr::i() * &ScalarExpr::int(e))))?;
                    }
                }
                op_equal(&lhs, &rhs, cfg)
            })
            .collect();
        report.push(
            CheckResult::new(format!("[J, {name}]"), format!("[J_i, {name}_j]"), format!("i eps_ijk {name}_k"))
                .compared_all(outcome, cfg.tol),
        );
    }
    let velocity: [ScalarExpr; 3] = match &set.energy {
        Some(h) => [0, 1, 2].map(|k| h.diff(crate::Var::P(k as u8))),
        None => [0, 1, 2].map(ScalarExpr::v),
    };
    let outcome: Result<Vec<_>> = (0..3)
        .map(|k| {
            let lhs = set.liouvillian.commutator(&set.positions[k])?.scale(&ScalarExpr::i());
            op_equal(&lhs, &OperatorExpr::multiplication(velocity[k].clone(), set.repr), cfg)
        })
        .collect();
    report.push(
        CheckResult::new("i[L, X]", "i[L, X_k]", if set.energy.is_some() { "dH/dp_k" } else { "V_k" })
            .compared_all(outcome, cfg.tol),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::build_free_generators;

    #[test]
    fn forty_five_relations_with_24_boost_relations() {
        let rels = poincare_relations();
        assert_eq!(rels.len(), 45);
        assert_eq!(rels.iter().filter(|r| r.involves(Family::Boost)).count(), 24);
        assert_eq!(rels[0].id(), "[J1,J2]");
        assert_eq!(rels[0].expected_text(), "i J3");
        let kk = rels.iter().find(|r| r.id() == "[K1,K2]").unwrap();
        assert_eq!(kk.expected_text(), "-i J3");
    }

    #[test]
    fn truncated_liouvillian_breaks_rotation_invariance() {
        let set = build_free_generators(1.0).unwrap();
        let repr = set.repr;
        let partial = OperatorExpr::lambda_position(0, repr).scale(&ScalarExpr::v(0));
        let broken = set.with_liouvillian(partial);
        let cfg = ProbeConfig::default().with_trials(20);
        let r = verify_poincare_closure(&broken, &cfg, &ClosureOptions::for_set(&broken)).unwrap();
        assert!(!r.get("[J3,L]").unwrap().pass);
        assert!(r.get("[J1,J2]").unwrap().pass);
    }
}
