//! Normal-ordered phase-space differential operators.
//!
//! An operator is a finite sum `Σ f_α(x, w) ∂^α` with every coefficient
//! function to the left of every derivation, where `w` is velocity or
//! momentum depending on the [`Representation`]. Translation generators
//! are realized as `λ = −i∂`, which satisfies `[X, λ_x] = [V, λ_v] = i`.

mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{probe_pairs, Number, ProbeConfig, SamplePoint, ScalarExpr, Var};

pub use parse::parse_operator;

pub const DEFAULT_ORDER_CAP: usize = 6;

/// Whether the kinetic coordinates are velocities or momenta.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Velocity,
    Momentum,
}

impl Representation {
    /// The kinetic variable along `axis` (0-based).
    pub fn kinetic(self, axis: usize) -> Var {
        match self {
            Representation::Velocity => Var::V(axis as u8),
            Representation::Momentum => Var::P(axis as u8),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Representation::Velocity => "velocity",
            Representation::Momentum => "momentum",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Multi-index `∂x^a ∂w^b` with `w` the kinetic coordinate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerivationMonomial {
    pub position: [u8; 3],
    pub kinetic: [u8; 3],
}

impl DerivationMonomial {
    pub const IDENTITY: DerivationMonomial = DerivationMonomial { position: [0; 3], kinetic: [0; 3] };

    pub fn position(axis: usize) -> Self {
        let mut m = Self::IDENTITY;
        m.position[axis] = 1;
        m
    }

    pub fn kinetic(axis: usize) -> Self {
        let mut m = Self::IDENTITY;
        m.kinetic[axis] = 1;
        m
    }

    pub fn order(&self) -> usize {
        self.position.iter().chain(&self.kinetic).map(|&a| a as usize).sum()
    }

    fn flat(&self) -> [u8; 6] {
        let p = self.position;
        let k = self.kinetic;
        [p[0], p[1], p[2], k[0], k[1], k[2]]
    }

    fn from_flat(f: [u8; 6]) -> Self {
        DerivationMonomial { position: [f[0], f[1], f[2]], kinetic: [f[3], f[4], f[5]] }
    }

    fn label(&self, repr: Representation) -> String {
        let w = match repr {
            Representation::Velocity => "Lv",
            Representation::Momentum => "Lp",
        };
        let x = match repr {
            Representation::Velocity => "Lx",
            Representation::Momentum => "Lxp",
        };
        let mut parts = Vec::new();
        for (k, &a) in self.position.iter().enumerate() {
            parts.extend(std::iter::repeat_n(format!("{x}{}", k + 1), a as usize));
        }
        for (k, &a) in self.kinetic.iter().enumerate() {
            parts.extend(std::iter::repeat_n(format!("{w}{}", k + 1), a as usize));
        }
        if parts.is_empty() {
            "1".to_owned()
        } else {
            parts.join("*")
        }
    }
}

fn binomial(n: u8, k: u8) -> i64 {
    (0..k as i64).fold(1, |acc, j| acc * (n as i64 - j) / (j + 1))
}

/// Sum of `coefficient × ∂^α` terms in normal order.
#[derive(Clone, PartialEq)]
pub struct OperatorExpr {
    repr: Representation,
    terms: BTreeMap<DerivationMonomial, ScalarExpr>,
    cap: usize,
}

impl OperatorExpr {
    pub fn zero(repr: Representation) -> Self {
        OperatorExpr { repr, terms: BTreeMap::new(), cap: DEFAULT_ORDER_CAP }
    }

    pub fn identity(repr: Representation) -> Self {
        OperatorExpr::multiplication(ScalarExpr::one(), repr)
    }

    /// Multiplication by a function.
    pub fn multiplication(f: ScalarExpr, repr: Representation) -> Self {
        OperatorExpr::term(f, DerivationMonomial::IDENTITY, repr)
    }

    pub fn term(coeff: ScalarExpr, mono: DerivationMonomial, repr: Representation) -> Self {
        let mut op = OperatorExpr::zero(repr);
        if !coeff.is_zero() {
            op.terms.insert(mono, coeff);
        }
        op
    }

    /// Position operator `X_axis`.
    pub fn position(axis: usize, repr: Representation) -> Self {
        OperatorExpr::multiplication(ScalarExpr::x(axis), repr)
    }

    /// Velocity or momentum operator along `axis`, per the representation.
    pub fn kinetic(axis: usize, repr: Representation) -> Self {
        OperatorExpr::multiplication(ScalarExpr::var(repr.kinetic(axis)), repr)
    }

    /// `−i∂x_axis`: the space-translation generator (the primed one in the
    /// momentum representation).
    pub fn lambda_position(axis: usize, repr: Representation) -> Self {
        OperatorExpr::term(ScalarExpr::i().neg(), DerivationMonomial::position(axis), repr)
    }

    /// `−i∂w_axis`: the velocity- or momentum-translation generator.
    pub fn lambda_kinetic(axis: usize, repr: Representation) -> Self {
        OperatorExpr::term(ScalarExpr::i().neg(), DerivationMonomial::kinetic(axis), repr)
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivationMonomial, &ScalarExpr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &DerivationMonomial) -> ScalarExpr {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> usize {
        self.terms.keys().map(|m| m.order()).max().unwrap_or(0)
    }

    /// The function this operator multiplies by, if it has no derivations.
    pub fn as_multiplication(&self) -> Option<ScalarExpr> {
        if self.order() == 0 {
            Some(self.coefficient(&DerivationMonomial::IDENTITY))
        } else {
            None
        }
    }

    fn check_repr(&self, other: &OperatorExpr) -> Result<()> {
        if self.repr != other.repr {
            return Err(Error::RepresentationMismatch {
                expected: self.repr.to_string(),
                found: other.repr.to_string(),
            });
        }
        Ok(())
    }

    fn insert(&mut self, mono: DerivationMonomial, coeff: ScalarExpr) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&mono) {
            Some(existing) => {
                let s = existing + coeff;
                if !s.is_zero() {
                    self.terms.insert(mono, s);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn add(&self, other: &OperatorExpr) -> Result<OperatorExpr> {
        self.check_repr(other)?;
        let mut out = self.clone();
        out.cap = self.cap.max(other.cap);
        for (m, c) in &other.terms {
            out.insert(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OperatorExpr) -> Result<OperatorExpr> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OperatorExpr {
        self.scale(&ScalarExpr::int(-1))
    }

    /// Left multiplication by a function: `f · A`.
    pub fn scale(&self, f: &ScalarExpr) -> OperatorExpr {
        let mut out = OperatorExpr::zero(self.repr).with_cap(self.cap);
        for (m, c) in &self.terms {
            out.insert(*m, f * c);
        }
        out
    }

    pub fn scale_number(&self, c: Number) -> OperatorExpr {
        self.scale(&ScalarExpr::constant(c))
    }

    fn derivation_var(&self, slot: usize) -> Var {
        if slot < 3 {
            Var::X(slot as u8)
        } else {
            self.repr.kinetic(slot - 3)
        }
    }

    /// Normal-ordered product `A·B` by the Leibniz rule.
    pub fn compose(&self, other: &OperatorExpr) -> Result<OperatorExpr> {
        self.check_repr(other)?;
        let cap = self.cap.max(other.cap);
        let mut out = OperatorExpr::zero(self.repr).with_cap(cap);
        for (mb, g) in &other.terms {
            let mut derivs: HashMap<[u8; 6], ScalarExpr> = HashMap::new();
            derivs.insert([0; 6], g.clone());
            for (ma, f) in &self.terms {
                let a = ma.flat();
                let b = mb.flat();
                for gamma in sub_indices(a) {
                    let dg = self.derivative(&mut derivs, gamma);
                    if dg.is_zero() {
                        continue;
                    }
                    let mut mult = 1i64;
                    let mut res = [0u8; 6];
                    for k in 0..6 {
                        mult *= binomial(a[k], gamma[k]);
                        res[k] = a[k] - gamma[k] + b[k];
                    }
                    let mono = DerivationMonomial::from_flat(res);
                    if mono.order() > cap {
                        return Err(Error::OrderCapExceeded { order: mono.order(), cap });
                    }
                    out.insert(mono, (f * &dg).scale(&Number::int(mult)));
                }
            }
        }
        Ok(out)
    }

    fn derivative(&self, cache: &mut HashMap<[u8; 6], ScalarExpr>, gamma: [u8; 6]) -> ScalarExpr {
        if let Some(d) = cache.get(&gamma) {
            return d.clone();
        }
        let k = gamma.iter().position(|&g| g > 0).expect("nonzero index");
        let mut prev = gamma;
        prev[k] -= 1;
        let d = self.derivative(cache, prev).diff(self.derivation_var(k));
        cache.insert(gamma, d.clone());
        d
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &OperatorExpr) -> Result<OperatorExpr> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `(AB)_S = ½(AB + BA)`.
    pub fn symmetrize(&self, other: &OperatorExpr) -> Result<OperatorExpr> {
        Ok(self
            .compose(other)?
            .add(&other.compose(self)?)?
            .scale_number(Number::rational(1, 2)))
    }

    /// Formal adjoint with respect to the flat measure: each term
    /// `f ∂^α` becomes `(−1)^{|α|} ∂^α ∘ f̄`.
    pub fn adjoint(&self) -> Result<OperatorExpr> {
        let mut out = OperatorExpr::zero(self.repr).with_cap(self.cap);
        for (m, f) in &self.terms {
            let sign = if m.order() % 2 == 0 { 1 } else { -1 };
            let d = OperatorExpr::term(ScalarExpr::int(sign), *m, self.repr).with_cap(self.cap);
            let fbar = OperatorExpr::multiplication(f.conj(), self.repr);
            out = out.add(&d.compose(&fbar)?)?;
        }
        Ok(out)
    }

    /// Repeated composition `A^n`.
    pub fn pow(&self, n: u32) -> Result<OperatorExpr> {
        let mut acc = OperatorExpr::identity(self.repr).with_cap(self.cap);
        for _ in 0..n {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Action on a function: `Σ f_α ∂^α g`.
    pub fn apply(&self, g: &ScalarExpr) -> ScalarExpr {
        let mut cache = HashMap::new();
        cache.insert([0u8; 6], g.clone());
        let mut out = ScalarExpr::zero();
        for (m, f) in &self.terms {
            out = out + f * self.derivative(&mut cache, m.flat());
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> OperatorExpr {
        let mut out = OperatorExpr::zero(self.repr).with_cap(self.cap);
        for (m, c) in &self.terms {
            out.insert(*m, f(c));
        }
        out
    }

    pub fn subst_var(&self, v: Var, value: &ScalarExpr) -> OperatorExpr {
        self.map_coefficients(|c| c.subst_var(v, value))
    }

    pub fn subst_param(&self, name: &str, value: &ScalarExpr) -> OperatorExpr {
        self.map_coefficients(|c| c.subst_param(name, value))
    }

    /// Keeps only the listed monomials' coefficients evaluated through `f`,
    /// dropping others; used to extract homogeneous parts.
    pub fn filter_map_terms(
        &self,
        f: impl Fn(&DerivationMonomial, &ScalarExpr) -> Option<ScalarExpr>,
    ) -> OperatorExpr {
        let mut out = OperatorExpr::zero(self.repr).with_cap(self.cap);
        for (m, c) in &self.terms {
            if let Some(n) = f(m, c) {
                out.insert(*m, n);
            }
        }
        out
    }

    /// Human-readable form in terms of translation generators, re-parseable
    /// by [`parse_operator`].
    pub fn display_lambda(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_owned();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                // ∂ = iλ, so f∂^α = (i^|α| f) λ^α
                let ipow = [Number::one(), Number::i(), Number::int(-1), Number::i().neg()]
                    [m.order() % 4]
                    .clone();
                let coeff = c.scale(&ipow);
                if m.order() == 0 {
                    format!("({coeff})")
                } else {
                    format!("({coeff})*{}", m.label(self.repr))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn sub_indices(a: [u8; 6]) -> Vec<[u8; 6]> {
    let mut out = vec![[0u8; 6]];
    for k in 0..6 {
        let mut next = Vec::with_capacity(out.len() * (a[k] as usize + 1));
        for g in &out {
            for j in 0..=a[k] {
                let mut h = *g;
                h[k] = j;
                next.push(h);
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_lambda())
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorExpr[{}]({})", self.repr, self.display_lambda())
    }
}

/// Result of comparing two operators monomial by monomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorComparison {
    pub pass: bool,
    pub max_residual: f64,
    /// The monomial with the largest residual, in translation-generator
    /// notation.
    pub worst_monomial: Option<String>,
    pub per_monomial: Vec<(String, f64)>,
    pub trials: usize,
    #[serde(skip)]
    pub worst_point: Option<SamplePoint>,
}

/// Seeded numeric equality of two operators, coefficient by coefficient,
/// over a shared set of probe points.
pub fn op_equal(a: &OperatorExpr, b: &OperatorExpr, cfg: &ProbeConfig) -> Result<OperatorComparison> {
    a.check_repr(b)?;
    let mut monos: Vec<DerivationMonomial> = a.terms.keys().chain(b.terms.keys()).copied().collect();
    monos.sort();
    monos.dedup();
    let pairs: Vec<(ScalarExpr, ScalarExpr)> =
        monos.iter().map(|m| (a.coefficient(m), b.coefficient(m))).collect();
    if pairs.is_empty() {
        return Ok(OperatorComparison {
            pass: true,
            max_residual: 0.0,
            worst_monomial: None,
            per_monomial: Vec::new(),
            trials: cfg.trials,
            worst_point: None,
        });
    }
    let batch = probe_pairs(&pairs, cfg)?;
    let mut worst = 0;
    for (k, r) in batch.max_residuals.iter().enumerate() {
        if *r > batch.max_residuals[worst] {
            worst = k;
        }
    }
    let max_residual = batch.max_residuals[worst];
    Ok(OperatorComparison {
        pass: max_residual <= cfg.tol,
        max_residual,
        worst_monomial: Some(monos[worst].label(a.repr)),
        per_monomial: monos
            .iter()
            .zip(&batch.max_residuals)
            .map(|(m, r)| (m.label(a.repr), *r))
            .collect(),
        trials: batch.trials,
        worst_point: batch.worst_points[worst].clone(),
    })
}

/// Compares an operator with its adjoint.
pub fn hermiticity(a: &OperatorExpr, cfg: &ProbeConfig) -> Result<OperatorComparison> {
    op_equal(a, &a.adjoint()?, cfg)
}

pub fn is_hermitian(a: &OperatorExpr, cfg: &ProbeConfig) -> Result<bool> {
    Ok(hermiticity(a, cfg)?.pass)
}
