//! Point evaluation of scalar expressions: double-precision complex, exact
//! Gaussian-rational, and a compiled real-valued form for inner loops.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::expr::{Atom, ScalarExpr, Var};
use super::number::{q_to_big, Q};
use crate::error::{Error, Result};

/// Real values for phase-space variables and named parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SamplePoint {
    values: [Option<f64>; 10],
    params: BTreeMap<String, f64>,
}

impl SamplePoint {
    pub fn new() -> Self {
        SamplePoint::default()
    }

    pub fn with(mut self, var: Var, value: f64) -> Self {
        self.set(var, value);
        self
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.set_param(name, value);
        self
    }

    pub fn set(&mut self, var: Var, value: f64) {
        self.values[var.slot()] = Some(value);
    }

    pub fn set_param(&mut self, name: &str, value: f64) {
        self.params.insert(name.to_owned(), value);
    }

    pub fn get(&self, var: Var) -> Option<f64> {
        self.values[var.slot()]
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    /// Every variable set to zero unless already assigned.
    pub fn filled(mut self) -> Self {
        for v in self.values.iter_mut() {
            v.get_or_insert(0.0);
        }
        self
    }

    pub fn velocity(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| self.values[3 + k].unwrap_or(0.0))
    }

    pub fn assigned(&self) -> impl Iterator<Item = (Var, f64)> + '_ {
        Var::ALL
            .iter()
            .filter_map(move |v| self.values[v.slot()].map(|x| (*v, x)))
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }
}

impl std::fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self
            .assigned()
            .map(|(v, x)| format!("{}={x:.6}", v.name()))
            .collect();
        parts.extend(self.params.iter().map(|(k, x)| format!("{k}={x:.6}")));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn domain(msg: impl Into<String>) -> Error {
    Error::DomainError(msg.into())
}

impl ScalarExpr {
    pub fn eval(&self, point: &SamplePoint) -> Result<Complex64> {
        let mut memo = HashMap::new();
        self.eval_memo(point, &mut memo)
    }

    fn eval_memo(
        &self,
        point: &SamplePoint,
        memo: &mut HashMap<usize, Complex64>,
    ) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in self.terms() {
            let mut val = c.to_complex();
            for (atom, e) in m {
                let base = match atom {
                    Atom::Var(v) => Complex64::new(
                        point
                            .get(*v)
                            .ok_or_else(|| Error::UnassignedVariable(v.name()))?,
                        0.0,
                    ),
                    Atom::Param(p) => Complex64::new(
                        point
                            .param(p)
                            .ok_or_else(|| Error::UnassignedVariable(p.to_string()))?,
                        0.0,
                    ),
                    Atom::Denom(s) => s.eval_cached(point, memo, false)?,
                    Atom::Sqrt(s) => s.eval_cached(point, memo, true)?,
                };
                if *e < 0 && base == Complex64::new(0.0, 0.0) {
                    return Err(domain(format!("division by zero in {atom}")));
                }
                val *= base.powi(*e);
            }
            total += val;
        }
        Ok(total)
    }

    fn eval_cached(
        &self,
        point: &SamplePoint,
        memo: &mut HashMap<usize, Complex64>,
        sqrt: bool,
    ) -> Result<Complex64> {
        let key = self.ptr_id() ^ (sqrt as usize);
        if let Some(v) = memo.get(&key) {
            return Ok(*v);
        }
        let inner = self.eval_memo(point, memo)?;
        let out = if sqrt {
            if inner.im == 0.0 && inner.re < 0.0 {
                return Err(domain(format!("sqrt of negative value {} in sqrt({self})", inner.re)));
            }
            inner.sqrt()
        } else {
            inner
        };
        memo.insert(key, out);
        Ok(out)
    }
}

/// Exact Gaussian rational `re + i im` with unbounded precision.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn real(re: BigRational) -> Self {
        ExactComplex { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        ExactComplex::real(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactComplex::real(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ExactComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ExactComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(ExactComplex { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.recip().map(|r| self.mul(&r))
    }

    pub fn powi(&self, e: i32) -> Option<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = ExactComplex::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }

    /// Square root of a nonnegative rational perfect square.
    pub fn sqrt(&self) -> Option<Self> {
        if !self.im.is_zero() || self.re.is_negative() {
            return None;
        }
        let n = self.re.numer().sqrt();
        let d = self.re.denom().sqrt();
        if &(&n * &n) == self.re.numer() && &(&d * &d) == self.re.denom() {
            Some(ExactComplex::real(BigRational::new(n, d)))
        } else {
            None
        }
    }
}

/// Rational values for variables and parameters.
#[derive(Clone, Debug, Default)]
pub struct ExactPoint {
    values: [Option<BigRational>; 10],
    params: BTreeMap<String, BigRational>,
}

impl ExactPoint {
    pub fn new() -> Self {
        ExactPoint::default()
    }

    pub fn with(mut self, var: Var, num: i64, den: i64) -> Self {
        self.values[var.slot()] = Some(BigRational::new(BigInt::from(num), BigInt::from(den)));
        self
    }

    pub fn with_param(mut self, name: &str, num: i64, den: i64) -> Self {
        self.params
            .insert(name.to_owned(), BigRational::new(BigInt::from(num), BigInt::from(den)));
        self
    }

    pub fn get(&self, var: Var) -> Option<&BigRational> {
        self.values[var.slot()].as_ref()
    }
}

fn exact_number(re: &Q, im: &Q) -> ExactComplex {
    ExactComplex { re: q_to_big(re), im: q_to_big(im) }
}

impl ScalarExpr {
    /// Exact value at a rational point. `Ok(None)` when the expression has
    /// floating coefficients or a square root that is not a perfect square
    /// at this point.
    pub fn eval_exact(&self, point: &ExactPoint) -> Result<Option<ExactComplex>> {
        let mut total = ExactComplex::zero();
        for (m, c) in self.terms() {
            let Some((re, im)) = c.as_exact() else {
                return Ok(None);
            };
            let mut val = exact_number(&re, &im);
            for (atom, e) in m {
                let base = match atom {
                    Atom::Var(v) => ExactComplex::real(
                        point
                            .get(*v)
                            .cloned()
                            .ok_or_else(|| Error::UnassignedVariable(v.name()))?,
                    ),
                    Atom::Param(p) => ExactComplex::real(
                        point
                            .params
                            .get(&**p)
                            .cloned()
                            .ok_or_else(|| Error::UnassignedVariable(p.to_string()))?,
                    ),
                    Atom::Denom(s) => match s.eval_exact(point)? {
                        Some(v) => v,
                        None => return Ok(None),
                    },
                    Atom::Sqrt(s) => match s.eval_exact(point)? {
                        Some(v) => match v.sqrt() {
                            Some(r) => r,
                            None => return Ok(None),
                        },
                        None => return Ok(None),
                    },
                };
                val = val.mul(
                    &base
                        .powi(*e)
                        .ok_or_else(|| domain(format!("division by zero in {atom}")))?,
                );
            }
            total = total.add(&val);
        }
        Ok(Some(total))
    }
}

#[derive(Clone, Debug)]
enum Operand {
    Input(usize),
    Node(usize),
}

#[derive(Clone, Debug)]
struct CompiledSum {
    terms: Vec<(f64, Vec<(Operand, i32)>)>,
    sqrt: bool,
}

/// Real-valued expression lowered to a flat program over the ten slot
/// inputs `[x1 x2 x3 v1 v2 v3 p1 p2 p3 t]`. Parameters are bound at compile
/// time. Shared sub-expressions are evaluated once.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    nodes: Vec<CompiledSum>,
}

impl CompiledExpr {
    pub fn new(expr: &ScalarExpr, params: &BTreeMap<String, f64>) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        compile_sum(expr, false, params, &mut nodes, &mut index)?;
        Ok(CompiledExpr { nodes })
    }

    pub fn scratch_len(&self) -> usize {
        self.nodes.len()
    }

    /// Evaluates with caller-provided scratch space of at least
    /// [`scratch_len`](Self::scratch_len) entries. Domain violations
    /// surface as non-finite results.
    pub fn eval_with(&self, inputs: &[f64; 10], scratch: &mut [f64]) -> f64 {
        for (k, node) in self.nodes.iter().enumerate() {
            let mut acc = 0.0;
            for (c, factors) in &node.terms {
                let mut t = *c;
                for (op, e) in factors {
                    let b = match op {
                        Operand::Input(i) => inputs[*i],
                        Operand::Node(j) => scratch[*j],
                    };
                    t *= match e {
                        1 => b,
                        2 => b * b,
                        -1 => 1.0 / b,
                        _ => b.powi(*e),
                    };
                }
                acc += t;
            }
            scratch[k] = if node.sqrt {
                if acc < 0.0 {
                    f64::NAN
                } else {
                    acc.sqrt()
                }
            } else {
                acc
            };
        }
        scratch[self.nodes.len() - 1]
    }

    pub fn eval(&self, inputs: &[f64; 10]) -> f64 {
        let mut scratch = vec![0.0; self.nodes.len()];
        self.eval_with(inputs, &mut scratch)
    }
}

fn compile_sum(
    expr: &ScalarExpr,
    sqrt: bool,
    params: &BTreeMap<String, f64>,
    nodes: &mut Vec<CompiledSum>,
    index: &mut HashMap<(usize, bool), usize>,
) -> Result<usize> {
    if let Some(&k) = index.get(&(expr.ptr_id(), sqrt)) {
        return Ok(k);
    }
    let mut terms = Vec::new();
    for (m, c) in expr.terms() {
        let z = c.to_complex();
        if z.im != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cannot compile complex coefficient {c} to a real evaluator"
            )));
        }
        let mut coeff = z.re;
        let mut factors = Vec::new();
        for (atom, e) in m {
            match atom {
                Atom::Var(v) => factors.push((Operand::Input(v.slot()), *e)),
                Atom::Param(p) => {
                    let val = params
                        .get(&**p)
                        .ok_or_else(|| Error::UnassignedVariable(p.to_string()))?;
                    coeff *= val.powi(*e);
                }
                Atom::Denom(s) => {
                    let k = compile_sum(s, false, params, nodes, index)?;
                    factors.push((Operand::Node(k), *e));
                }
                Atom::Sqrt(s) => {
                    let k = compile_sum(s, true, params, nodes, index)?;
                    factors.push((Operand::Node(k), *e));
                }
            }
        }
        terms.push((coeff, factors));
    }
    nodes.push(CompiledSum { terms, sqrt });
    let k = nodes.len() - 1;
    index.insert((expr.ptr_id(), sqrt), k);
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::expr::{inverse_lorentz_factor, lorentz_factor};

    fn at_vz(vz: f64) -> SamplePoint {
        SamplePoint::new()
            .with(Var::V(0), 0.0)
            .with(Var::V(1), 0.0)
            .with(Var::V(2), vz)
    }

    #[test]
    fn lorentz_factor_values() {
        let g = lorentz_factor();
        assert_eq!(g.eval(&at_vz(0.0)).unwrap().re, 1.0);
        assert!((g.eval(&at_vz(0.6)).unwrap().re - 1.25).abs() < 1e-15);
        assert_eq!(inverse_lorentz_factor().eval(&at_vz(1.0)).unwrap().re, 0.0);
        assert!(matches!(g.eval(&at_vz(1.0)), Err(Error::DomainError(_))));
        assert!(matches!(
            inverse_lorentz_factor().eval(&at_vz(1.5)),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn derivative_of_gamma_matches_finite_difference() {
        let d = lorentz_factor().diff(Var::V(2));
        let analytic = d.eval(&at_vz(0.6)).unwrap().re;
        let h = 1e-6;
        let g = lorentz_factor();
        let fd = (g.eval(&at_vz(0.6 + h)).unwrap().re - g.eval(&at_vz(0.6 - h)).unwrap().re)
            / (2.0 * h);
        assert!((analytic - 1.171875).abs() < 1e-12);
        assert!((fd - analytic).abs() < 1e-6);
    }

    #[test]
    fn unassigned_variable_is_reported() {
        let e = ScalarExpr::x(0) + ScalarExpr::param("m0");
        let err = e.eval(&SamplePoint::new().with(Var::X(0), 1.0)).unwrap_err();
        assert_eq!(err, Error::UnassignedVariable("m0".into()));
    }

    #[test]
    fn exact_evaluation_of_rational_function() {
        let e = ScalarExpr::v(0).powi(2).div(&(ScalarExpr::one() - ScalarExpr::v(0)));
        let p = ExactPoint::new().with(Var::V(0), 1, 3);
        let v = e.eval_exact(&p).unwrap().unwrap();
        assert_eq!(v.re, BigRational::new(1.into(), 6.into()));
        let g = lorentz_factor();
        let p = ExactPoint::new()
            .with(Var::V(0), 0, 1)
            .with(Var::V(1), 0, 1)
            .with(Var::V(2), 3, 5);
        assert_eq!(g.eval_exact(&p).unwrap().unwrap().re, BigRational::new(5.into(), 4.into()));
    }

    #[test]
    fn compiled_matches_interpreted() {
        let e = lorentz_factor() * ScalarExpr::x(0) + ScalarExpr::param("b") * ScalarExpr::t();
        let params: BTreeMap<String, f64> = [("b".to_owned(), 2.0)].into();
        let c = CompiledExpr::new(&e, &params).unwrap();
        let inputs = [0.5, 0.0, 0.0, 0.1, 0.2, 0.3, 0.0, 0.0, 0.0, 1.5];
        let mut p = SamplePoint::new().with_param("b", 2.0);
        for v in Var::ALL {
            p.set(v, inputs[v.slot()]);
        }
        assert!((c.eval(&inputs) - e.eval(&p).unwrap().re).abs() < 1e-14);
    }
}
