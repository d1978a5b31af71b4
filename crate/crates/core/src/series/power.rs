//! Truncated power series in one formal parameter with expression
//! coefficients.

use crate::error::{Error, Result};
use crate::scalar::{Number, ScalarExpr};

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<ScalarExpr>,
}

impl PowerSeries {
    /// Series with the given coefficients, truncated after `order`.
    pub fn new(mut coeffs: Vec<ScalarExpr>, order: usize) -> Self {
        coeffs.resize(order + 1, ScalarExpr::zero());
        PowerSeries { coeffs }
    }

    pub fn constant(c: ScalarExpr, order: usize) -> Self {
        PowerSeries::new(vec![c], order)
    }

    /// The formal parameter itself.
    pub fn parameter(order: usize) -> Self {
        PowerSeries::new(vec![ScalarExpr::zero(), ScalarExpr::one()], order)
    }

    fn from_fn(order: usize, f: impl Fn(usize) -> ScalarExpr) -> Self {
        PowerSeries { coeffs: (0..=order).map(f).collect() }
    }

    fn inverse_factorial(n: usize) -> ScalarExpr {
        let mut q = Number::one();
        for k in 2..=n as i64 {
            q = q.div(&Number::int(k)).expect("nonzero");
        }
        ScalarExpr::constant(q)
    }

    pub fn cosh(order: usize) -> Self {
        PowerSeries::from_fn(order, |n| if n % 2 == 0 { Self::inverse_factorial(n) } else { ScalarExpr::zero() })
    }

    pub fn sinh(order: usize) -> Self {
        PowerSeries::from_fn(order, |n| if n % 2 == 1 { Self::inverse_factorial(n) } else { ScalarExpr::zero() })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> ScalarExpr {
        self.coeffs.get(n).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    pub fn coefficients(&self) -> &[ScalarExpr] {
        &self.coeffs
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        PowerSeries::from_fn(order, |n| &self.coeffs[n] + &other.coeffs[n])
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        PowerSeries::from_fn(order, |n| &self.coeffs[n] - &other.coeffs[n])
    }

    pub fn scale(&self, f: &ScalarExpr) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| f * c).collect() }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        PowerSeries::from_fn(order, |n| {
            (0..=n).fold(ScalarExpr::zero(), |acc, k| acc + &self.coeffs[k] * &other.coeffs[n - k])
        })
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Result<PowerSeries> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::DomainError("power series with zero constant term has no inverse".into()));
        }
        let inv0 = c0.recip();
        let mut out: Vec<ScalarExpr> = vec![inv0.clone()];
        for n in 1..=self.order() {
            let s = (1..=n).fold(ScalarExpr::zero(), |acc, k| acc + &self.coeffs[k] * &out[n - k]);
            out.push((&s * &inv0).neg());
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, other: &PowerSeries) -> Result<PowerSeries> {
        Ok(self.mul(&other.recip()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_identity() {
        let c = PowerSeries::cosh(8);
        let s = PowerSeries::sinh(8);
        let one = c.mul(&c).sub(&s.mul(&s));
        assert_eq!(one.coeff(0), ScalarExpr::one());
        for n in 1..=8 {
            assert!(one.coeff(n).is_zero(), "order {n}");
        }
    }

    #[test]
    fn tanh_coefficients() {
        let t = PowerSeries::sinh(7).div(&PowerSeries::cosh(7)).unwrap();
        // tanh s = s − s³/3 + 2s⁵/15 − 17s⁷/315
        assert_eq!(t.coeff(1), ScalarExpr::one());
        assert_eq!(t.coeff(3), ScalarExpr::rational(-1, 3));
        assert_eq!(t.coeff(5), ScalarExpr::rational(2, 15));
        assert_eq!(t.coeff(7), ScalarExpr::rational(-17, 315));
    }
}
