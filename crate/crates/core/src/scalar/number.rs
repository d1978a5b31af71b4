//! Complex coefficients that stay exact (Gaussian rationals) for as long as
//! the arithmetic fits in 64-bit numerators and denominators, and degrade to
//! double precision otherwise.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

pub type Q = Ratio<i64>;

#[derive(Clone, Debug)]
pub enum Number {
    /// `re + i im` with rational parts.
    Exact(Q, Q),
    Float(Complex64),
}

fn q_to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub(crate) fn q_to_big(q: &Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

impl Number {
    pub fn zero() -> Self {
        Number::Exact(Q::zero(), Q::zero())
    }

    pub fn one() -> Self {
        Number::Exact(Q::one(), Q::zero())
    }

    pub fn i() -> Self {
        Number::Exact(Q::zero(), Q::one())
    }

    pub fn int(n: i64) -> Self {
        Number::Exact(Q::from_integer(n), Q::zero())
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Number::Exact(Q::new(num, den), Q::zero())
    }

    pub fn gaussian(re: Q, im: Q) -> Self {
        Number::Exact(re, im)
    }

    pub fn complex(z: Complex64) -> Self {
        match (exact_from_f64(z.re), exact_from_f64(z.im)) {
            (Some(re), Some(im)) => Number::Exact(re, im),
            _ => Number::Float(z),
        }
    }

    /// Real constant; exact whenever `x` is (up to rounding) a rational
    /// with a modest denominator, so `0.1` becomes `1/10`.
    pub fn real(x: f64) -> Self {
        match exact_from_f64(x) {
            Some(q) => Number::Exact(q, Q::zero()),
            None => Number::Float(Complex64::new(x, 0.0)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(..))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Number::Exact(re, im) => re.is_zero() && im.is_zero(),
            Number::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Number::Exact(re, im) => re.is_one() && im.is_zero(),
            Number::Float(z) => z.re == 1.0 && z.im == 0.0,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Number::Exact(re, im) => Complex64::new(q_to_f64(re), q_to_f64(im)),
            Number::Float(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<(Q, Q)> {
        match self {
            Number::Exact(re, im) => Some((*re, *im)),
            Number::Float(_) => None,
        }
    }

    /// Real part as a rational, when exact and purely real.
    pub fn as_real_rational(&self) -> Option<Q> {
        match self {
            Number::Exact(re, im) if im.is_zero() => Some(*re),
            _ => None,
        }
    }

    pub fn neg(&self) -> Number {
        match self {
            Number::Exact(re, im) => Number::Exact(-re, -im),
            Number::Float(z) => Number::Float(-z),
        }
    }

    pub fn conj(&self) -> Number {
        match self {
            Number::Exact(re, im) => Number::Exact(*re, -im),
            Number::Float(z) => Number::Float(z.conj()),
        }
    }

    pub fn add(&self, other: &Number) -> Number {
        if let (Number::Exact(a, b), Number::Exact(c, d)) = (self, other) {
            if let (Some(re), Some(im)) = (a.checked_add(c), b.checked_add(d)) {
                return Number::Exact(re, im);
            }
        }
        Number::Float(self.to_complex() + other.to_complex())
    }

    pub fn sub(&self, other: &Number) -> Number {
        if let (Number::Exact(a, b), Number::Exact(c, d)) = (self, other) {
            if let (Some(re), Some(im)) = (a.checked_sub(c), b.checked_sub(d)) {
                return Number::Exact(re, im);
            }
        }
        Number::Float(self.to_complex() - other.to_complex())
    }

    pub fn mul(&self, other: &Number) -> Number {
        if let (Number::Exact(a, b), Number::Exact(c, d)) = (self, other) {
            if let Some((re, im)) = exact_mul(a, b, c, d) {
                return Number::Exact(re, im);
            }
        }
        Number::Float(self.to_complex() * other.to_complex())
    }

    /// Reciprocal; `None` for zero.
    pub fn recip(&self) -> Option<Number> {
        if self.is_zero() {
            return None;
        }
        if let Number::Exact(a, b) = self {
            let norm = a
                .checked_mul(a)
                .and_then(|aa| b.checked_mul(b).and_then(|bb| aa.checked_add(&bb)));
            if let Some(n) = norm {
                if let (Some(re), Some(im)) = (a.checked_div(&n), (-b).checked_div(&n)) {
                    return Some(Number::Exact(re, im));
                }
            }
        }
        Some(Number::Float(self.to_complex().inv()))
    }

    pub fn div(&self, other: &Number) -> Option<Number> {
        other.recip().map(|r| self.mul(&r))
    }

    pub fn powi(&self, n: i32) -> Option<Number> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Number::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Some(acc)
    }

    /// Exact square root of a nonnegative rational perfect square.
    pub fn exact_sqrt(&self) -> Option<Number> {
        let q = self.as_real_rational()?;
        if q.is_negative() {
            return None;
        }
        let n = isqrt(*q.numer())?;
        let d = isqrt(*q.denom())?;
        Some(Number::Exact(Q::new(n, d), Q::zero()))
    }

    fn tag(&self) -> u8 {
        match self {
            Number::Exact(..) => 0,
            Number::Float(_) => 1,
        }
    }
}

fn exact_mul(a: &Q, b: &Q, c: &Q, d: &Q) -> Option<(Q, Q)> {
    let re = a.checked_mul(c)?.checked_sub(&b.checked_mul(d)?)?;
    let im = a.checked_mul(d)?.checked_add(&b.checked_mul(c)?)?;
    Some((re, im))
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r.max(0) - 1..=r + 1).find(|&k| k >= 0 && k.checked_mul(k) == Some(n))
}

/// Rational reconstruction of a double: accepted only if the rational
/// converts back to the identical double and has a denominator below 2^20.
pub(crate) fn exact_from_f64(x: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    if x == x.trunc() && x.abs() < 1e15 {
        return Some(Q::from_integer(x as i64));
    }
    let q: Q = Ratio::approximate_float(x)?;
    if *q.denom() < (1 << 20) && q_to_f64(&q) == x {
        Some(q)
    } else {
        None
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Number {}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Number::Exact(a, b), Number::Exact(c, d)) => a.cmp(c).then(b.cmp(d)),
            (Number::Float(z), Number::Float(w)) => {
                z.re.total_cmp(&w.re).then(z.im.total_cmp(&w.im))
            }
            _ => self.tag().cmp(&other.tag()),
        }
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_f(x: f64) -> String {
    let s = format!("{x:e}");
    s.strip_suffix("e0").map(str::to_owned).unwrap_or(s)
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(re, im) => {
                if im.is_zero() {
                    write!(f, "{}", fmt_q(re))
                } else if re.is_zero() {
                    if im.is_one() {
                        write!(f, "i")
                    } else if (-im).is_one() {
                        write!(f, "-i")
                    } else {
                        write!(f, "{}*i", fmt_q(im))
                    }
                } else {
                    let sign = if im.is_negative() { "-" } else { "+" };
                    write!(f, "({} {} {}*i)", fmt_q(re), sign, fmt_q(&im.abs()))
                }
            }
            Number::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", fmt_f(z.re))
                } else if z.re == 0.0 {
                    write!(f, "{}*i", fmt_f(z.im))
                } else {
                    let sign = if z.im < 0.0 { "-" } else { "+" };
                    write!(f, "({} {} {}*i)", fmt_f(z.re), sign, fmt_f(z.im.abs()))
                }
            }
        }
    }
}

impl From<i64> for Number {
    fn from(n: i64) -> Self {
        Number::int(n)
    }
}

/// Float value of a big rational, for reporting exact coefficients.
pub fn big_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_inputs_become_exact() {
        assert_eq!(Number::real(0.1), Number::rational(1, 10));
        assert_eq!(Number::real(-2.5), Number::rational(-5, 2));
        assert!(Number::real(std::f64::consts::PI).as_exact().is_none());
    }

    #[test]
    fn gaussian_arithmetic_is_exact() {
        let a = Number::gaussian(Q::new(1, 2), Q::new(1, 3));
        let b = a.recip().unwrap();
        assert_eq!(a.mul(&b), Number::one());
        assert_eq!(Number::i().mul(&Number::i()), Number::int(-1));
    }

    #[test]
    fn overflow_degrades_to_float() {
        let big = Number::int(i64::MAX / 2);
        let p = big.mul(&big);
        assert!(!p.is_exact());
        assert!((p.to_complex().re - (i64::MAX / 2) as f64 * (i64::MAX / 2) as f64).abs() < 1e25);
    }

    #[test]
    fn exact_sqrt_of_squares() {
        assert_eq!(Number::rational(9, 4).exact_sqrt(), Some(Number::rational(3, 2)));
        assert_eq!(Number::int(2).exact_sqrt(), None);
        assert_eq!(Number::int(-4).exact_sqrt(), None);
    }
}
