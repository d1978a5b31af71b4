//! Text to [`ScalarExpr`].

use std::str::FromStr;

use super::expr::{ScalarExpr, Var};
use crate::error::{Error, Result};
use crate::syntax::{self, Ast, Node};

fn fail<T>(node: &Node, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { offset: node.offset, message: message.into() })
}

/// Exponent as `n/2` with integer `n`, when the node is a constant integer
/// or half-integer.
pub(crate) fn half_integer_exponent(e: &ScalarExpr) -> Option<i32> {
    let q = e.as_constant()?.as_real_rational()?;
    let twice = q * 2;
    if twice.is_integer() {
        i32::try_from(*twice.numer()).ok()
    } else {
        None
    }
}

/// Raises to `twice / 2`, using a square root for odd `twice`.
pub(crate) fn pow_half(base: &ScalarExpr, twice: i32) -> ScalarExpr {
    if twice % 2 == 0 {
        base.powi(twice / 2)
    } else {
        base.sqrt().powi(twice)
    }
}

fn lower(node: &Node) -> Result<ScalarExpr> {
    Ok(match &node.ast {
        Ast::Num(c) => ScalarExpr::constant(c.clone()),
        Ast::Ident(name) if name == "i" => ScalarExpr::i(),
        Ast::Ident(name) => match Var::from_name(name) {
            Some(v) => ScalarExpr::var(v),
            None => ScalarExpr::param(name),
        },
        Ast::Call(f, args) => {
            if f != "sqrt" || args.len() != 1 {
                return fail(node, format!("unknown function `{f}` with {} argument(s)", args.len()));
            }
            lower(&args[0])?.sqrt()
        }
        Ast::Neg(a) => lower(a)?.neg(),
        Ast::Add(a, b) => lower(a)? + lower(b)?,
        Ast::Sub(a, b) => lower(a)? - lower(b)?,
        Ast::Mul(a, b) => lower(a)? * lower(b)?,
        Ast::Div(a, b) => {
            let d = lower(b)?;
            if d.is_zero() {
                return fail(b, "division by literal zero");
            }
            lower(a)?.div(&d)
        }
        Ast::Pow(a, b) => {
            let e = lower(b)?;
            match half_integer_exponent(&e) {
                Some(twice) => pow_half(&lower(a)?, twice),
                None => return fail(b, "exponent must be an integer or half-integer constant"),
            }
        }
    })
}

impl FromStr for ScalarExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        lower(&syntax::parse(s)?)
    }
}

impl ScalarExpr {
    pub fn parse(s: &str) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::expr::lorentz_factor;
    use crate::scalar::probe::{equal_numeric, ProbeConfig};

    #[test]
    fn parses_gamma() {
        let g = ScalarExpr::parse("1/sqrt(1 - v1^2 - v2^2 - v3^2)").unwrap();
        assert!(equal_numeric(&g, &lorentz_factor(), &ProbeConfig::default()).unwrap().pass);
        let g2 = ScalarExpr::parse("(1 - v1^2 - v2^2 - v3^2)^(-1/2)").unwrap();
        assert_eq!(g2, lorentz_factor());
    }

    #[test]
    fn params_and_imaginary_unit() {
        let e = ScalarExpr::parse("i*m0*x1 + 0.5").unwrap();
        assert_eq!(e.params().into_iter().collect::<Vec<_>>(), vec!["m0".to_owned()]);
        assert_eq!(
            e,
            ScalarExpr::i() * ScalarExpr::param("m0") * ScalarExpr::x(0) + ScalarExpr::rational(1, 2)
        );
    }

    #[test]
    fn display_round_trips() {
        for src in ["x1*v2 - 3/4*t", "sqrt(1 - v3^2)^(-3)", "(2 + i)*p1/(1 + p2^2)"] {
            let e = ScalarExpr::parse(src).unwrap();
            let back = ScalarExpr::parse(&e.to_string()).unwrap();
            assert!(
                equal_numeric(&e, &back, &ProbeConfig::default()).unwrap().pass,
                "{src} -> {e}"
            );
        }
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(ScalarExpr::parse("x1^v1").is_err());
        assert!(ScalarExpr::parse("x1^(1/3)").is_err());
        assert!(ScalarExpr::parse("cos(x1)").is_err());
    }
}
