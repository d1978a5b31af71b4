//! Operator text: `X1 V2 P3` (multiplicative), `Lx1` (space translation,
//! velocity representation), `Lxp1` (space translation, momentum
//! representation), `Lv1`, `Lp1`, scalar sub-expressions, `*` for
//! composition, `S(A,B)` and `comm(A,B)`.

use super::{OperatorExpr, Representation};
use crate::error::{Error, Result};
use crate::scalar::parse::{half_integer_exponent, pow_half};
use crate::scalar::{ScalarExpr, Var};
use crate::syntax::{self, Ast, Node};

fn fail<T>(node: &Node, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { offset: node.offset, message: message.into() })
}

fn axis(name: &str, prefix: &str) -> Option<usize> {
    match name.strip_prefix(prefix)? {
        "1" => Some(0),
        "2" => Some(1),
        "3" => Some(2),
        _ => None,
    }
}

fn ident(node: &Node, name: &str, repr: Representation) -> Result<OperatorExpr> {
    use Representation::*;
    let wrong = |expected: Representation| {
        fail(node, format!("`{name}` belongs to the {expected} representation, not {repr}"))
    };
    if let Some(k) = axis(name, "Lxp") {
        return if repr == Momentum { Ok(OperatorExpr::lambda_position(k, repr)) } else { wrong(Momentum) };
    }
    if let Some(k) = axis(name, "Lx") {
        return if repr == Velocity { Ok(OperatorExpr::lambda_position(k, repr)) } else { wrong(Velocity) };
    }
    if let Some(k) = axis(name, "Lv") {
        return if repr == Velocity { Ok(OperatorExpr::lambda_kinetic(k, repr)) } else { wrong(Velocity) };
    }
    if let Some(k) = axis(name, "Lp") {
        return if repr == Momentum { Ok(OperatorExpr::lambda_kinetic(k, repr)) } else { wrong(Momentum) };
    }
    if let Some(k) = axis(name, "X") {
        return Ok(OperatorExpr::position(k, repr));
    }
    if let Some(k) = axis(name, "V") {
        return if repr == Velocity { Ok(OperatorExpr::kinetic(k, repr)) } else { wrong(Velocity) };
    }
    if let Some(k) = axis(name, "P") {
        return if repr == Momentum { Ok(OperatorExpr::kinetic(k, repr)) } else { wrong(Momentum) };
    }
    let scalar = if name == "i" {
        ScalarExpr::i()
    } else {
        match Var::from_name(name) {
            Some(v) => ScalarExpr::var(v),
            None => ScalarExpr::param(name),
        }
    };
    Ok(OperatorExpr::multiplication(scalar, repr))
}

fn multiplicative(node: &Node, op: OperatorExpr, what: &str) -> Result<ScalarExpr> {
    match op.as_multiplication() {
        Some(f) => Ok(f),
        None => fail(node, format!("{what} requires a multiplicative operand")),
    }
}

fn lower(node: &Node, repr: Representation) -> Result<OperatorExpr> {
    let mult = |f: ScalarExpr| OperatorExpr::multiplication(f, repr);
    Ok(match &node.ast {
        Ast::Num(c) => mult(ScalarExpr::constant(c.clone())),
        Ast::Ident(name) => ident(node, name, repr)?,
        Ast::Call(f, args) => match (f.as_str(), args.as_slice()) {
            ("S", [a, b]) => lower(a, repr)?.symmetrize(&lower(b, repr)?)?,
            ("comm", [a, b]) => lower(a, repr)?.commutator(&lower(b, repr)?)?,
            ("sqrt", [a]) => mult(multiplicative(a, lower(a, repr)?, "sqrt")?.sqrt()),
            _ => return fail(node, format!("unknown function `{f}` with {} argument(s)", args.len())),
        },
        Ast::Neg(a) => lower(a, repr)?.neg(),
        Ast::Add(a, b) => lower(a, repr)?.add(&lower(b, repr)?)?,
        Ast::Sub(a, b) => lower(a, repr)?.sub(&lower(b, repr)?)?,
        Ast::Mul(a, b) => lower(a, repr)?.compose(&lower(b, repr)?)?,
        Ast::Div(a, b) => {
            let d = multiplicative(b, lower(b, repr)?, "division")?;
            if d.is_zero() {
                return fail(b, "division by zero");
            }
            lower(a, repr)?.compose(&mult(d.recip()))?
        }
        Ast::Pow(a, b) => {
            let e = multiplicative(b, lower(b, repr)?, "exponent")?;
            let base = lower(a, repr)?;
            let Some(twice) = half_integer_exponent(&e) else {
                return fail(b, "exponent must be an integer or half-integer constant");
            };
            match base.as_multiplication() {
                Some(f) => mult(pow_half(&f, twice)),
                None if twice >= 0 && twice % 2 == 0 => base.pow((twice / 2) as u32)?,
                None => return fail(b, "non-multiplicative operators take nonnegative integer powers"),
            }
        }
    })
}

/// Parses operator text in the given representation.
pub fn parse_operator(src: &str, repr: Representation) -> Result<OperatorExpr> {
    lower(&syntax::parse(src)?, repr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::op_equal;
    use crate::scalar::ProbeConfig;

    #[test]
    fn parses_free_liouvillian() {
        let l = parse_operator("V1*Lx1 + V2*Lx2 + V3*Lx3", Representation::Velocity).unwrap();
        assert_eq!(l.order(), 1);
        let back = parse_operator(&l.display_lambda(), Representation::Velocity).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn commutator_syntax() {
        let c = parse_operator("comm(X1, Lx1)", Representation::Velocity).unwrap();
        assert_eq!(c, OperatorExpr::multiplication(ScalarExpr::i(), Representation::Velocity));
        let s = parse_operator("S(V1, Lv1) - V1*Lv1 + i/2", Representation::Velocity).unwrap();
        assert!(op_equal(&s, &OperatorExpr::zero(Representation::Velocity), &ProbeConfig::default())
            .unwrap()
            .pass);
    }

    #[test]
    fn representation_is_enforced() {
        assert!(parse_operator("Lp1", Representation::Velocity).is_err());
        assert!(parse_operator("Lx1", Representation::Momentum).is_err());
        assert!(parse_operator("Lxp1*P1", Representation::Momentum).is_ok());
    }

    #[test]
    fn scalar_powers_inside_operators() {
        let a = parse_operator("(1 - V1^2)^(3/2)*Lv1", Representation::Velocity).unwrap();
        assert_eq!(a.order(), 1);
        assert!(parse_operator("Lv1^(1/2)", Representation::Velocity).is_err());
    }
}
