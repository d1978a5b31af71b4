//! Shared infix grammar for scalar and operator text.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. `^` binds tighter than unary minus and is right
//! associative.

use crate::error::{Error, Result};
use crate::scalar::Number;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Ast {
    Num(Number),
    Ident(String),
    Call(String, Vec<Node>),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Node {
    pub ast: Ast,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let x: f64 = text.parse().map_err(|_| Error::Parse {
                offset: start,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((Tok::Num(x), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_owned()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { offset: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let offset = self.offset();
            if self.eat('+') {
                let rhs = self.term()?;
                lhs = Node { ast: Ast::Add(Box::new(lhs), Box::new(rhs)), offset };
            } else if self.eat('-') {
                let rhs = self.term()?;
                lhs = Node { ast: Ast::Sub(Box::new(lhs), Box::new(rhs)), offset };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let offset = self.offset();
            if self.eat('*') {
                let rhs = self.unary()?;
                lhs = Node { ast: Ast::Mul(Box::new(lhs), Box::new(rhs)), offset };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = Node { ast: Ast::Div(Box::new(lhs), Box::new(rhs)), offset };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        let offset = self.offset();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Node { ast: Ast::Neg(Box::new(inner)), offset });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        let offset = self.offset();
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Node { ast: Ast::Pow(Box::new(base), Box::new(exp)), offset });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(x)) => {
                self.pos += 1;
                Ok(Node { ast: Ast::Num(Number::real(x)), offset })
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    if !self.eat(')') {
                        return self.fail("expected `)`");
                    }
                    Ok(Node { ast: Ast::Call(name, args), offset })
                } else {
                    Ok(Node { ast: Ast::Ident(name), offset })
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.fail("expected `)`");
                }
                Ok(inner)
            }
            Some(t) => self.fail(format!("unexpected token {t:?}")),
            None => self.fail("unexpected end of input"),
        }
    }
}

pub(crate) fn parse(src: &str) -> Result<Node> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let node = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let n = parse("-x^2").unwrap();
        assert!(matches!(n.ast, Ast::Neg(_)));
        let n = parse("a - b - c").unwrap();
        match n.ast {
            Ast::Sub(l, _) => assert!(matches!(l.ast, Ast::Sub(..))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_offsets() {
        match parse("x1 + $") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse("(x1").is_err());
        assert!(parse("x1 x2").is_err());
    }
}
