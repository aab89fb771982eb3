//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | var | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//!
//! Whitespace is ignored between tokens. Juxtaposition such as `2t1` is a
//! syntax error.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::poly::{MultiPoly, Rational, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },
}

/// Parse `text` over the given variable names (a subset of
/// `t0, t1, t2, t3, s, x`).
pub fn parse_expression(text: &str, variables: &[&str]) -> Result<MultiPoly, ParseError> {
    let mut allowed = Vec::with_capacity(variables.len());
    for name in variables {
        match Var::from_name(name) {
            Some(v) => allowed.push((name.to_string(), v)),
            None => {
                return Err(ParseError::UnknownVariable {
                    pos: 0,
                    name: name.to_string(),
                })
            }
        }
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        allowed,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// [`parse_expression`] over all six variables.
pub fn parse_poly(text: &str) -> Result<MultiPoly, ParseError> {
    parse_expression(text, &["t0", "t1", "t2", "t3", "s", "x"])
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allowed: Vec<(String, Var)>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.uint()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: "exponent too large".into(),
                })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.uint()?;
                    if d.is_zero() {
                        return Err(ParseError::Syntax {
                            pos: at,
                            msg: "zero denominator".into(),
                        });
                    }
                    return Ok(MultiPoly::constant(Rational::new(n, d)));
                }
                self.reject_juxtaposition()?;
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.allowed.iter().find(|(n, _)| n == name) {
                    Some((_, v)) => Ok(MultiPoly::var(*v)),
                    None => Err(ParseError::UnknownVariable {
                        pos: start,
                        name: name.to_string(),
                    }),
                }
            }
            Some(_) => Err(self.error("expected a number, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn reject_juxtaposition(&mut self) -> Result<(), ParseError> {
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'(' => {
                Err(self.error("implicit multiplication is not allowed"))
            }
            _ => Ok(()),
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().expect("digits parse"))
    }
}
