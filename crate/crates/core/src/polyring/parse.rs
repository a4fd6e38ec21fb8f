//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | integer '/' integer | 'x' index | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::Polynomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} at byte {pos} exceeds the ring's {nvars} variables")]
    VariableOutOfRange { pos: usize, index: usize, nvars: usize },
    #[error("negative exponent at byte {pos}")]
    NegativeExponent { pos: usize },
    #[error("zero denominator at byte {pos}")]
    ZeroDenominator { pos: usize },
}

/// Parses `text` as a polynomial in `nvars` variables with exact rational
/// coefficients.
pub fn parse_polynomial<S: Scalar>(text: &str, nvars: usize) -> Result<Polynomial<S>, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, nvars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
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

    fn expr<S: Scalar>(&mut self) -> Result<Polynomial<S>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<S: Scalar>(&mut self) -> Result<Polynomial<S>, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary<S: Scalar>(&mut self) -> Result<Polynomial<S>, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power<S: Scalar>(&mut self) -> Result<Polynomial<S>, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        if self.peek() == Some(b'-') {
            return Err(ParseError::NegativeExponent { pos: self.pos });
        }
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.syntax("expected exponent"));
        }
        let e: u32 = digits
            .parse()
            .map_err(|_| ParseError::Syntax { pos: start, msg: "exponent too large".into() })?;
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom<S: Scalar>(&mut self) -> Result<Polynomial<S>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                let at = self.pos;
                self.pos += 1;
                let digits = self.digits_tight();
                if digits.is_empty() {
                    return Err(self.syntax("expected variable index after 'x'"));
                }
                let index: usize = digits.parse().map_err(|_| ParseError::Syntax {
                    pos: at,
                    msg: "variable index too large".into(),
                })?;
                if index == 0 || index > self.nvars {
                    return Err(ParseError::VariableOutOfRange { pos: at, index, nvars: self.nvars });
                }
                Ok(Polynomial::var(self.nvars, index - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let num: BigInt = self.digits().parse().expect("digit run");
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    let save = self.pos;
                    self.pos += 1;
                    let den = self.digits();
                    if den.is_empty() {
                        self.pos = save;
                        return Err(self.syntax("expected denominator"));
                    }
                    let den: BigInt = den.parse().expect("digit run");
                    if den.is_zero() {
                        return Err(ParseError::ZeroDenominator { pos: at });
                    }
                    value = value / BigRational::from_integer(den);
                }
                Ok(Polynomial::constant(self.nvars, S::from_rational(&value)))
            }
            Some(c) => Err(self.syntax(format!("unexpected '{}'", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn digits_tight(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}
