//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' uint)?
//! base   := number | ident | '(' expr ')' | 'exp' '(' expr ')' | '-' factor
//! ```
//!
//! Numbers are decimals (`2`, `0.25`) or rational literals (`3/4`). A literal
//! `p/q` binds tighter than `^`, so `3/4^2` is `(3/4)^2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    Unexpected(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("negative integer exponent")]
    NegativeExponent,
    #[error("exponent out of range")]
    ExponentRange,
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("malformed number")]
    BadNumber,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    coords: &'a [String],
}

/// Parse `text` over the ordered coordinate names `coords`.
pub fn parse(text: &str, coords: &[String]) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, coords };
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some(c) => Err(p.err(ParseErrorKind::Unexpected(c as char))),
    }
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { offset: self.pos, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn next_tok(&mut self) -> Option<u8> {
        self.skip_ws();
        self.peek()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.next_tok() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.err(ParseErrorKind::Unexpected(got as char))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.next_tok() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.next_tok() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    acc = acc.checked_div(&d).map_err(|_| ParseError {
                        offset: at,
                        kind: ParseErrorKind::DivisionByZero,
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let b = self.base()?;
        if self.next_tok() != Some(b'^') {
            return Ok(b);
        }
        self.pos += 1;
        self.skip_ws();
        match self.peek() {
            Some(b'-') => Err(self.err(ParseErrorKind::NegativeExponent)),
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: u32 = digits.parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::ExponentRange,
                })?;
                Ok(b.powi(n))
            }
            Some(c) => Err(self.err(ParseErrorKind::Unexpected(c as char))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.next_tok() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.coords.iter().position(|c| c == name) {
                    return Ok(Expr::var(i));
                }
                if name == "exp" && self.next_tok() == Some(b'(') {
                    self.pos += 1;
                    let e = self.expr()?;
                    self.expect(b')')?;
                    return Ok(e.exp());
                }
                Err(ParseError { offset: start, kind: ParseErrorKind::UnknownIdentifier(name.to_string()) })
            }
            Some(c) => Err(self.err(ParseErrorKind::Unexpected(c as char))),
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let int_part = self.digits().to_string();
        let mut frac_part = String::new();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac_part = self.digits().to_string();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ParseError { offset: start, kind: ParseErrorKind::BadNumber });
        }
        let mantissa: BigInt = format!("{int_part}{frac_part}").parse().unwrap();
        let mut value = BigRational::new(mantissa, BigInt::from(10u32).pow(frac_part.len() as u32));
        let is_integer_literal = frac_part.is_empty() && self.src[start..self.pos].iter().all(u8::is_ascii_digit);
        if is_integer_literal
            && self.peek() == Some(b'/')
            && self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
            let den_at = self.pos;
            let den: BigInt = self.digits().parse().unwrap();
            if den.is_zero() {
                return Err(ParseError { offset: den_at, kind: ParseErrorKind::DivisionByZero });
            }
            value /= BigRational::from_integer(den);
        }
        if value.is_one() {
            return Ok(Expr::one());
        }
        Ok(Expr::rational(value))
    }
}
