//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | "+" unary | power ;
//! power   = primary [ "^" exponent ] ;
//! exponent= ["-"] integer | "(" ["-"] integer ")" ;
//! primary = number | ident "(" expr ")" | ident | "(" expr ")" ;
//! ```
//! Kernels: exp, ln, sin, cos, sinh, cosh, sqrt.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Num, ToPrimitive};
use thiserror::Error;

use super::poly::Q;
use super::{Expr, Symbol, SymbolClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character '{ch}' at offset {offset}")]
    UnexpectedChar { offset: usize, ch: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected '{expected}' at offset {offset}")]
    Expected { offset: usize, expected: &'static str },
    #[error("unknown function '{name}' at offset {offset}")]
    UnknownFunction { offset: usize, name: String },
    #[error("non-integer exponent at offset {offset}")]
    NonIntegerExponent { offset: usize },
    #[error("division by zero at offset {offset}")]
    DivisionByZero { offset: usize },
    #[error("trailing input at offset {offset}")]
    Trailing { offset: usize },
}

/// Maps names to symbol classes; unknown names are parameters.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    classes: HashMap<String, SymbolClass>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, class: SymbolClass) -> Self {
        self.insert(name, class);
        self
    }

    pub fn insert(&mut self, name: &str, class: SymbolClass) {
        self.classes.insert(name.to_string(), class);
    }

    pub fn symbol(&self, name: &str) -> Symbol {
        Symbol::new(name, self.classes.get(name).copied().unwrap_or(SymbolClass::Parameter))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a SymbolTable,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else if self.peek().is_none() {
            Err(ParseError::UnexpectedEnd)
        } else {
            Err(ParseError::Expected { offset: self.pos, expected })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                let at = self.pos;
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(ParseError::DivisionByZero { offset: at });
                }
                acc = acc / d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::NonIntegerExponent { offset: at });
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            return Err(ParseError::NonIntegerExponent { offset: at });
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut k: i64 = digits.parse().map_err(|_| ParseError::NonIntegerExponent { offset: at })?;
        if neg {
            k = -k;
        }
        if paren && !self.eat(b')') {
            return Err(ParseError::NonIntegerExponent { offset: at });
        }
        if k < 0 && base.is_zero() {
            return Err(ParseError::DivisionByZero { offset: at });
        }
        Ok(base.powi(k))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(c) = self.peek() else { return Err(ParseError::UnexpectedEnd) };
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')', ")")?;
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            if self.peek() == Some(b'(') {
                self.pos += 1;
                let arg = self.expr()?;
                self.expect(b')', ")")?;
                return match name {
                    "exp" => Ok(arg.exp()),
                    "ln" | "log" => Ok(arg.ln()),
                    "sin" => Ok(arg.sin()),
                    "cos" => Ok(arg.cos()),
                    "sinh" => Ok(arg.sinh()),
                    "cosh" => Ok(arg.cosh()),
                    "sqrt" => Ok(arg.sqrt()),
                    _ => Err(ParseError::UnknownFunction { offset: start, name: name.to_string() }),
                };
            }
            return Ok(Expr::symbol(self.table.symbol(name)));
        }
        let ch = std::str::from_utf8(&self.src[self.pos..]).ok().and_then(|s| s.chars().next()).unwrap_or('?');
        Err(ParseError::UnexpectedChar { offset: self.pos, ch })
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        let mut frac_part = String::new();
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let fs = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            frac_part = std::str::from_utf8(&self.src[fs..self.pos]).unwrap().to_string();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ParseError::UnexpectedChar { offset: start, ch: '.' });
        }
        let digits = format!("{}{}", int_part, frac_part);
        let n = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10)
            .map_err(|_| ParseError::UnexpectedChar { offset: start, ch: '.' })?;
        let d = BigInt::from(10u32).pow(frac_part.len().to_u32().unwrap_or(0));
        Ok(Expr::rational(Q::new(n, d)))
    }
}

pub(crate) fn parse_with(text: &str, table: &SymbolTable) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, table };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(ParseError::Trailing { offset: p.pos });
    }
    Ok(e)
}

impl Expr {
    /// Parse with every name treated as a parameter.
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        parse_with(text, &SymbolTable::new())
    }

    pub fn parse_with(text: &str, table: &SymbolTable) -> Result<Expr, ParseError> {
        parse_with(text, table)
    }
}
