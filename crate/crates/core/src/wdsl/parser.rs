//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := base ("^" int)?
//! base   := number | "i" | "pi" | "G" | ident | "(" expr ")"
//!         | "sqrt(" expr ")" | "exp(" expr ")" | "-" base
//! ```
//!
//! Unary minus applies to a `base`, so `-G^2` is `(-G)^2`.

use super::expr::{Expr, MAX_EXPONENT};
use crate::prelude::*;
use crate::{Error, Result};

const BASE_START: &[&str] = &["number", "i", "pi", "G", "parameter", "\"(\"", "sqrt(", "exp(", "\"-\""];

pub(crate) struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    is_param: &'a dyn Fn(&str) -> bool,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, is_param: &'a dyn Fn(&str) -> bool) -> Self {
        Parser { src: src.as_bytes(), pos: 0, is_param }
    }

    pub(crate) fn parse(mut self) -> Result<Expr> {
        let e = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.expected(&["\"+\"", "\"-\"", "\"*\"", "\"/\"", "\"^\"", "end of input"]));
        }
        Ok(e)
    }

    fn expected(&self, what: &[&str]) -> Error {
        Error::Syntax { offset: self.pos, expected: what.iter().map(|s| s.to_string()).collect() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::mul(lhs, self.factor()?);
            } else if self.eat(b'/') {
                lhs = Expr::div(lhs, self.factor()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.eat(b'^') {
            let n = self.int()?;
            Ok(Expr::pow(base, n))
        } else {
            Ok(base)
        }
    }

    fn int(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.eat(b'-');
        self.skip_ws();
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.expected(&["integer exponent"]));
        }
        let text = core::str::from_utf8(&self.src[digits_start..self.pos]).unwrap_or("");
        let magnitude: i64 = text.parse().unwrap_or(i64::MAX);
        if magnitude > MAX_EXPONENT as i64 {
            return Err(Error::Syntax {
                offset: start,
                expected: vec![format!("integer exponent with |n| <= {}", MAX_EXPONENT)],
            });
        }
        let n = magnitude as i32;
        Ok(if negative { -n } else { n })
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.expected(&["\")\""]));
                }
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::neg(self.base()?))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.word(),
            _ => Err(self.expected(BASE_START)),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let s = self.src;
        let mut p = self.pos;
        let digits = |p: &mut usize| {
            let b = *p;
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - b
        };
        let mut n = digits(&mut p);
        if p < s.len() && s[p] == b'.' {
            p += 1;
            n += digits(&mut p);
        }
        if n == 0 {
            return Err(self.expected(&["number"]));
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) > 0 {
                p = q;
            }
        }
        let text = core::str::from_utf8(&s[start..p]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => {
                self.pos = p;
                Ok(Expr::Num(x))
            }
            _ => Err(self.expected(&["finite number"])),
        }
    }

    fn word(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let word = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match word {
            "G" => Ok(Expr::Var),
            "i" => Ok(Expr::ImagUnit),
            "pi" => Ok(Expr::Pi),
            "sqrt" | "exp" => {
                if self.src.get(self.pos) != Some(&b'(') {
                    return Err(self.expected(&["\"(\""]));
                }
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.expected(&["\")\""]));
                }
                Ok(if word == "sqrt" { Expr::sqrt(inner) } else { Expr::exp(inner) })
            }
            name if (self.is_param)(name) => Ok(Expr::param(name)),
            name => Err(Error::UnknownParameter(name.to_owned())),
        }
    }
}

pub(crate) fn is_reserved(name: &str) -> bool {
    matches!(name, "G" | "i" | "pi" | "sqrt" | "exp")
}
