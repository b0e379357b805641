//! Text grammar for polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' integer]
//! atom   := integer ['/' integer] | identifier | '(' expr ')'
//! ```
//! Whitespace (including newlines) is ignored between tokens.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RingContext};
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: l0, column: c0 });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, column: c0 });
        } else if "+-*^/()".contains(c) {
            chars.next();
            column += 1;
            out.push(Token { tok: Tok::Sym(c), line: l0, column: c0 });
        } else {
            return Err(Error::Parse { line, column, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<RingContext>,
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Parse { line, column, message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(k)) => {
                    let k: u32 = match u32::try_from(&k) {
                        Ok(k) if k <= u16::MAX as u32 => k,
                        _ => return self.err("exponent too large"),
                    };
                    self.pos += 1;
                    Ok(base.pow(k))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut value = Rat::from(n);
                if self.eat('/') {
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            value = &value / &Rat::from(d);
                        }
                        Some(Tok::Int(_)) => return self.err("division by zero"),
                        _ => return self.err("expected an integer denominator"),
                    }
                }
                if let crate::poly::Field::Prime(p) = self.ring.field() {
                    if (value.denom() % BigInt::from(p)) == BigInt::from(0) {
                        return self.err(format!("denominator divisible by {p}"));
                    }
                }
                Ok(Polynomial::constant(self.ring, value))
            }
            Some(Tok::Ident(name)) => match self.ring.index_of(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::variable(self.ring, i))
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Sym(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses one polynomial over `ring`.
pub fn parse_polynomial(ring: &Arc<RingContext>, src: &str) -> Result<Polynomial> {
    let toks = lex(src)?;
    let end = end_position(src);
    let mut p = Parser { ring, toks, pos: 0, end };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let f = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses a list of polynomials separated by `;` or newlines-with-`;`.
/// Lines starting with `#` are comments. Error positions refer to `src`.
pub fn parse_polynomial_list(ring: &Arc<RingContext>, src: &str) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let cleaned: String = src
        .lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    for chunk in cleaned.split(';') {
        if !chunk.trim().is_empty() {
            out.push(parse_polynomial(ring, chunk).map_err(|e| shift(e, line, column))?);
        }
        for c in chunk.chars().chain(std::iter::once(';')) {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
    }
    Ok(out)
}

fn shift(e: Error, line: usize, column: usize) -> Error {
    match e {
        Error::Parse { line: l, column: c, message } => Error::Parse {
            line: line + l - 1,
            column: if l == 1 { column + c - 1 } else { c },
            message,
        },
        other => other,
    }
}

fn end_position(src: &str) -> (usize, usize) {
    let mut line = 1;
    let mut column = 1;
    for c in src.chars() {
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (line, column)
}
