//! Recursive-descent parser for the field grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('-')? power
//! power  := atom ('^' factor)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative; everything
//! else is left-associative. Exponents must fold to a constant.

use super::{Axis, Expr, Exponent, Func, Point};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, start));
                return Ok(out);
            };
            let tok = match c {
                '+' => {
                    self.pos += 1;
                    Tok::Plus
                }
                '-' => {
                    self.pos += 1;
                    Tok::Minus
                }
                '*' => {
                    self.pos += 1;
                    Tok::Star
                }
                '/' => {
                    self.pos += 1;
                    Tok::Slash
                }
                '^' => {
                    self.pos += 1;
                    Tok::Caret
                }
                '(' => {
                    self.pos += 1;
                    Tok::LParen
                }
                ')' => {
                    self.pos += 1;
                    Tok::RParen
                }
                c if c.is_ascii_digit() => self.number(start)?,
                c if c.is_ascii_alphabetic() || c == '_' => {
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                        self.pos += 1;
                    }
                    Tok::Ident(self.src[start..self.pos].to_owned())
                }
                c => {
                    return Err(ParseError::new(start, format!("unexpected character `{c}`")));
                }
            };
            out.push((tok, start));
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some('.') {
            self.pos += 1;
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return Err(ParseError::new(self.pos, "expected digits after decimal point"));
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            // Only a well-formed exponent suffix belongs to the literal;
            // `2e` must lex as the number 2 followed by the ident `e`.
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>()
            .map(Tok::Number)
            .map_err(|_| ParseError::new(start, format!("invalid number literal `{text}`")))
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    params: &'a [&'a str],
}

/// Parses `source` against the grammar; identifiers must be coordinates,
/// the unary functions, or members of `params`.
pub fn parse(source: &str, params: &[&str]) -> Result<Expr, ParseError> {
    let toks = Lexer { src: source, pos: 0 }.tokens()?;
    if matches!(toks[0].0, Tok::Eof) {
        return Err(ParseError::new(0, "empty input"));
    }
    let mut p = Parser { toks, at: 0, params };
    let e = p.expr()?;
    let (tok, off) = p.current();
    if !matches!(tok, Tok::Eof) {
        return Err(ParseError::new(off, "unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn current(&self) -> (&Tok, usize) {
        let (t, o) = &self.toks[self.at];
        (t, *o)
    }

    fn bump(&mut self) -> (Tok, usize) {
        let out = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        out
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.current().0 {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.current().0 {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.current().0, Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.power()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if matches!(self.current().0, Tok::Caret) {
            let (_, caret_off) = self.bump();
            let exp_tree = self.factor()?;
            let exponent = fold_exponent(&exp_tree, caret_off)?;
            return Ok(Expr::Pow(Box::new(base), exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, off) = self.bump();
        match tok {
            Tok::Number(v) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let e = self.expr()?;
                let (tok, off) = self.bump();
                if !matches!(tok, Tok::RParen) {
                    return Err(ParseError::new(off, "expected `)`"));
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                if matches!(self.current().0, Tok::LParen) {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(ParseError::new(off, format!("unknown function `{name}`")));
                    };
                    self.bump();
                    let arg = self.expr()?;
                    let (tok, close_off) = self.bump();
                    if !matches!(tok, Tok::RParen) {
                        return Err(ParseError::new(close_off, "expected `)`"));
                    }
                    return Ok(Expr::Apply(func, Box::new(arg)));
                }
                match name.as_str() {
                    "x" => Ok(Expr::Coord(Axis::X)),
                    "y" => Ok(Expr::Coord(Axis::Y)),
                    "z" => Ok(Expr::Coord(Axis::Z)),
                    _ if self.params.contains(&name.as_str()) => Ok(Expr::Param(name)),
                    _ => Err(ParseError::new(off, format!("unknown identifier `{name}`"))),
                }
            }
            _ => Err(ParseError::new(off, "expected expression")),
        }
    }
}

/// Exponents are restricted to constants; integer values multiply out exactly.
fn fold_exponent(tree: &Expr, caret_off: usize) -> Result<Exponent, ParseError> {
    if !is_constant(tree) {
        return Err(ParseError::new(caret_off, "exponent must be a constant"));
    }
    let v = tree
        .eval(Point::ORIGIN, &super::Params::new())
        .map_err(|e| ParseError::new(caret_off, format!("invalid constant exponent: {e}")))?;
    if !v.is_finite() {
        return Err(ParseError::new(caret_off, "exponent is not finite"));
    }
    if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 {
        Ok(Exponent::Int(v as i32))
    } else {
        Ok(Exponent::Real(v))
    }
}

fn is_constant(tree: &Expr) -> bool {
    match tree {
        Expr::Const(_) => true,
        Expr::Coord(_) | Expr::Param(_) => false,
        Expr::Neg(e) | Expr::Apply(_, e) => is_constant(e),
        Expr::Pow(e, _) => is_constant(e),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            is_constant(a) && is_constant(b)
        }
    }
}
