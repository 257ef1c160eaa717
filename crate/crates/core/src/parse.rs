//! Text format for polynomials and ideal files.
//!
//! ```text
//! # comment
//! ring GF(32003) vars 4
//! ideal cubic:
//!   x0*x2 - x1^2
//!   x1*x3 - x2^2
//!   x0*x3 - x1*x2
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{Field, Poly, Ring};
use crate::groebner::Ideal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: generator `{poly}` is not homogeneous")]
    Inhomogeneous { line: usize, col: usize, poly: String },
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, col, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str, line: usize, col0: usize, nvars: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut lx = Lexer { src: src.as_bytes(), toks: Vec::new() };
    let mut i = 0;
    while i < lx.src.len() {
        let c = lx.src[i];
        let col = col0 + i;
        match c {
            b' ' | b'\t' => {
                i += 1;
                continue;
            }
            b'+' => lx.toks.push((Tok::Plus, col)),
            b'-' => lx.toks.push((Tok::Minus, col)),
            b'*' => lx.toks.push((Tok::Star, col)),
            b'/' => lx.toks.push((Tok::Slash, col)),
            b'^' => lx.toks.push((Tok::Caret, col)),
            b'(' => lx.toks.push((Tok::LParen, col)),
            b')' => lx.toks.push((Tok::RParen, col)),
            b'0'..=b'9' => {
                let start = i;
                while i < lx.src.len() && lx.src[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().unwrap();
                lx.toks.push((Tok::Num(n), col));
                continue;
            }
            b'x' => {
                let start = i + 1;
                i += 1;
                while i < lx.src.len() && lx.src[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(syntax(line, col, "expected a variable index after `x`"));
                }
                let k: usize = src[start..i].parse().map_err(|_| syntax(line, col, "variable index too large"))?;
                if k >= nvars {
                    return Err(syntax(line, col, format!("x{k} is outside the ring (vars 0..{})", nvars - 1)));
                }
                lx.toks.push((Tok::Var(k), col));
                continue;
            }
            _ => return Err(syntax(line, col, format!("unexpected character `{}`", c as char))),
        }
        i += 1;
    }
    Ok(lx.toks)
}

struct Parser<'a> {
    ring: Ring,
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        syntax(self.line, self.col(), msg)
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::LParen) => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .ok()
                        .filter(|&e: &u32| e <= 60)
                        .ok_or_else(|| syntax(self.line, col, "exponent must be at most 60"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected an integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut den = BigInt::one();
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) => {
                            self.pos += 1;
                            den = d;
                        }
                        _ => return Err(self.err("expected an integer denominator")),
                    }
                }
                if den == BigInt::from(0) {
                    return Err(syntax(self.line, col, "zero denominator"));
                }
                let q = BigRational::new(n, den);
                let c = self.ring.field().from_rational(&q).map_err(|e| syntax(self.line, col, e.to_string()))?;
                Ok(self.ring.constant(c))
            }
            Some(Tok::Var(k)) => {
                self.pos += 1;
                Ok(self.ring.var(k))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.err("expected a number, variable or `(`")),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

fn parse_poly_at(ring: Ring, src: &str, line: usize, col0: usize) -> Result<Poly, ParseError> {
    let toks = lex(src, line, col0, ring.nvars())?;
    let mut p = Parser { ring, toks: &toks, pos: 0, line, end_col: col0 + src.len() };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("unexpected token"));
    }
    Ok(out)
}

/// Parses one polynomial (possibly inhomogeneous).
pub fn parse_poly(ring: Ring, src: &str) -> Result<Poly, ParseError> {
    parse_poly_at(ring, src, 1, 1)
}

/// Parses a homogeneous generator.
pub fn parse_form(ring: Ring, src: &str) -> Result<Poly, ParseError> {
    let p = parse_poly(ring, src)?;
    if !p.is_homogeneous() {
        return Err(ParseError::Inhomogeneous { line: 1, col: 1, poly: p.to_string() });
    }
    Ok(p)
}

/// Parses a comma-separated list of homogeneous forms, e.g. `"x0, x1*x2"`.
pub fn parse_form_list(ring: Ring, src: &str) -> Result<Vec<Poly>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in src.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let col = offset + lead + 1;
        let text = piece.trim();
        if text.is_empty() {
            return Err(syntax(1, col, "empty generator"));
        }
        let p = parse_poly_at(ring, text, 1, col)?;
        if !p.is_homogeneous() {
            return Err(ParseError::Inhomogeneous { line: 1, col, poly: p.to_string() });
        }
        out.push(p);
        offset += piece.len() + 1;
    }
    Ok(out)
}

/// `GF(p)` or `QQ`.
pub fn parse_field(src: &str) -> Option<Field> {
    let s = src.trim();
    if s == "QQ" {
        return Some(Field::Rationals);
    }
    let inner = s.strip_prefix("GF(")?.strip_suffix(')')?;
    Field::prime(inner.trim().parse().ok()?).ok()
}

/// A parsed ideal file: a ring and named ideals in file order.
#[derive(Clone, Debug)]
pub struct IdealFile {
    pub ring: Ring,
    pub ideals: Vec<(String, Ideal)>,
}

impl IdealFile {
    pub fn get(&self, name: &str) -> Option<&Ideal> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    pub fn first(&self) -> Option<&Ideal> {
        self.ideals.first().map(|(_, i)| i)
    }

    /// Re-reads the ideals in another ring with the same variables (used to
    /// override the coefficient field).
    pub fn with_field(&self, field: Field) -> Result<IdealFile, ParseError> {
        parse_ideal_file(&self.to_string().replacen(&self.ring.field().to_string(), &field.to_string(), 1))
    }
}

impl fmt::Display for IdealFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {} vars {}", self.ring.field(), self.ring.nvars())?;
        for (name, ideal) in &self.ideals {
            writeln!(f, "ideal {name}:")?;
            for g in ideal.generators() {
                writeln!(f, "  {g}")?;
            }
        }
        Ok(())
    }
}

pub fn parse_ideal_file(text: &str) -> Result<IdealFile, ParseError> {
    let mut ring: Option<Ring> = None;
    let mut ideals: Vec<(String, Vec<Poly>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix("ring ") {
            if ring.is_some() {
                return Err(syntax(line, indent + 1, "duplicate ring header"));
            }
            let Some((fspec, vspec)) = rest.split_once(" vars ") else {
                return Err(syntax(line, indent + 1, "expected `ring <field> vars <n>`"));
            };
            let field = parse_field(fspec)
                .ok_or_else(|| syntax(line, indent + 6, format!("unknown field `{}`", fspec.trim())))?;
            let n: usize = vspec
                .trim()
                .parse()
                .map_err(|_| syntax(line, indent + 1, "variable count must be an integer"))?;
            ring = Some(Ring::new(field, n).map_err(|e| syntax(line, indent + 1, e.to_string()))?);
            continue;
        }
        let Some(r) = ring else {
            return Err(syntax(line, indent + 1, "missing `ring` header before content"));
        };
        if let Some(rest) = trimmed.strip_prefix("ideal ") {
            let Some(name) = rest.trim().strip_suffix(':') else {
                return Err(syntax(line, indent + 1, "expected `ideal <name>:`"));
            };
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(syntax(line, indent + 7, "ideal names must be a single word"));
            }
            if ideals.iter().any(|(n, _)| n == name) {
                return Err(syntax(line, indent + 7, format!("duplicate ideal `{name}`")));
            }
            ideals.push((name.to_string(), Vec::new()));
            continue;
        }
        let Some(cur) = ideals.last_mut() else {
            return Err(syntax(line, indent + 1, "generator outside an `ideal` block"));
        };
        let p = parse_poly_at(r, trimmed, line, indent + 1)?;
        if !p.is_homogeneous() {
            return Err(ParseError::Inhomogeneous { line, col: indent + 1, poly: p.to_string() });
        }
        cur.1.push(p);
    }
    let ring = ring.ok_or_else(|| syntax(1, 1, "missing `ring` header"))?;
    let ideals = ideals
        .into_iter()
        .map(|(n, g)| {
            let i = Ideal::new(ring, g).expect("generators validated above");
            (n, i)
        })
        .collect();
    Ok(IdealFile { ring, ideals })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Ring {
        Ring::new(Field::default(), 4).unwrap()
    }

    #[test]
    fn conic() {
        let p = parse_poly(r(), "x0*x2 - x1^2").unwrap();
        assert_eq!(p.to_string(), "-x1^2 + x0*x2");
        let q = parse_poly(r(), "-x1^2 + x0 x2").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn juxtaposition_fractions_and_parens() {
        let p = parse_poly(r(), "2x0x1 - 1/2 (x0 + x1)^2").unwrap();
        let q = parse_poly(r(), "-1/2*x0^2 + x0*x1 - 1/2*x1^2").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn inhomogeneous_generator() {
        let e = parse_form(r(), "x0 + 1").unwrap_err();
        assert!(matches!(e, ParseError::Inhomogeneous { .. }));
    }

    #[test]
    fn error_locations() {
        let e = parse_ideal_file("ring GF(32003) vars 4\nideal a:\n  x0 + * x1\n").unwrap_err();
        assert_eq!(e, ParseError::Syntax { line: 3, col: 8, msg: "expected a number, variable or `(`".into() });
        let e = parse_poly(r(), "x0 + x9").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { col: 6, .. }));
        let e = parse_poly(r(), "(x0").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { col: 4, .. }));
    }

    #[test]
    fn file_round_trip() {
        let src = "ring GF(32003) vars 4\nideal cubic:\n  -x1^2 + x0*x2\n  -x2^2 + x1*x3\n  -x1*x2 + x0*x3\n";
        let f = parse_ideal_file(src).unwrap();
        assert_eq!(f.to_string(), src);
        assert_eq!(f.get("cubic").unwrap().generators().len(), 3);
        let q = f.with_field(Field::Rationals).unwrap();
        assert_eq!(q.ring.field(), Field::Rationals);
    }

    #[test]
    fn form_lists() {
        let v = parse_form_list(r(), "x0, x1*x2").unwrap();
        assert_eq!(v.len(), 2);
        let e = parse_form_list(r(), "x0, x1 +").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { col: 9, .. }));
    }
}
