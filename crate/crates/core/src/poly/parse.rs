use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Monomial, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column inside the parsed string.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(ParseError { column: col, message: format!("unexpected character '{c}'") }),
        };
        out.push((t, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    names: &'a [String],
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.col(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.names.len();
        let mut acc = Polynomial::zero(n);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    if self.peek() == Some(&Tok::Star) {
                        return self.err("'**' is not an operator; write powers with '^'");
                    }
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::LParen) => {
                    return self.err("implicit multiplication is not allowed; insert '*'");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(-&f);
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(e)) => {
                    let e: u32 = match u32::try_from(&e) {
                        Ok(e) if e <= 1000 => e,
                        _ => return self.err("exponent too large"),
                    };
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a non-negative integer exponent after '^'"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Tok::Num(a)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(b)) if !b.is_zero() => {
                            self.pos += 1;
                            Ok(Polynomial::constant(n, Rational::new(a, b)))
                        }
                        Some(Tok::Num(_)) => self.err("zero denominator"),
                        _ => self.err("expected an integer denominator after '/'"),
                    }
                } else {
                    Ok(Polynomial::constant(n, Rational::from_integer(a)))
                }
            }
            Some(Tok::Ident(name)) => match self.names.iter().position(|v| *v == name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::term(Monomial::var(n, i), Rational::from_integer(1.into())))
                }
                None => self.err(format!("unknown variable '{name}'")),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse a polynomial in the variables `names`.
///
/// Operators are `+ - * ^`, rational literals are `a/b`, and multiplication
/// must be explicit.
pub fn parse_polynomial(src: &str, names: &[String]) -> Result<Polynomial, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, names, end_col: src.chars().count() + 1 };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Parse a rational literal such as `-3/2` or `4`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let p = parse_polynomial(src, &[])?;
    match p.len() {
        0 => Ok(Rational::zero()),
        _ => Ok(p.constant_term()),
    }
}
