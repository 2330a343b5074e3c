//! Text grammar for quadrature polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'X'k | 'P'k | 'i' | '(' expr ')'
//! ```
//!
//! Products keep their written order and are normal ordered as they are built.

use thiserror::Error;

use crate::algebra::QuadPolynomial;
use crate::rational::{parse_decimal, GaussQ};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    X(usize),
    P(usize),
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let err = |msg: String| ParseError { line: l0, column: c0, message: msg };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            'i' => Some(Tok::I),
            _ => None,
        };
        if let Some(t) = single {
            toks.push((t, l0, c0));
            i += 1;
            col += 1;
            continue;
        }
        if c == 'X' || c == 'P' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j == start {
                return Err(err(format!("expected mode index after '{c}'")));
            }
            let k: usize = chars[start..j]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| err("mode index out of range".into()))?;
            toks.push((if c == 'X' { Tok::X(k) } else { Tok::P(k) }, l0, c0));
            col += j - i;
            i = j;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                j += 1;
            }
            // exponent part, only if followed by a digit or signed digit
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            toks.push((Tok::Num(chars[i..j].iter().collect()), l0, c0));
            col += j - i;
            i = j;
            continue;
        }
        return Err(err(format!("unexpected character '{c}'")));
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (_, line, column) = &self.toks[self.pos];
        ParseError { line: *line, column: *column, message: msg.into() }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<QuadPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QuadPolynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let d = self.unary()?;
                    if !d.is_scalar() {
                        return Err(self.err("division by a non-scalar expression"));
                    }
                    let inv = d.scalar_part().inv().ok_or_else(|| self.err("division by zero"))?;
                    acc = acc.scale(&inv);
                }
                Tok::Num(_) | Tok::X(_) | Tok::P(_) | Tok::I | Tok::LParen => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QuadPolynomial, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QuadPolynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Num(s) => {
                let e: u32 = s.parse().map_err(|_| {
                    self.pos -= 1;
                    self.err(format!("exponent must be a non-negative integer, got '{s}'"))
                })?;
                Ok(base.pow(e))
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected integer exponent after '^'"))
            }
        }
    }

    fn atom(&mut self) -> Result<QuadPolynomial, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) => {
                let v = parse_decimal(&s).ok_or_else(|| self.err(format!("bad number '{s}'")))?;
                self.bump();
                Ok(QuadPolynomial::scalar(GaussQ::real(v)))
            }
            Tok::X(k) => {
                self.bump();
                Ok(QuadPolynomial::x(k))
            }
            Tok::P(k) => {
                self.bump();
                Ok(QuadPolynomial::p(k))
            }
            Tok::I => {
                self.bump();
                Ok(QuadPolynomial::scalar(GaussQ::i()))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(self.err("unexpected end of input")),
            t => Err(self.err(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses a polynomial expression such as `(X0^2 + P0^2)^2` or `1/2 * X0 P1 + (1 - 2 i)`.
pub fn parse_polynomial(src: &str) -> Result<QuadPolynomial, ParseError> {
    let lexer = lex(src)?;
    let mut p = Parser { toks: lexer.toks, pos: 0 };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

impl std::str::FromStr for QuadPolynomial {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;
    use crate::rational::q;

    #[test]
    fn parses_kerr() {
        let h = parse_polynomial("(X0^2+P0^2)^2").unwrap();
        let x2 = QuadPolynomial::x_pow(0, 2);
        let p2 = QuadPolynomial::p_pow(0, 2);
        assert_eq!(h, (&x2 + &p2).pow(2));
    }

    #[test]
    fn juxtaposition_and_order() {
        let a = parse_polynomial("P0 X0").unwrap();
        let b = parse_polynomial("X0 P0 - i/2").unwrap();
        assert_eq!(a, b);
        let c = parse_polynomial("2 X0 * P1 / 4").unwrap();
        assert_eq!(c, QuadPolynomial::monomial(Monomial::from_modes(vec![(1, 0), (0, 1)]), GaussQ::real(q(1, 2))));
    }

    #[test]
    fn complex_literals() {
        let a = parse_polynomial("(1.5 - 0.25 i) * X0").unwrap();
        assert_eq!(a.coeff(&Monomial::single(0, 1, 0)), GaussQ::new(q(3, 2), q(-1, 4)));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_polynomial("X0 + \n  Q1").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_polynomial("X0 / X1").unwrap_err();
        assert!(e.message.contains("non-scalar"));
        let e = parse_polynomial("(X0 + P0").unwrap_err();
        assert!(e.message.contains("')'"));
        assert!(parse_polynomial("X0^-1").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        for src in ["(X0^2+P0^2)^2", "X0^3 P1 - (2/3 + 1/7 i) * P0 X0 X1", "i*(X0 P0 - P0 X0) + 5", "0"] {
            let h = parse_polynomial(src).unwrap();
            let back = parse_polynomial(&h.to_string()).unwrap();
            assert_eq!(h, back, "{src}");
        }
    }
}
