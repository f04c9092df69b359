//! Parser for the polynomial text grammar:
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | symbol ('^' uint)? | '(' expr ')' | '-' factor
//! rational := int ('/' uint)?
//! ```
//!
//! Formatting (the `Display` impl on `MultiPoly`) emits graded-lex ordered
//! terms in this grammar, so `parse(format(p)) == p` on canonical forms.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::symbols::Context;

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

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        while self.pos < self.bytes.len() {
            let start = self.pos;
            let b = self.bytes[self.pos];
            match b {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push((Tok::Plus, start));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((Tok::Minus, start));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((Tok::Star, start));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((Tok::Caret, start));
                    self.pos += 1;
                }
                b'/' => {
                    out.push((Tok::Slash, start));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((Tok::LParen, start));
                    self.pos += 1;
                }
                b')' => {
                    out.push((Tok::RParen, start));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let digits = &self.src[start..self.pos];
                    let n = digits.parse::<BigInt>().map_err(|e| Error::Parse {
                        pos: start,
                        msg: format!("bad integer `{digits}`: {e}"),
                    })?;
                    out.push((Tok::Num(n), start));
                }
                c if c.is_ascii_alphabetic() => {
                    while self.pos < self.bytes.len()
                        && (self.bytes[self.pos].is_ascii_alphanumeric()
                            || self.bytes[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    out.push((Tok::Ident(self.src[start..self.pos].to_owned()), start));
                }
                other => {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("unexpected character `{}`", other as char),
                    });
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    ctx: &'a Context,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        self.idx += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-&self.factor()?)
            }
            Some(Tok::Num(n)) => {
                self.bump();
                // optional '/' uint
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) => {
                            if d == BigInt::from(0) {
                                return Err(self.err("zero denominator"));
                            }
                            Ok(MultiPoly::constant(self.ctx, Rational::new(n, d)))
                        }
                        _ => Err(self.err("expected denominator after `/`")),
                    }
                } else {
                    Ok(MultiPoly::constant(self.ctx, Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                let var = MultiPoly::var(self.ctx, &name).map_err(|_| Error::Parse {
                    pos: self.toks[self.idx - 1].1,
                    msg: format!("undeclared symbol `{name}`"),
                })?;
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(e)) => {
                            let exp =
                                u32::try_from(&e).map_err(|_| self.err("exponent too large"))?;
                            Ok(var.pow(exp))
                        }
                        _ => Err(self.err("expected integer exponent after `^`")),
                    }
                } else {
                    Ok(var)
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_poly(text: &str, ctx: &Context) -> Result<MultiPoly> {
    let toks = Lexer::new(text).tokens()?;
    let mut parser = Parser {
        toks,
        idx: 0,
        ctx,
        end: text.len(),
    };
    let p = parser.expr()?;
    if parser.idx != parser.toks.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(p)
}

/// Convenience for constant one used by a few callers.
pub fn poly_one(ctx: &Context) -> MultiPoly {
    MultiPoly::constant(ctx, Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::symbols::SymbolContext;

    fn ctx() -> Context {
        SymbolContext::new(&["x1", "x2", "lambda"]).unwrap()
    }

    #[test]
    fn single_negative_term() {
        let p = parse_poly("-1/2*x2", &ctx()).unwrap();
        assert_eq!(p, MultiPoly::var(&ctx(), "x2").unwrap().scale(&rat(-1, 2)));
        assert_eq!(p.to_string(), "-1/2*x2");
    }

    #[test]
    fn cancellation_to_zero() {
        let p = parse_poly("x1*x2 - x2*x1", &ctx()).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn parameter_times_coordinate() {
        let p = parse_poly("lambda*x1", &ctx()).unwrap();
        let q = &MultiPoly::var(&ctx(), "lambda").unwrap() * &MultiPoly::var(&ctx(), "x1").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn undeclared_symbol_reports_position() {
        match parse_poly("x1 + y7", &ctx()) {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 5);
                assert!(msg.contains("y7"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        match parse_poly("x1 + ", &ctx()) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_poly("x1 x2", &ctx()).is_err());
        assert!(parse_poly("x1 / 2", &ctx()).is_err());
    }

    #[test]
    fn parens_exponents_nesting() {
        let p = parse_poly("(x1 + x2)*(x1 - x2) + x2^2", &ctx()).unwrap();
        assert_eq!(p, MultiPoly::var(&ctx(), "x1").unwrap().pow(2));
        let q = parse_poly("--x1", &ctx()).unwrap();
        assert_eq!(q, MultiPoly::var(&ctx(), "x1").unwrap());
    }

    #[test]
    fn format_parse_round_trip() {
        let samples = [
            "x1^2 + x2 + 3",
            "-x1*x2 + 1/2",
            "lambda*x1 - 2/3*x2^4",
            "0",
            "-5/7",
        ];
        for s in samples {
            let p = parse_poly(s, &ctx()).unwrap();
            let q = parse_poly(&p.to_string(), &ctx()).unwrap();
            assert_eq!(p, q);
        }
    }
}
