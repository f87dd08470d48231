//! Text syntax for polynomials, as used in catalog files and tests.
//!
//! ```text
//! poly   := ["+" | "-"] term (("+" | "-") term)*
//! term   := [coeff] factor (["*"] factor)* | coeff
//! coeff  := integer ["/" integer]
//! factor := ident ["^" integer]
//! ident  := letter (letter | digit | "_" | "'")*
//! ```
//!
//! Factors are multiplied left to right, so the order of odd generators in the
//! text determines the sign.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graded::{Algebra, GradedPoly, Monomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '/' => out.push((start, Tok::Slash)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                    i += 1;
                }
                out.push((start, Tok::Ident(input[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    input: input.to_string(),
                    pos: start,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    alg: &'a Arc<Algebra>,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        let pos = self.toks.get(self.pos).map_or(self.input.len(), |&(p, _)| p);
        Error::Parse {
            input: self.input.to_string(),
            pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            _ => {
                self.pos -= 1;
                Err(self.err("expected an integer"))
            }
        }
    }

    fn poly(&mut self) -> Result<GradedPoly> {
        let mut acc = GradedPoly::zero(self.alg);
        let mut first = true;
        while self.peek().is_some() {
            let negative = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Err(self.err("expected `+` or `-`")),
            };
            first = false;
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
        }
        if first {
            return Err(self.err("empty polynomial"));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GradedPoly> {
        let field = self.alg.field();
        let mut acc = match self.peek() {
            Some(Tok::Int(_)) => {
                let num = self.int()?;
                let den = if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    self.int()?
                } else {
                    BigInt::from(1)
                };
                let c = Scalar::from_ratio(field, &num, &den).map_err(|_| self.err("zero denominator"))?;
                GradedPoly::constant(self.alg, c)
            }
            Some(Tok::Ident(_)) => GradedPoly::one(self.alg),
            _ => return Err(self.err("expected a coefficient or generator")),
        };
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Ident(_)) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<GradedPoly> {
        let name = match self.next() {
            Some(Tok::Ident(n)) => n,
            _ => {
                self.pos -= 1;
                return Err(self.err("expected a generator"));
            }
        };
        let i = self
            .alg
            .index_of(&name)
            .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
        let e = if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let n = self.int()?;
            u32::try_from(n).map_err(|_| self.err("exponent out of range"))?
        } else {
            1
        };
        let one = Scalar::one(self.alg.field());
        Ok(GradedPoly::term(self.alg, Monomial::from_exponents(vec![(i, e)]), one))
    }
}

pub(crate) fn parse_poly(alg: &Arc<Algebra>, input: &str) -> Result<GradedPoly> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        input,
        toks,
        pos: 0,
        alg,
    };
    p.poly()
}
