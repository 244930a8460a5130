//! Parser for the polynomial text grammar.
//!
//! Literals are integers or rationals (`-3`, `5/2`), variables come from the
//! fixed alphabet, operators are `+ - * ^` with parentheses; implicit
//! multiplication is not accepted. The Laurent entry point additionally
//! allows negative exponents directly on the distinguished variable
//! (`z^-1`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::laurent::LaurentPoly;
use super::poly::{MPoly, Rat};
use super::var::Var;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Number(BigInt),
    Ident(String),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::from_str(&input[start..i]).expect("digits");
                out.push((start, Tok::Number(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(input[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character `{}`", &input[i..i + 1]),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    /// Variable allowed to carry negative exponents, when parsing Laurent input.
    distinguished: Option<Var>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.here(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn laurent_var(&self) -> Var {
        self.distinguished.unwrap_or(Var::Z)
    }

    fn expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut negate = false;
        while self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = !negate;
        }
        let (base, base_is_distinguished) = self.atom()?;
        let value = if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.exponent()?;
            if e < 0 {
                if !base_is_distinguished {
                    return self.err(
                        "negative exponents are only allowed on the distinguished chart variable",
                    );
                }
                LaurentPoly::var_power(self.laurent_var(), e)
            } else {
                let mut acc = LaurentPoly::one(self.laurent_var());
                let mut b = base;
                let mut e = e as u32;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc.mul(&b);
                    }
                    e >>= 1;
                    if e > 0 {
                        b = b.mul(&b);
                    }
                }
                acc
            }
        } else {
            base
        };
        Ok(if negate { value.neg() } else { value })
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            neg = true;
        }
        match self.bump() {
            Some(Tok::Number(n)) => {
                let e: i64 = match n.try_into() {
                    Ok(e) => e,
                    Err(_) => return self.err("exponent too large"),
                };
                if e > 1000 {
                    return self.err("exponent too large");
                }
                Ok(if neg { -e } else { e })
            }
            _ => self.err("expected integer exponent after `^`"),
        }
    }

    /// Returns the value and whether the atom was exactly the distinguished variable.
    fn atom(&mut self) -> Result<(LaurentPoly, bool), ParseError> {
        match self.bump() {
            Some(Tok::Number(n)) => {
                // optional rational literal `p/q`
                let c = if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.bump() {
                        Some(Tok::Number(d)) => {
                            if d == BigInt::from(0) {
                                return self.err("zero denominator");
                            }
                            Rat::new(n, d)
                        }
                        _ => return self.err("expected denominator after `/`"),
                    }
                } else {
                    Rat::from_integer(n)
                };
                Ok((
                    LaurentPoly::from_poly(self.laurent_var(), MPoly::constant(c)),
                    false,
                ))
            }
            Some(Tok::Ident(name)) => match Var::from_name(&name) {
                Some(v) => {
                    let is_dist = self.distinguished == Some(v);
                    Ok((
                        LaurentPoly::from_poly(self.laurent_var(), MPoly::var(v)),
                        is_dist,
                    ))
                }
                None => Err(ParseError {
                    position: self.toks[self.pos - 1].0,
                    message: format!("unknown variable `{name}`"),
                }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok((inner, false))
            }
            _ => self.err("expected a number, variable, or parenthesized expression"),
        }
    }
}

fn run(input: &str, distinguished: Option<Var>) -> Result<LaurentPoly, ParseError> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: input.len(),
        distinguished,
    };
    let value = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(value)
}

/// Parse an ordinary polynomial (no negative exponents anywhere).
pub fn parse_mpoly(input: &str) -> Result<MPoly, ParseError> {
    let l = run(input, None)?;
    l.to_poly().ok_or_else(|| ParseError {
        position: 0,
        message: "negative exponents are not allowed here".to_string(),
    })
}

/// Parse a Laurent polynomial in the given distinguished variable.
pub fn parse_laurent(input: &str, var: Var) -> Result<LaurentPoly, ParseError> {
    run(input, Some(var))
}

impl FromStr for MPoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_mpoly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{rat, rat_i};

    #[test]
    fn literals_and_operators() {
        let p = parse_mpoly("5/2*v - 3").unwrap();
        assert_eq!(
            p,
            MPoly::var(Var::V)
                .scale(&rat(5, 2))
                .sub(&MPoly::constant(rat_i(3)))
        );
        let q = parse_mpoly("(z0+z1)^4").unwrap();
        assert_eq!(q, MPoly::var(Var::Z0).add(&MPoly::var(Var::Z1)).pow(4));
    }

    #[test]
    fn implicit_multiplication_rejected() {
        assert!(parse_mpoly("2z0").is_err());
        assert!(parse_mpoly("z0 z1").is_err());
    }

    #[test]
    fn unknown_variable_rejected() {
        let e = parse_mpoly("z0 + q").unwrap_err();
        assert!(e.message.contains("unknown variable"));
    }

    #[test]
    fn laurent_negative_power() {
        let l = parse_laurent("z^-1*t + z", Var::Z).unwrap();
        assert_eq!(l.shift(), -1);
        assert_eq!(l.coeff_at(-1), MPoly::var(Var::T));
        assert_eq!(l.coeff_at(1), MPoly::one());
        // negative powers only on the distinguished variable
        assert!(parse_laurent("t^-1", Var::Z).is_err());
        assert!(parse_mpoly("z^-1").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "z0*x2^4 + z1*x3^4",
            "-5/2*v - 1",
            "v^2 + 2*v*w + w^2",
            "1/3",
            "0",
            "beta^5 + beta",
        ] {
            let p = parse_mpoly(s).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(parse_mpoly(&p.to_string()).unwrap(), p);
        }
    }
}
