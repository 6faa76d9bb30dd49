//! Text grammar for forms:
//!
//! ```text
//! form   := term (('+'|'-') term)*
//! term   := [coeff '*'] factor ('*' factor)*
//! factor := var ['^' exp]
//! var    := name index        name in {t, x, y, u}
//! coeff  := integer | integer '/' integer
//! ```
//!
//! Whitespace is insignificant. A leading sign on the first term and bare
//! constant terms (`0`, `5`) are accepted.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::Field;

use super::form::GradedForm;

/// A variable reference as written in the text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarRef {
    pub name: char,
    pub index: usize,
}

/// One parsed term: signed rational coefficient and variable powers.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTerm {
    pub num: BigInt,
    pub den: BigInt,
    pub factors: Vec<(VarRef, u32)>,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in {:?}", self.pos, self.src))
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

/// Parses text into raw terms without fixing a variable layout.
pub fn parse_terms(src: &str) -> Result<Vec<RawTerm>> {
    let mut lx = Lexer::new(src);
    if lx.chars.is_empty() {
        return Err(lx.err("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut sign = match lx.peek() {
        Some('-') => {
            lx.bump();
            -1
        }
        Some('+') => {
            lx.bump();
            1
        }
        _ => 1,
    };
    loop {
        let mut term = parse_term(&mut lx)?;
        if sign < 0 {
            term.num = -term.num;
        }
        terms.push(term);
        match lx.bump() {
            None => break,
            Some('+') => sign = 1,
            Some('-') => sign = -1,
            Some(_) => {
                lx.pos -= 1;
                return Err(lx.err("expected '+' or '-'"));
            }
        }
    }
    Ok(terms)
}

fn parse_term(lx: &mut Lexer<'_>) -> Result<RawTerm> {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut factors = Vec::new();
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = lx.digits()?.parse().unwrap();
                let mut d = BigInt::one();
                if lx.peek() == Some('/') {
                    lx.bump();
                    d = lx.digits()?.parse().unwrap();
                    if d == BigInt::from(0) {
                        return Err(lx.err("zero denominator"));
                    }
                }
                num *= n;
                den *= d;
            }
            Some(c @ ('t' | 'x' | 'y' | 'u')) => {
                lx.bump();
                let index: usize = lx.digits()?.parse().map_err(|_| lx.err("variable index too large"))?;
                let mut exp = 1u32;
                if lx.peek() == Some('^') {
                    lx.bump();
                    exp = lx.digits()?.parse().map_err(|_| lx.err("exponent too large"))?;
                }
                factors.push((VarRef { name: c, index }, exp));
            }
            _ => return Err(lx.err("expected coefficient or variable")),
        }
        if lx.peek() == Some('*') {
            lx.bump();
        } else {
            break;
        }
    }
    Ok(RawTerm { num, den, factors })
}

/// Parses text into a form, mapping each variable to a position with `resolve`.
///
/// The degree is inferred from the terms; `declared_degree` is required when
/// the text is the zero polynomial and is checked against the terms otherwise.
pub fn parse_form_with<F>(
    src: &str,
    field: Field,
    nvars: usize,
    declared_degree: Option<u32>,
    resolve: F,
) -> Result<GradedForm>
where
    F: Fn(VarRef) -> Option<usize>,
{
    let raw = parse_terms(src)?;
    let mut terms = Vec::with_capacity(raw.len());
    let mut degree: Option<u32> = declared_degree;
    for t in raw {
        let c = field.from_ratio(&t.num, &t.den)?;
        if c.is_zero() {
            continue;
        }
        let mut exps = vec![0u32; nvars];
        for (v, e) in &t.factors {
            let pos = resolve(*v).ok_or_else(|| Error::Parse(format!("unknown variable {}{}", v.name, v.index)))?;
            if pos >= nvars {
                return Err(Error::Parse(format!(
                    "variable {}{} outside {nvars} variables",
                    v.name, v.index
                )));
            }
            exps[pos] += e;
        }
        let d: u32 = exps.iter().sum();
        match degree {
            None => degree = Some(d),
            Some(expected) if expected != d => {
                return Err(Error::Parse(format!(
                    "inhomogeneous input: term of degree {d}, expected {expected}"
                )))
            }
            _ => {}
        }
        terms.push((exps, c));
    }
    let degree = degree.ok_or_else(|| Error::Parse("zero polynomial needs a declared degree".into()))?;
    GradedForm::from_terms(field, nvars, degree, terms)
}

/// Parses a form whose variables are `t_i`/`x_i`/`u_i` at position `i`.
///
/// The variable count is one more than the largest index unless given.
pub fn parse_form(src: &str, field: Field, nvars: Option<usize>) -> Result<GradedForm> {
    let raw = parse_terms(src)?;
    if raw.iter().flat_map(|t| &t.factors).any(|(v, _)| v.name == 'y') {
        return Err(Error::Parse("y-variables need an ambient frame".into()));
    }
    let inferred = raw
        .iter()
        .flat_map(|t| &t.factors)
        .map(|(v, _)| v.index + 1)
        .max()
        .unwrap_or(0);
    let nvars = nvars.unwrap_or(inferred).max(inferred);
    let declared = if raw.iter().all(|t| t.factors.is_empty()) {
        Some(0)
    } else {
        None
    };
    parse_form_with(src, field, nvars, declared, |v| Some(v.index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_example() {
        let f = parse_form("3*t0^2*t1 - 1/2*t2^3", Field::Rational, None).unwrap();
        assert_eq!(f.nvars(), 3);
        assert_eq!(f.degree(), 3);
        assert_eq!(f.to_string(), "3*t0^2*t1 - 1/2*t2^3");
    }

    #[test]
    fn whitespace_and_leading_sign() {
        let f = parse_form(" - x0 ^ 2 +  2 * x1*x0 ", Field::Rational, None).unwrap();
        assert_eq!(f.to_string(), "-t0^2 + 2*t0*t1");
    }

    #[test]
    fn prime_field_coefficients() {
        let f = parse_form("1/2*t0 + t1", Field::Prime(7), None).unwrap();
        assert_eq!(f.to_string(), "4*t0 + t1");
    }

    #[test]
    fn errors() {
        assert!(parse_form("", Field::Rational, None).is_err());
        assert!(parse_form("t0 + t1^2", Field::Rational, None).is_err());
        assert!(parse_form("t0 ** t1", Field::Rational, None).is_err());
        assert!(parse_form("z0", Field::Rational, None).is_err());
        assert!(parse_form("1/0*t0", Field::Rational, None).is_err());
        assert!(parse_form("y1*t0", Field::Rational, None).is_err());
    }

    #[test]
    fn zero_with_declared_degree() {
        let f = parse_form_with("0", Field::Rational, 2, Some(3), |v| Some(v.index)).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.degree(), 3);
    }
}
