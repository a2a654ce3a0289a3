//! Text and JSON forms of differential polynomials and operators.
//!
//! Canonical text: `-1/2*u2_0*u1_3^2 + lam - 3*eps`, fields 1-based with
//! the derivative order after the underscore. The parser also takes the
//! pretty forms `u2` (order 0) and `u2'''` (primes), integer powers and
//! parentheses.

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

use super::op::LinDiffOp;
use super::poly::{DiffPoly, Jet, Monomial};

fn render_monomial(m: &Monomial, prefix: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (j, e) in m.vars() {
        let base = format!("{prefix}{}_{}", j.field + 1, j.order);
        out.push(if *e == 1 { base } else { format!("{base}^{e}") });
    }
    for (name, e) in [("lam", m.lam()), ("eps", m.eps())] {
        match e {
            0 => {}
            1 => out.push(name.to_string()),
            _ => out.push(format!("{name}^{e}")),
        }
    }
    out
}

/// Canonical rendering with field prefix `prefix`.
pub fn render_poly(p: &DiffPoly, prefix: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let factors = render_monomial(m, prefix);
        let neg = c < &Q::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        let body = if factors.is_empty() {
            fmt_q(&abs)
        } else if abs.is_one() {
            factors.join("*")
        } else {
            format!("{}*{}", fmt_q(&abs), factors.join("*"))
        };
        match (i, neg) {
            (0, false) => s.push_str(&body),
            (0, true) => {
                s.push('-');
                s.push_str(&body);
            }
            (_, false) => {
                s.push_str(" + ");
                s.push_str(&body);
            }
            (_, true) => {
                s.push_str(" - ");
                s.push_str(&body);
            }
        }
    }
    s
}

/// `(c_0) + (c_1)*D + (c_2)*D^2 ...`, zero coefficients skipped.
pub fn render_op(op: &LinDiffOp, prefix: &str) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = op
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let c = render_poly(c, prefix);
            match k {
                0 => format!("({c})"),
                1 => format!("({c})*D"),
                _ => format!("({c})*D^{k}"),
            }
        })
        .collect();
    parts.join(" + ")
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && chars[i] == '.' {
                    return Err(Error::Parse(format!("decimal number in {s:?}")));
                }
                let text: String = chars[start..i].iter().collect();
                toks.push(Tok::Num(parse_q(&text)?));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}"))),
        }
    }
    Ok(toks)
}

fn parse_ident(id: &str, prefix: &str) -> Result<DiffPoly> {
    match id {
        "lam" => return Ok(DiffPoly::lam()),
        "eps" => return Ok(DiffPoly::eps()),
        _ => {}
    }
    let bad = || Error::Parse(format!("unknown variable {id:?}"));
    let rest = id.strip_prefix(prefix).ok_or_else(bad)?;
    let primes = rest.chars().rev().take_while(|&c| c == '\'').count();
    let rest = &rest[..rest.len() - primes];
    let (field, order) = match rest.split_once('_') {
        Some((f, o)) => {
            if primes > 0 {
                return Err(bad());
            }
            (f, o.parse::<usize>().map_err(|_| bad())?)
        }
        None => (rest, primes),
    };
    let field: usize = field.parse().map_err(|_| bad())?;
    if field == 0 {
        return Err(Error::Parse(format!("field indices are 1-based in {id:?}")));
    }
    Ok(DiffPoly::var(field - 1, order))
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    prefix: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> Result<DiffPoly> {
        let mut acc = DiffPoly::zero();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.product()?;
            if neg {
                acc -= &t;
            } else {
                acc += t;
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<DiffPoly> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.power()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = match self.next() {
                Some(Tok::Num(n)) if n.is_integer() && n >= Q::zero() => n.to_integer(),
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            };
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Parse("exponent too large".into()))?;
            let mut acc = DiffPoly::one();
            for _ in 0..e {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(DiffPoly::constant(n)),
            Some(Tok::Ident(id)) => parse_ident(&id, self.prefix),
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(Tok::Minus) => Ok(-self.power()?),
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses canonical or pretty text with field prefix `prefix`.
pub fn parse_poly(text: &str, prefix: &str) -> Result<DiffPoly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, prefix };
    let out = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {text:?}")));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    u: Vec<(u32, u32, u32)>,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    lam: u32,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    eps: u32,
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

impl Serialize for DiffPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms()
            .map(|(m, c)| TermJson {
                c: fmt_q(c),
                u: m.vars().iter().map(|(j, e)| (j.field, j.order, *e)).collect(),
                lam: m.lam(),
                eps: m.eps(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        let mut p = DiffPoly::zero();
        for t in terms {
            let c = parse_q(&t.c).map_err(serde::de::Error::custom)?;
            let vars = t
                .u
                .iter()
                .map(|&(f, o, e)| (Jet { field: f, order: o }, e))
                .collect();
            p.add_term(Monomial::from_parts(vars, t.lam, t.eps), c);
        }
        Ok(p)
    }
}

impl Serialize for LinDiffOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinDiffOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(LinDiffOp::from_coeffs(Vec::<DiffPoly>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn render_canonical() {
        let p = &(&DiffPoly::var(1, 0).scale(&frac(-1, 2)) + &DiffPoly::lam())
            + &(&DiffPoly::var(0, 3) * &DiffPoly::var(0, 3));
        assert_eq!(render_poly(&p, "q"), "lam - 1/2*q2_0 + q1_3^2");
        assert_eq!(render_poly(&DiffPoly::zero(), "q"), "0");
    }

    #[test]
    fn parse_pretty_forms() {
        let p = parse_poly("q1 - 9*q4^2 - 3*q4'", "q").unwrap();
        let q4 = DiffPoly::var(3, 0);
        let expected = &(&DiffPoly::var(0, 0) - &(&q4 * &q4).scale(&q(9)))
            - &DiffPoly::var(3, 1).scale(&q(3));
        assert_eq!(p, expected);
        assert_eq!(parse_poly("(u1_0 + 1)^2", "u").unwrap().len(), 3);
        assert_eq!(parse_poly("-(lam)", "u").unwrap(), -DiffPoly::lam());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_poly("0.5*u1_0", "u").is_err());
        assert!(parse_poly("u0_0", "u").is_err());
        assert!(parse_poly("v1_0", "u").is_err());
        assert!(parse_poly("(u1_0", "u").is_err());
        assert!(parse_poly("", "u").is_err());
        assert!(parse_poly("1/0", "u").is_err());
    }

    #[test]
    fn operator_rendering() {
        let op = LinDiffOp::from_coeffs(vec![
            DiffPoly::var(0, 1),
            DiffPoly::zero(),
            DiffPoly::int(2),
        ]);
        assert_eq!(render_op(&op, "q"), "(q1_1) + (2)*D^2");
    }

    #[test]
    fn json_roundtrip() {
        let p = parse_poly("-1/3*u2_1^2*lam + eps*u1_0 + 5", "u").unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: DiffPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
