//! Text and JSON forms of polynomials.
//!
//! Text: `x^2 - 1/2*y^2 - 1/2`, leading term first. Parsing accepts `+ - * / ^`,
//! parentheses, decimal and rational literals, and juxtaposition (`2xy`).
//! JSON: a list of `[ex, ey, et, "num/den"]` terms, leading term first.

use crate::poly::{Mono, Poly};
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Default variable names for `N` variables.
pub fn default_names(n: usize) -> &'static [&'static str] {
    match n {
        1 => &["w"],
        2 => &["x", "y"],
        3 => &["x", "y", "t"],
        _ => &["x", "y", "t", "s"],
    }
}

impl<const N: usize> Poly<N> {
    pub fn to_text(&self) -> String {
        self.to_text_with(default_names(N))
    }

    pub fn to_text_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mono = mono_text(m, names);
            if mono.is_empty() {
                out.push_str(&format_rational(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format_rational(&a));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    pub fn parse_with(s: &str, names: &[&str]) -> Result<Self, ParseError> {
        let toks = tokenize(s)?;
        let mut p = Parser::<N> { toks, pos: 0, names };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(ParseError(format!("unexpected token at position {}", p.pos)));
        }
        Ok(e)
    }
}

fn mono_text<const N: usize>(m: &Mono<N>, names: &[&str]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].to_string()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl<const N: usize> fmt::Display for Poly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polynomial parse error: {0}")]
pub struct ParseError(pub String);

impl<const N: usize> FromStr for Poly<N> {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        if N == 1 {
            // Univariate input may name its variable freely.
            let letters: std::collections::BTreeSet<char> =
                s.chars().filter(|c| c.is_ascii_alphabetic()).collect();
            if letters.len() > 1 {
                return Err(ParseError(format!("more than one variable in `{s}`")));
            }
            let name = letters.iter().next().map(|c| c.to_string()).unwrap_or_else(|| "w".into());
            return Self::parse_with(s, &[name.as_str()]);
        }
        Self::parse_with(s, default_names(N))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ParseError> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            let v = parse_rational(&lit).ok_or_else(|| ParseError(format!("bad number `{lit}`")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() {
            out.push(Tok::Var(c.to_string()));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ParseError(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, const N: usize> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a [&'a str],
}

impl<const N: usize> Parser<'_, N> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<Poly<N>, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<N>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if !rhs.is_constant() || rhs.is_zero() {
                        return Err(ParseError("division by a non-constant or zero".into()));
                    }
                    acc = acc.scale(&rhs.constant_term().recip());
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::Op('(')) => {
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<N>, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<N>, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) if n.is_integer() && !n.is_negative() => {
                    self.pos += 1;
                    let k: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| ParseError("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(ParseError("exponent must be a non-negative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<N>, ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Poly::constant(v))
            }
            Some(Tok::Var(name)) => {
                self.pos += 1;
                let i = self
                    .names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| ParseError(format!("unknown variable `{name}`")))?;
                Ok(Poly::var(i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.toks.get(self.pos) != Some(&Tok::Op(')')) {
                    return Err(ParseError("missing `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(ParseError(format!("unexpected {other:?}"))),
        }
    }
}

/// Exponent slots in the JSON term form.
fn json_slots(n: usize) -> usize {
    n.max(3)
}

fn json_coeff(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

impl<const N: usize> Poly<N> {
    /// JSON term list, leading term first.
    pub fn to_json_terms(&self) -> Vec<(Vec<u32>, String)> {
        self.terms()
            .rev()
            .map(|(m, c)| {
                let mut e = m.0.to_vec();
                e.resize(json_slots(N), 0);
                (e, json_coeff(c))
            })
            .collect()
    }
}

impl<const N: usize> Serialize for Poly<N> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self.to_json_terms();
        let mut seq = s.serialize_seq(Some(terms.len()))?;
        for (e, c) in terms {
            seq.serialize_element(&JsonTerm(e, c))?;
        }
        seq.end()
    }
}

struct JsonTerm(Vec<u32>, String);

impl Serialize for JsonTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len() + 1))?;
        for e in &self.0 {
            seq.serialize_element(e)?;
        }
        seq.serialize_element(&self.1)?;
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawItem {
    I(u32),
    S(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPoly {
    Text(String),
    Terms(Vec<Vec<RawItem>>),
}

impl<'de, const N: usize> Deserialize<'de> for Poly<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawPoly::deserialize(d)? {
            RawPoly::Text(s) => s.parse().map_err(D::Error::custom),
            RawPoly::Terms(ts) => {
                let mut p = Poly::zero();
                for t in ts {
                    let (last, exps) = t.split_last().ok_or_else(|| D::Error::custom("empty term"))?;
                    let c = match last {
                        RawItem::S(s) => parse_rational(s)
                            .ok_or_else(|| D::Error::custom(format!("bad coefficient `{s}`")))?,
                        RawItem::I(i) => Rational::from_integer((*i).into()),
                    };
                    if exps.len() < N {
                        return Err(D::Error::custom("too few exponents in term"));
                    }
                    let mut e = [0u32; N];
                    for (i, x) in exps.iter().enumerate() {
                        let v = match x {
                            RawItem::I(v) => *v,
                            RawItem::S(_) => return Err(D::Error::custom("exponent must be an integer")),
                        };
                        if i < N {
                            e[i] = v;
                        } else if v != 0 {
                            return Err(D::Error::custom("exponent for an absent variable"));
                        }
                    }
                    if c.is_zero() {
                        continue;
                    }
                    p.add_term(Mono(e), c);
                }
                Ok(p)
            }
        }
    }
}
