//! Ordinals below epsilon-zero in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// `Σ ω^{e_i}·c_i` with strictly decreasing exponents and positive
/// coefficients. The empty sum is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, BigUint)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed ordinal at offset {offset}: {msg}")]
pub struct OrdinalParseError {
    pub offset: usize,
    pub msg: String,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_natural(1u32)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    pub fn from_natural<N: Into<BigUint>>(n: N) -> Self {
        let n = n.into();
        if n.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), n)] }
        }
    }

    /// `ω^x`.
    pub fn omega_pow(x: Ordinal) -> Self {
        Ordinal { terms: vec![(x, BigUint::one())] }
    }

    /// `ω^x · c`; zero when `c` is zero.
    pub fn term(x: Ordinal, c: BigUint) -> Self {
        if c.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(x, c)] }
        }
    }

    /// Builds from arbitrary terms, normalizing order and merging exponents
    /// (so the result is the natural sum of the terms).
    pub fn from_terms(terms: Vec<(Ordinal, BigUint)>) -> Self {
        terms
            .into_iter()
            .fold(Ordinal::zero(), |acc, (e, c)| acc.natural_sum(&Ordinal::term(e, c)))
    }

    pub fn terms(&self) -> &[(Ordinal, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_zero())
    }

    /// The value when finite.
    pub fn as_natural(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn successor(&self) -> Self {
        self.natural_sum(&Ordinal::one())
    }

    /// Hessenberg sum: merge the term lists, adding equal exponents.
    pub fn natural_sum(&self, other: &Ordinal) -> Self {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), &a[i].1 + &b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ordinal { terms: out }
    }

    /// Exponent nesting height: 0 for finite ordinals, 1 below `ω^ω`, ...
    pub fn height(&self) -> usize {
        self.terms.iter().map(|(e, _)| if e.is_zero() { 0 } else { 1 + e.height() }).max().unwrap_or(0)
    }

    pub fn parse(s: &str) -> Result<Self, OrdinalParseError> {
        let mut p = TextParser { s: s.as_bytes(), pos: 0, depth: 0 };
        let o = p.sum()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(o)
    }

    /// Canonical text: `w^(E)*c + ... + n`, with `w` for ω itself.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                if e.is_zero() {
                    c.to_string()
                } else if *e == Ordinal::one() && c.is_one() {
                    "w".to_string()
                } else {
                    format!("w^({})*{c}", e.to_text())
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (x, y) in self.terms.iter().zip(&other.terms) {
            match x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for Ordinal {
    type Err = OrdinalParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ordinal::parse(s)
    }
}

pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

pub fn natural_sum(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.natural_sum(b)
}

pub fn omega_pow(x: Ordinal) -> Ordinal {
    Ordinal::omega_pow(x)
}

const MAX_DEPTH: usize = 64;

// Grammar: sum := term ("+" term)* ; term := INT | "w" ["^" "(" sum ")"] ["*" INT].
// Terms may appear in any order; the result is their natural sum, which
// equals the ordinary sum for text already in normal form.
struct TextParser<'a> {
    s: &'a [u8],
    pos: usize,
    depth: usize,
}

impl TextParser<'_> {
    fn err(&self, msg: &str) -> OrdinalParseError {
        OrdinalParseError { offset: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigUint, OrdinalParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("nesting too deep"));
        }
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.natural_sum(&self.term()?);
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalParseError> {
        if self.eat(b'w') || self.eat_str("ω") {
            let exp = if self.eat(b'^') {
                if !self.eat(b'(') {
                    return Err(self.err("expected `(` after `^`"));
                }
                let e = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                e
            } else {
                Ordinal::one()
            };
            let c = if self.eat(b'*') { self.int()? } else { BigUint::one() };
            return Ok(Ordinal::term(exp, c));
        }
        Ok(Ordinal::from_natural(self.int()?))
    }

    fn eat_str(&mut self, t: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(t.as_bytes()) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests;
