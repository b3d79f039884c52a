//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a strictly decreasing list of terms `ω^e · c` with `c ≥ 1`.
//! Because the representation is canonical, structural equality is ordinal
//! equality and `Ord` is the ordinal order.
//!
//! Limit ordinals carry the Wainer fundamental sequences:
//! `(γ + ω^{β+1})[n] = γ + ω^β · n` and `(γ + ω^λ)[n] = γ + ω^{λ[n]}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Term {
    exponent: Ordinal,
    coefficient: u64,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Classification {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from(1u64)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(&Ordinal::one())
    }

    /// `ω^a`.
    pub fn omega_pow(a: &Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exponent: a.clone(),
                coefficient: 1,
            }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn classify(&self) -> Classification {
        match self.terms.last() {
            None => Classification::Zero,
            Some(t) if t.exponent.is_zero() => {
                let mut pred = self.clone();
                let last = pred.terms.last_mut().unwrap();
                if last.coefficient == 1 {
                    pred.terms.pop();
                } else {
                    last.coefficient -= 1;
                }
                Classification::Successor(pred)
            }
            Some(_) => Classification::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == Classification::Limit
    }

    pub fn successor(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// Ordinal sum `self + other` (absorbs lower terms of `self`).
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exponent == lead.exponent {
                last.coefficient = last
                    .coefficient
                    .checked_add(lead.coefficient)
                    .expect("ordinal coefficient overflow");
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// Ordinal product `self · other`.
    pub fn mul(&self, other: &Ordinal) -> Ordinal {
        if self.is_zero() || other.is_zero() {
            return Ordinal::zero();
        }
        let lead = &self.terms[0];
        let mut out = Ordinal::zero();
        for t in &other.terms {
            let part = if t.exponent.is_zero() {
                let mut p = self.clone();
                p.terms[0].coefficient = lead
                    .coefficient
                    .checked_mul(t.coefficient)
                    .expect("ordinal coefficient overflow");
                p
            } else {
                Ordinal {
                    terms: vec![Term {
                        exponent: lead.exponent.add(&t.exponent),
                        coefficient: t.coefficient,
                    }],
                }
            };
            out = out.add(&part);
        }
        out
    }

    /// The `n`-th element of the Wainer fundamental sequence of a limit ordinal.
    pub fn fundamental_sequence(&self, n: u64) -> Result<Ordinal> {
        if n == 0 {
            return Err(Error::domain("fundamental sequence index must be >= 1"));
        }
        let Some(last) = self.terms.last() else {
            return Err(Error::domain("0 has no fundamental sequence"));
        };
        let mut prefix = self.clone();
        {
            let l = prefix.terms.last_mut().unwrap();
            if l.coefficient == 1 {
                prefix.terms.pop();
            } else {
                l.coefficient -= 1;
            }
        }
        match last.exponent.classify() {
            Classification::Zero => Err(Error::domain(format!(
                "{self} is a successor and has no fundamental sequence"
            ))),
            Classification::Successor(beta) => {
                let step = Ordinal::omega_pow(&beta).mul(&Ordinal::from(n));
                Ok(prefix.add(&step))
            }
            Classification::Limit => {
                let inner = last.exponent.fundamental_sequence(n)?;
                Ok(prefix.add(&Ordinal::omega_pow(&inner)))
            }
        }
    }

    fn is_atom(&self) -> bool {
        self.as_finite().is_some() || matches!(self.terms.as_slice(), [t] if t.coefficient == 1)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        if n == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: Ordinal::zero(),
                coefficient: n,
            }],
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
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
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            if t.exponent == Ordinal::one() {
                f.write_str("w")?;
            } else if t.exponent.is_atom() {
                write!(f, "w^{}", t.exponent)?;
            } else {
                write!(f, "w^({})", t.exponent)?;
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let value = p.ord()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("ord", "unexpected trailing input"));
        }
        Ok(value)
    }
}

/// Recursive-descent parser for
/// `ord := term ('+' term)*; term := atom ('*' nat)?;
///  atom := nat | 'w' | 'w^' atom | 'w^(' ord ')'`.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, rule: &'static str, message: &str) -> Error {
        let token = match self.src.get(self.pos) {
            Some(&b) => (b as char).to_string(),
            None => "end of input".to_string(),
        };
        Error::parse(rule, self.pos, token, message)
    }

    fn ord(&mut self) -> Result<Ordinal> {
        let mut value = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            value = value.add(&self.term()?);
        }
        Ok(value)
    }

    fn term(&mut self) -> Result<Ordinal> {
        let atom = self.atom()?;
        if self.peek() == Some(b'*') {
            self.pos += 1;
            let n = self.nat("term")?;
            return Ok(atom.mul(&Ordinal::from(n)));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                if self.peek() != Some(b'^') {
                    return Ok(Ordinal::omega());
                }
                self.pos += 1;
                let exponent = if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let e = self.ord()?;
                    if self.peek() != Some(b')') {
                        return Err(self.error("atom", "expected `)`"));
                    }
                    self.pos += 1;
                    e
                } else {
                    self.atom()?
                };
                Ok(Ordinal::omega_pow(&exponent))
            }
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::from(self.nat("atom")?)),
            _ => Err(self.error("atom", "expected a natural number or `w`")),
        }
    }

    fn nat(&mut self, rule: &'static str) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(rule, "expected a natural number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse()
            .map_err(|_| Error::parse(rule, start, text, "natural number out of range"))
    }
}
