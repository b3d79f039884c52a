use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Q};

/// A finitely supported vector with exact rational coordinates on the basis
/// indexed by positive integers. Zero coordinates are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct RationalVector {
    entries: BTreeMap<u32, Q>,
}

impl RationalVector {
    pub fn zero() -> Self {
        RationalVector::default()
    }

    pub fn basis(i: u32) -> Self {
        assert!(i >= 1, "basis indices start at 1");
        RationalVector {
            entries: BTreeMap::from([(i, Q::from_integer(1.into()))]),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, Q)>>(pairs: I) -> Result<Self> {
        let mut v = RationalVector::zero();
        for (i, q) in pairs {
            if i == 0 {
                return Err(Error::domain("basis indices start at 1"));
            }
            v.add_at(i, &q);
        }
        Ok(v)
    }

    /// `Σ coefficients[j] · e_{indices[j]}`.
    pub fn from_dense(start: u32, coefficients: &[Q]) -> Self {
        let mut v = RationalVector::zero();
        for (j, q) in coefficients.iter().enumerate() {
            v.add_at(start + j as u32, q);
        }
        v
    }

    pub fn add_at(&mut self, i: u32, q: &Q) {
        if q.is_zero() {
            return;
        }
        let slot = self.entries.entry(i).or_insert_with(Q::zero);
        *slot += q;
        if slot.is_zero() {
            self.entries.remove(&i);
        }
    }

    pub fn get(&self, i: u32) -> Q {
        self.entries.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<u32> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Q)> {
        self.entries.iter().map(|(&i, q)| (i, q))
    }

    pub fn min_index(&self) -> Option<u32> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return RationalVector::zero();
        }
        RationalVector {
            entries: self.entries.iter().map(|(&i, q)| (i, q * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, q) in other.iter() {
            out.add_at(i, q);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::from_integer(1.into())))
    }

    /// `Σ coefficients[j] · vectors[j]`.
    pub fn combination(vectors: &[RationalVector], coefficients: &[Q]) -> Self {
        let mut out = RationalVector::zero();
        for (v, c) in vectors.iter().zip(coefficients) {
            if c.is_zero() {
                continue;
            }
            for (i, q) in v.iter() {
                out.add_at(i, &(q * c));
            }
        }
        out
    }

    pub fn dot(&self, other: &Self) -> Q {
        let (small, large) = if self.entries.len() <= other.entries.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(i, q)| large.entries.get(i).map(|p| q * p))
            .fold(Q::zero(), |acc, x| acc + x)
    }

    /// Coordinates with index in `lo..=hi`.
    pub fn restrict(&self, lo: u32, hi: u32) -> Self {
        RationalVector {
            entries: self
                .entries
                .range(lo..=hi)
                .map(|(&i, q)| (i, q.clone()))
                .collect(),
        }
    }

    pub fn abs(&self) -> Self {
        RationalVector {
            entries: self.entries.iter().map(|(&i, q)| (i, q.abs())).collect(),
        }
    }

    pub fn l1(&self) -> Q {
        self.entries
            .values()
            .fold(Q::zero(), |acc, q| acc + q.abs())
    }

    pub fn linf(&self) -> Q {
        self.entries
            .values()
            .map(|q| q.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn l2_squared(&self) -> Q {
        self.entries.values().fold(Q::zero(), |acc, q| acc + q * q)
    }
}

impl fmt::Display for RationalVector {
    /// `[i1:q1, i2:q2, ...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (n, (i, q)) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}:{q}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for RationalVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse("vector", 0, t, "expected `[i:q, ...]`"))?;
        let mut pairs = Vec::new();
        if !inner.trim().is_empty() {
            for part in inner.split(',') {
                let (i, q) = part.split_once(':').ok_or_else(|| {
                    Error::parse("vector", 0, part.trim(), "expected `index:rational`")
                })?;
                let index: u32 = i.trim().parse().map_err(|_| {
                    Error::parse("vector", 0, i.trim(), "expected a positive basis index")
                })?;
                if index == 0 {
                    return Err(Error::parse(
                        "vector",
                        0,
                        i.trim(),
                        "basis indices start at 1",
                    ));
                }
                pairs.push((index, parse_rational(q)?));
            }
        }
        RationalVector::from_pairs(pairs)
    }
}
