//! Schreier families `S_ξ`.
//!
//! * `S_0` is the empty set together with all singletons.
//! * `S_{ζ+1}` collects unions `F_1 < … < F_n` of `n ≤ min F_1` sets from `S_ζ`.
//! * For a limit `ξ`, `S_ξ` is the union over `n` of `{F ∈ S_{ξ[n]} : n ≤ min F}`.
//!
//! Membership is memoised per thread, keyed by `(ξ, F)`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ordinal::{Classification, Ordinal};

/// A strictly increasing finite sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct FiniteSet(Vec<u32>);

impl FiniteSet {
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::domain("set elements must be positive"));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("set elements must be strictly increasing"));
        }
        Ok(FiniteSet(elements))
    }

    /// Builds a set from arbitrary positive integers, sorting and deduplicating.
    pub fn from_unsorted(mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        FiniteSet::new(elements)
    }

    pub fn empty() -> Self {
        FiniteSet(Vec::new())
    }

    pub fn interval(lo: u32, hi: u32) -> Self {
        FiniteSet((lo.max(1)..=hi).collect())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, n: u32) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    /// Size first, then lexicographic.
    pub fn length_lex_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for FiniteSet {
    type Err = Error;

    /// `{2,3,10}`; `{}` is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::parse("set", 0, t, "expected `{n1,n2,...}`"))?;
        if inner.trim().is_empty() {
            return Ok(FiniteSet::empty());
        }
        let mut elements = Vec::new();
        let mut offset = 1;
        for part in inner.split(',') {
            let p = part.trim();
            let n: u32 = p
                .parse()
                .map_err(|_| Error::parse("set", offset, p, "expected a positive integer"))?;
            elements.push(n);
            offset += part.len() + 1;
        }
        FiniteSet::new(elements).map_err(|e| Error::parse("set", 0, t, e.to_string()))
    }
}

thread_local! {
    static MEMBER_CACHE: RefCell<HashMap<(Ordinal, Vec<u32>), bool>> = RefCell::new(HashMap::new());
}

/// `F ∈ S_ξ`.
pub fn member(xi: &Ordinal, set: &FiniteSet) -> bool {
    member_slice(xi, set.as_slice())
}

pub(crate) fn member_slice(xi: &Ordinal, s: &[u32]) -> bool {
    if s.len() <= 1 {
        return true;
    }
    if xi.is_zero() {
        return false;
    }
    let key = (xi.clone(), s.to_vec());
    if let Some(&hit) = MEMBER_CACHE
        .with(|c| c.borrow().get(&key).copied())
        .as_ref()
    {
        return hit;
    }
    let result = match xi.classify() {
        Classification::Zero => unreachable!(),
        Classification::Successor(zeta) => greedy_blocks(&zeta, s) <= s[0] as usize,
        Classification::Limit => (1..=s[0] as u64).any(|n| {
            let step = xi
                .fundamental_sequence(n)
                .expect("limit ordinals have fundamental sequences");
            member_slice(&step, s)
        }),
    };
    MEMBER_CACHE.with(|c| c.borrow_mut().insert(key, result));
    result
}

/// Drops the calling thread's membership memo.
pub fn clear_cache() {
    MEMBER_CACHE.with(|c| c.borrow_mut().clear());
}

/// Least number of consecutive nonempty `S_ζ` pieces covering `F`.
///
/// Singletons belong to every `S_ζ`, so a split always exists.
pub fn min_blocks(zeta: &Ordinal, set: &FiniteSet) -> Result<usize> {
    if set.is_empty() {
        return Err(Error::domain("min_blocks is undefined for the empty set"));
    }
    Ok(greedy_blocks(zeta, set.as_slice()))
}

/// Longest admissible prefix first. Prefixes of members are members, so the
/// admissible prefix lengths form an initial segment and binary search applies.
fn greedy_blocks(zeta: &Ordinal, s: &[u32]) -> usize {
    let mut count = 0;
    let mut start = 0;
    while start < s.len() {
        let (mut lo, mut hi) = (start + 1, s.len());
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if member_slice(zeta, &s[start..mid]) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        count += 1;
        start = lo;
    }
    count
}

/// A member `F` is maximal when `F ∪ {max F + 1} ∉ S_ξ`.
pub fn is_maximal(xi: &Ordinal, set: &FiniteSet) -> Result<bool> {
    is_maximal_with_guard(xi, set, 1)
}

/// Maximality probing every `m` in `max F + 1 ..= max F + guard`.
pub fn is_maximal_with_guard(xi: &Ordinal, set: &FiniteSet, guard: u32) -> Result<bool> {
    if !member(xi, set) {
        return Err(Error::domain(format!("{set} is not a member of S_{xi}")));
    }
    let top = set.max().unwrap_or(0);
    let mut extended = set.as_slice().to_vec();
    extended.push(0);
    for m in top + 1..=top + guard.max(1) {
        *extended.last_mut().unwrap() = m;
        if member_slice(xi, &extended) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All members of `S_ξ` inside `{1..n}` in length-lexicographic order.
pub fn enumerate(xi: &Ordinal, n: u32) -> Vec<FiniteSet> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_members(xi, n, &mut current, &mut out);
    out.sort_by(|a, b| a.length_lex_cmp(b));
    out
}

fn extend_members(xi: &Ordinal, n: u32, current: &mut Vec<u32>, out: &mut Vec<FiniteSet>) {
    out.push(FiniteSet(current.clone()));
    let next = current.last().map_or(1, |&m| m + 1);
    for m in next..=n {
        current.push(m);
        if member_slice(xi, current) {
            extend_members(xi, n, current, out);
        }
        current.pop();
    }
}
