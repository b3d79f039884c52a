//! Exact norms on finitely supported rational vectors: `ℓ_1`, `ℓ_2`, `ℓ_∞`, the
//! Schreier space norms `sup_{F ∈ S_ξ} Σ_{i∈F} |x_i|` and the Tsirelson-type norms
//! of `T[S_ξ, θ]`.

mod dp;
mod vector;
mod witness;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::rational::{exact_sqrt, parse_rational, sqrt_enclosure, Q};

pub use vector::RationalVector;
pub use witness::{DualWitness, TsirelsonBlock, TsirelsonWitness};

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct TsirelsonParams {
    xi: Ordinal,
    theta: Q,
}

impl TsirelsonParams {
    pub fn xi(&self) -> &Ordinal {
        &self.xi
    }

    pub fn theta(&self) -> &Q {
        &self.theta
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum NormDescriptor {
    L1,
    L2,
    Linf,
    Schreier(Ordinal),
    Tsirelson(TsirelsonParams),
}

impl NormDescriptor {
    /// `T[S_ξ, θ]`; `θ` must lie strictly between 0 and 1.
    pub fn tsirelson(xi: Ordinal, theta: Q) -> Result<Self> {
        if !(theta.is_positive() && theta < Q::one()) {
            return Err(Error::domain(format!(
                "tsirelson parameter must satisfy 0 < theta < 1, got {theta}"
            )));
        }
        Ok(NormDescriptor::Tsirelson(TsirelsonParams { xi, theta }))
    }

    /// Polyhedral norms are maxima of finitely many linear functionals on every
    /// finite support.
    pub fn is_polyhedral(&self) -> bool {
        !matches!(self, NormDescriptor::L2)
    }
}

impl fmt::Display for NormDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormDescriptor::L1 => f.write_str("l1"),
            NormDescriptor::L2 => f.write_str("l2"),
            NormDescriptor::Linf => f.write_str("linf"),
            NormDescriptor::Schreier(xi) => write!(f, "schreier({xi})"),
            NormDescriptor::Tsirelson(p) => write!(f, "tsirelson({},{})", p.xi, p.theta),
        }
    }
}

impl FromStr for NormDescriptor {
    type Err = Error;

    /// `l1 | l2 | linf | schreier(<ord>) | tsirelson(<ord>,<rational>)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "l1" => return Ok(NormDescriptor::L1),
            "l2" => return Ok(NormDescriptor::L2),
            "linf" => return Ok(NormDescriptor::Linf),
            _ => {}
        }
        let args = |name: &str| {
            t.strip_prefix(name)
                .and_then(|r| r.trim_start().strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(inner) = args("schreier") {
            return Ok(NormDescriptor::Schreier(inner.parse()?));
        }
        if let Some(inner) = args("tsirelson") {
            let (ord, theta) = inner.rsplit_once(',').ok_or_else(|| {
                Error::parse(
                    "norm-descriptor",
                    0,
                    inner,
                    "expected `tsirelson(<ord>,<rational>)`",
                )
            })?;
            return NormDescriptor::tsirelson(ord.parse()?, parse_rational(theta)?);
        }
        if let Some(p) = t.strip_prefix('l') {
            return Err(Error::parse(
                "norm-descriptor",
                1,
                p,
                "unsupported p; only l1, l2 and linf are available",
            ));
        }
        Err(Error::parse(
            "norm-descriptor",
            0,
            t,
            "expected l1 | l2 | linf | schreier(<ord>) | tsirelson(<ord>,<rational>)",
        ))
    }
}

/// A nonnegative real that is either an exact rational or the square root of
/// one. Comparisons go through the exact squares.
#[derive(Clone, Debug)]
pub enum Magnitude {
    Exact(Q),
    Sqrt(Q),
}

impl Magnitude {
    /// `sqrt(square)`, collapsed to an exact value when the root is rational.
    pub fn sqrt(square: Q) -> Self {
        match exact_sqrt(&square) {
            Some(root) => Magnitude::Exact(root),
            None => Magnitude::Sqrt(square),
        }
    }

    pub fn zero() -> Self {
        Magnitude::Exact(Q::zero())
    }

    pub fn square(&self) -> Q {
        match self {
            Magnitude::Exact(q) => q * q,
            Magnitude::Sqrt(s) => s.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Q> {
        match self {
            Magnitude::Exact(q) => Some(q),
            Magnitude::Sqrt(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.square().is_zero()
    }

    /// `self / other`; `other` must be nonzero.
    pub fn div(&self, other: &Magnitude) -> Magnitude {
        match (self, other) {
            (Magnitude::Exact(a), Magnitude::Exact(b)) => Magnitude::Exact(a / b),
            _ => Magnitude::sqrt(self.square() / other.square()),
        }
    }

    /// Strictly below a positive rational threshold.
    pub fn lt(&self, threshold: &Q) -> bool {
        self.square() < threshold * threshold
    }

    /// Interval `[lo, hi]` containing the value, of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (Q, Q) {
        match self {
            Magnitude::Exact(q) => (q.clone(), q.clone()),
            Magnitude::Sqrt(s) => sqrt_enclosure(s, bits),
        }
    }
}

impl PartialEq for Magnitude {
    fn eq(&self, other: &Self) -> bool {
        self.square() == other.square()
    }
}

impl Eq for Magnitude {}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        self.square().cmp(&other.square())
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(q) => write!(f, "{q}"),
            Magnitude::Sqrt(s) => write!(f, "sqrt({s})"),
        }
    }
}

/// The norm of `x`. Exact for every polyhedral kind; `ℓ_2` yields the exact
/// square root form, see [`Magnitude::enclosure`].
pub fn norm(d: &NormDescriptor, x: &RationalVector) -> Magnitude {
    match d {
        NormDescriptor::L1 => Magnitude::Exact(x.l1()),
        NormDescriptor::Linf => Magnitude::Exact(x.linf()),
        NormDescriptor::L2 => Magnitude::sqrt(x.l2_squared()),
        NormDescriptor::Schreier(xi) => Magnitude::Exact(dp::schreier_norm(xi, x).0),
        NormDescriptor::Tsirelson(p) => Magnitude::Exact(dp::tsirelson_norm(&p.xi, &p.theta, x).0),
    }
}

/// Exact value of a polyhedral norm.
pub fn norm_exact(d: &NormDescriptor, x: &RationalVector) -> Result<Q> {
    match norm(d, x) {
        Magnitude::Exact(q) => Ok(q),
        Magnitude::Sqrt(_) => Err(Error::domain(format!("{d} norm of {x} is irrational"))),
    }
}

/// The optimiser realising the supremum in a Schreier or Tsirelson norm. Ties
/// go to the first optimiser in length-lexicographic order (Schreier) or to
/// the sup-norm coordinate (Tsirelson).
pub fn dual_witness(d: &NormDescriptor, x: &RationalVector) -> Result<DualWitness> {
    match d {
        NormDescriptor::Schreier(xi) => Ok(DualWitness::Schreier(witness::canonical_schreier_set(
            xi, x,
        ))),
        NormDescriptor::Tsirelson(p) => Ok(DualWitness::Tsirelson(
            dp::tsirelson_norm(&p.xi, &p.theta, x).1,
        )),
        _ => Err(Error::domain(format!(
            "{d} has no combinatorial dual witness"
        ))),
    }
}

/// A functional `h` with `⟨h, x⟩ = ‖x‖` and `⟨h, z⟩ ≤ ‖z‖` for every `z`.
pub fn norming_functional(d: &NormDescriptor, x: &RationalVector) -> Result<RationalVector> {
    let sign = |q: &Q| {
        if q.is_negative() {
            -Q::one()
        } else {
            Q::one()
        }
    };
    match d {
        NormDescriptor::L1 => RationalVector::from_pairs(x.iter().map(|(i, q)| (i, sign(q)))),
        NormDescriptor::Linf => {
            let top = x.linf();
            Ok(x.iter()
                .find(|(_, q)| q.abs() == top)
                .map(|(i, q)| RationalVector::basis(i).scale(&sign(q)))
                .unwrap_or_default())
        }
        NormDescriptor::Schreier(xi) => {
            let f = dp::schreier_norm(xi, x).1;
            RationalVector::from_pairs(f.iter().map(|i| (i, sign(&x.get(i)))))
        }
        NormDescriptor::Tsirelson(p) => {
            let w = dp::tsirelson_norm(&p.xi, &p.theta, x).1;
            Ok(w.functional(x, &p.theta))
        }
        NormDescriptor::L2 => Err(Error::domain("l2 is not polyhedral")),
    }
}
