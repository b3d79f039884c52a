use num::{One, Signed, Zero};

use super::{NormDescriptor, RationalVector};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::rational::Q;
use crate::schreier::{self, FiniteSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DualWitness {
    /// The set `F ∈ S_ξ` carrying the supremum.
    Schreier(FiniteSet),
    /// The admissible partition tree carrying the supremum.
    Tsirelson(TsirelsonWitness),
}

/// A node of the recursion realising a Tsirelson norm: either a single
/// coordinate or `θ · Σ_j ‖E_j x‖` over admissible blocks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TsirelsonWitness {
    /// Value 0 (the zero vector).
    Zero,
    Coordinate(u32),
    Combination(Vec<TsirelsonBlock>),
}

/// The block `E = [lo, hi]` together with the witness for `‖E x‖`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TsirelsonBlock {
    pub lo: u32,
    pub hi: u32,
    pub inner: TsirelsonWitness,
}

impl TsirelsonWitness {
    /// Re-evaluates the recursion on `x`.
    pub fn evaluate(&self, x: &RationalVector, theta: &Q) -> Q {
        match self {
            TsirelsonWitness::Zero => Q::zero(),
            TsirelsonWitness::Coordinate(i) => x.get(*i).abs(),
            TsirelsonWitness::Combination(blocks) => {
                let sum = blocks
                    .iter()
                    .map(|b| b.inner.evaluate(&x.restrict(b.lo, b.hi), theta))
                    .fold(Q::zero(), |acc, v| acc + v);
                theta * sum
            }
        }
    }

    /// Blocks are successive intervals, each child lives inside its block, and
    /// the set of block minima lies in `S_ξ`, at every level.
    pub fn is_admissible(&self, xi: &Ordinal) -> bool {
        self.admissible_within(xi, 1, u32::MAX)
    }

    fn admissible_within(&self, xi: &Ordinal, lo: u32, hi: u32) -> bool {
        match self {
            TsirelsonWitness::Zero => true,
            TsirelsonWitness::Coordinate(i) => lo <= *i && *i <= hi,
            TsirelsonWitness::Combination(blocks) => {
                let ordered = blocks
                    .iter()
                    .all(|b| b.lo <= b.hi && lo <= b.lo && b.hi <= hi)
                    && blocks.windows(2).all(|w| w[0].hi < w[1].lo);
                let mins = FiniteSet::new(blocks.iter().map(|b| b.lo).collect());
                ordered
                    && mins.is_ok_and(|m| schreier::member(xi, &m))
                    && blocks
                        .iter()
                        .all(|b| b.inner.admissible_within(xi, b.lo, b.hi))
            }
        }
    }

    /// The norming functional encoded by the tree, signed to match `x`.
    pub fn functional(&self, x: &RationalVector, theta: &Q) -> RationalVector {
        match self {
            TsirelsonWitness::Zero => RationalVector::zero(),
            TsirelsonWitness::Coordinate(i) => {
                let s = if x.get(*i).is_negative() {
                    -Q::one()
                } else {
                    Q::one()
                };
                RationalVector::basis(*i).scale(&s)
            }
            TsirelsonWitness::Combination(blocks) => blocks
                .iter()
                .fold(RationalVector::zero(), |acc, b| {
                    acc.add(&b.inner.functional(&x.restrict(b.lo, b.hi), theta))
                })
                .scale(theta),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TsirelsonWitness::Combination(blocks) => {
                1 + blocks.iter().map(|b| b.inner.depth()).max().unwrap_or(0)
            }
            _ => 0,
        }
    }
}

impl DualWitness {
    /// Value of the witness on `x`; equals the norm for the witness of `x`.
    pub fn evaluate(&self, d: &NormDescriptor, x: &RationalVector) -> Result<Q> {
        match (self, d) {
            (DualWitness::Schreier(f), NormDescriptor::Schreier(_)) => Ok(f
                .iter()
                .map(|i| x.get(i).abs())
                .fold(Q::zero(), |a, b| a + b)),
            (DualWitness::Tsirelson(w), NormDescriptor::Tsirelson(p)) => {
                Ok(w.evaluate(x, p.theta()))
            }
            _ => Err(Error::domain(format!(
                "witness does not match the {d} norm"
            ))),
        }
    }

    /// Whether the witness is feasible for the descriptor's family.
    pub fn is_admissible(&self, d: &NormDescriptor) -> bool {
        match (self, d) {
            (DualWitness::Schreier(f), NormDescriptor::Schreier(xi)) => schreier::member(xi, f),
            (DualWitness::Tsirelson(w), NormDescriptor::Tsirelson(p)) => w.is_admissible(p.xi()),
            _ => false,
        }
    }
}

/// First set in length-lexicographic order among the maximisers of
/// `Σ_{i∈F} |x_i|` over `F ∈ S_ξ`, `F ⊆ supp x`.
pub(crate) fn canonical_schreier_set(xi: &Ordinal, x: &RationalVector) -> FiniteSet {
    let support = x.support();
    let weights: Vec<Q> = support.iter().map(|&i| x.get(i).abs()).collect();
    let mut best: Option<(Q, Vec<u32>)> = None;
    let mut current = Vec::new();
    visit(
        xi,
        &support,
        &weights,
        0,
        Q::zero(),
        &mut current,
        &mut best,
    );
    FiniteSet::new(best.map(|b| b.1).unwrap_or_default()).expect("support is increasing")
}

fn visit(
    xi: &Ordinal,
    support: &[u32],
    weights: &[Q],
    from: usize,
    value: Q,
    current: &mut Vec<u32>,
    best: &mut Option<(Q, Vec<u32>)>,
) {
    let better = match best {
        None => true,
        Some((v, f)) => {
            value > *v
                || (value == *v && (current.len(), current.as_slice()) < (f.len(), f.as_slice()))
        }
    };
    if better {
        *best = Some((value.clone(), current.clone()));
    }
    for p in from..support.len() {
        current.push(support[p]);
        if schreier::member_slice(xi, current) {
            visit(
                xi,
                support,
                weights,
                p + 1,
                &value + &weights[p],
                current,
                best,
            );
        }
        current.pop();
    }
}
