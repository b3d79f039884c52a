//! Bounded truncations of `T(R, m, (x_n))`: index tuples on whose span `R` is
//! bounded below by `1/m`.

use serde_json::{json, Value};

use super::ratio::{bounded_below, RatioBudget};
use super::{BasicSequence, Operator};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::trees::{explore, FiniteTree, Verdict};

#[derive(Clone, Debug)]
pub struct WitnessTreeSpec {
    pub operator: Operator,
    pub m: u32,
    pub sequence: BasicSequence,
    pub depth_bound: usize,
    pub width_bound: u32,
    /// Admit every tuple rather than only strictly increasing ones.
    pub arbitrary_tuples: bool,
}

#[derive(Clone, Debug)]
pub struct WitnessTree {
    pub truncation: FiniteTree,
    pub verdict: Verdict,
    pub rank: usize,
}

impl WitnessTree {
    pub fn to_json(&self) -> Value {
        json!({
            "nodes": self.truncation.nodes().collect::<Vec<_>>(),
            "verdict": self.verdict.as_str(),
            "rank_of_truncation": self.rank,
        })
    }
}

/// Whether `min ‖T x‖/‖x‖ ≥ 1/m` over the span of `{x_l : l ∈ node}`.
pub fn node_admitted(t: &Operator, m: u32, seq: &BasicSequence, node: &[u32]) -> Result<bool> {
    admitted_with(t, m, seq, node, &RatioBudget::default())
}

fn admitted_with(
    t: &Operator,
    m: u32,
    seq: &BasicSequence,
    node: &[u32],
    budget: &RatioBudget,
) -> Result<bool> {
    if m == 0 {
        return Err(Error::domain("m must be positive"));
    }
    let mut indices = node.to_vec();
    indices.sort_unstable();
    indices.dedup();
    if indices.is_empty() {
        return Ok(true);
    }
    let xs = indices
        .iter()
        .map(|&l| {
            seq.get(l)
                .cloned()
                .ok_or_else(|| Error::domain(format!("node entry {l} is outside the sequence")))
        })
        .collect::<Result<Vec<_>>>()?;
    let threshold = Q::new(1.into(), m.into());
    bounded_below(t, &xs, &threshold, budget).map_err(|e| match e {
        Error::Undecided(msg) => Error::Undecided(format!("node {node:?}: {msg}")),
        other => other,
    })
}

pub fn build_witness_tree(spec: &WitnessTreeSpec) -> Result<WitnessTree> {
    if spec.m == 0 {
        return Err(Error::domain("m must be positive"));
    }
    let width = spec.width_bound.min(spec.sequence.len() as u32);
    let budget = RatioBudget::default();
    let exploration = explore(spec.depth_bound, width.max(1), |node: &[u32]| {
        if !spec.arbitrary_tuples && node.windows(2).any(|w| w[0] >= w[1]) {
            return Ok(false);
        }
        admitted_with(&spec.operator, spec.m, &spec.sequence, node, &budget)
    })?;
    let rank = exploration.truncation.rank();
    Ok(WitnessTree {
        truncation: exploration.truncation,
        verdict: exploration.verdict,
        rank,
    })
}
