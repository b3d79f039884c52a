//! Finite trees on ℕ, the derivative `T' = {s ∈ T : s has a proper extension in T}`
//! and the rank `o(T)`, plus bounded exploration of lazily given trees.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::schreier;

/// A prefix-closed finite set of finite sequences of positive integers.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FiniteTree {
    nodes: BTreeSet<Vec<u32>>,
}

impl FiniteTree {
    pub fn empty() -> Self {
        FiniteTree::default()
    }

    /// The tree whose only node is the root.
    pub fn root() -> Self {
        FiniteTree {
            nodes: BTreeSet::from([Vec::new()]),
        }
    }

    pub fn from_nodes<I: IntoIterator<Item = Vec<u32>>>(nodes: I) -> Result<Self> {
        let nodes: BTreeSet<Vec<u32>> = nodes.into_iter().collect();
        for node in &nodes {
            if node.contains(&0) {
                return Err(Error::domain(format!(
                    "node {node:?} has a non-positive entry"
                )));
            }
            if !node.is_empty() && !nodes.contains(&node[..node.len() - 1]) {
                return Err(Error::domain(format!(
                    "node {node:?} is missing its parent; trees must be prefix-closed"
                )));
            }
        }
        Ok(FiniteTree { nodes })
    }

    pub(crate) fn from_closed_set(nodes: BTreeSet<Vec<u32>>) -> Self {
        debug_assert!(nodes
            .iter()
            .all(|n| n.is_empty() || nodes.contains(&n[..n.len() - 1])));
        FiniteTree { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &[u32]) -> bool {
        self.nodes.contains(node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.nodes.iter()
    }

    pub fn is_subtree_of(&self, other: &FiniteTree) -> bool {
        self.nodes.is_subset(&other.nodes)
    }

    /// Nodes having a proper end-extension. In a prefix-closed tree these are
    /// exactly the parents of non-root nodes.
    pub fn derivative(&self) -> FiniteTree {
        let nodes = self
            .nodes
            .iter()
            .filter(|n| !n.is_empty())
            .map(|n| n[..n.len() - 1].to_vec())
            .collect();
        FiniteTree { nodes }
    }

    /// Least `k` with `T^{(k)} = ∅`, by iterating the derivative.
    pub fn rank(&self) -> usize {
        let mut t = self.clone();
        let mut k = 0;
        while !t.is_empty() {
            t = t.derivative();
            k += 1;
        }
        k
    }

    /// Rank via `ρ(s) = 1 + max ρ(children)`, with `ρ(leaf) = 1`.
    pub fn rank_by_node_height(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.node_height(&[])
    }

    fn node_height(&self, node: &[u32]) -> usize {
        1 + self
            .children(node)
            .map(|c| self.node_height(&c))
            .max()
            .unwrap_or(0)
    }

    fn children<'a>(&'a self, node: &'a [u32]) -> impl Iterator<Item = Vec<u32>> + 'a {
        let depth = node.len();
        self.nodes
            .range(node.to_vec()..)
            .skip(1)
            .take_while(move |n| n.starts_with(node))
            .filter(move |n| n.len() == depth + 1)
            .cloned()
    }

    /// One node per line, entries space separated, the root written as `-`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            if node.is_empty() {
                out.push('-');
            } else {
                let parts: Vec<String> = node.iter().map(u32::to_string).collect();
                out.push_str(&parts.join(" "));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for FiniteTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "-" {
                nodes.push(Vec::new());
                continue;
            }
            let node = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>().map_err(|_| {
                        Error::parse("tree-node", lineno + 1, t, "expected a positive integer")
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            nodes.push(node);
        }
        FiniteTree::from_nodes(nodes)
    }
}

/// The Schreier family `S_ξ` as a tree of increasing sequences with entries `≤ n`.
pub fn restricted_schreier_tree(xi: &Ordinal, n: u32) -> FiniteTree {
    let nodes = schreier::enumerate(xi, n)
        .into_iter()
        .map(|f| f.into_vec())
        .collect();
    FiniteTree::from_closed_set(nodes)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// No explored node at the depth bound has an admitted extension.
    Finite,
    /// Some node at the depth bound still extends; nothing is claimed.
    HitBound,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Finite => "finite",
            Verdict::HitBound => "hit-bound",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Exploration {
    pub truncation: FiniteTree,
    pub verdict: Verdict,
}

/// Explores a tree given by a prefix-antitone admission predicate, visiting every
/// sequence with entries `≤ width_bound` and length `≤ depth_bound` whose prefixes
/// are admitted. The verdict probes one level past the depth bound.
pub fn explore<E, P>(depth_bound: usize, width_bound: u32, mut admit: P) -> Result<Exploration, E>
where
    E: From<Error>,
    P: FnMut(&[u32]) -> Result<bool, E>,
{
    if depth_bound == 0 || width_bound == 0 {
        return Err(Error::domain("exploration bounds must be >= 1").into());
    }
    let mut nodes = BTreeSet::new();
    if !admit(&[])? {
        return Ok(Exploration {
            truncation: FiniteTree::empty(),
            verdict: Verdict::Finite,
        });
    }
    nodes.insert(Vec::new());
    let mut frontier = vec![Vec::new()];
    let mut verdict = Verdict::Finite;
    for depth in 0..=depth_bound {
        let mut next = Vec::new();
        'nodes: for node in &frontier {
            for entry in 1..=width_bound {
                let mut child: Vec<u32> = node.clone();
                child.push(entry);
                if admit(&child)? {
                    if depth == depth_bound {
                        verdict = Verdict::HitBound;
                        break 'nodes;
                    }
                    next.push(child);
                }
            }
        }
        if depth == depth_bound || next.is_empty() {
            break;
        }
        nodes.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(Exploration {
        truncation: FiniteTree::from_closed_set(nodes),
        verdict,
    })
}

/// Infallible form of [`explore`] for plain membership predicates.
pub fn is_well_founded_evidence<P>(
    admit: P,
    depth_bound: usize,
    width_bound: u32,
) -> Result<Exploration>
where
    P: Fn(&[u32]) -> bool,
{
    explore(depth_bound, width_bound, |node| Ok::<_, Error>(admit(node)))
}

/// Admission predicate for the increasing-sequence tree of `S_ξ`.
pub fn schreier_predicate(xi: &Ordinal) -> impl Fn(&[u32]) -> bool + '_ {
    move |node| node.windows(2).all(|w| w[0] < w[1]) && schreier::member_slice(xi, node)
}
