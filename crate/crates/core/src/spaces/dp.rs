//! Memoised recursions for the Schreier and Tsirelson norms.
//!
//! Both norms optimise over start sets `A ∈ S_ξ` drawn from the support. A set
//! in `S_{ζ+1}` is a chain of at most `min A` consecutive `S_ζ` pieces, and a set
//! in `S_λ` lies in some `S_{λ[n]}` with `n ≤ min A`, so the optimum over `A`
//! with a given least position `i`, restricted to the positions `[i, e)`,
//! decomposes along the ordinal. Positions index the sorted support; `idx[p]`
//! is the basis index at position `p`.
//!
//! When the whole window `idx[i..e]` is itself in `S_ζ`, every subset is too
//! (the families are hereditary) and the window is optimised without the
//! ordinal constraint.

use std::collections::HashMap;

use num::{Signed, Zero};

use super::witness::{TsirelsonBlock, TsirelsonWitness};
use super::RationalVector;
use crate::ordinal::{Classification, Ordinal};
use crate::rational::Q;
use crate::schreier::{member_slice, FiniteSet};

#[derive(Clone, Copy)]
enum Kind {
    Zero,
    Successor(usize),
    Limit,
}

/// Interned ordinals with cached predecessors and fundamental sequences.
#[derive(Default)]
struct Ords {
    list: Vec<Ordinal>,
    ids: HashMap<Ordinal, usize>,
    kinds: Vec<Kind>,
    fund: HashMap<(usize, u32), usize>,
}

impl Ords {
    fn id(&mut self, o: &Ordinal) -> usize {
        if let Some(&id) = self.ids.get(o) {
            return id;
        }
        let kind = match o.classify() {
            Classification::Zero => Kind::Zero,
            Classification::Successor(p) => Kind::Successor(self.id(&p)),
            Classification::Limit => Kind::Limit,
        };
        let id = self.list.len();
        self.list.push(o.clone());
        self.kinds.push(kind);
        self.ids.insert(o.clone(), id);
        id
    }

    fn kind(&self, id: usize) -> Kind {
        self.kinds[id]
    }

    fn fundamental(&mut self, id: usize, n: u32) -> usize {
        if let Some(&f) = self.fund.get(&(id, n)) {
            return f;
        }
        let o = self.list[id]
            .fundamental_sequence(n as u64)
            .expect("limit ordinal");
        let f = self.id(&o);
        self.fund.insert((id, n), f);
        f
    }
}

/// `(value, previous boundary)` of the best chain of a fixed length.
type Entry = Option<(Q, usize)>;

/// Chains `i = p_1 < … < p_{c+1} = q` maximising `Σ piece(z, p_t, p_{t+1})`,
/// memoised by `(z, i, c, q)`. Ties go to the earliest last boundary.
trait Chains {
    fn piece(&mut self, z: usize, a: usize, b: usize) -> Q;
    fn memo(&mut self) -> &mut HashMap<(usize, usize, usize, usize), Entry>;

    fn chain(&mut self, z: usize, i: usize, c: usize, q: usize) -> Entry {
        if let Some(hit) = self.memo().get(&(z, i, c, q)) {
            return hit.clone();
        }
        let result = if c == 1 {
            Some((self.piece(z, i, q), i))
        } else {
            let mut best: Entry = None;
            for p in i + c - 1..q {
                let Some((left, _)) = self.chain(z, i, c - 1, p) else {
                    continue;
                };
                let total = left + self.piece(z, p, q);
                if best.as_ref().map_or(true, |(b, _)| total > *b) {
                    best = Some((total, p));
                }
            }
            best
        };
        self.memo().insert((z, i, c, q), result.clone());
        result
    }

    /// Best over `c` in `cmin..=cmax`; fewer pieces win ties.
    fn best_chain(
        &mut self,
        z: usize,
        i: usize,
        q: usize,
        cmin: usize,
        cmax: usize,
    ) -> Option<(Q, usize)> {
        let mut best: Option<(Q, usize)> = None;
        for c in cmin..=cmax.min(q - i) {
            if let Some((v, _)) = self.chain(z, i, c, q) {
                if best.as_ref().map_or(true, |(b, _)| v > *b) {
                    best = Some((v, c));
                }
            }
        }
        best
    }

    /// Boundaries `[p_1, …, p_{c+1}]` of a memoised chain.
    fn bounds(&mut self, z: usize, i: usize, c: usize, q: usize) -> Vec<usize> {
        let mut out = vec![q];
        let mut end = q;
        for level in (1..=c).rev() {
            let (_, p) = self.chain(z, i, level, end).expect("memoised chain");
            out.push(p);
            end = p;
        }
        out.reverse();
        out
    }
}

fn max_index(values: impl IntoIterator<Item = Q>) -> Option<(Q, usize)> {
    let mut best: Option<(Q, usize)> = None;
    for (p, v) in values.into_iter().enumerate() {
        if best.as_ref().map_or(true, |(b, _)| v > *b) {
            best = Some((v, p));
        }
    }
    best
}

// ---------------------------------------------------------------- Schreier

#[derive(Clone)]
enum SChoice {
    Single,
    All,
    Chain(usize, usize),
    Via(usize),
}

struct SchreierDp {
    idx: Vec<u32>,
    w: Vec<Q>,
    ords: Ords,
    memo: HashMap<(usize, usize, usize), (Q, SChoice)>,
    chains: HashMap<(usize, usize, usize, usize), Entry>,
}

impl Chains for SchreierDp {
    fn piece(&mut self, z: usize, a: usize, b: usize) -> Q {
        self.best(z, a, b)
    }

    fn memo(&mut self) -> &mut HashMap<(usize, usize, usize, usize), Entry> {
        &mut self.chains
    }
}

impl SchreierDp {
    /// Best `Σ_{p ∈ A} w_p` over `A ∈ S_z` inside `[i, e)` with `min A = i`.
    fn best(&mut self, z: usize, i: usize, e: usize) -> Q {
        if let Some((v, _)) = self.memo.get(&(z, i, e)) {
            return v.clone();
        }
        let (v, c) = if i + 1 == e || matches!(self.ords.kind(z), Kind::Zero) {
            (self.w[i].clone(), SChoice::Single)
        } else if member_slice(&self.ords.list[z], &self.idx[i..e]) {
            let sum = self.w[i..e].iter().fold(Q::zero(), |a, b| a + b);
            (sum, SChoice::All)
        } else {
            match self.ords.kind(z) {
                Kind::Successor(p) => {
                    let (v, c) = self
                        .best_chain(p, i, e, 1, self.idx[i] as usize)
                        .expect("a single piece is always available");
                    (v, SChoice::Chain(p, c))
                }
                Kind::Limit => {
                    let steps: Vec<usize> = (1..=self.idx[i])
                        .map(|n| self.ords.fundamental(z, n))
                        .collect();
                    let values: Vec<Q> = steps.iter().map(|&f| self.best(f, i, e)).collect();
                    let (v, n) = max_index(values).expect("min F >= 1");
                    (v, SChoice::Via(steps[n]))
                }
                Kind::Zero => unreachable!(),
            }
        };
        self.memo.insert((z, i, e), (v.clone(), c));
        v
    }

    fn collect(&mut self, z: usize, i: usize, e: usize, out: &mut Vec<u32>) {
        let choice = self.memo[&(z, i, e)].1.clone();
        match choice {
            SChoice::Single => out.push(self.idx[i]),
            SChoice::All => out.extend_from_slice(&self.idx[i..e]),
            SChoice::Chain(p, c) => {
                for w in self.bounds(p, i, c, e).windows(2) {
                    self.collect(p, w[0], w[1], out);
                }
            }
            SChoice::Via(f) => self.collect(f, i, e, out),
        }
    }
}

/// `sup_{F ∈ S_ξ} Σ_{i∈F} |x_i|` together with one maximising `F`.
pub(crate) fn schreier_norm(xi: &Ordinal, x: &RationalVector) -> (Q, FiniteSet) {
    let idx = x.support();
    if idx.is_empty() {
        return (Q::zero(), FiniteSet::empty());
    }
    let w = idx.iter().map(|&i| x.get(i).abs()).collect();
    let k = idx.len();
    let mut dp = SchreierDp {
        idx,
        w,
        ords: Ords::default(),
        memo: HashMap::new(),
        chains: HashMap::new(),
    };
    let root = dp.ords.id(xi);
    let values: Vec<Q> = (0..k).map(|i| dp.best(root, i, k)).collect();
    let (value, i) = max_index(values).expect("nonempty support");
    let mut set = Vec::new();
    dp.collect(root, i, k, &mut set);
    (
        value,
        FiniteSet::new(set).expect("positions are increasing"),
    )
}

// ---------------------------------------------------------------- Tsirelson

#[derive(Clone)]
enum NChoice {
    Sup(usize),
    Star,
    Shift(usize),
}

#[derive(Clone)]
enum GChoice {
    Partition,
    Chain(usize, usize),
    Single(usize),
    Via(usize),
}

struct TsirelsonDp<'a> {
    idx: Vec<u32>,
    w: Vec<Q>,
    theta: &'a Q,
    root: usize,
    ords: Ords,
    norms: HashMap<(usize, usize), (Q, NChoice)>,
    stars: HashMap<(usize, usize, usize), Option<(Q, GChoice)>>,
    chains: HashMap<(usize, usize, usize, usize), Entry>,
    /// Best split of `[i, q)` into one or more blocks: value and last cut.
    partitions: HashMap<(usize, usize), (Q, Option<usize>)>,
}

impl Chains for TsirelsonDp<'_> {
    fn piece(&mut self, z: usize, a: usize, b: usize) -> Q {
        self.full(z, a, b)
    }

    fn memo(&mut self) -> &mut HashMap<(usize, usize, usize, usize), Entry> {
        &mut self.chains
    }
}

impl TsirelsonDp<'_> {
    /// Norm of `x` restricted to the positions `[i, e)`.
    fn norm(&mut self, i: usize, e: usize) -> Q {
        if let Some((v, _)) = self.norms.get(&(i, e)) {
            return v.clone();
        }
        let (top, p) = max_index(self.w[i..e].iter().cloned()).expect("nonempty window");
        let mut comb: Option<(Q, NChoice)> = self.star(self.root, i, e).map(|v| (v, NChoice::Star));
        for j in i + 1..e {
            let v = self.full(self.root, j, e);
            if comb.as_ref().map_or(true, |(b, _)| v > *b) {
                comb = Some((v, NChoice::Shift(j)));
            }
        }
        let result = match comb {
            Some((v, c)) if self.theta * &v > top => (self.theta * v, c),
            _ => (top, NChoice::Sup(i + p)),
        };
        self.norms.insert((i, e), result.clone());
        result.0
    }

    /// Best `Σ` of block norms over splits of `[i, q)` into at least one block.
    fn partition(&mut self, i: usize, q: usize) -> Q {
        if let Some((v, _)) = self.partitions.get(&(i, q)) {
            return v.clone();
        }
        let mut best = (self.norm(i, q), None);
        for p in i + 1..q {
            let v = self.partition(i, p) + self.norm(p, q);
            if v > best.0 {
                best = (v, Some(p));
            }
        }
        self.partitions.insert((i, q), best.clone());
        best.0
    }

    /// The same with at least two blocks; returns the last cut.
    fn partition2(&mut self, i: usize, e: usize) -> (Q, usize) {
        let values: Vec<Q> = (i + 1..e)
            .map(|p| self.partition(i, p) + self.norm(p, e))
            .collect();
        let (v, p) = max_index(values).expect("window of length >= 2");
        (v, i + 1 + p)
    }

    /// Best over `A` with least position `i`, `|A| ≥ 2`, `A ∈ S_z`, inside `[i, e)`.
    fn star(&mut self, z: usize, i: usize, e: usize) -> Option<Q> {
        if e - i < 2 {
            return None;
        }
        if let Some(hit) = self.stars.get(&(z, i, e)) {
            return hit.as_ref().map(|(v, _)| v.clone());
        }
        let result = match self.ords.kind(z) {
            Kind::Zero => None,
            _ if member_slice(&self.ords.list[z], &self.idx[i..e]) => {
                Some((self.partition2(i, e).0, GChoice::Partition))
            }
            Kind::Successor(p) => {
                let chain = self
                    .best_chain(p, i, e, 2, self.idx[i] as usize)
                    .map(|(v, c)| (v, GChoice::Chain(p, c)));
                let single = self.star(p, i, e).map(|v| (v, GChoice::Single(p)));
                match (chain, single) {
                    (Some(c), Some(s)) => Some(if s.0 > c.0 { s } else { c }),
                    (c, s) => c.or(s),
                }
            }
            Kind::Limit => {
                let mut best: Option<(Q, GChoice)> = None;
                for n in 1..=self.idx[i] {
                    let f = self.ords.fundamental(z, n);
                    if let Some(v) = self.star(f, i, e) {
                        if best.as_ref().map_or(true, |(b, _)| v > *b) {
                            best = Some((v, GChoice::Via(f)));
                        }
                    }
                }
                best
            }
        };
        self.stars.insert((z, i, e), result.clone());
        result.map(|(v, _)| v)
    }

    /// Best over all `A ∈ S_z` with least position `i` inside `[i, e)`.
    fn full(&mut self, z: usize, i: usize, e: usize) -> Q {
        let single = self.norm(i, e);
        match self.star(z, i, e) {
            Some(v) if v > single => v,
            _ => single,
        }
    }

    fn full_blocks(&mut self, z: usize, i: usize, e: usize, out: &mut Vec<(usize, usize)>) {
        let single = self.norm(i, e);
        match self.star(z, i, e) {
            Some(v) if v > single => self.star_blocks(z, i, e, out),
            _ => out.push((i, e)),
        }
    }

    fn partition_blocks(&mut self, i: usize, q: usize, out: &mut Vec<(usize, usize)>) {
        self.partition(i, q);
        match self.partitions[&(i, q)].1 {
            None => out.push((i, q)),
            Some(p) => {
                self.partition_blocks(i, p, out);
                out.push((p, q));
            }
        }
    }

    fn star_blocks(&mut self, z: usize, i: usize, e: usize, out: &mut Vec<(usize, usize)>) {
        let choice = self.stars[&(z, i, e)]
            .as_ref()
            .expect("star value")
            .1
            .clone();
        match choice {
            GChoice::Partition => {
                let (_, p) = self.partition2(i, e);
                self.partition_blocks(i, p, out);
                out.push((p, e));
            }
            GChoice::Chain(p, c) => {
                for w in self.bounds(p, i, c, e).windows(2) {
                    self.full_blocks(p, w[0], w[1], out);
                }
            }
            GChoice::Single(p) | GChoice::Via(p) => self.star_blocks(p, i, e, out),
        }
    }

    fn witness(&mut self, i: usize, e: usize) -> TsirelsonWitness {
        self.norm(i, e);
        let choice = self.norms[&(i, e)].1.clone();
        let mut blocks = Vec::new();
        match choice {
            NChoice::Sup(p) => return TsirelsonWitness::Coordinate(self.idx[p]),
            NChoice::Star => self.star_blocks(self.root, i, e, &mut blocks),
            NChoice::Shift(j) => self.full_blocks(self.root, j, e, &mut blocks),
        }
        TsirelsonWitness::Combination(
            blocks
                .into_iter()
                .map(|(a, b)| TsirelsonBlock {
                    lo: self.idx[a],
                    hi: self.idx[b - 1],
                    inner: self.witness(a, b),
                })
                .collect(),
        )
    }
}

/// The norm of `x` in `T[S_ξ, θ]` and the partition tree realising it.
pub(crate) fn tsirelson_norm(xi: &Ordinal, theta: &Q, x: &RationalVector) -> (Q, TsirelsonWitness) {
    let idx = x.support();
    if idx.is_empty() {
        return (Q::zero(), TsirelsonWitness::Zero);
    }
    let w = idx.iter().map(|&i| x.get(i).abs()).collect();
    let k = idx.len();
    let mut ords = Ords::default();
    let root = ords.id(xi);
    let mut dp = TsirelsonDp {
        idx,
        w,
        theta,
        root,
        ords,
        norms: HashMap::new(),
        stars: HashMap::new(),
        chains: HashMap::new(),
        partitions: HashMap::new(),
    };
    let value = dp.norm(0, k);
    let witness = dp.witness(0, k);
    (value, witness)
}
