//! Certificate search: some `x` in the span of `{x_n : n ∈ F}`, `F ∈ S_ξ`, with
//! `‖T x‖ < ε ‖x‖`.

use std::collections::HashSet;

use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::ratio::{min_ratio, normalise, RatioBudget};
use super::{ratio_of, BasicSequence, Operator};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::rational::{int, ratio, Q};
use crate::schreier::{self, FiniteSet};
use crate::spaces::Magnitude;

const MIN_TRIALS: usize = 32;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub seed: u64,
    /// Random coefficient tuples, shared among the candidate sets above
    /// `exact_dim`; every such set gets at least `MIN_TRIALS`.
    pub random_trials: usize,
    pub refine_rounds: usize,
    /// How many of the best randomised candidates get coordinate descent.
    pub refine_candidates: usize,
    /// Largest candidate size handled by the exact vertex method.
    pub exact_dim: usize,
    /// Cap on truncation-maximal candidate sets.
    pub candidate_budget: usize,
    pub ratio_budget: RatioBudget,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            random_trials: 10_000,
            refine_rounds: 16,
            refine_candidates: 8,
            exact_dim: 4,
            candidate_budget: 512,
            ratio_budget: RatioBudget::default(),
        }
    }
}

/// A vector `Σ_{n ∈ F} a_n x_n` and its ratio `‖T x‖ / ‖x‖`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub f: FiniteSet,
    pub coefficients: Vec<Q>,
    pub ratio: Magnitude,
}

impl Attempt {
    /// Smaller ratio first, then the lexicographically least set, then the
    /// least coefficient tuple.
    fn better_than(&self, other: &Attempt) -> bool {
        (&self.ratio, &self.f, &self.coefficients) < (&other.ratio, &other.f, &other.coefficients)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub xi: Ordinal,
    pub epsilon: Q,
    pub f: FiniteSet,
    pub coefficients: Vec<Q>,
    pub ratio: Magnitude,
    pub seed: u64,
}

impl Certificate {
    /// Recomputes the ratio from scratch and checks every invariant.
    pub fn verify(&self, t: &Operator, seq: &BasicSequence) -> Result<bool> {
        if self.f.is_empty() || self.f.len() != self.coefficients.len() {
            return Ok(false);
        }
        let x = seq.combine(self.f.as_slice(), &self.coefficients)?;
        if x.is_zero() {
            return Ok(false);
        }
        let r = ratio_of(t, &x)?;
        Ok(r == self.ratio && r.lt(&self.epsilon) && schreier::member(&self.xi, &self.f))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "xi": self.xi.to_string(),
            "epsilon": self.epsilon.to_string(),
            "F": self.f.as_slice(),
            "coefficients": self.coefficients.iter().map(Q::to_string).collect::<Vec<_>>(),
            "ratio": magnitude_json(&self.ratio),
            "seed": self.seed,
        })
    }
}

/// Exact values print as rationals; square roots as their square plus a
/// dyadic enclosure.
pub fn magnitude_json(m: &Magnitude) -> Value {
    match m {
        Magnitude::Exact(q) => Value::String(q.to_string()),
        Magnitude::Sqrt(s) => {
            let (lo, hi) = m.enclosure(64);
            json!({"squared": s.to_string(), "lower": lo.to_string(), "upper": hi.to_string()})
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub certificate: Option<Certificate>,
    pub best: Attempt,
    pub candidates_examined: usize,
    /// Every truncation-maximal set of `S_ξ` inside the sequence range was examined.
    pub exhaustive: bool,
}

impl SearchOutcome {
    pub fn success(&self) -> bool {
        self.certificate.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "success": self.success(),
            "certificate": self.certificate.as_ref().map(Certificate::to_json),
            "best_ratio": magnitude_json(&self.best.ratio),
            "best_F": self.best.f.as_slice(),
            "best_coefficients": self.best.coefficients.iter().map(Q::to_string).collect::<Vec<_>>(),
            "candidates_examined": self.candidates_examined,
            "exhaustive": self.exhaustive,
        })
    }
}

struct Scan {
    best: Attempt,
    examined: usize,
    exhaustive: bool,
}

pub fn witness_search(
    t: &Operator,
    xi: &Ordinal,
    epsilon: &Q,
    seq: &BasicSequence,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    check_epsilon(epsilon)?;
    let scan = scan(t, xi, seq, config)?;
    Ok(outcome(&scan, xi, epsilon, config.seed))
}

fn check_epsilon(epsilon: &Q) -> Result<()> {
    if epsilon.is_positive() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "epsilon must be positive, got {epsilon}"
        )))
    }
}

fn outcome(scan: &Scan, xi: &Ordinal, epsilon: &Q, seed: u64) -> SearchOutcome {
    let certificate = scan.best.ratio.lt(epsilon).then(|| Certificate {
        xi: xi.clone(),
        epsilon: epsilon.clone(),
        f: scan.best.f.clone(),
        coefficients: scan.best.coefficients.clone(),
        ratio: scan.best.ratio.clone(),
        seed,
    });
    SearchOutcome {
        certificate,
        best: scan.best.clone(),
        candidates_examined: scan.examined,
        exhaustive: scan.exhaustive,
    }
}

fn scan(t: &Operator, xi: &Ordinal, seq: &BasicSequence, config: &SearchConfig) -> Result<Scan> {
    if seq.is_empty() {
        return Err(Error::domain("the basic sequence is empty"));
    }
    let (candidates, exhaustive) = candidate_sets(xi, seq.len() as u32, config.candidate_budget);
    let randomised = candidates
        .iter()
        .filter(|f| f.len() > config.exact_dim)
        .count();
    let trials = (config.random_trials / randomised.max(1)).max(MIN_TRIALS);
    let mut results = candidates
        .par_iter()
        .map(|f| best_on(t, seq, f, config, trials).map(|(a, r)| Probe { f, a, r }))
        .collect::<Result<Vec<Probe>>>()?;
    // refine the most promising randomised candidates
    let mut order: Vec<usize> = (0..results.len())
        .filter(|&i| results[i].f.len() > config.exact_dim)
        .collect();
    order.sort_by(|&i, &j| (&results[i].r, results[i].f).cmp(&(&results[j].r, results[j].f)));
    order.truncate(config.refine_candidates);
    let refined = order
        .par_iter()
        .map(|&i| {
            let p = &results[i];
            refine(t, seq, p.f, config, p.a.clone(), p.r.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    for (&i, (a, r)) in order.iter().zip(refined) {
        results[i].a = a;
        results[i].r = r;
    }
    let best = results
        .into_iter()
        .map(Probe::reduced)
        .reduce(|a, b| if b.better_than(&a) { b } else { a })
        .expect("singletons are always candidates");
    Ok(Scan {
        best,
        examined: candidates.len(),
        exhaustive,
    })
}

struct Probe<'a> {
    f: &'a FiniteSet,
    a: Vec<Q>,
    r: Magnitude,
}

impl Probe<'_> {
    /// Drops the zero coefficients from the set.
    fn reduced(self) -> Attempt {
        let (support, coefficients): (Vec<u32>, Vec<Q>) = self
            .f
            .iter()
            .zip(self.a)
            .filter(|(_, a)| !a.is_zero())
            .unzip();
        Attempt {
            f: FiniteSet::new(support).expect("subset of an increasing set"),
            coefficients,
            ratio: self.r,
        }
    }
}

/// Greedy maximal intervals, then truncation-maximal members of `S_ξ` inside
/// `{1..n}` in lexicographic order up to the budget, then singletons.
pub(crate) fn candidate_sets(xi: &Ordinal, n: u32, budget: usize) -> (Vec<FiniteSet>, bool) {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut add = |f: Vec<u32>, out: &mut Vec<FiniteSet>| {
        if seen.insert(f.clone()) {
            out.push(FiniteSet::new(f).expect("increasing"));
        }
    };
    for start in 1..=n {
        let mut f = vec![start];
        while let Some(&last) = f.last() {
            if last == n {
                break;
            }
            f.push(last + 1);
            if !schreier::member_slice(xi, &f) {
                f.pop();
                break;
            }
        }
        add(f, &mut out);
    }
    let mut leaves = Vec::new();
    let complete = maximal_members(xi, n, &mut Vec::new(), budget, &mut leaves);
    for f in leaves {
        add(f, &mut out);
    }
    for start in 1..=n {
        add(vec![start], &mut out);
    }
    (out, complete)
}

fn maximal_members(
    xi: &Ordinal,
    n: u32,
    current: &mut Vec<u32>,
    budget: usize,
    leaves: &mut Vec<Vec<u32>>,
) -> bool {
    let next = current.last().map_or(1, |&m| m + 1);
    let mut extended = false;
    for m in next..=n {
        current.push(m);
        if schreier::member_slice(xi, current) {
            extended = true;
            if !maximal_members(xi, n, current, budget, leaves) {
                current.pop();
                return false;
            }
        }
        current.pop();
    }
    if !extended && !current.is_empty() {
        if leaves.len() == budget {
            return false;
        }
        leaves.push(current.clone());
    }
    true
}

fn seed_for(seed: u64, f: &FiniteSet) -> u64 {
    // FNV-1a over the elements
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for x in f.iter() {
        for b in x.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

fn best_on(
    t: &Operator,
    seq: &BasicSequence,
    f: &FiniteSet,
    config: &SearchConfig,
    trials: usize,
) -> Result<(Vec<Q>, Magnitude)> {
    if f.len() <= config.exact_dim {
        let xs: Vec<_> = f
            .iter()
            .map(|n| seq.get(n).cloned().expect("candidate within the sequence"))
            .collect();
        let r = min_ratio(t, &xs, &config.ratio_budget)?;
        Ok((normalise(&r.coefficients), r.ratio))
    } else {
        random_search(t, seq, f, config, trials)
    }
}

/// Keeps the better of `(r, a)` and the stored pair; ties go to the smaller tuple.
struct Tracker<'a> {
    t: &'a Operator,
    seq: &'a BasicSequence,
    f: &'a FiniteSet,
    best: Option<(Magnitude, Vec<Q>)>,
}

impl Tracker<'_> {
    fn consider(&mut self, a: Vec<Q>) -> Result<bool> {
        let a = normalise(&a);
        let x = self.seq.combine(self.f.as_slice(), &a)?;
        if x.is_zero() {
            return Ok(false);
        }
        let r = ratio_of(self.t, &x)?;
        let improves = self.best.as_ref().map_or(true, |(b, c)| (&r, &a) < (b, c));
        if improves {
            self.best = Some((r, a));
        }
        Ok(improves)
    }

    fn finish(self) -> (Vec<Q>, Magnitude) {
        let (r, a) = self.best.expect("unit probes are nonzero");
        (a, r)
    }
}

fn random_search(
    t: &Operator,
    seq: &BasicSequence,
    f: &FiniteSet,
    config: &SearchConfig,
    trials: usize,
) -> Result<(Vec<Q>, Magnitude)> {
    let k = f.len();
    let mut tr = Tracker {
        t,
        seq,
        f,
        best: None,
    };
    tr.consider(vec![int(1); k])?;
    for j in 0..k {
        tr.consider((0..k).map(|i| int((i == j) as i64)).collect())?;
    }
    tr.consider(
        (0..k)
            .map(|i| int(if i % 2 == 0 { 1 } else { -1 }))
            .collect(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(config.seed, f));
    for _ in 0..trials {
        tr.consider((0..k).map(|_| int(rng.gen_range(-8..=8))).collect())?;
    }
    Ok(tr.finish())
}

/// Coordinate descent with shrinking steps.
fn refine(
    t: &Operator,
    seq: &BasicSequence,
    f: &FiniteSet,
    config: &SearchConfig,
    a: Vec<Q>,
    r: Magnitude,
) -> Result<(Vec<Q>, Magnitude)> {
    let k = f.len();
    let mut tr = Tracker {
        t,
        seq,
        f,
        best: Some((r, a)),
    };
    let steps = [
        ratio(1, 1),
        ratio(1, 2),
        ratio(1, 4),
        ratio(1, 8),
        ratio(1, 16),
    ];
    for _ in 0..config.refine_rounds {
        let mut improved = false;
        for step in &steps {
            for j in 0..k {
                for sign in [1, -1] {
                    let mut a = tr.best.as_ref().expect("seeded").1.clone();
                    a[j] += step * int(sign);
                    improved |= tr.consider(a)?;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(tr.finish())
}

#[derive(Clone, Debug)]
pub struct EstimateEntry {
    pub xi: Ordinal,
    pub epsilon: Q,
    pub outcome: SearchOutcome,
}

#[derive(Clone, Debug)]
pub struct IndexReport {
    pub entries: Vec<EstimateEntry>,
    /// Least grid ordinal at which every `ε` produced a certificate.
    pub bracket: Option<Ordinal>,
}

impl IndexReport {
    pub fn to_json(&self) -> Value {
        json!({
            "entries": self.entries.iter().map(|e| json!({
                "xi": e.xi.to_string(),
                "epsilon": e.epsilon.to_string(),
                "outcome": e.outcome.to_json(),
            })).collect::<Vec<_>>(),
            "bracket": self.bracket.as_ref().map(Ordinal::to_string),
            "conclusive": false,
            "note": "truncation-scale evidence only; failures do not rule out membership",
        })
    }
}

/// One scan per grid ordinal; the best vector found decides every `ε`.
pub fn index_estimate(
    t: &Operator,
    xi_grid: &[Ordinal],
    epsilon_grid: &[Q],
    seq: &BasicSequence,
    config: &SearchConfig,
) -> Result<IndexReport> {
    if xi_grid.is_empty() || epsilon_grid.is_empty() {
        return Err(Error::domain("grids must be nonempty"));
    }
    if xi_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("the ordinal grid must be strictly ascending"));
    }
    for e in epsilon_grid {
        check_epsilon(e)?;
    }
    let mut entries = Vec::new();
    let mut bracket = None;
    for xi in xi_grid {
        let scan = scan(t, xi, seq, config)?;
        let mut all = true;
        for e in epsilon_grid {
            let outcome = outcome(&scan, xi, e, config.seed);
            all &= outcome.success();
            entries.push(EstimateEntry {
                xi: xi.clone(),
                epsilon: e.clone(),
                outcome,
            });
        }
        if all && bracket.is_none() {
            bracket = Some(xi.clone());
        }
    }
    Ok(IndexReport { entries, bracket })
}
