//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num::{One, Signed, Zero};
use ssindex::{Classification, Ordinal, Q};

/// Schreier membership straight from the recursive definition, trying every
/// split into consecutive blocks in the successor case.
#[derive(Default)]
pub struct SchreierOracle {
    memo: HashMap<(Ordinal, Vec<u32>), bool>,
}

impl SchreierOracle {
    pub fn member(&mut self, xi: &Ordinal, f: &[u32]) -> bool {
        if f.is_empty() {
            return true;
        }
        let key = (xi.clone(), f.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match xi.classify() {
            Classification::Zero => f.len() == 1,
            Classification::Successor(z) => (1..=f[0] as usize).any(|k| self.splits(&z, f, k)),
            Classification::Limit => {
                (1..=f[0] as u64).any(|n| self.member(&xi.fundamental_sequence(n).unwrap(), f))
            }
        };
        self.memo.insert(key, v);
        v
    }

    /// Whether `f` is a union of exactly `k` consecutive nonempty members of `S_z`.
    fn splits(&mut self, z: &Ordinal, f: &[u32], k: usize) -> bool {
        if k == 1 {
            return self.member(z, f);
        }
        (1..f.len()).any(|cut| self.member(z, &f[..cut]) && self.splits(z, &f[cut..], k - 1))
    }

    /// Least number of consecutive `S_z` pieces, by trying every split.
    pub fn min_blocks(&mut self, z: &Ordinal, f: &[u32]) -> usize {
        (1..=f.len()).find(|&k| self.splits(z, f, k)).unwrap()
    }
}

/// Every subset of `{1..n}` as an increasing vector.
pub fn subsets(n: u32) -> Vec<Vec<u32>> {
    (0u32..1 << n)
        .map(|mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

pub fn ord(s: &str) -> Ordinal {
    s.parse().unwrap()
}

/// Tsirelson norm by unmemoised recursion over every admissible choice of
/// consecutive intervals. `x[i]` is the coordinate at index `i + 1`.
pub fn tsirelson_naive(oracle: &mut SchreierOracle, xi: &Ordinal, theta: &Q, x: &[Q]) -> Q {
    fn value(o: &mut SchreierOracle, xi: &Ordinal, theta: &Q, x: &[Q], lo: usize, hi: usize) -> Q {
        let mut best = x[lo..hi]
            .iter()
            .map(|q| q.abs())
            .max()
            .unwrap_or_else(Q::zero);
        let mut choices = Vec::new();
        intervals(lo, hi, &mut Vec::new(), &mut choices);
        for blocks in choices {
            if blocks.len() < 2 {
                continue;
            }
            let mins: Vec<u32> = blocks.iter().map(|&(a, _)| a as u32 + 1).collect();
            if !o.member(xi, &mins) {
                continue;
            }
            let mut sum = Q::zero();
            for (a, b) in blocks {
                sum += value(o, xi, theta, x, a, b);
            }
            let v = theta * sum;
            if v > best {
                best = v;
            }
        }
        best
    }
    fn intervals(
        from: usize,
        hi: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for a in from..hi {
            for b in a + 1..=hi {
                cur.push((a, b));
                intervals(b, hi, cur, out);
                cur.pop();
            }
        }
    }
    value(oracle, xi, theta, x, 0, x.len())
}

/// Rank of a prefix-closed tree by repeatedly deleting its leaves.
pub fn rank_by_leaf_removal(nodes: &BTreeSet<Vec<u32>>) -> usize {
    let mut t = nodes.clone();
    let mut k = 0;
    while !t.is_empty() {
        let keep: BTreeSet<Vec<u32>> = t
            .iter()
            .filter(|n| t.iter().any(|m| m.len() == n.len() + 1 && m.starts_with(n)))
            .cloned()
            .collect();
        t = keep;
        k += 1;
    }
    k
}

/// Solution of the square system `a x = b`, if unique.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for j in 0..n {
                    let d = &f * &a[c][j];
                    a[r][j] -= d;
                }
                let d = &f * &b[c];
                b[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Sign vectors in `{-1,1}^k` for the ℓ1 dual ball, or `±e_i` for ℓ∞.
pub fn dual_vertices(kind: &str, k: usize) -> Vec<Vec<Q>> {
    let one = Q::one();
    match kind {
        "l1" => (0u32..1 << k)
            .map(|m| {
                (0..k)
                    .map(|i| {
                        if m >> i & 1 == 1 {
                            -one.clone()
                        } else {
                            one.clone()
                        }
                    })
                    .collect()
            })
            .collect(),
        "linf" => (0..k)
            .flat_map(|i| {
                [one.clone(), -one.clone()].map(|s| {
                    let mut v = vec![Q::zero(); k];
                    v[i] = s;
                    v
                })
            })
            .collect(),
        _ => panic!("polyhedral kinds only"),
    }
}

/// `min ‖A x‖_Y / ‖x‖_X` for polyhedral `X = dom` on `R^k` and `Y = cod` on
/// `R^m`, `A` given by rows, assuming `A` is injective. For each norming
/// functional `g` of `X` solve the LP `min t : h·Ax ≤ t ∀h, g·x = 1` by
/// visiting every basic solution.
pub fn min_ratio_by_vertices(dom: &str, cod: &str, a: &[Vec<Q>]) -> Q {
    let m = a.len();
    let k = a[0].len();
    let hs: Vec<Vec<Q>> = dual_vertices(cod, m)
        .into_iter()
        .map(|h| {
            (0..k)
                .map(|j| (0..m).map(|i| &h[i] * &a[i][j]).sum())
                .collect()
        })
        .collect();
    let mut best: Option<Q> = None;
    for g in dual_vertices(dom, k) {
        for pick in k_subsets(hs.len(), k) {
            // unknowns (x_1..x_k, t): rows h·x - t = 0 for picked h, and g·x = 1
            let mut rows: Vec<Vec<Q>> = pick
                .iter()
                .map(|&p| {
                    let mut r = hs[p].clone();
                    r.push(-Q::one());
                    r
                })
                .collect();
            let mut last = g.clone();
            last.push(Q::zero());
            rows.push(last);
            let mut rhs = vec![Q::zero(); k];
            rhs.push(Q::one());
            let Some(sol) = solve(rows, rhs) else {
                continue;
            };
            let (x, t) = sol.split_at(k);
            let feasible = hs.iter().all(|h| {
                let v: Q = h.iter().zip(x).map(|(p, q)| p * q).sum();
                v <= t[0]
            });
            if feasible && best.as_ref().map_or(true, |b| t[0] < *b) {
                best = Some(t[0].clone());
            }
        }
    }
    best.expect("an injective map has a finite optimum")
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
