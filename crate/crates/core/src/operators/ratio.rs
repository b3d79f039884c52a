//! Exact minimisation of `‖T Σ a_j x_j‖ / ‖Σ a_j x_j‖` over a finite span.
//!
//! With `q(a) = ‖T X a‖` and `p(a) = ‖X a‖`, the minimum of `q/p` is the
//! reciprocal of the maximum of `p` over the ball `{q ≤ 1}`. When `q` is
//! polyhedral that ball is a polytope and a convex `p` peaks at a vertex. The
//! polytope is found by cutting planes: start from the coordinate functionals,
//! and whenever a vertex lies outside the ball add the pulled-back norming
//! functional at that vertex.

use num::{One, Signed, Zero};

use super::Operator;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::Q;
use crate::spaces::{
    norm, norm_exact, norming_functional, Magnitude, NormDescriptor, RationalVector,
};

#[derive(Clone, Debug)]
pub struct RatioBudget {
    /// Cuts added per polytope.
    pub max_rounds: usize,
    /// Adjacency checks allowed while building one polytope.
    pub max_work: u64,
    /// Bisection steps when both norms are Euclidean.
    pub bisection_steps: u32,
}

impl Default for RatioBudget {
    fn default() -> Self {
        RatioBudget {
            max_rounds: 256,
            max_work: 50_000_000,
            bisection_steps: 64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinRatio {
    /// A ratio attained by `coefficients`.
    pub ratio: Magnitude,
    pub coefficients: Vec<Q>,
    /// A certified lower bound for the minimum; equal to `ratio` unless both
    /// norms are Euclidean.
    pub lower: Magnitude,
}

impl MinRatio {
    fn exact(ratio: Magnitude, coefficients: Vec<Q>) -> Self {
        MinRatio {
            lower: ratio.clone(),
            ratio,
            coefficients,
        }
    }
}

struct Span {
    xs: Vec<RationalVector>,
    ys: Vec<RationalVector>,
}

impl Span {
    fn new(t: &Operator, xs: &[RationalVector]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::domain("empty span"));
        }
        let ys = xs.iter().map(|x| t.apply(x)).collect::<Result<Vec<_>>>()?;
        Ok(Span {
            xs: xs.to_vec(),
            ys,
        })
    }

    fn k(&self) -> usize {
        self.xs.len()
    }
}

/// Coordinates of `vs` as the columns of a matrix.
fn as_matrix(vs: &[RationalVector]) -> Matrix {
    let mut coords: Vec<u32> = vs.iter().flat_map(RationalVector::support).collect();
    coords.sort_unstable();
    coords.dedup();
    coords
        .iter()
        .map(|&s| vs.iter().map(|v| v.get(s)).collect())
        .collect()
}

fn gram(vs: &[RationalVector]) -> Matrix {
    vs.iter()
        .map(|u| vs.iter().map(|v| u.dot(v)).collect())
        .collect()
}

/// The minimum of `‖T x‖/‖x‖` over `x ≠ 0` in the span of `xs`, which must be
/// linearly independent.
pub fn min_ratio(t: &Operator, xs: &[RationalVector], budget: &RatioBudget) -> Result<MinRatio> {
    let span = Span::new(t, xs)?;
    let k = span.k();
    if linalg::rank(&as_matrix(&span.xs)) < k {
        return Err(Error::domain("the selected vectors are linearly dependent"));
    }
    if let Some(a) = linalg::kernel_vector(&as_matrix(&span.ys)) {
        return Ok(MinRatio::exact(Magnitude::zero(), a));
    }
    let evaluate = |a: &[Q]| -> Magnitude {
        let x = RationalVector::combination(&span.xs, a);
        let y = RationalVector::combination(&span.ys, a);
        norm(&t.codomain, &y).div(&norm(&t.domain, &x))
    };
    if k == 1 {
        let a = vec![Q::one()];
        return Ok(MinRatio::exact(evaluate(&a), a));
    }
    match (t.domain.is_polyhedral(), t.codomain.is_polyhedral()) {
        (_, true) => {
            let ball = Polytope::of_ball(&t.codomain, &span.ys, budget)?;
            let mut best: Option<(Magnitude, Vec<Q>)> = None;
            for v in ball.points() {
                let r = evaluate(&v);
                if best.as_ref().map_or(true, |(b, _)| r < *b) {
                    best = Some((r, v));
                }
            }
            let (r, a) = best.expect("a bounded polytope has vertices");
            Ok(MinRatio::exact(r, a))
        }
        (true, false) => {
            let ball = Polytope::of_ball(&t.domain, &span.xs, budget)?;
            let m = gram(&span.ys);
            let mut best: Option<(Q, Vec<Q>)> = None;
            for g in &ball.facets {
                let u = linalg::solve(&m, g).expect("the image Gram matrix is nonsingular");
                let value = linalg::dot(g, &u);
                if best.as_ref().map_or(true, |(b, _)| value > *b) {
                    best = Some((value, u));
                }
            }
            let (_, a) = best.expect("a bounded polytope has facets");
            Ok(MinRatio::exact(evaluate(&a), a))
        }
        (false, false) => euclidean(&span, budget),
    }
}

/// Bisection on `t` for positive semidefiniteness of `M - t G`.
fn euclidean(span: &Span, budget: &RatioBudget) -> Result<MinRatio> {
    let m = gram(&span.ys);
    let g = gram(&span.xs);
    let k = span.k();
    let rayleigh = |v: &[Q]| linalg::quadratic_form(&m, v) / linalg::quadratic_form(&g, v);
    let mut best: Vec<Q> = (0..k)
        .map(|j| if j == 0 { Q::one() } else { Q::zero() })
        .collect();
    let mut hi = rayleigh(&best);
    let mut lo = Q::zero();
    let two = Q::from_integer(2.into());
    for _ in 0..budget.bisection_steps {
        if lo == hi {
            break;
        }
        let mid = (&lo + &hi) / &two;
        let shifted: Matrix = m
            .iter()
            .zip(&g)
            .map(|(mr, gr)| mr.iter().zip(gr).map(|(a, b)| a - &mid * b).collect())
            .collect();
        match linalg::negative_direction(&shifted) {
            Some(v) => {
                hi = rayleigh(&v);
                best = v;
            }
            None => lo = mid,
        }
    }
    Ok(MinRatio {
        ratio: Magnitude::sqrt(hi),
        coefficients: best,
        lower: Magnitude::sqrt(lo),
    })
}

/// Whether `‖T x‖ ≥ threshold · ‖x‖` on the whole span, decided exactly.
pub(crate) fn bounded_below(
    t: &Operator,
    xs: &[RationalVector],
    threshold: &Q,
    budget: &RatioBudget,
) -> Result<bool> {
    if !t.domain.is_polyhedral() && !t.codomain.is_polyhedral() {
        let span = Span::new(t, xs)?;
        if linalg::rank(&as_matrix(&span.xs)) < span.k() {
            return Err(Error::domain("the selected vectors are linearly dependent"));
        }
        let m = gram(&span.ys);
        let g = gram(&span.xs);
        let t2 = threshold * threshold;
        let shifted: Matrix = m
            .iter()
            .zip(&g)
            .map(|(mr, gr)| mr.iter().zip(gr).map(|(a, b)| a - &t2 * b).collect())
            .collect();
        return Ok(linalg::is_psd(&shifted));
    }
    let r = min_ratio(t, xs, budget)?;
    Ok(r.ratio.square() >= threshold * threshold)
}

/// `{a : ‖Σ a_j v_j‖ ≤ 1}` for a polyhedral norm and independent `v_j`,
/// maintained by the double description method.
struct Polytope {
    k: usize,
    facets: Vec<Vec<Q>>,
    vertices: Vec<Vertex>,
    work: u64,
}

struct Vertex {
    point: Vec<Q>,
    /// Indices of the constraints tight at the vertex, ascending.
    tight: Vec<usize>,
    checked: bool,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    intersect(a, b).len() == a.len()
}

impl Polytope {
    fn of_ball(d: &NormDescriptor, vs: &[RationalVector], budget: &RatioBudget) -> Result<Self> {
        let k = vs.len();
        // every norm here dominates the sup norm, so coordinate functionals are valid cuts
        let rows: Vec<Vec<Q>> = as_matrix(vs)
            .into_iter()
            .filter(|r| r.iter().any(|q| !q.is_zero()))
            .collect();
        let mut basis: Matrix = Vec::new();
        let mut rest = Vec::new();
        for row in rows {
            basis.push(row);
            if basis.len() > k || linalg::rank(&basis) < basis.len() {
                rest.push(basis.pop().expect("just pushed"));
            }
        }
        let mut poly = Polytope::parallelotope(&basis);
        for row in rest {
            let neg: Vec<Q> = row.iter().map(|q| -q).collect();
            poly.add(row, budget)?;
            poly.add(neg, budget)?;
        }
        for _ in 0..budget.max_rounds {
            let mut cut = None;
            for v in poly.vertices.iter_mut().filter(|v| !v.checked) {
                let z = RationalVector::combination(vs, &v.point);
                if norm_exact(d, &z)? > Q::one() {
                    let h = norming_functional(d, &z)?;
                    cut = Some(vs.iter().map(|x| h.dot(x)).collect::<Vec<Q>>());
                    break;
                }
                v.checked = true;
            }
            let Some(g) = cut else {
                return Ok(poly);
            };
            let neg: Vec<Q> = g.iter().map(|q| -q).collect();
            poly.add(g, budget)?;
            poly.add(neg, budget)?;
        }
        Err(Error::Undecided(format!(
            "unit ball of {d} on a {k}-dimensional span did not stabilise within {} cuts",
            budget.max_rounds
        )))
    }

    /// `{a : |⟨r_i, a⟩| ≤ 1}` for `k` independent rows.
    fn parallelotope(rows: &Matrix) -> Polytope {
        let k = rows.len();
        let mut facets = Vec::with_capacity(2 * k);
        for r in rows {
            facets.push(r.clone());
            facets.push(r.iter().map(|q| -q).collect());
        }
        let vertices = (0..1usize << k)
            .map(|mask| {
                let signs: Vec<Q> = (0..k)
                    .map(|i| {
                        if mask >> i & 1 == 0 {
                            Q::one()
                        } else {
                            -Q::one()
                        }
                    })
                    .collect();
                let point = linalg::solve(rows, &signs).expect("independent rows");
                let tight = (0..k).map(|i| 2 * i + (mask >> i & 1)).collect();
                Vertex {
                    point,
                    tight,
                    checked: false,
                }
            })
            .collect();
        Polytope {
            k,
            facets,
            vertices,
            work: 0,
        }
    }

    /// Intersects with `⟨g, a⟩ ≤ 1`.
    fn add(&mut self, g: Vec<Q>, budget: &RatioBudget) -> Result<()> {
        if self.facets.contains(&g) {
            return Ok(());
        }
        let index = self.facets.len();
        let values: Vec<Q> = self
            .vertices
            .iter()
            .map(|v| linalg::dot(&g, &v.point))
            .collect();
        self.facets.push(g);
        let one = Q::one();
        if values.iter().all(|s| *s < one) {
            return Ok(());
        }
        let outside: Vec<usize> = (0..values.len()).filter(|&i| values[i] > one).collect();
        let inside: Vec<usize> = (0..values.len()).filter(|&i| values[i] < one).collect();
        let mut created = Vec::new();
        for &u in &inside {
            for &w in &outside {
                self.work += self.vertices.len() as u64;
                if self.work > budget.max_work {
                    return Err(Error::Undecided(format!(
                        "vertex enumeration exceeded {} steps",
                        budget.max_work
                    )));
                }
                let z = intersect(&self.vertices[u].tight, &self.vertices[w].tight);
                if z.len() + 1 < self.k {
                    continue;
                }
                let blocked = self
                    .vertices
                    .iter()
                    .enumerate()
                    .any(|(i, v)| i != u && i != w && is_subset(&z, &v.tight));
                if blocked {
                    continue;
                }
                let (pu, pw) = (&self.vertices[u].point, &self.vertices[w].point);
                let lambda = (&one - &values[u]) / (&values[w] - &values[u]);
                let point = pu
                    .iter()
                    .zip(pw)
                    .map(|(a, b)| a + &lambda * (b - a))
                    .collect();
                let mut tight = z;
                tight.push(index);
                created.push(Vertex {
                    point,
                    tight,
                    checked: false,
                });
            }
        }
        let old = std::mem::take(&mut self.vertices);
        for (mut v, s) in old.into_iter().zip(values) {
            if s == one {
                v.tight.push(index);
                self.vertices.push(v);
            } else if s < one {
                self.vertices.push(v);
            }
        }
        self.vertices.extend(created);
        Ok(())
    }

    /// Vertex coordinates in ascending order.
    fn points(&self) -> Vec<Vec<Q>> {
        let mut p: Vec<Vec<Q>> = self.vertices.iter().map(|v| v.point.clone()).collect();
        p.sort();
        p
    }
}

/// Scales `a` so that `max |a_j| = 1` and the first nonzero entry is positive.
pub(crate) fn normalise(a: &[Q]) -> Vec<Q> {
    let top = a.iter().map(Signed::abs).max().unwrap_or_else(Q::zero);
    if top.is_zero() {
        return a.to_vec();
    }
    let first_negative = a
        .iter()
        .find(|q| !q.is_zero())
        .is_some_and(Signed::is_negative);
    let s = if first_negative { -top } else { top };
    a.iter().map(|q| q / &s).collect()
}
