//! Operators between sequence spaces, certificate search for `S_ξ`-strict
//! singularity, witness trees and index estimates.

mod expr;
mod ratio;
mod search;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num::One;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Q};
use crate::spaces::{norm, Magnitude, NormDescriptor, RationalVector};

pub use expr::Expr;
pub use ratio::{min_ratio, MinRatio, RatioBudget};
pub use search::{
    index_estimate, magnitude_json, witness_search, Attempt, Certificate, EstimateEntry,
    IndexReport, SearchConfig, SearchOutcome,
};
pub use tree::{build_witness_tree, node_admitted, WitnessTree, WitnessTreeSpec};

/// How an operator acts on the unit vector basis.
#[derive(Clone, Debug)]
pub enum Action {
    Identity,
    /// `T e_i = d(i) e_i`.
    Diagonal(Expr),
    /// `T e_j = Σ_i a_{ij} e_i` for `j ≤ dim`, and `T e_j = e_j` beyond.
    Matrix {
        columns: BTreeMap<u32, RationalVector>,
        dim: u32,
        source: String,
    },
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Identity => f.write_str("identity"),
            Action::Diagonal(e) => write!(f, "diagonal {e}"),
            Action::Matrix { source, .. } => write!(f, "matrix {source}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Operator {
    pub domain: NormDescriptor,
    pub codomain: NormDescriptor,
    pub action: Action,
}

impl Operator {
    pub fn new(domain: NormDescriptor, codomain: NormDescriptor, action: Action) -> Self {
        Operator {
            domain,
            codomain,
            action,
        }
    }

    /// `diag(d(i))` on a single space.
    pub fn diagonal(space: NormDescriptor, rule: &str) -> Result<Self> {
        Ok(Operator::new(
            space.clone(),
            space,
            Action::Diagonal(rule.parse()?),
        ))
    }

    /// The formal identity between two sequence spaces.
    pub fn identity(domain: NormDescriptor, codomain: NormDescriptor) -> Self {
        Operator::new(domain, codomain, Action::Identity)
    }

    /// The image of `e_j`.
    pub fn column(&self, j: u32) -> Result<RationalVector> {
        match &self.action {
            Action::Identity => Ok(RationalVector::basis(j)),
            Action::Diagonal(e) => Ok(RationalVector::basis(j).scale(&e.eval(j)?)),
            Action::Matrix { columns, dim, .. } => Ok(if j > *dim {
                RationalVector::basis(j)
            } else {
                columns.get(&j).cloned().unwrap_or_default()
            }),
        }
    }

    pub fn apply(&self, x: &RationalVector) -> Result<RationalVector> {
        if let Action::Identity = self.action {
            return Ok(x.clone());
        }
        let mut out = RationalVector::zero();
        for (j, a) in x.iter() {
            out = out.add(&self.column(j)?.scale(a));
        }
        Ok(out)
    }

    /// Reads the line-oriented spec format; matrix paths resolve against the
    /// working directory.
    pub fn from_spec_file(path: &Path) -> Result<Self> {
        let text = read(path)?;
        Operator::from_spec(&text)
    }

    pub fn from_spec(text: &str) -> Result<Self> {
        let (mut domain, mut codomain, mut action) = (None, None, None);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "domain" => domain = Some(rest.parse::<NormDescriptor>()?),
                "codomain" => codomain = Some(rest.parse::<NormDescriptor>()?),
                "action" => action = Some(parse_action(rest, lineno + 1)?),
                other => {
                    return Err(Error::parse(
                        "operator-spec",
                        lineno + 1,
                        other,
                        "expected `domain`, `codomain` or `action`",
                    ))
                }
            }
        }
        let missing = |what: &str| Error::domain(format!("operator spec is missing `{what}`"));
        Ok(Operator::new(
            domain.ok_or_else(|| missing("domain"))?,
            codomain.ok_or_else(|| missing("codomain"))?,
            action.ok_or_else(|| missing("action"))?,
        ))
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.action, self.domain, self.codomain)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_action(rest: &str, lineno: usize) -> Result<Action> {
    let (kind, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    let arg = arg.trim();
    match kind {
        "identity" if arg.is_empty() => Ok(Action::Identity),
        "diagonal" => Ok(Action::Diagonal(arg.parse()?)),
        "matrix" => {
            let text = read(Path::new(arg))?;
            let (columns, dim) = parse_matrix(&text)?;
            Ok(Action::Matrix {
                columns,
                dim,
                source: arg.to_string(),
            })
        }
        _ => Err(Error::parse(
            "action",
            lineno,
            rest,
            "expected `identity`, `diagonal <expr>` or `matrix <path>`",
        )),
    }
}

/// `row col value` triples; returns the columns and the largest index used.
pub fn parse_matrix(text: &str) -> Result<(BTreeMap<u32, RationalVector>, u32)> {
    let mut columns: BTreeMap<u32, RationalVector> = BTreeMap::new();
    let mut dim = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::parse(
                "matrix-entry",
                lineno + 1,
                line,
                "expected `row col value`",
            ));
        }
        let index = |t: &str| -> Result<u32> {
            match t.parse::<u32>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(Error::parse(
                    "matrix-entry",
                    lineno + 1,
                    t,
                    "expected a positive index",
                )),
            }
        };
        let (row, col) = (index(parts[0])?, index(parts[1])?);
        let value = parse_rational(parts[2])?;
        dim = dim.max(row).max(col);
        columns.entry(col).or_default().add_at(row, &value);
    }
    Ok((columns, dim))
}

/// A finite front segment `x_1, …, x_n` of a basic sequence in the domain.
#[derive(Clone, Debug)]
pub struct BasicSequence {
    vectors: Vec<RationalVector>,
    /// Squared domain norms; 1 for every vector that could be normalised exactly.
    norm_squares: Vec<Q>,
}

impl BasicSequence {
    /// Normalises each vector to domain norm 1 when that norm is rational.
    /// With `block`, supports must be successive: `max supp x_n < min supp x_{n+1}`.
    pub fn new(domain: &NormDescriptor, vectors: Vec<RationalVector>, block: bool) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::domain("a basic sequence needs at least one vector"));
        }
        if block
            && vectors
                .windows(2)
                .any(|w| w[0].max_index() >= w[1].min_index())
        {
            return Err(Error::domain("block sequences need successive supports"));
        }
        let mut out = Vec::with_capacity(vectors.len());
        let mut squares = Vec::with_capacity(vectors.len());
        for (n, v) in vectors.into_iter().enumerate() {
            if v.is_zero() {
                return Err(Error::domain(format!(
                    "vector {} of the sequence is zero",
                    n + 1
                )));
            }
            match norm(domain, &v) {
                Magnitude::Exact(q) => {
                    out.push(v.scale(&q.recip()));
                    squares.push(Q::one());
                }
                Magnitude::Sqrt(s) => {
                    out.push(v);
                    squares.push(s);
                }
            }
        }
        Ok(BasicSequence {
            vectors: out,
            norm_squares: squares,
        })
    }

    /// `e_1, …, e_n`, normalised in the domain.
    pub fn unit_vectors(domain: &NormDescriptor, n: u32) -> Result<Self> {
        BasicSequence::new(domain, (1..=n).map(RationalVector::basis).collect(), true)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `x_n` for `1 ≤ n ≤ len`.
    pub fn get(&self, n: u32) -> Option<&RationalVector> {
        (n as usize)
            .checked_sub(1)
            .and_then(|i| self.vectors.get(i))
    }

    pub fn vectors(&self) -> &[RationalVector] {
        &self.vectors
    }

    pub fn norm_squares(&self) -> &[Q] {
        &self.norm_squares
    }

    /// `Σ a_i x_{F_i}`.
    pub fn combine(&self, f: &[u32], coefficients: &[Q]) -> Result<RationalVector> {
        let picked = f
            .iter()
            .map(|&n| {
                self.get(n)
                    .cloned()
                    .ok_or_else(|| Error::domain(format!("index {n} is outside the sequence")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalVector::combination(&picked, coefficients))
    }
}

/// `‖T x‖ / ‖x‖` for `x ≠ 0`.
pub fn ratio_of(t: &Operator, x: &RationalVector) -> Result<Magnitude> {
    if x.is_zero() {
        return Err(Error::domain("ratio of the zero vector"));
    }
    let image = t.apply(x)?;
    Ok(norm(&t.codomain, &image).div(&norm(&t.domain, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn d(s: &str) -> NormDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn apply_examples() {
        let id = Operator::identity(d("l1"), d("l1"));
        let x: RationalVector = "[1:1, 4:-2/3]".parse().unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
        let diag = Operator::diagonal(d("l1"), "1/i").unwrap();
        assert_eq!(
            diag.apply(&RationalVector::basis(3)).unwrap(),
            RationalVector::basis(3).scale(&ratio(1, 3))
        );
    }

    #[test]
    fn spec_and_matrix_files() {
        let op = Operator::from_spec("# compact\ndomain l1\ncodomain linf\naction diagonal 1/i\n")
            .unwrap();
        assert_eq!(op.codomain, NormDescriptor::Linf);
        assert!(Operator::from_spec("domain l1\naction identity\n").is_err());
        assert!(Operator::from_spec("domain l1\ncodomain l1\naction rotate\n").is_err());
        let (cols, dim) = parse_matrix("1 1 1\n2 1 1/2\n1 2 -1\n").unwrap();
        assert_eq!(dim, 2);
        let m = Operator::new(
            d("l1"),
            d("l1"),
            Action::Matrix {
                columns: cols,
                dim,
                source: "inline".into(),
            },
        );
        assert_eq!(m.column(1).unwrap(), "[1:1, 2:1/2]".parse().unwrap());
        assert_eq!(m.column(5).unwrap(), RationalVector::basis(5));
        let y = m.apply(&"[1:2, 2:1, 7:3]".parse().unwrap()).unwrap();
        assert_eq!(y, "[1:1, 2:1, 7:3]".parse().unwrap());
        assert!(parse_matrix("1 1\n").is_err());
        assert!(parse_matrix("0 1 1\n").is_err());
    }

    #[test]
    fn sequences_normalise() {
        let s = BasicSequence::new(&d("l1"), vec!["[1:2, 2:2]".parse().unwrap()], true).unwrap();
        assert_eq!(s.get(1).unwrap(), &"[1:1/2, 2:1/2]".parse().unwrap());
        let l2 = BasicSequence::new(&d("l2"), vec!["[1:1, 2:1]".parse().unwrap()], true).unwrap();
        assert_eq!(l2.norm_squares()[0], int(2));
        assert!(BasicSequence::new(&d("l1"), vec![RationalVector::zero()], false).is_err());
        assert!(BasicSequence::new(
            &d("l1"),
            vec![RationalVector::basis(3), RationalVector::basis(2)],
            true
        )
        .is_err());
    }
}
