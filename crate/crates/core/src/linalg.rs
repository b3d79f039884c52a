//! Dense exact linear algebra over `Q`. Matrices are row-major `Vec<Vec<Q>>`.

use num::{One, Signed, Zero};

use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Q::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &Matrix, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn dot(u: &[Q], v: &[Q]) -> Q {
    u.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// `vᵀ A v`.
pub fn quadratic_form(a: &Matrix, v: &[Q]) -> Q {
    dot(v, &mul_vec(a, v))
}

/// Reduced row echelon form in place; returns the pivot columns.
fn row_reduce(a: &mut Matrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    row_reduce(&mut m).len()
}

/// A nonzero `v` with `A v = 0`, if the columns are dependent.
pub fn kernel_vector(a: &Matrix) -> Option<Vec<Q>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let pivots = row_reduce(&mut m);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Q::zero(); cols];
    v[free] = Q::one();
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = -m[r][free].clone();
    }
    Some(v)
}

/// The unique solution of `A x = b` for square nonsingular `A`.
pub fn solve(a: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// `None` when the symmetric matrix is positive semidefinite, otherwise a
/// vector `v` with `vᵀ A v < 0`. Symmetric Gaussian elimination, tracking the
/// congruence so the direction refers to the original coordinates.
pub fn negative_direction(a: &Matrix) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m = a.clone();
    // columns of e hold the transformed basis: m = eᵀ a e
    let mut e = identity(n);
    let column = |e: &Matrix, v: &[Q]| -> Vec<Q> { mul_vec(e, v) };
    for i in 0..n {
        if m[i][i].is_negative() {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            return Some(column(&e, &v));
        }
        if m[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !m[i][j].is_zero()) {
                let t = -(&m[j][j] + Q::one()) / (Q::from_integer(2.into()) * &m[i][j]);
                let mut v = vec![Q::zero(); n];
                v[i] = t;
                v[j] = Q::one();
                return Some(column(&e, &v));
            }
            continue;
        }
        for j in i + 1..n {
            if m[i][j].is_zero() {
                continue;
            }
            let f = &m[i][j] / &m[i][i];
            for r in 0..n {
                let delta = &f * &m[r][i];
                m[r][j] -= delta;
            }
            for c in 0..n {
                let delta = &f * &m[i][c];
                m[j][c] -= delta;
            }
            for r in 0..n {
                let delta = &f * &e[r][i];
                e[r][j] -= delta;
            }
        }
    }
    None
}

pub fn is_psd(a: &Matrix) -> bool {
    negative_direction(a).is_none()
}
