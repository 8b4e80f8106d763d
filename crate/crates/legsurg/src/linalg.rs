//! Exact linear algebra over the integers and the rationals.
//!
//! Provides the Smith normal form with unimodular transforms, rational linear
//! solves and the signature of a symmetric rational matrix.  Matrices are
//! plain row-major `Vec<Vec<_>>`; dimensions in this crate are tiny (surgery
//! diagrams rarely exceed a dozen components), so clarity wins over speed.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{Int, Rational};

/// Row-major integer matrix.
pub type IntMatrix = Vec<Vec<Int>>;
/// Row-major rational matrix.
pub type RatMatrix = Vec<Vec<Rational>>;

/// `n × n` integer identity.
pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect()
}

/// Integer matrix product.
pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect()).collect()
}

/// Transpose of a rectangular matrix.
pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn determinant(m: &IntMatrix) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Result of [`smith_normal_form`]: `u · m · v = d` with `u`, `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d_0 | d_1 | …` (length `min(rows, cols)`), all non-negative.
    pub fn diagonal(&self) -> Vec<Int> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// `row[target] -= factor * row[source]`.
fn row_axpy(m: &mut IntMatrix, target: usize, source: usize, factor: &Int) {
    if factor.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(src.iter()) {
        *t -= factor * s;
    }
}

/// `col[target] -= factor * col[source]`.
fn col_axpy(m: &mut IntMatrix, target: usize, source: usize, factor: &Int) {
    if factor.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[source].clone();
        row[target] -= factor * s;
    }
}

/// Smith normal form of an arbitrary rectangular integer matrix.
///
/// Returns unimodular `u` (rows × rows) and `v` (cols × cols) with `u·m·v = d`
/// diagonal, non-negative and satisfying the divisibility chain.  Signs are
/// normalized through `u` only, so a `1 × 1` input always yields `v = (1)`.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // Smallest non-zero entry of the trailing block becomes the pivot.
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
            let Some((pi, pj)) = pivot else {
                break;
            };
            if pi != t {
                a.swap(pi, t);
                u.swap(pi, t);
            }
            if pj != t {
                swap_cols(&mut a, pj, t);
                swap_cols(&mut v, pj, t);
            }

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Enforce the divisibility chain: pull an offending row into row t.
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offending {
                Some(i) => {
                    let minus_one = -Int::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    Smith { u, d: a, v }
}

/// Solves `a · x = b` over the rationals; returns any particular solution, or
/// `None` when the system is inconsistent.  Free variables are set to zero.
pub fn solve_rational(a: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Rank of a rational matrix.
pub fn rank(a: &RatMatrix) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Signature (positive minus negative inertia) of a symmetric rational matrix,
/// computed by congruence diagonalization.
pub fn signature(a: &RatMatrix) -> i64 {
    let n = a.len();
    let mut m = a.clone();
    let mut sig = 0i64;
    let mut k = 0;
    while k < n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(j, k);
                for row in m.iter_mut() {
                    row.swap(j, k);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // e_k += e_j makes the (k, k) entry 2·m[k][j] ≠ 0.
                for i in 0..n {
                    let add = m[j][i].clone();
                    m[k][i] += add;
                }
                for i in 0..n {
                    let add = m[i][j].clone();
                    m[i][k] += add;
                }
            } else {
                k += 1;
                continue;
            }
        }
        let p = m[k][k].clone();
        sig += if p.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &p;
            for j in k..n {
                let sub = &f * &m[k][j];
                m[i][j] -= sub;
            }
            for j in k..n {
                let sub = &f * &m[j][k];
                m[j][i] -= sub;
            }
        }
        k += 1;
    }
    sig
}
