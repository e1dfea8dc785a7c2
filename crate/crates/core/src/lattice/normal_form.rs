use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U · A · V = diag(d)` with unimodular `U`, `V`.
///
/// `d` has `min(rows, cols)` non-negative entries; the nonzero ones come first
/// and each divides the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    /// The `rows × cols` matrix with `d` on its diagonal.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.u.rows(), self.v.rows());
        for (i, x) in self.d.iter().enumerate() {
            m = m.with_entry(i, i, x.clone());
        }
        m
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row[target] += c * row[source]
    fn add_row(&mut self, target: usize, source: usize, c: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[source].clone();
            for (t, s) in m[target].iter_mut().zip(src) {
                *t += c * s;
            }
        }
    }

    /// col[target] += c * col[source]
    fn add_col(&mut self, target: usize, source: usize, c: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            let s = row[source].clone();
            row[target] += c * s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    IntMatrix::identity(n).row_vectors()
}

/// Smith normal form. Pivots are chosen as the entry of smallest nonzero
/// absolute value in the remaining block, ties broken by lowest (row, column).
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work { a: a.row_vectors(), u: identity_rows(rows), v: identity_rows(cols) };
    let steps = rows.min(cols);

    'outer: for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            if pi != t {
                w.swap_rows(t, pi);
            }
            if pj != t {
                w.swap_cols(t, pj);
            }

            let pivot = w.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&pivot);
                w.add_row(i, t, &-q);
                clean &= w.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&pivot);
                w.add_col(j, t, &-q);
                clean &= w.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }

            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&pivot)));
            match offending {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }

    let d = (0..steps).map(|i| w.a[i][i].clone()).collect();
    SnfResult {
        d,
        u: IntMatrix::from_big_rows(&w.u, rows),
        v: IntMatrix::from_big_rows(&w.v, cols),
    }
}

/// Row-style Hermite normal form `H = W · A`: `H` is in row echelon form with
/// positive pivots, entries above each pivot reduced into `[0, pivot)`, and
/// zero rows last. `W` is unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub w: IntMatrix,
    pub rank: usize,
}

pub fn hnf(a: &IntMatrix) -> HnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work { a: a.row_vectors(), u: identity_rows(rows), v: Vec::new() };
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !w.a[i][c].is_zero())
                .min_by(|&i, &j| w.a[i][c].abs().cmp(&w.a[j][c].abs()));
            let Some(p) = best else {
                break;
            };
            if p != r {
                w.swap_rows(r, p);
            }
            let pivot = w.a[r][c].clone();
            let mut clean = true;
            for i in r + 1..rows {
                if w.a[i][c].is_zero() {
                    continue;
                }
                let q = w.a[i][c].div_floor(&pivot);
                w.add_row(i, r, &-q);
                clean &= w.a[i][c].is_zero();
            }
            if clean {
                break;
            }
        }
        if w.a[r][c].is_zero() {
            continue;
        }
        if w.a[r][c].is_negative() {
            w.negate_row(r);
        }
        let pivot = w.a[r][c].clone();
        for i in 0..r {
            let q = w.a[i][c].div_floor(&pivot);
            if !q.is_zero() {
                w.add_row(i, r, &-q);
            }
        }
        r += 1;
    }
    HnfResult {
        h: IntMatrix::from_big_rows(&w.a, cols),
        w: IntMatrix::from_big_rows(&w.u, rows),
        rank: r,
    }
}

/// A Z-basis (as rows) of the lattice spanned by the rows of `a`.
pub fn row_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let res = hnf(a);
    let idx: Vec<usize> = (0..res.rank).collect();
    res.h.select_rows(&idx)
}

/// A Z-basis (as rows) of `{x ∈ Zⁿ : a · x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let s = snf(a);
    let rank = s.rank();
    let basis: Vec<Vec<BigInt>> = (rank..a.cols()).map(|j| s.v.column(j)).collect();
    IntMatrix::from_big_rows(&basis, a.cols())
}
