// SPDX-License-Identifier: MIT
//! Dense exact linear algebra over ℚ.
//!
//! Everything downstream (canonical bases, homology, constraint elimination)
//! reduces to row-reducing matrices of arbitrary-precision rationals.  The
//! reduction always picks the first nonzero entry in column order as pivot,
//! so results are deterministic functions of the input matrix.

use crate::Q;
use num::{One, Zero};

/// Dense matrix of rationals, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<Q>>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.a[i][i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        debug_assert!(rows.iter().all(|x| x.len() == c));
        Mat { rows: r, cols: c, a: rows }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.a[j][i] = self.a[i][j].clone();
            }
        }
        t
    }

    /// Reduced row echelon form, in place; returns pivot column indices.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // First nonzero entry at or below `row` in this column.
            let Some(p) = (row..self.rows).find(|&r| !self.a[r][col].is_zero()) else {
                continue;
            };
            self.a.swap(row, p);
            let inv = self.a[row][col].clone();
            for j in col..self.cols {
                let v = std::mem::take(&mut self.a[row][j]);
                self.a[row][j] = v / &inv;
            }
            for r in 0..self.rows {
                if r != row && !self.a[r][col].is_zero() {
                    let f = self.a[r][col].clone();
                    for j in col..self.cols {
                        let sub = &self.a[row][j] * &f;
                        let v = std::mem::take(&mut self.a[r][j]);
                        self.a[r][j] = v - sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right null space { x : A x = 0 }, one vector per free
    /// column, in ascending free-column order.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m.a[i][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        self.a
            .iter()
            .map(|row| {
                let mut s = Q::zero();
                for (aij, xj) in row.iter().zip(x) {
                    if !aij.is_zero() && !xj.is_zero() {
                        s += aij * xj;
                    }
                }
                s
            })
            .collect()
    }
}

/// Precomputed factorization of a fixed matrix `B` for solving many systems
/// `B x = v`.  Row-reduces `[B | I]` once; solving is a matrix-vector product
/// plus a consistency check.
#[derive(Debug, Clone)]
pub struct Solver {
    /// RREF of B.
    r: Mat,
    /// Row operations: `e * B = r`.
    e: Mat,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(b: &Mat) -> Solver {
        let mut aug = Mat::zeros(b.rows, b.cols + b.rows);
        for i in 0..b.rows {
            for j in 0..b.cols {
                aug.a[i][j] = b.a[i][j].clone();
            }
            aug.a[i][b.cols + i] = Q::one();
        }
        // Reduce only by pivoting within the first b.cols columns; the tail
        // records the row operations.  rref_in_place pivots left-to-right, so
        // once the B-block is exhausted it would start pivoting inside the
        // identity block; guard by reducing a copy restricted to B to learn
        // the pivots, then replay.  Simpler: run full RREF but stop accepting
        // pivots past b.cols.
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..b.cols {
            if row == aug.rows {
                break;
            }
            let Some(p) = (row..aug.rows).find(|&r| !aug.a[r][col].is_zero()) else {
                continue;
            };
            aug.a.swap(row, p);
            let inv = aug.a[row][col].clone();
            for j in 0..aug.cols {
                let v = std::mem::take(&mut aug.a[row][j]);
                aug.a[row][j] = v / &inv;
            }
            for r in 0..aug.rows {
                if r != row && !aug.a[r][col].is_zero() {
                    let f = aug.a[r][col].clone();
                    for j in 0..aug.cols {
                        let sub = &aug.a[row][j] * &f;
                        let v = std::mem::take(&mut aug.a[r][j]);
                        aug.a[r][j] = v - sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let mut r = Mat::zeros(b.rows, b.cols);
        let mut e = Mat::zeros(b.rows, b.rows);
        for i in 0..b.rows {
            for j in 0..b.cols {
                r.a[i][j] = aug.a[i][j].clone();
            }
            for j in 0..b.rows {
                e.a[i][j] = aug.a[i][b.cols + j].clone();
            }
        }
        Solver { r, e, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Any solution of `B x = v` (free variables set to 0), or None.
    pub fn solve(&self, v: &[Q]) -> Option<Vec<Q>> {
        let rhs = self.e.mul_vec(v);
        // Rows past the rank are zero rows of R; they demand rhs = 0 there.
        for i in self.pivots.len()..rhs.len() {
            if !rhs[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![Q::zero(); self.r.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = rhs[i].clone();
        }
        Some(x)
    }

    /// Does `v` lie in the column space of `B`?
    pub fn contains(&self, v: &[Q]) -> bool {
        self.solve(v).is_some()
    }
}

/// Incremental row elimination: feed vectors one at a time, learn which ones
/// enlarge the span.  Used for choosing quotient-space representatives.
#[derive(Default)]
pub struct Elim {
    /// Rows in echelon form: (pivot column, row normalized to pivot 1).
    rows: Vec<(usize, Vec<Q>)>,
}

impl Elim {
    pub fn new() -> Elim {
        Elim::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the span; if something remains, absorb it and
    /// return true (the vector was independent).
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= r * &c;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Q::one() / v[p].clone();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, v));
        true
    }

    /// Is `v` already in the span?
    pub fn contains(&self, v: &[Q]) -> bool {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= r * &c;
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qi};

    #[test]
    fn rref_rank_kernel() {
        // x + 2y + 3z = 0 has a 2-dimensional kernel.
        let m = Mat::from_rows(vec![vec![qi(1), qi(2), qi(3)]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let r = m.mul_vec(v);
            assert!(r[0].is_zero());
        }
    }

    #[test]
    fn solver_solves_and_rejects() {
        // B = [[1,0],[1,1],[0,2]] (rank 2).
        let b = Mat::from_rows(vec![
            vec![qi(1), qi(0)],
            vec![qi(1), qi(1)],
            vec![qi(0), qi(2)],
        ]);
        let s = Solver::new(&b);
        assert_eq!(s.rank(), 2);
        // v = B * (1/2, 3): (1/2, 7/2, 6)
        let v = vec![q(1, 2), q(7, 2), qi(6)];
        let x = s.solve(&v).expect("consistent");
        assert_eq!(b.mul_vec(&x), v);
        // Not in the column space.
        assert!(s.solve(&[qi(1), qi(0), qi(0)]).is_none());
        assert!(!s.contains(&[qi(1), qi(0), qi(0)]));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = Mat::from_rows(vec![
            vec![qi(1), qi(2)],
            vec![qi(2), qi(4)],
            vec![qi(3), qi(6)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.kernel().len(), 1);
    }

    #[test]
    fn incremental_elimination() {
        let mut e = Elim::new();
        assert!(e.insert(&[qi(1), qi(2), qi(0)]));
        assert!(!e.insert(&[qi(2), qi(4), qi(0)]));
        assert!(e.insert(&[qi(0), qi(1), qi(1)]));
        assert_eq!(e.rank(), 2);
        // 1*(1,2,0) - 2*(0,1,1) = (1,0,-2)
        assert!(e.contains(&[qi(1), qi(0), qi(-2)]));
        assert!(!e.contains(&[qi(0), qi(0), qi(1)]));
    }
}
