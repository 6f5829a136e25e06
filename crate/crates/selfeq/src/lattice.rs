// SPDX-License-Identifier: MIT
//! Integer linear algebra: Smith normal form, integer kernels, and kernels
//! mod 2.
//!
//! Multiplicative monomial systems `λ^v = 1` turn into additive lattice
//! problems on exponent vectors: the solution group over ℚ* is read off the
//! Smith normal form of the relation matrix, and nonzero *integer* solutions
//! are controlled prime-by-prime by the nonnegative part of the integer
//! kernel together with a sign kernel mod 2.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<BigInt>>,
}

impl ZMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMat {
            rows,
            cols,
            a: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ZMat::zeros(n, n);
        for i in 0..n {
            m.a[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        ZMat {
            rows: r,
            cols: c,
            a: rows
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        }
    }
}

/// Smith normal form `u * m * v = d` with `u`, `v` unimodular and `d`
/// diagonal with nonnegative entries satisfying `d[i] | d[i+1]`.
#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal entries (length `min(rows, cols)`), divisibility-ordered;
    /// zeros trail.
    pub d: Vec<BigInt>,
    pub u: ZMat,
    pub v: ZMat,
}

impl Snf {
    /// Number of nonzero invariant factors (= rank of the matrix).
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors > 1 (the torsion of the cokernel).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.d
            .iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .cloned()
            .collect()
    }
}

struct SnfWork {
    a: ZMat,
    u: ZMat,
    v: ZMat,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.a.swap(i, j);
        self.u.a.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a.a {
            row.swap(i, j);
        }
        for row in &mut self.v.a {
            row.swap(i, j);
        }
    }

    /// row[i] -= q * row[t]
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.a.cols {
            let s = &self.a.a[t][j] * q;
            self.a.a[i][j] -= s;
        }
        for j in 0..self.u.cols {
            let s = &self.u.a[t][j] * q;
            self.u.a[i][j] -= s;
        }
    }

    /// col[j] -= q * col[t]
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.a.a {
            let s = &row[t] * q;
            row[j] -= s;
        }
        for row in &mut self.v.a {
            let s = &row[t] * q;
            row[j] -= s;
        }
    }

    /// col[dst] += col[src]
    fn col_add(&mut self, dst: usize, src: usize) {
        for row in &mut self.a.a {
            let s = row[src].clone();
            row[dst] += s;
        }
        for row in &mut self.v.a {
            let s = row[src].clone();
            row[dst] += s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols {
            let x = std::mem::take(&mut self.a.a[i][j]);
            self.a.a[i][j] = -x;
        }
        for j in 0..self.u.cols {
            let x = std::mem::take(&mut self.u.a[i][j]);
            self.u.a[i][j] = -x;
        }
    }

    /// Reduce `a` to a nonnegative diagonal by unimodular row/column
    /// operations mirrored into `u` and `v`.
    fn diagonalize(&mut self) {
        let n = self.a.rows.min(self.a.cols);
        let mut t = 0usize;
        while t < n {
            // Nonzero entry of least absolute value in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.a.rows {
                for j in t..self.a.cols {
                    if !self.a.a[i][j].is_zero() {
                        let better = match &best {
                            None => true,
                            Some((bi, bj)) => self.a.a[i][j].abs() < self.a.a[*bi][*bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);

            let mut clean = true;
            for i in (t + 1)..self.a.rows {
                if !self.a.a[i][t].is_zero() {
                    let q = div_round(&self.a.a[i][t], &self.a.a[t][t]);
                    self.row_sub(i, t, &q);
                    if !self.a.a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..self.a.cols {
                if !self.a.a[t][j].is_zero() {
                    let q = div_round(&self.a.a[t][j], &self.a.a[t][t]);
                    self.col_sub(j, t, &q);
                    if !self.a.a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            if self.a.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

/// Compute the Smith normal form of `m`.
pub fn snf(m: &ZMat) -> Snf {
    let mut w = SnfWork {
        a: m.clone(),
        u: ZMat::identity(m.rows),
        v: ZMat::identity(m.cols),
    };
    w.diagonalize();

    let n = m.rows.min(m.cols);
    loop {
        // Push zero diagonal entries to the back.
        let mut moved = true;
        while moved {
            moved = false;
            for i in 0..n.saturating_sub(1) {
                if w.a.a[i][i].is_zero() && !w.a.a[i + 1][i + 1].is_zero() {
                    w.swap_rows(i, i + 1);
                    w.swap_cols(i, i + 1);
                    moved = true;
                }
            }
        }
        // First adjacent pair violating divisibility.
        let bad = (0..n.saturating_sub(1)).find(|&i| {
            let di = &w.a.a[i][i];
            let dj = &w.a.a[i + 1][i + 1];
            !di.is_zero() && !dj.is_zero() && !(dj % di).is_zero()
        });
        let Some(i) = bad else { break };
        // Fold gcd into position i: add column i+1 to column i, then
        // re-diagonalize (the pivot search finds the gcd).
        w.col_add(i, i + 1);
        w.diagonalize();
    }

    let d = (0..n).map(|i| w.a.a[i][i].clone()).collect();
    Snf { d, u: w.u, v: w.v }
}

/// Rounded division minimizing the remainder's absolute value.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num::integer::div_rem(a.clone(), b.clone());
    let two_r: BigInt = &r + &r;
    if two_r.abs() > b.abs() {
        if r.is_negative() == b.is_negative() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Basis of the integer kernel { x in Z^cols : m x = 0 }.
pub fn zkernel(m: &ZMat) -> Vec<Vec<BigInt>> {
    let s = snf(m);
    let rank = s.rank();
    // m x = 0  <=>  d y = 0 with x = v y; free coordinates are those past the
    // rank, so the kernel basis is the corresponding columns of v.
    let mut basis = Vec::new();
    for k in rank..m.cols {
        let col: Vec<BigInt> = (0..m.cols).map(|i| s.v.a[i][k].clone()).collect();
        basis.push(col);
    }
    basis
}

/// Basis of the kernel of `m` over GF(2); entries of `m` taken mod 2.
pub fn kernel_mod2(m: &ZMat) -> Vec<Vec<u8>> {
    let mut a: Vec<Vec<u8>> = m
        .a
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| if x.is_odd() { 1u8 } else { 0u8 })
                .collect()
        })
        .collect();
    let rows = m.rows;
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| a[r][col] == 1) else {
            continue;
        };
        a.swap(row, p);
        for r in 0..rows {
            if r != row && a[r][col] == 1 {
                for j in 0..cols {
                    a[r][j] ^= a[row][j];
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u8; cols];
        v[free] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = a[i][free];
        }
        basis.push(v);
    }
    basis
}
