//! Exact two-phase simplex method over the rationals (Bland's rule).
//!
//! Solves `min c·y` subject to `A y = b`, `y ≥ 0`.

use num::{Signed, Zero};

use crate::graph::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { y: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    obj: Vec<Q>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, pv) in row.iter_mut().zip(prow.iter()) {
                if !pv.is_zero() {
                    *x = &*x - &f * pv;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (x, pv) in self.obj.iter_mut().zip(prow.iter()) {
                if !pv.is_zero() {
                    *x = &*x - &f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Runs to optimality over columns `< limit`; `false` if unbounded.
    fn run(&mut self, limit: usize) -> bool {
        let rhs = self.width;
        loop {
            let enter = (0..limit).find(|&j| self.obj[j].is_negative());
            let Some(col) = enter else { return true };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[rhs] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

pub fn solve(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpResult {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row: Vec<Q> = a[i].iter().map(|x| if neg { -x.clone() } else { x.clone() }).collect();
        row.resize(width, Q::zero());
        row[n + i] = Q::from_integer(1.into());
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    // phase one: minimize the sum of artificials
    let mut obj = vec![Q::zero(); width + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] = &obj[j] - &row[j];
        }
        obj[width] = &obj[width] - &row[width];
    }
    let mut t = Tableau { rows, obj, basis: (n..n + m).collect(), width };
    t.run(width);
    if !t.obj[width].is_zero() {
        return LpResult::Infeasible;
    }
    // drive remaining artificials out of the basis
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, col);
            }
        }
    }
    // phase two over original columns; redundant rows keep their artificial basis at zero
    let mut obj = vec![Q::zero(); width + 1];
    obj[..n].clone_from_slice(c);
    for r in 0..m {
        let bv = t.basis[r];
        if bv < n && !obj[bv].is_zero() {
            let f = obj[bv].clone();
            for (x, pv) in obj.iter_mut().zip(t.rows[r].iter()) {
                *x = &*x - &f * pv;
            }
        }
    }
    t.obj = obj;
    if !t.run(n) {
        return LpResult::Unbounded;
    }
    let mut y = vec![Q::zero(); n];
    for r in 0..m {
        if t.basis[r] < n {
            y[t.basis[r]] = t.rows[r][width].clone();
        }
    }
    let value = y.iter().zip(c).fold(Q::zero(), |acc, (a, b)| acc + a * b);
    LpResult::Optimal { y, value }
}
