//! Dense two-phase simplex for small programs
//!
//! ```text
//! maximize c·x  subject to  A x = b,  x ≥ 0.
//! ```
//!
//! Bland's rule is used for both entering and leaving variables, so the
//! method cannot cycle. Meant for tens of rows and up to a few thousand
//! columns.

/// Pivot and feasibility tolerance.
pub const PIVOT_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

struct Tableau {
    /// Constraint rows, each `cols` coefficients followed by the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced costs (z_j − c_j) followed by the objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k != r {
                let f = row[j];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        let f = self.obj[j];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[r] = j;
    }

    /// Iterate until optimal over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| self.obj[j] < -PIVOT_TOL);
            let Some(j) = entering else {
                return true;
            };
            let rhs = self.cols;
            let mut best: Option<(usize, f64)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[j] > PIVOT_TOL {
                    let ratio = row[rhs] / row[j];
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, b)) => {
                            if ratio < b - PIVOT_TOL
                                || (ratio <= b + PIVOT_TOL && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, b))
                            }
                        }
                    };
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }
}

/// Solve max c·x s.t. A x = b, x ≥ 0. `a` is row-major with `c.len()` columns.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m, "one right-hand side per row");
    assert!(
        a.iter().all(|r| r.len() == n),
        "rows must have c.len() entries"
    );

    // phase 1: artificial variable per row, b made nonnegative
    let cols = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, &bi)) in a.iter().zip(b).enumerate() {
        let sign = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut t = vec![0.0; cols + 1];
        for (v, x) in t.iter_mut().zip(row) {
            *v = sign * x;
        }
        t[n + i] = 1.0;
        t[cols] = sign * bi;
        rows.push(t);
    }
    // minimize Σ artificials == maximize −Σ artificials
    let mut obj = vec![0.0; cols + 1];
    for row in &rows {
        for j in 0..n {
            obj[j] -= row[j];
        }
        obj[cols] -= row[cols];
    }
    let mut tab = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        cols,
    };
    tab.optimize(cols);
    let scale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if -tab.obj[cols] > PIVOT_TOL * scale {
        return LpOutcome::Infeasible;
    }

    // drive remaining artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| tab.rows[r][j].abs() > PIVOT_TOL) {
                Some(j) => tab.pivot(r, j),
                None => {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // phase 2
    let mut obj = vec![0.0; cols + 1];
    for (j, cj) in c.iter().enumerate() {
        obj[j] = -cj;
    }
    for (row, &bv) in tab.rows.iter().zip(&tab.basis) {
        let f = -obj[bv];
        if f != 0.0 {
            for (v, x) in obj.iter_mut().zip(row) {
                *v += f * x;
            }
        }
    }
    tab.obj = obj;
    if !tab.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    for (row, &bv) in tab.rows.iter().zip(&tab.basis) {
        x[bv] = row[cols].max(0.0);
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}
