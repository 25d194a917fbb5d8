//! Dense two-phase simplex for `min c·x  s.t.  A x = b, x ≥ 0`.
//!
//! Dantzig pricing, switching to Bland's rule after a run of degenerate
//! pivots. Artificial columns stay in the tableau so the optimal duals can
//! be read off their reduced costs.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        /// Multipliers `y` of the equality rows: `Aᵀy ≤ c`, `b·y = value`.
        y: Vec<f64>,
        value: f64,
    },
    /// Phase one ended with a positive artificial sum.
    Infeasible { residual: f64 },
    Unbounded,
}

struct Tableau {
    rows: usize,
    /// Structural columns followed by one artificial per row.
    cols: usize,
    t: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize, reduced: &mut [f64]) {
        let cols = self.cols;
        let p = self.at(r, c);
        for j in 0..cols {
            self.t[r * cols + j] /= p;
        }
        self.rhs[r] /= p;
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.at(i, c);
            if f != 0.0 {
                for j in 0..cols {
                    self.t[i * cols + j] -= f * self.t[r * cols + j];
                }
                self.rhs[i] -= f * self.rhs[r];
                self.t[i * cols + c] = 0.0;
            }
        }
        let f = reduced[c];
        if f != 0.0 {
            for j in 0..cols {
                reduced[j] -= f * self.t[r * cols + j];
            }
            reduced[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r = cost.to_vec();
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..self.cols {
                    r[j] -= cb * self.at(i, j);
                }
            }
        }
        r
    }

    /// Runs the simplex on columns `0..allowed`; `Ok(false)` means unbounded.
    fn optimize(&mut self, reduced: &mut [f64], allowed: usize) -> Result<bool> {
        let mut degenerate_run = 0usize;
        for _ in 0..MAX_PIVOTS {
            let bland = degenerate_run > 50;
            let mut enter = None;
            let mut best = -FEAS_TOL;
            for (j, &rj) in reduced.iter().enumerate().take(allowed) {
                if rj < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = rj;
                }
            }
            let Some(c) = enter else { return Ok(true) };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs[i].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-14 || (ratio <= lr + 1e-14 && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, ratio)) = leave else { return Ok(false) };
            degenerate_run = if ratio <= 1e-14 { degenerate_run + 1 } else { 0 };
            self.pivot(r, c, reduced);
        }
        Err(Error::Internal("simplex pivot limit reached".into()))
    }
}

/// Solves `min c·x  s.t.  A x = b, x ≥ 0` with `A` given as rows.
pub fn solve_standard_form(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpOutcome> {
    let rows = a.len();
    crate::error::ensure!(b.len() == rows, Shape, "rhs length {} for {rows} rows", b.len());
    let n = c.len();
    crate::error::ensure!(a.iter().all(|r| r.len() == n), Shape, "constraint rows must have {n} columns");
    crate::error::ensure!(
        a.iter().flatten().chain(b).chain(c).all(|v| v.is_finite()),
        Input,
        "non-finite LP data"
    );
    let cols = n + rows;
    let mut sign = vec![1.0; rows];
    let mut t = vec![0.0; rows * cols];
    let mut rhs = vec![0.0; rows];
    for i in 0..rows {
        sign[i] = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i * cols + j] = sign[i] * a[i][j];
        }
        t[i * cols + n + i] = 1.0;
        rhs[i] = sign[i] * b[i];
    }
    let mut tab = Tableau { rows, cols, t, rhs, basis: (n..n + rows).collect() };

    // Phase one: minimize the artificial sum.
    let mut cost1 = vec![0.0; cols];
    cost1[n..].iter_mut().for_each(|v| *v = 1.0);
    let mut reduced = tab.reduced_costs(&cost1);
    tab.optimize(&mut reduced, n)?;
    let residual: f64 = (0..rows).filter(|&i| tab.basis[i] >= n).map(|i| tab.rhs[i].max(0.0)).sum();
    let scale = 1.0 + b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if residual > FEAS_TOL * scale {
        return Ok(LpOutcome::Infeasible { residual });
    }
    // Drive zero-level artificials out of the basis where possible.
    for i in 0..rows {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.at(i, j).abs() > 1e-9) {
                let mut dummy = vec![0.0; cols];
                tab.pivot(i, j, &mut dummy);
            }
        }
    }

    // Phase two on structural columns only.
    let mut cost2 = c.to_vec();
    cost2.resize(cols, 0.0);
    let mut reduced = tab.reduced_costs(&cost2);
    if !tab.optimize(&mut reduced, n)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for i in 0..rows {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.rhs[i].max(0.0);
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    // Reduced cost of artificial k is −y_k in the sign-flipped system.
    let y = (0..rows).map(|k| -reduced[n + k] * sign[k]).collect();
    Ok(LpOutcome::Optimal { x, y, value })
}
