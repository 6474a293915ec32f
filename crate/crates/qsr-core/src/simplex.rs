//! Small dense LP solver.
//!
//! Solves `maximize cᵀx subject to Ax ≤ b, x ≥ 0` with `b ≥ 0`, which is the
//! only form the exact baselines need: the all-slack basis is feasible, so
//! no phase-1 is required. The tableau is dense and pivoting follows Bland's
//! rule (smallest eligible index for both the entering and, on ratio ties,
//! the leaving variable), which rules out cycling on the degenerate rows the
//! throughput LPs start with. The instances are tiny — tens of rows, at most
//! a few thousand columns — so the simplicity is worth far more than speed.

use std::fmt;

/// `maximize objective · x` over `x ≥ 0` with one `(coeffs, rhs)` row per
/// `coeffs · x ≤ rhs` constraint; every `rhs` must be nonnegative.
#[derive(Clone, Debug)]
pub struct SimplexProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<(Vec<f64>, f64)>,
}

#[derive(Clone, Debug)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

#[derive(Debug, PartialEq)]
pub enum SimplexError {
    /// Some constraint row has rhs < 0; this solver only accepts the
    /// slack-basis-feasible form.
    NegativeRhs(usize),
    /// A row's coefficient count does not match the objective.
    RaggedRow(usize),
    Unbounded,
    /// Safety valve; with Bland's rule this indicates a numerical problem,
    /// not cycling.
    PivotLimit(usize),
}

impl fmt::Display for SimplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimplexError::NegativeRhs(i) => write!(f, "constraint {i} has negative rhs"),
            SimplexError::RaggedRow(i) => write!(f, "constraint {i} has wrong arity"),
            SimplexError::Unbounded => write!(f, "objective is unbounded"),
            SimplexError::PivotLimit(n) => write!(f, "no optimum after {n} pivots"),
        }
    }
}

impl std::error::Error for SimplexError {}

/// Coefficients smaller than this are treated as zero during pivoting.
const PIVOT_TOL: f64 = 1e-12;

pub fn maximize(problem: &SimplexProblem) -> Result<SimplexSolution, SimplexError> {
    let n = problem.objective.len();
    let m = problem.constraints.len();
    for (i, (row, rhs)) in problem.constraints.iter().enumerate() {
        if row.len() != n {
            return Err(SimplexError::RaggedRow(i));
        }
        if *rhs < 0.0 {
            return Err(SimplexError::NegativeRhs(i));
        }
    }

    // Tableau: one row per constraint over [structural | slack] variables
    // plus rhs; a reduced-cost row underneath. Slack j occupies column n+j.
    let cols = n + m;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in problem.constraints.iter().enumerate() {
        let mut t = vec![0.0; cols + 1];
        t[..n].copy_from_slice(row);
        t[n + i] = 1.0;
        t[cols] = *rhs;
        tab.push(t);
    }
    let mut reduced = vec![0.0; cols + 1];
    reduced[..n].copy_from_slice(&problem.objective);
    let mut basis: Vec<usize> = (n..cols).collect();

    let pivot_limit = 2000 + 50 * cols;
    for pivots in 0..=pivot_limit {
        // Bland: entering variable = smallest index with positive reduced
        // cost.
        let Some(enter) = (0..cols).find(|&j| reduced[j] > PIVOT_TOL) else {
            let mut x = vec![0.0; n];
            for (i, &b) in basis.iter().enumerate() {
                if b < n {
                    x[b] = tab[i][cols];
                }
            }
            let objective: f64 = x
                .iter()
                .zip(&problem.objective)
                .map(|(xi, ci)| xi * ci)
                .sum();
            return Ok(SimplexSolution {
                x,
                objective,
                pivots,
            });
        };
        // Ratio test; ties broken toward the smallest basic variable index
        // (the other half of Bland's rule).
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let a = tab[i][enter];
            if a > PIVOT_TOL {
                let ratio = tab[i][cols] / a;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - PIVOT_TOL
                            || (ratio < best + PIVOT_TOL && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio.min(best);
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(SimplexError::Unbounded);
        };

        // Pivot on (leave, enter).
        let piv = tab[leave][enter];
        for v in tab[leave].iter_mut() {
            *v /= piv;
        }
        for i in 0..m {
            if i != leave {
                let factor = tab[i][enter];
                if factor != 0.0 {
                    let (pivot_row, row) = if i < leave {
                        let (a, b) = tab.split_at_mut(leave);
                        (&b[0], &mut a[i])
                    } else {
                        let (a, b) = tab.split_at_mut(i);
                        (&a[leave], &mut b[0])
                    };
                    for (rv, pv) in row.iter_mut().zip(pivot_row.iter()) {
                        *rv -= factor * pv;
                    }
                }
            }
        }
        let factor = reduced[enter];
        for (rv, pv) in reduced.iter_mut().zip(tab[leave].iter()) {
            *rv -= factor * pv;
        }
        basis[leave] = enter;
    }
    Err(SimplexError::PivotLimit(pivot_limit))
}
