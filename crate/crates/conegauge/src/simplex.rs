//! Dense two-phase simplex for the small linear programs used as membership,
//! interior-point and gauge oracles.
//!
//! Problems are stated as `min c.z` subject to `A z = b`, each variable
//! either nonnegative or free. The pivot rule is Bland's, so the solver is
//! deterministic and cannot cycle; at desk scale robustness beats speed.
//! A pivot budget backs the anti-cycling rule: exhausting it is an explicit
//! `Stalled` error, never a silent wrong answer.

use crate::tolerances::{FEASIBILITY_TOL, LP_ITERATION_CAP};
use crate::vector::Vector;
use crate::Error;

/// Largest number of decision variables accepted.
pub const MAX_VARS: usize = 64;
/// Largest number of equality constraints accepted.
pub const MAX_CONSTRAINTS: usize = 128;

/// Lower-bound kind of one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    /// `z_i >= 0`.
    NonNegative,
    /// Unbounded in both directions.
    Free,
}

/// Equality-constrained minimization `min c.z` s.t. `A z = b`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    bounds: Vec<VarBound>,
}

impl LpProblem {
    /// Builds and validates a problem. `rows` are the rows of `A`, all of
    /// length `objective.len()`; `bounds` gives the lower-bound kind per
    /// variable.
    pub fn new(
        objective: Vec<f64>,
        rows: Vec<Vec<f64>>,
        rhs: Vec<f64>,
        bounds: Vec<VarBound>,
    ) -> Result<Self, Error> {
        let k = objective.len();
        if k == 0 {
            return Err(Error::EmptyVector);
        }
        if k > MAX_VARS || rows.len() > MAX_CONSTRAINTS {
            return Err(Error::ProblemTooLarge {
                vars: k,
                constraints: rows.len(),
            });
        }
        if bounds.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: bounds.len(),
            });
        }
        if rhs.len() != rows.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: rhs.len(),
            });
        }
        for (index, c) in objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        for row in &rows {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: row.len(),
                });
            }
            for (index, a) in row.iter().enumerate() {
                if !a.is_finite() {
                    return Err(Error::NonFinite { index });
                }
            }
        }
        for (index, b) in rhs.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        Ok(Self {
            objective,
            rows,
            rhs,
            bounds,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }
}

/// Outcome of `lp_solve`.
#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { point: Vector, objective: f64 },
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpSolution::Optimal { .. })
    }

    pub fn optimal_point(&self) -> Option<&Vector> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn objective(&self) -> Option<f64> {
        match self {
            LpSolution::Optimal { objective, .. } => Some(*objective),
            _ => None,
        }
    }
}

/// Solves the problem with the dense two-phase simplex under Bland's rule.
///
/// Deterministic: identical inputs produce bit-identical outputs. Exceeding
/// the pivot budget returns `Error::Stalled`.
pub fn lp_solve(problem: &LpProblem) -> Result<LpSolution, Error> {
    let k = problem.num_vars();

    // Free variables are split into a difference of two nonnegative parts.
    let mut split_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(k);
    let mut n_std = 0usize;
    for bound in &problem.bounds {
        match bound {
            VarBound::NonNegative => {
                split_cols.push((n_std, None));
                n_std += 1;
            }
            VarBound::Free => {
                split_cols.push((n_std, Some(n_std + 1)));
                n_std += 2;
            }
        }
    }

    let mut c_std = vec![0.0; n_std];
    for (j, (plus, minus)) in split_cols.iter().enumerate() {
        c_std[*plus] = problem.objective[j];
        if let Some(m) = minus {
            c_std[*m] = -problem.objective[j];
        }
    }
    let rows_std: Vec<Vec<f64>> = problem
        .rows
        .iter()
        .map(|row| {
            let mut out = vec![0.0; n_std];
            for (j, (plus, minus)) in split_cols.iter().enumerate() {
                out[*plus] = row[j];
                if let Some(m) = minus {
                    out[*m] = -row[j];
                }
            }
            out
        })
        .collect();

    match solve_standard(&rows_std, &problem.rhs, &c_std)? {
        StandardOutcome::Infeasible => Ok(LpSolution::Infeasible),
        StandardOutcome::Unbounded => Ok(LpSolution::Unbounded),
        StandardOutcome::Optimal { x } => {
            let z: Vec<f64> = split_cols
                .iter()
                .map(|(plus, minus)| match minus {
                    None => x[*plus],
                    Some(m) => x[*plus] - x[*m],
                })
                .collect();
            let objective = problem
                .objective
                .iter()
                .zip(&z)
                .map(|(c, v)| c * v)
                .sum::<f64>();
            Ok(LpSolution::Optimal {
                point: Vector::new(z)?,
                objective,
            })
        }
    }
}

enum StandardOutcome {
    Optimal { x: Vec<f64> },
    Infeasible,
    Unbounded,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

/// Pivot threshold: entries and reduced costs below this magnitude are
/// treated as zero.
const PIVOT_EPS: f64 = 1e-9;

struct Tableau {
    /// Structural column count; each row additionally carries the rhs.
    ncols: usize,
    rows: Vec<Vec<f64>>,
    /// Reduced costs of the current basis, length `ncols`.
    cost: Vec<f64>,
    /// Basic variable of each row.
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        let inv = 1.0 / piv;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        self.rows[row][col] = 1.0;
        let prow = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, p) in r.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
                r[col] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (v, p) in self.cost.iter_mut().zip(&prow) {
                *v -= f * p;
            }
            self.cost[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering column is the lowest index with negative
    /// reduced cost; the leaving row minimizes the ratio, ties broken by the
    /// lowest basic-variable index.
    fn run(&mut self, budget: &mut usize) -> Result<PhaseEnd, Error> {
        loop {
            let entering = (0..self.ncols).find(|&j| self.cost[j] < -PIVOT_EPS);
            let Some(jc) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][jc];
                if a > PIVOT_EPS {
                    let ratio = self.rows[i][self.ncols] / a;
                    let better = match leave {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br || (ratio == br && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((ir, _)) = leave else {
                return Ok(PhaseEnd::Unbounded);
            };
            if *budget == 0 {
                return Err(Error::Stalled {
                    iterations: LP_ITERATION_CAP,
                });
            }
            *budget -= 1;
            self.pivot(ir, jc);
        }
    }
}

/// Two-phase simplex on `min c.x`, `A x = b`, `x >= 0`.
fn solve_standard(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<StandardOutcome, Error> {
    let m = a.len();
    let n = c.len();

    // Phase 1 tableau with one artificial column per row; rhs made
    // nonnegative by row negation.
    let ncols = n + m;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row: Vec<f64> = a[i].iter().map(|v| flip * v).collect();
        row.resize(ncols, 0.0);
        row[n + i] = 1.0;
        row.push(flip * b[i]);
        rows.push(row);
    }
    let basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs for min(sum of artificials) with the artificial basis:
    // r_j = -sum_i A_ij on structural columns, 0 on artificials.
    let mut cost = vec![0.0; ncols];
    for (j, cj) in cost.iter_mut().enumerate().take(n) {
        *cj = -rows.iter().map(|r| r[j]).sum::<f64>();
    }

    let mut t = Tableau {
        ncols,
        rows,
        cost,
        basis,
    };
    let mut budget = LP_ITERATION_CAP;

    match t.run(&mut budget)? {
        PhaseEnd::Optimal => {}
        PhaseEnd::Unbounded => {
            return Err(Error::Internal(
                "phase-1 objective is bounded below; unbounded report means \
                 a numerically broken tableau"
                    .into(),
            ));
        }
    }

    let infeasibility: f64 = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &bv)| bv >= n)
        .map(|(r, _)| r[t.ncols])
        .sum();
    if infeasibility > FEASIBILITY_TOL {
        return Ok(StandardOutcome::Infeasible);
    }

    // Drive remaining artificials out of the basis; rows admitting no
    // structural pivot are redundant and dropped.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t.rows[i][j].abs() > PIVOT_EPS) {
                if budget == 0 {
                    return Err(Error::Stalled {
                        iterations: LP_ITERATION_CAP,
                    });
                }
                budget -= 1;
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // Drop artificial columns and install the phase-2 reduced costs.
    for row in &mut t.rows {
        let rhs = row[ncols];
        row.truncate(n);
        row.push(rhs);
    }
    t.ncols = n;
    t.cost = (0..n)
        .map(|j| {
            c[j]
                - t.rows
                    .iter()
                    .zip(&t.basis)
                    .map(|(r, &bv)| c[bv] * r[j])
                    .sum::<f64>()
        })
        .collect();

    match t.run(&mut budget)? {
        PhaseEnd::Optimal => {}
        PhaseEnd::Unbounded => return Ok(StandardOutcome::Unbounded),
    }

    let mut x = vec![0.0; n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rows[i][t.ncols];
        }
    }
    Ok(StandardOutcome::Optimal { x })
}
