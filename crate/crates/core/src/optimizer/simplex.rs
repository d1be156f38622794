//! Dense two-phase primal simplex.
//!
//! Entering columns are chosen by most negative reduced cost (lowest index on
//! ties); after a run of degenerate pivots the phase switches to Bland's
//! lowest-index rule, which cannot cycle. The leaving row is the minimum
//! ratio, ties broken by lowest basic variable index. Right-hand sides are
//! scaled by a power of two before solving so the arithmetic is exact to
//! undo.

use super::lp::{LinearProgram, LpSolution, LpStatus, Sense};
use crate::error::{Error, Result};

/// Allowed constraint violation of a returned optimal point (absolute).
pub const FEASIBILITY_TOL: f64 = 1e-7;

const PIVOT_TOL: f64 = 1e-9;
const REDUCED_COST_TOL: f64 = 1e-12;
const ZERO_TOL: f64 = 1e-13;
const PHASE_ONE_TOL: f64 = 1e-9;
const DEGENERATE_RUN_LIMIT: usize = 25;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Column {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    rows: usize,
    width: usize,
    cells: Vec<f64>,
    basis: Vec<usize>,
    kinds: Vec<Column>,
    reduced: Vec<f64>,
    pivots: usize,
    max_pivots: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.rhs_col())
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(p, q);
        for v in &mut self.cells[p * w..(p + 1) * w] {
            *v *= inv;
        }
        self.cells[p * w + q] = 1.0;
        let pivot_row: Vec<f64> = self.cells[p * w..(p + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == p {
                continue;
            }
            let factor = self.cells[i * w + q];
            if factor == 0.0 {
                continue;
            }
            let row = &mut self.cells[i * w..(i + 1) * w];
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
                if v.abs() < ZERO_TOL {
                    *v = 0.0;
                }
            }
            row[q] = 0.0;
        }
        let factor = self.reduced[q];
        if factor != 0.0 {
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
                if v.abs() < ZERO_TOL {
                    *v = 0.0;
                }
            }
            self.reduced[q] = 0.0;
        }
        self.basis[p] = q;
        self.pivots += 1;
    }

    /// Loads `cost` as the objective and prices out the current basis.
    fn price(&mut self, cost: &[f64]) {
        self.reduced = cost.to_vec();
        self.reduced.push(0.0);
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for j in 0..self.width {
                self.reduced[j] -= cb * self.at(i, j);
            }
        }
    }

    /// Current objective value `c_B · x_B`.
    fn objective(&self) -> f64 {
        -self.reduced[self.rhs_col()]
    }

    fn run(&mut self, allowed: impl Fn(Column) -> bool) -> Result<PhaseEnd> {
        let mut bland = false;
        let mut degenerate_run = 0;
        loop {
            let candidates = (0..self.rhs_col())
                .filter(|&j| allowed(self.kinds[j]) && self.reduced[j] < -REDUCED_COST_TOL);
            let entering = if bland {
                candidates.min()
            } else {
                // strict `<` keeps the lowest index on ties
                candidates.fold(None, |best: Option<usize>, j| match best {
                    Some(b) if self.reduced[b] <= self.reduced[j] => Some(b),
                    _ => Some(j),
                })
            };
            let Some(q) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, q);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((b, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                        if ratio < best && !tie || tie && self.basis[i] < self.basis[b] {
                            Some((i, ratio))
                        } else {
                            Some((b, best))
                        }
                    }
                };
            }
            let Some((p, ratio)) = leaving else {
                return Ok(PhaseEnd::Unbounded);
            };

            if ratio <= ZERO_TOL {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_RUN_LIMIT {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            if self.pivots >= self.max_pivots {
                return Err(Error::Solver(format!(
                    "no convergence after {} pivots ({} rows, {} columns, bland={bland})",
                    self.pivots,
                    self.rows,
                    self.rhs_col()
                )));
            }
            self.pivot(p, q);
        }
    }
}

/// Solves `lp` to a vertex optimum.
///
/// Infeasible and unbounded programs are reported through
/// [`LpSolution::status`]; `Err` means the solver itself failed.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.num_vars();
    if lp.objective.len() != n {
        return Err(Error::Internal("objective length differs from variable count".into()));
    }
    let m = lp.constraints.len();

    let max_rhs = lp
        .constraints
        .iter()
        .map(|c| c.rhs.abs())
        .fold(0.0, f64::max);
    if !max_rhs.is_finite() {
        return Err(Error::Data("non-finite right-hand side".into()));
    }
    let scale = if max_rhs > 0.0 {
        2f64.powi(max_rhs.log2().ceil() as i32)
    } else {
        1.0
    };

    // Orient each row so its rhs is non-negative.
    let rows: Vec<(Vec<f64>, Sense, f64)> = lp
        .constraints
        .iter()
        .map(|c| {
            let mut dense = vec![0.0; n];
            for &(j, a) in &c.terms {
                dense[j] += a;
            }
            let rhs = c.rhs / scale;
            if rhs < 0.0 {
                let sense = match c.sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
                (dense.iter().map(|a| -a).collect(), sense, -rhs)
            } else {
                (dense, c.sense, rhs)
            }
        })
        .collect();

    let slack_count = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let artificial_count = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let cols = n + slack_count + artificial_count;
    let width = cols + 1;
    let mut kinds = vec![Column::Structural; n];
    kinds.extend(std::iter::repeat_n(Column::Slack, slack_count));
    kinds.extend(std::iter::repeat_n(Column::Artificial, artificial_count));

    let mut cells = vec![0.0; m * width];
    let mut basis = vec![0; m];
    let (mut next_slack, mut next_art) = (n, n + slack_count);
    for (i, (dense, sense, rhs)) in rows.iter().enumerate() {
        let row = &mut cells[i * width..(i + 1) * width];
        row[..n].copy_from_slice(dense);
        row[cols] = *rhs;
        match sense {
            Sense::Le => {
                row[next_slack] = 1.0;
                basis[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }

    let mut t = Tableau {
        rows: m,
        width,
        cells,
        basis,
        kinds,
        reduced: Vec::new(),
        pivots: 0,
        max_pivots: 50 * (m + cols).max(1),
    };

    if artificial_count > 0 {
        let phase_one: Vec<f64> = t
            .kinds
            .iter()
            .map(|k| if *k == Column::Artificial { 1.0 } else { 0.0 })
            .collect();
        t.price(&phase_one);
        t.run(|_| true)?;
        if t.objective() > PHASE_ONE_TOL {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                objective: f64::NAN,
                x: Vec::new(),
                pivots: t.pivots,
            });
        }
        // Pivot zero-valued artificials out where the row allows it; rows
        // that are all-zero outside artificials are redundant and stay put.
        for i in 0..m {
            if t.kinds[t.basis[i]] != Column::Artificial {
                continue;
            }
            let q = (0..cols)
                .filter(|&j| t.kinds[j] != Column::Artificial)
                .find(|&j| t.at(i, j).abs() > PIVOT_TOL);
            if let Some(q) = q {
                t.pivot(i, q);
            }
        }
    }

    let mut cost = lp.objective.clone();
    cost.resize(cols, 0.0);
    t.price(&cost);
    if let PhaseEnd::Unbounded = t.run(|k| k != Column::Artificial)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective: f64::NEG_INFINITY,
            x: Vec::new(),
            pivots: t.pivots,
        });
    }

    let mut x = vec![0.0; n];
    for i in 0..m {
        let j = t.basis[i];
        if j < n {
            x[j] = (t.rhs(i) * scale).max(0.0);
        }
    }
    let violation = lp.max_violation(&x);
    if violation > FEASIBILITY_TOL {
        return Err(Error::Solver(format!(
            "optimal basis violates constraints by {violation:e} after {} pivots",
            t.pivots
        )));
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: lp.objective_value(&x),
        x,
        pivots: t.pivots,
    })
}
