//! Brute-force reference for the shift program.
//!
//! Enumerates uptake fractions on a uniform grid `{0, p_max/g, ..., p_max}`
//! for every hour but the last and simulates the deferral cascade directly.
//! Subtrees are skipped only when a valid lower bound on their curtailment
//! cannot beat the incumbent, so the result equals a full enumeration.

use super::shift::ShiftInstance;
use crate::error::{Error, Result};

pub const ORACLE_MAX_HORIZON: usize = 8;

/// Minimal curtailment over the uptake grid.
pub fn oracle_search(inst: &ShiftInstance, grid_steps: usize) -> Result<f64> {
    inst.validate()?;
    let h = inst.horizon();
    if h > ORACLE_MAX_HORIZON {
        return Err(Error::Domain(format!(
            "oracle refuses horizon {h} > {ORACLE_MAX_HORIZON}"
        )));
    }
    if grid_steps == 0 {
        return Err(Error::Domain("grid_steps must be positive".into()));
    }
    let grid: Vec<f64> = (0..=grid_steps)
        .map(|i| inst.p_max * i as f64 / grid_steps as f64)
        .collect();
    let mut search = Search {
        excess: &inst.excess,
        demand: &inst.demand,
        p_max: inst.p_max,
        grid: &grid,
        best: f64::INFINITY,
    };
    search.descend(0, inst.carry_in, 0.0);
    Ok(search.best)
}

struct Search<'a> {
    excess: &'a [f64],
    demand: &'a [f64],
    p_max: f64,
    grid: &'a [f64],
    best: f64,
}

impl Search<'_> {
    /// Hours before `k` are settled; `incoming` is `s[k-1]`.
    fn descend(&mut self, k: usize, incoming: f64, cost: f64) {
        let h = self.demand.len();
        let available = self.demand[k] + incoming;
        if k + 1 == h {
            let total = cost + (self.excess[k] - available).max(0.0);
            if total < self.best {
                self.best = total;
            }
            return;
        }
        if cost + self.lower_bound(k, incoming) >= self.best {
            return;
        }
        for &p in self.grid {
            let s = p * available;
            let load = available - s;
            self.descend(k + 1, s, cost + (self.excess[k] - load).max(0.0));
        }
    }

    /// Lower bound on curtailment of hours `k..` given `s[k-1]`.
    fn lower_bound(&self, k: usize, incoming: f64) -> f64 {
        // energy balance over the tail
        let tail_excess: f64 = self.excess[k..].iter().sum();
        let tail_energy: f64 = incoming + self.demand[k..].iter().sum::<f64>();
        let balance = (tail_excess - tail_energy).max(0.0);
        // per-hour ceiling from the largest possible inflow
        let mut inflow = incoming;
        let mut ceiling = 0.0;
        for j in k..self.demand.len() {
            let most = self.demand[j] + inflow;
            ceiling += (self.excess[j] - most).max(0.0);
            inflow = self.p_max * most;
        }
        balance.max(ceiling)
    }
}
