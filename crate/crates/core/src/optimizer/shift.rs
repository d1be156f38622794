//! The load-shifting program.
//!
//! Over a horizon of `H` hours the controller chooses deferrals `s[k]`, the
//! energy pushed from hour `k` into hour `k + 1`. Deferred energy arriving in
//! an hour can itself be deferred again, but no hour may defer more than
//! `p_max` of what is available to it (its own demand plus what arrived), and
//! nothing may leave the horizon. The controlled load is
//! `L[k] = demand[k] + s[k-1] - s[k]` with `s[-1] = carry_in`, which makes
//! total energy conservation structural.
//!
//! Curtailment `Σ max(excess[k] - L[k], 0)` is linearised with one epigraph
//! variable `u[k]` per hour. A small penalty on `Σ s` picks the least
//! intervention among equally good plans.

use serde::Serialize;

use super::lp::{LinearProgram, LpSolution, LpStatus, Sense};
use super::simplex::solve_lp;
use crate::error::{Error, Result};
use crate::profile::{rel_close, Profile, HOURS_PER_DAY};

/// Weight of total deferred energy in the objective.
pub const DEFERRAL_PENALTY: f64 = 1e-6;
/// Relative tolerance on energy conservation.
pub const CONSERVATION_TOL: f64 = 1e-6;
/// Deferrals below this (MWh) are snapped to exactly zero.
const DEFERRAL_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftInstance {
    pub excess: Profile,
    pub demand: Profile,
    /// Energy deferred into hour 0 from before the horizon.
    pub carry_in: f64,
    pub p_max: f64,
}

impl ShiftInstance {
    pub fn new(excess: Profile, demand: Profile, carry_in: f64, p_max: f64) -> Result<Self> {
        let inst = ShiftInstance {
            excess,
            demand,
            carry_in,
            p_max,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn horizon(&self) -> usize {
        self.demand.len()
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.horizon();
        if !(1..=HOURS_PER_DAY).contains(&h) {
            return Err(Error::Domain(format!("horizon {h} outside 1..=24")));
        }
        if self.excess.len() != h {
            return Err(Error::Data(format!(
                "excess has {} hours, demand has {h}",
                self.excess.len()
            )));
        }
        let bad = |v: &f64| !v.is_finite() || *v < 0.0;
        if self.excess.iter().any(bad) || self.demand.iter().any(bad) || bad(&self.carry_in) {
            return Err(Error::Domain("energies must be finite and >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.p_max) {
            return Err(Error::Domain(format!("p_max {} outside [0, 1]", self.p_max)));
        }
        Ok(())
    }

    /// Demand with the carry-in folded into hour 0.
    pub fn available(&self) -> Profile {
        let mut v = self.demand.to_vec();
        v[0] += self.carry_in;
        Profile::new(v)
    }
}

/// Column of `s[k]` in the program built by [`build_shift_lp`].
pub fn deferral_var(k: usize) -> usize {
    k
}

/// Column of `u[k]`.
pub fn curtail_var(horizon: usize, k: usize) -> usize {
    horizon + k
}

pub fn build_shift_lp(inst: &ShiftInstance) -> LinearProgram {
    let h = inst.horizon();
    let p = inst.p_max;
    let mut lp = LinearProgram::default();
    for k in 0..h {
        lp.add_var(format!("s{k}"), DEFERRAL_PENALTY);
    }
    for k in 0..h {
        lp.add_var(format!("u{k}"), 1.0);
    }
    for k in 0..h {
        // s[k] - p s[k-1] <= p demand[k]
        let (terms, rhs) = if k == 0 {
            (vec![(deferral_var(0), 1.0)], p * (inst.demand[0] + inst.carry_in))
        } else {
            (
                vec![(deferral_var(k), 1.0), (deferral_var(k - 1), -p)],
                p * inst.demand[k],
            )
        };
        lp.add_constraint(format!("uptake{k}"), terms, Sense::Le, rhs);
    }
    lp.add_constraint(
        "terminal",
        vec![(deferral_var(h - 1), 1.0)],
        Sense::Eq,
        0.0,
    );
    for k in 0..h {
        // u[k] >= excess[k] - (demand[k] + s[k-1] - s[k])
        let mut terms = vec![(curtail_var(h, k), 1.0), (deferral_var(k), -1.0)];
        let mut rhs = inst.excess[k] - inst.demand[k];
        if k == 0 {
            rhs -= inst.carry_in;
        } else {
            terms.push((deferral_var(k - 1), 1.0));
        }
        lp.add_constraint(format!("curtail{k}"), terms, Sense::Ge, rhs);
    }
    lp
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftPlan {
    /// MWh moved from hour `k` to hour `k + 1`.
    pub deferrals: Vec<f64>,
    /// Fraction of hour-`k` available load deferred.
    pub uptake: Vec<f64>,
    pub load: Profile,
    /// Curtailment of the instance's excess under `load`.
    pub curtailment: f64,
}

pub fn extract_plan(sol: &LpSolution, inst: &ShiftInstance) -> Result<ShiftPlan> {
    if sol.status != LpStatus::Optimal {
        return Err(Error::Solver(format!("solver status {:?}", sol.status)));
    }
    let h = inst.horizon();
    if sol.x.len() != 2 * h {
        return Err(Error::Internal(format!(
            "solution has {} values for horizon {h}",
            sol.x.len()
        )));
    }
    let mut deferrals = Vec::with_capacity(h);
    let mut uptake = Vec::with_capacity(h);
    let mut load = Vec::with_capacity(h);
    let mut prev = inst.carry_in;
    for k in 0..h {
        let available = inst.demand[k] + prev;
        let mut s = if k + 1 == h {
            0.0
        } else {
            sol.x[deferral_var(k)].clamp(0.0, inst.p_max * available)
        };
        if s < DEFERRAL_SNAP {
            s = 0.0;
        }
        uptake.push(if available > 1e-9 { s / available } else { 0.0 });
        load.push(inst.demand[k] + prev - s);
        deferrals.push(s);
        prev = s;
    }
    let load = Profile::new(load);
    let expected = inst.demand.total() + inst.carry_in;
    if !rel_close(load.total(), expected, CONSERVATION_TOL) {
        return Err(Error::Internal(format!(
            "plan load {} does not conserve {expected}",
            load.total()
        )));
    }
    let curtailment = curtailment(&inst.excess, &load)?;
    Ok(ShiftPlan {
        deferrals,
        uptake,
        load,
        curtailment,
    })
}

/// Builds, solves and extracts in one go.
pub fn optimize_shift(inst: &ShiftInstance) -> Result<ShiftPlan> {
    inst.validate()?;
    let sol = solve_lp(&build_shift_lp(inst))?;
    extract_plan(&sol, inst)
}

/// Unused excess `Σ max(excess[k] - load[k], 0)` in MWh.
pub fn curtailment(excess: &[f64], load: &[f64]) -> Result<f64> {
    if excess.len() != load.len() {
        return Err(Error::Data(format!(
            "length mismatch: excess {} vs load {}",
            excess.len(),
            load.len()
        )));
    }
    Ok(excess
        .iter()
        .zip(load)
        .map(|(e, l)| (e - l).max(0.0))
        .sum())
}
