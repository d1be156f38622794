//! Curtailment-minimising load shift: program construction, an exact
//! simplex solver and a brute-force oracle.

pub mod lp;
pub mod oracle;
pub mod shift;
pub mod simplex;

pub use lp::{Constraint, LinearProgram, LpSolution, LpStatus, Sense};
pub use oracle::oracle_search;
pub use shift::{
    build_shift_lp, curtailment, extract_plan, optimize_shift, ShiftInstance, ShiftPlan,
};
pub use simplex::solve_lp;
