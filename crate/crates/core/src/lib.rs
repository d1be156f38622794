//! Shifting aggregated EV charging toward hours of excess wind and solar
//! output through time-varying-rate uptake.
//!
//! The crate projects an EV fleet and its uncontrolled (business-as-usual)
//! daily charging profile, builds a scenario year of excess renewable
//! supply, and compares three ways of steering charging on every day with
//! excess: no control, a single day-ahead plan (open loop), and
//! shrinking-horizon model predictive control.

pub mod cli;
pub mod control;
pub mod error;
pub mod fleet;
pub mod grid;
pub mod io;
pub mod optimizer;
pub mod profile;
pub mod scenario;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
pub use profile::Profile;
