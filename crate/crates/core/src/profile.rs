//! Hourly energy series.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hours in a simulated day.
pub const HOURS_PER_DAY: usize = 24;
/// Hours in a (non-leap) simulation year.
pub const HOURS_PER_YEAR: usize = 8760;
pub const DAYS_PER_YEAR: usize = 365;

/// A sequence of hourly energy values in MWh.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(Vec<f64>);

impl Profile {
    pub fn new(values: Vec<f64>) -> Self {
        Profile(values)
    }

    pub fn zeros(len: usize) -> Self {
        Profile(vec![0.0; len])
    }

    /// Builds a profile, rejecting non-finite or negative entries.
    pub fn non_negative(values: Vec<f64>) -> Result<Self> {
        if let Some((k, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::Data(format!(
                "profile hour {k} has invalid value {v}"
            )));
        }
        Ok(Profile(values))
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Copy of hours `start..end`.
    pub fn window(&self, start: usize, end: usize) -> Profile {
        Profile(self.0[start..end].to_vec())
    }
}

impl Deref for Profile {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Profile {
    fn from(values: Vec<f64>) -> Self {
        Profile(values)
    }
}

impl FromIterator<f64> for Profile {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Profile(iter.into_iter().collect())
    }
}

/// Relative closeness used for energy conservation checks.
pub(crate) fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
