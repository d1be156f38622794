//! Scenario-year grid series: scaled load, renewable output and the excess
//! renewable supply available to EV charging.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Profile, HOURS_PER_DAY, HOURS_PER_YEAR};

/// One simulation year of hourly values (8760 entries, all finite).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSeries(Vec<f64>);

impl GridSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() != HOURS_PER_YEAR {
            return Err(Error::Data(format!(
                "grid series must have {HOURS_PER_YEAR} hours, got {}",
                values.len()
            )));
        }
        if let Some(h) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("grid series hour {h} is not finite")));
        }
        Ok(GridSeries(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn day(&self, day: usize) -> &[f64] {
        &self.0[day * HOURS_PER_DAY..(day + 1) * HOURS_PER_DAY]
    }
}

impl Deref for GridSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Installed nameplate capacity in MW.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstalledCapacity {
    pub wind_mw: f64,
    pub solar_mw: f64,
}

impl InstalledCapacity {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("wind_mw", self.wind_mw), ("solar_mw", self.solar_mw)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// A forecast excess profile paired with the day-of actual profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurtailmentDay {
    /// Day of year (0-based) of the forecast profile.
    pub day_index: usize,
    /// Day of year whose profile plays the realized excess.
    pub actual_day_index: usize,
    pub forecast_excess: Profile,
    pub actual_excess: Profile,
}

impl CurtailmentDay {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("forecast", &self.forecast_excess),
            ("actual", &self.actual_excess),
        ] {
            if p.len() != HOURS_PER_DAY {
                return Err(Error::Data(format!(
                    "day {}: {name} profile has {} hours",
                    self.day_index,
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::Data(format!(
                    "day {}: {name} profile has negative or non-finite values",
                    self.day_index
                )));
            }
        }
        if !self.forecast_excess.iter().any(|v| *v > 0.0) {
            return Err(Error::Data(format!(
                "day {}: forecast has no excess hour",
                self.day_index
            )));
        }
        Ok(())
    }
}

pub fn scale_series(series: &GridSeries, factor: f64) -> Result<GridSeries> {
    if !factor.is_finite() || factor < 0.0 {
        return Err(Error::Domain(format!("scale factor must be >= 0, got {factor}")));
    }
    Ok(GridSeries(series.iter().map(|v| v * factor).collect()))
}

/// Hourly renewable output (MWh) from capacity factors and nameplate MW.
pub fn res_output_series(
    wind_cf: &GridSeries,
    solar_cf: &GridSeries,
    cap: InstalledCapacity,
) -> Result<GridSeries> {
    cap.validate()?;
    for (name, cf) in [("wind", wind_cf), ("solar", solar_cf)] {
        if let Some(h) = cf.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Data(format!(
                "{name} capacity factor {} at hour {h} outside [0, 1]",
                cf[h]
            )));
        }
    }
    Ok(GridSeries(
        wind_cf
            .iter()
            .zip(solar_cf.iter())
            .map(|(w, s)| w * cap.wind_mw + s * cap.solar_mw)
            .collect(),
    ))
}

pub fn excess_res_series(res: &GridSeries, non_ev_load: &GridSeries) -> Result<GridSeries> {
    if res.len() != non_ev_load.len() {
        return Err(Error::Data(format!(
            "length mismatch: res {} vs load {}",
            res.len(),
            non_ev_load.len()
        )));
    }
    Ok(GridSeries(
        res.iter()
            .zip(non_ev_load.iter())
            .map(|(r, l)| (r - l).max(0.0))
            .collect(),
    ))
}

/// Days with any positive excess hour, each paired with the next such day
/// as its realized profile; the last one wraps around to the first.
pub fn pair_curtailment_days(excess: &GridSeries) -> Vec<CurtailmentDay> {
    let days = excess.len() / HOURS_PER_DAY;
    let selected: Vec<usize> = (0..days)
        .filter(|&d| excess.day(d).iter().any(|v| *v > 0.0))
        .collect();
    selected
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let next = selected[(i + 1) % selected.len()];
            CurtailmentDay {
                day_index: d,
                actual_day_index: next,
                forecast_excess: Profile::new(excess.day(d).to_vec()),
                actual_excess: Profile::new(excess.day(next).to_vec()),
            }
        })
        .collect()
}
