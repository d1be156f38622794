//! Fleet adoption model and business-as-usual charging demand.
//!
//! The EV stock evolves by a retirement/replacement recurrence: each year a
//! `1/R` slice of the stock retires and a market-share fraction of the
//! replacement purchases (`LDV/R`) is electric.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Profile, HOURS_PER_DAY};

/// Tolerance on the sum of an hourly charging distribution.
pub const DISTRIBUTION_SUM_TOL: f64 = 1e-9;

/// Adoption-model and per-vehicle demand parameters.
///
/// Field names mirror the fleet config JSON keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FleetParams {
    pub start_year: i32,
    pub end_year: i32,
    pub initial_ev_count: f64,
    /// Registered light-duty vehicles per year.
    pub ldv_total_by_year: BTreeMap<i32, f64>,
    /// `(year, fraction)` anchors, strictly increasing in year.
    pub market_share_points: Vec<(i32, f64)>,
    /// Average vehicle lifetime in years.
    pub lifetime_r: u32,
    pub km_per_ev_day: f64,
    pub kwh_per_km: f64,
}

impl FleetParams {
    pub fn validate(&self) -> Result<()> {
        if self.lifetime_r < 1 {
            return Err(Error::Config("lifetime_r must be at least 1".into()));
        }
        if self.end_year < self.start_year {
            return Err(Error::Config(format!(
                "end_year {} precedes start_year {}",
                self.end_year, self.start_year
            )));
        }
        check_count("initial_ev_count", self.initial_ev_count)?;
        check_count("km_per_ev_day", self.km_per_ev_day)?;
        check_count("kwh_per_km", self.kwh_per_km)?;
        validate_anchors(&self.market_share_points)?;
        for year in self.start_year + 1..=self.end_year {
            let ldv = self.ldv_total_by_year.get(&year).ok_or_else(|| {
                Error::Config(format!("ldv_total_by_year has no entry for {year}"))
            })?;
            check_count(&format!("ldv_total_by_year[{year}]"), *ldv)?;
        }
        Ok(())
    }
}

fn check_count(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::Config(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

fn validate_anchors(points: &[(i32, f64)]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Config("market share needs at least one anchor".into()));
    }
    for &(year, share) in points {
        if !(0.0..=1.0).contains(&share) {
            return Err(Error::Config(format!(
                "market share {share} for {year} outside [0, 1]"
            )));
        }
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Config(
            "market share anchors must be strictly increasing in year".into(),
        ));
    }
    Ok(())
}

/// Market share in `year`, linear between anchors and flat outside them.
pub fn market_share_at(points: &[(i32, f64)], year: i32) -> Result<f64> {
    validate_anchors(points)?;
    let (first, last) = (points[0], points[points.len() - 1]);
    if year <= first.0 {
        return Ok(first.1);
    }
    if year >= last.0 {
        return Ok(last.1);
    }
    let i = points.partition_point(|&(y, _)| y <= year);
    let (y0, f0) = points[i - 1];
    let (y1, f1) = points[i];
    if year == y0 {
        return Ok(f0);
    }
    let t = f64::from(year - y0) / f64::from(y1 - y0);
    Ok(f0 + (f1 - f0) * t)
}

/// One projected year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FleetYear {
    pub year: i32,
    pub market_share: f64,
    pub ev_count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FleetProjection {
    pub years: Vec<FleetYear>,
}

impl FleetProjection {
    pub fn count_in(&self, year: i32) -> Option<f64> {
        self.years.iter().find(|y| y.year == year).map(|y| y.ev_count)
    }

    pub fn final_count(&self) -> f64 {
        self.years.last().map_or(0.0, |y| y.ev_count)
    }
}

/// Applies the stock recurrence from `start_year + 1` through `end_year`.
pub fn project_fleet(params: &FleetParams) -> Result<FleetProjection> {
    params.validate()?;
    let r = f64::from(params.lifetime_r);
    let survive = (r - 1.0) / r;
    let mut years = Vec::with_capacity((params.end_year - params.start_year + 1) as usize);
    let mut count = params.initial_ev_count;
    years.push(FleetYear {
        year: params.start_year,
        market_share: market_share_at(&params.market_share_points, params.start_year)?,
        ev_count: count,
    });
    for year in params.start_year + 1..=params.end_year {
        let share = market_share_at(&params.market_share_points, year)?;
        let ldv = params.ldv_total_by_year[&year];
        count = survive * count + share * ldv / r;
        years.push(FleetYear {
            year,
            market_share: share,
            ev_count: count,
        });
    }
    Ok(FleetProjection { years })
}

/// Daily fleet charging energy in MWh.
pub fn fleet_daily_energy(ev_count: f64, km_per_ev_day: f64, kwh_per_km: f64) -> Result<f64> {
    for (name, v) in [
        ("ev_count", ev_count),
        ("km_per_ev_day", km_per_ev_day),
        ("kwh_per_km", kwh_per_km),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
        }
    }
    Ok(ev_count * km_per_ev_day * kwh_per_km / 1000.0)
}

/// Per-hour share of daily charging energy.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyDistribution([f64; HOURS_PER_DAY]);

impl HourlyDistribution {
    pub fn new(fractions: &[f64]) -> Result<Self> {
        if fractions.len() != HOURS_PER_DAY {
            return Err(Error::Data(format!(
                "hourly distribution needs {HOURS_PER_DAY} entries, got {}",
                fractions.len()
            )));
        }
        if let Some((h, f)) = fractions
            .iter()
            .enumerate()
            .find(|(_, f)| !f.is_finite() || **f < 0.0)
        {
            return Err(Error::Data(format!("hour {h} has invalid fraction {f}")));
        }
        let sum: f64 = fractions.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_SUM_TOL {
            return Err(Error::Data(format!(
                "hourly distribution sums to {sum}, expected 1"
            )));
        }
        let mut out = [0.0; HOURS_PER_DAY];
        out.copy_from_slice(fractions);
        Ok(HourlyDistribution(out))
    }

    pub fn uniform() -> Self {
        HourlyDistribution([1.0 / HOURS_PER_DAY as f64; HOURS_PER_DAY])
    }

    pub fn fractions(&self) -> &[f64; HOURS_PER_DAY] {
        &self.0
    }
}

/// Spreads the daily energy over the day by the charging distribution.
pub fn build_bau_profile(daily_mwh: f64, distribution: &HourlyDistribution) -> Result<Profile> {
    if !daily_mwh.is_finite() || daily_mwh < 0.0 {
        return Err(Error::Domain(format!("daily energy must be >= 0, got {daily_mwh}")));
    }
    Ok(distribution.0.iter().map(|f| daily_mwh * f).collect())
}
