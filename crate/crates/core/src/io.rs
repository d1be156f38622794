//! File formats: CSV series, JSON configs and reports.
//!
//! CSVs carry a header row, comma separators and `.` decimals; numbers are
//! written with six decimal places.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::control::DayResult;
use crate::error::{Error, Result};
use crate::fleet::{FleetParams, HourlyDistribution};
use crate::grid::{CurtailmentDay, GridSeries, InstalledCapacity};
use crate::profile::{HOURS_PER_DAY, HOURS_PER_YEAR};

pub const LOAD_HEADER: [&str; 2] = ["hour", "load_mwh"];
pub const CAPACITY_FACTOR_HEADER: [&str; 3] = ["hour", "wind_cf", "solar_cf"];
pub const DISTRIBUTION_HEADER: [&str; 2] = ["hour", "fraction"];
pub const DAYS_HEADER: [&str; 5] = [
    "day_index",
    "actual_day_index",
    "hour",
    "forecast_excess_mwh",
    "actual_excess_mwh",
];
pub const REMAINING_EXCESS_HEADER: [&str; 3] = ["hour", "bau_excess_mwh", "scheme_excess_mwh"];
pub const TRACE_HEADER: [&str; 4] = ["hour", "load_mwh", "deferral_mwh", "excess_source"];

/// Grid scenario settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub wind_mw: f64,
    pub solar_mw: f64,
    pub population_growth_factor: f64,
}

impl ScenarioConfig {
    pub fn capacity(&self) -> InstalledCapacity {
        InstalledCapacity {
            wind_mw: self.wind_mw,
            solar_mw: self.solar_mw,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.capacity().validate()?;
        let g = self.population_growth_factor;
        if !g.is_finite() || g < 0.0 {
            return Err(Error::Config(format!(
                "population_growth_factor must be >= 0, got {g}"
            )));
        }
        Ok(())
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("json encoding: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn read_fleet_config(path: &Path) -> Result<FleetParams> {
    let params: FleetParams = read_json(path)?;
    params.validate()?;
    Ok(params)
}

pub fn read_scenario_config(path: &Path) -> Result<ScenarioConfig> {
    let cfg: ScenarioConfig = read_json(path)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parses a CSV with an exact header and a leading `hour` column that must
/// count up from zero. Returns the remaining columns per row.
fn parse_hourly_csv(text: &str, header: &[&str], rows: usize, what: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found = reader
        .headers()
        .map_err(|e| Error::Data(format!("{what}: {e}")))?
        .clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Data(format!(
            "{what}: header must be '{}', found '{}'",
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Data(format!("{what}: {e}")))?;
        let hour: usize = record[0]
            .parse()
            .map_err(|_| Error::Data(format!("{what} row {i}: bad hour '{}'", &record[0])))?;
        if hour != i {
            return Err(Error::Data(format!("{what}: expected hour {i}, found {hour}")));
        }
        let values = record
            .iter()
            .skip(1)
            .map(|field| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Data(format!("{what} row {i}: bad number '{field}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(values);
    }
    if out.len() != rows {
        return Err(Error::Data(format!(
            "{what}: expected {rows} rows, found {}",
            out.len()
        )));
    }
    Ok(out)
}

pub fn parse_load_csv(text: &str) -> Result<GridSeries> {
    let rows = parse_hourly_csv(text, &LOAD_HEADER, HOURS_PER_YEAR, "load csv")?;
    GridSeries::new(rows.into_iter().map(|r| r[0]).collect())
}

/// Returns `(wind_cf, solar_cf)`.
pub fn parse_capacity_factor_csv(text: &str) -> Result<(GridSeries, GridSeries)> {
    let rows = parse_hourly_csv(
        text,
        &CAPACITY_FACTOR_HEADER,
        HOURS_PER_YEAR,
        "capacity factor csv",
    )?;
    let wind = rows.iter().map(|r| r[0]).collect();
    let solar = rows.iter().map(|r| r[1]).collect();
    Ok((GridSeries::new(wind)?, GridSeries::new(solar)?))
}

pub fn parse_distribution_csv(text: &str) -> Result<HourlyDistribution> {
    let rows = parse_hourly_csv(text, &DISTRIBUTION_HEADER, HOURS_PER_DAY, "distribution csv")?;
    HourlyDistribution::new(&rows.iter().map(|r| r[0]).collect::<Vec<_>>())
}

fn csv_with_header(header: &[&str]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    out
}

pub fn load_csv(load: &[f64]) -> String {
    let mut out = csv_with_header(&LOAD_HEADER);
    for (h, v) in load.iter().enumerate() {
        let _ = writeln!(out, "{h},{v:.6}");
    }
    out
}

pub fn capacity_factor_csv(wind: &[f64], solar: &[f64]) -> String {
    let mut out = csv_with_header(&CAPACITY_FACTOR_HEADER);
    for (h, (w, s)) in wind.iter().zip(solar).enumerate() {
        let _ = writeln!(out, "{h},{w:.6},{s:.6}");
    }
    out
}

pub fn distribution_csv(fractions: &[f64]) -> String {
    let mut out = csv_with_header(&DISTRIBUTION_HEADER);
    for (h, f) in fractions.iter().enumerate() {
        let _ = writeln!(out, "{h},{f:.6}");
    }
    out
}

pub fn days_csv(days: &[CurtailmentDay]) -> String {
    let mut out = csv_with_header(&DAYS_HEADER);
    for d in days {
        for h in 0..HOURS_PER_DAY {
            let _ = writeln!(
                out,
                "{},{},{h},{:.6},{:.6}",
                d.day_index, d.actual_day_index, d.forecast_excess[h], d.actual_excess[h]
            );
        }
    }
    out
}

/// Excess left over on the actual profile under BAU and under a scheme.
pub fn remaining_excess_csv(day: &CurtailmentDay, bau: &[f64], result: &DayResult) -> String {
    let mut out = csv_with_header(&REMAINING_EXCESS_HEADER);
    let rows = day.actual_excess.iter().zip(bau).zip(result.realized_load.iter());
    for (h, ((e, b), l)) in rows.enumerate() {
        let _ = writeln!(out, "{h},{:.6},{:.6}", (e - b).max(0.0), (e - l).max(0.0));
    }
    out
}

pub fn trace_csv(result: &DayResult) -> String {
    let mut out = csv_with_header(&TRACE_HEADER);
    for h in 0..result.realized_load.len() {
        let _ = writeln!(
            out,
            "{h},{:.6},{:.6},{}",
            result.realized_load[h],
            result.deferrals[h],
            result.excess_source[h].as_str()
        );
    }
    out
}
