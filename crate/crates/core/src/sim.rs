//! Year-long runs of every scheme over every curtailment day, with the
//! headline aggregates: additional renewable energy used, share of days
//! won, and days worse than uncontrolled charging.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::control::{run_scheme, ActualWindow, DayResult, SchemeKind, SchemeSpec};
use crate::error::{Error, Result};
use crate::grid::CurtailmentDay;
use crate::profile::Profile;

/// Schemes within this many MWh of a day's best all share the win.
pub const WIN_TIE_TOL: f64 = 1e-6;

const MONTH_DAYS: [usize; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

/// Calendar month (0-based) of a 0-based day of a non-leap year.
pub fn month_of_day(day_index: usize) -> usize {
    let mut end = 0;
    for (m, len) in MONTH_DAYS.iter().enumerate() {
        end += len;
        if day_index < end {
            return m;
        }
    }
    11
}

/// First listed day falling in each month, in month order.
pub fn first_day_per_month(day_indices: &[usize]) -> Vec<usize> {
    let mut sorted = day_indices.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<usize> = Vec::new();
    for d in sorted {
        if out.last().is_none_or(|&last| month_of_day(last) != month_of_day(d)) {
            out.push(d);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScenarioInfo {
    pub name: String,
    pub p_max: f64,
    pub actual_window: ActualWindow,
    pub sample_day_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub kind: SchemeKind,
    pub step_hours: Option<usize>,
    pub total_additional_res_mwh: f64,
    pub win_fraction: f64,
    pub worse_than_bau_days: usize,
}

impl SchemeSummary {
    pub fn spec(&self) -> SchemeSpec {
        SchemeSpec {
            kind: self.kind,
            step_hours: self.step_hours,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeDayRecord {
    pub kind: SchemeKind,
    pub step_hours: Option<usize>,
    pub realized_curtailment_mwh: f64,
    pub additional_res_used_mwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayRecord {
    pub day_index: usize,
    pub actual_day_index: usize,
    pub bau_curtailment_mwh: f64,
    pub results: Vec<SchemeDayRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualReport {
    pub scenario: ScenarioInfo,
    pub curtailment_day_count: usize,
    pub schemes: Vec<SchemeSummary>,
    pub days: Vec<DayRecord>,
}

/// Every scheme's result on one day, in scheme order.
#[derive(Debug, Clone, PartialEq)]
pub struct DayOutcome {
    pub day: CurtailmentDay,
    pub results: Vec<DayResult>,
}

/// Runs every scheme on every day, sorted by day index.
///
/// `threads <= 1` runs sequentially; the output does not depend on it. On
/// failure the earliest failing day is reported.
pub fn simulate_days(
    days: &[CurtailmentDay],
    bau: &Profile,
    schemes: &[SchemeSpec],
    p_max: f64,
    window: ActualWindow,
    threads: usize,
) -> Result<Vec<DayOutcome>> {
    if schemes.is_empty() {
        return Err(Error::Usage("no control schemes selected".into()));
    }
    for s in schemes {
        s.validate()?;
    }
    let mut sorted: Vec<&CurtailmentDay> = days.iter().collect();
    sorted.sort_by_key(|d| d.day_index);

    let run_day = |day: &&CurtailmentDay| -> Result<DayOutcome> {
        let results = schemes
            .iter()
            .map(|s| run_scheme(day, bau, *s, p_max, window))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Day {
                day_index: day.day_index,
                source: Box::new(e),
            })?;
        Ok(DayOutcome {
            day: (*day).clone(),
            results,
        })
    };

    let outcomes: Vec<Result<DayOutcome>> = if threads <= 1 {
        sorted.iter().map(run_day).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        pool.install(|| sorted.par_iter().map(run_day).collect())
    };
    outcomes.into_iter().collect()
}

/// Folds per-day outcomes into the annual report.
pub fn aggregate(outcomes: &[DayOutcome], schemes: &[SchemeSpec], scenario: ScenarioInfo) -> AnnualReport {
    let n = outcomes.len();
    let mut totals = vec![0.0; schemes.len()];
    let mut wins = vec![0usize; schemes.len()];
    let mut worse = vec![0usize; schemes.len()];
    let mut days = Vec::with_capacity(n);
    for outcome in outcomes {
        let best = outcome
            .results
            .iter()
            .map(|r| r.additional_res_used)
            .fold(f64::NEG_INFINITY, f64::max);
        for (i, r) in outcome.results.iter().enumerate() {
            totals[i] += r.additional_res_used;
            if r.additional_res_used >= best - WIN_TIE_TOL {
                wins[i] += 1;
            }
            if r.additional_res_used < 0.0 {
                worse[i] += 1;
            }
        }
        days.push(DayRecord {
            day_index: outcome.day.day_index,
            actual_day_index: outcome.day.actual_day_index,
            bau_curtailment_mwh: outcome.results.first().map_or(0.0, |r| r.bau_curtailment),
            results: outcome
                .results
                .iter()
                .map(|r| SchemeDayRecord {
                    kind: r.scheme.kind,
                    step_hours: r.scheme.step_hours,
                    realized_curtailment_mwh: r.realized_curtailment,
                    additional_res_used_mwh: r.additional_res_used,
                })
                .collect(),
        });
    }
    let schemes = schemes
        .iter()
        .enumerate()
        .map(|(i, s)| SchemeSummary {
            kind: s.kind,
            step_hours: s.step_hours,
            total_additional_res_mwh: totals[i],
            win_fraction: if n == 0 { 0.0 } else { wins[i] as f64 / n as f64 },
            worse_than_bau_days: worse[i],
        })
        .collect();
    AnnualReport {
        scenario,
        curtailment_day_count: n,
        schemes,
        days,
    }
}

/// Runs a whole scenario year and aggregates it.
pub fn run_year(
    days: &[CurtailmentDay],
    bau: &Profile,
    schemes: &[SchemeSpec],
    p_max: f64,
    window: ActualWindow,
    threads: usize,
) -> Result<AnnualReport> {
    let outcomes = simulate_days(days, bau, schemes, p_max, window, threads)?;
    let indices: Vec<usize> = outcomes.iter().map(|o| o.day.day_index).collect();
    let scenario = ScenarioInfo {
        name: String::new(),
        p_max,
        actual_window: window,
        sample_day_indices: first_day_per_month(&indices),
    };
    Ok(aggregate(&outcomes, schemes, scenario))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub day_index: usize,
    pub additional_res_used: Vec<f64>,
    pub best: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleDayTable {
    pub schemes: Vec<SchemeSpec>,
    pub rows: Vec<SampleRow>,
}

/// Additional RES used per scheme for the chosen days, best values flagged.
pub fn sample_day_table(report: &AnnualReport, day_indices: &[usize]) -> Result<SampleDayTable> {
    let schemes = report.schemes.iter().map(SchemeSummary::spec).collect();
    let rows = day_indices
        .iter()
        .map(|&d| {
            let record = report
                .days
                .iter()
                .find(|r| r.day_index == d)
                .ok_or_else(|| Error::Lookup(format!("day {d} not in report")))?;
            let values: Vec<f64> = record
                .results
                .iter()
                .map(|r| r.additional_res_used_mwh)
                .collect();
            let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(SampleRow {
                day_index: d,
                best: values.iter().map(|v| *v >= best - WIN_TIE_TOL).collect(),
                additional_res_used: values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleDayTable { schemes, rows })
}

/// Formats with three significant figures.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 2 - magnitude;
    if decimals > 0 {
        format!("{:.*}", decimals as usize, x)
    } else {
        let unit = 10f64.powi(-decimals);
        format!("{:.0}", (x / unit).round() * unit)
    }
}

/// Plain-text annual summary, energies in GWh.
pub fn render_summary(report: &AnnualReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scenario {} | p_max {} | curtailment days {}",
        if report.scenario.name.is_empty() { "-" } else { &report.scenario.name },
        report.scenario.p_max,
        report.curtailment_day_count
    );
    let _ = writeln!(
        out,
        "{:<12} {:>18} {:>10} {:>16}",
        "scheme", "additional (GWh)", "wins", "worse than BAU"
    );
    for s in &report.schemes {
        let _ = writeln!(
            out,
            "{:<12} {:>18} {:>9.0}% {:>16}",
            s.spec().label(),
            sig3(s.total_additional_res_mwh / 1000.0),
            s.win_fraction * 100.0,
            s.worse_than_bau_days
        );
    }
    out
}

/// Plain-text sample-day table in MWh, best entries starred.
pub fn render_sample_table(table: &SampleDayTable) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<8}", "day");
    for s in &table.schemes {
        let _ = write!(out, " {:>14}", s.label());
    }
    out.push('\n');
    for row in &table.rows {
        let _ = write!(out, "{:<8}", row.day_index);
        for (v, best) in row.additional_res_used.iter().zip(&row.best) {
            let cell = format!("{}{}", sig3(*v), if *best { "*" } else { "" });
            let _ = write!(out, " {cell:>14}");
        }
        out.push('\n');
    }
    out
}
