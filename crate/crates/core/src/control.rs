//! Day-level control schemes: uncontrolled (BAU), open-loop day-ahead and
//! shrinking-horizon MPC.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::CurtailmentDay;
use crate::optimizer::shift::CONSERVATION_TOL;
use crate::optimizer::{curtailment, optimize_shift, ShiftInstance};
use crate::profile::{rel_close, Profile, HOURS_PER_DAY};

/// MPC step sizes that evenly divide the day.
pub const VALID_STEP_HOURS: [usize; 7] = [1, 2, 3, 4, 6, 8, 12];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Bau,
    OpenLoop,
    Mpc,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Bau => "bau",
            SchemeKind::OpenLoop => "open_loop",
            SchemeKind::Mpc => "mpc",
        }
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bau" => Ok(SchemeKind::Bau),
            "open-loop" | "open_loop" => Ok(SchemeKind::OpenLoop),
            "mpc" => Ok(SchemeKind::Mpc),
            other => Err(Error::Usage(format!("unknown scheme '{other}'"))),
        }
    }
}

/// A control scheme: kind plus MPC step size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub step_hours: Option<usize>,
}

impl SchemeSpec {
    pub const BAU: SchemeSpec = SchemeSpec {
        kind: SchemeKind::Bau,
        step_hours: None,
    };
    pub const OPEN_LOOP: SchemeSpec = SchemeSpec {
        kind: SchemeKind::OpenLoop,
        step_hours: None,
    };

    pub fn mpc(step_hours: usize) -> Result<Self> {
        let spec = SchemeSpec {
            kind: SchemeKind::Mpc,
            step_hours: Some(step_hours),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.kind, self.step_hours) {
            (SchemeKind::Mpc, Some(step)) if VALID_STEP_HOURS.contains(&step) => Ok(()),
            (SchemeKind::Mpc, Some(step)) => Err(Error::Usage(format!(
                "MPC step of {step} h must be one of {VALID_STEP_HOURS:?}"
            ))),
            (SchemeKind::Mpc, None) => Err(Error::Usage("MPC needs a step size".into())),
            (_, Some(_)) => Err(Error::Usage(format!(
                "{} takes no step size",
                self.kind.as_str()
            ))),
            (_, None) => Ok(()),
        }
    }

    /// Short label such as `open_loop` or `mpc-6`.
    pub fn label(&self) -> String {
        match self.step_hours {
            Some(step) => format!("{}-{step}", self.kind.as_str()),
            None => self.kind.as_str().to_string(),
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Which excess profile a committed hour was planned against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcessSource {
    None,
    Forecast,
    Actual,
}

impl ExcessSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ExcessSource::None => "none",
            ExcessSource::Forecast => "forecast",
            ExcessSource::Actual => "actual",
        }
    }
}

/// One optimisation performed while running a day.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveRecord {
    pub start_hour: usize,
    pub instance: ShiftInstance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DayResult {
    pub scheme: SchemeSpec,
    pub realized_load: Profile,
    /// Committed deferral out of each hour.
    pub deferrals: Vec<f64>,
    pub excess_source: Vec<ExcessSource>,
    pub bau_curtailment: f64,
    pub realized_curtailment: f64,
    /// `bau_curtailment - realized_curtailment`; negative when the scheme
    /// did worse than no control.
    pub additional_res_used: f64,
    pub solves: Vec<SolveRecord>,
}

fn check_inputs(day: &CurtailmentDay, bau: &Profile) -> Result<()> {
    day.validate()?;
    if bau.len() != HOURS_PER_DAY || bau.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::Data(
            "BAU profile must hold 24 non-negative values".into(),
        ));
    }
    Ok(())
}

fn finish(
    scheme: SchemeSpec,
    day: &CurtailmentDay,
    bau: &Profile,
    realized_load: Profile,
    deferrals: Vec<f64>,
    excess_source: Vec<ExcessSource>,
    solves: Vec<SolveRecord>,
) -> Result<DayResult> {
    if !rel_close(realized_load.total(), bau.total(), CONSERVATION_TOL) {
        return Err(Error::Internal(format!(
            "{scheme} on day {}: realized {} MWh vs BAU {} MWh",
            day.day_index,
            realized_load.total(),
            bau.total()
        )));
    }
    let bau_curtailment = curtailment(&day.actual_excess, bau)?;
    let realized_curtailment = curtailment(&day.actual_excess, &realized_load)?;
    Ok(DayResult {
        scheme,
        realized_load,
        deferrals,
        excess_source,
        bau_curtailment,
        realized_curtailment,
        additional_res_used: bau_curtailment - realized_curtailment,
        solves,
    })
}

pub fn run_bau(day: &CurtailmentDay, bau: &Profile) -> Result<DayResult> {
    check_inputs(day, bau)?;
    finish(
        SchemeSpec::BAU,
        day,
        bau,
        bau.clone(),
        vec![0.0; HOURS_PER_DAY],
        vec![ExcessSource::None; HOURS_PER_DAY],
        Vec::new(),
    )
}

/// Optimises once on the forecast and lets the day play out as planned.
pub fn run_open_loop(day: &CurtailmentDay, bau: &Profile, p_max: f64) -> Result<DayResult> {
    check_inputs(day, bau)?;
    let instance = ShiftInstance::new(day.forecast_excess.clone(), bau.clone(), 0.0, p_max)?;
    let plan = optimize_shift(&instance)?;
    finish(
        SchemeSpec::OPEN_LOOP,
        day,
        bau,
        plan.load,
        plan.deferrals,
        vec![ExcessSource::Forecast; HOURS_PER_DAY],
        vec![SolveRecord {
            start_hour: 0,
            instance,
        }],
    )
}

/// How many hours of actual excess each MPC re-solve sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActualWindow {
    /// Exactly the hours about to be committed.
    #[default]
    Step,
    /// A fixed number of hours ahead, whatever the step size.
    Hours(usize),
}

impl ActualWindow {
    fn hours(self, step_hours: usize) -> usize {
        match self {
            ActualWindow::Step => step_hours,
            ActualWindow::Hours(n) => n,
        }
    }
}

/// Re-optimises every `step_hours` over the rest of the day, committing
/// only the next step.
///
/// Each solve sees the actual excess for the hours it is about to commit
/// and the forecast beyond them. Energy deferred across a step boundary is
/// carried into the first hour of the next horizon.
pub fn run_mpc(
    day: &CurtailmentDay,
    bau: &Profile,
    p_max: f64,
    step_hours: usize,
) -> Result<DayResult> {
    run_mpc_with(day, bau, p_max, step_hours, ActualWindow::Step)
}

/// [`run_mpc`] with an explicit actual-data window.
pub fn run_mpc_with(
    day: &CurtailmentDay,
    bau: &Profile,
    p_max: f64,
    step_hours: usize,
    window: ActualWindow,
) -> Result<DayResult> {
    let scheme = SchemeSpec::mpc(step_hours)?;
    check_inputs(day, bau)?;
    let lookahead = window.hours(step_hours);
    let mut load = Vec::with_capacity(HOURS_PER_DAY);
    let mut deferrals = Vec::with_capacity(HOURS_PER_DAY);
    let mut sources = Vec::with_capacity(HOURS_PER_DAY);
    let mut solves = Vec::new();
    let mut carry_in = 0.0;
    for start in (0..HOURS_PER_DAY).step_by(step_hours) {
        let known_end = (start + lookahead).min(HOURS_PER_DAY);
        let excess: Profile = day.actual_excess[start..known_end]
            .iter()
            .chain(&day.forecast_excess[known_end..])
            .copied()
            .collect();
        let instance =
            ShiftInstance::new(excess, bau.window(start, HOURS_PER_DAY), carry_in, p_max)?;
        let plan = optimize_shift(&instance)?;
        load.extend_from_slice(&plan.load[..step_hours]);
        deferrals.extend_from_slice(&plan.deferrals[..step_hours]);
        sources.extend((0..step_hours).map(|i| {
            if i < lookahead {
                ExcessSource::Actual
            } else {
                ExcessSource::Forecast
            }
        }));
        carry_in = plan.deferrals[step_hours - 1];
        solves.push(SolveRecord {
            start_hour: start,
            instance,
        });
    }
    if carry_in != 0.0 {
        return Err(Error::Internal(format!("{carry_in} MWh left the day")));
    }
    finish(
        scheme,
        day,
        bau,
        Profile::new(load),
        deferrals,
        sources,
        solves,
    )
}

/// Dispatches to the runner for `scheme`.
pub fn run_scheme(
    day: &CurtailmentDay,
    bau: &Profile,
    scheme: SchemeSpec,
    p_max: f64,
    window: ActualWindow,
) -> Result<DayResult> {
    scheme.validate()?;
    match scheme.kind {
        SchemeKind::Bau => run_bau(day, bau),
        SchemeKind::OpenLoop => run_open_loop(day, bau, p_max),
        SchemeKind::Mpc => {
            run_mpc_with(day, bau, p_max, scheme.step_hours.unwrap_or_default(), window)
        }
    }
}
