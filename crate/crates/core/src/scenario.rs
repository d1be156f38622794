//! Assembles a scenario year from its input files: fleet demand profile,
//! scaled load, renewable output and the paired curtailment days.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::control::{ActualWindow, SchemeSpec};
use crate::error::{Error, Result};
use crate::fleet::{build_bau_profile, fleet_daily_energy, project_fleet, FleetParams, FleetProjection, HourlyDistribution};
use crate::grid::{excess_res_series, pair_curtailment_days, res_output_series, scale_series, CurtailmentDay, GridSeries};
use crate::io::{self, ScenarioConfig};
use crate::profile::Profile;

/// Uptake cap used when a run config does not give one.
pub const DEFAULT_P_MAX: f64 = 0.5;

fn default_p_max() -> f64 {
    DEFAULT_P_MAX
}

/// A simulation run. Relative paths resolve against the config's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub fleet_config: PathBuf,
    pub distribution_csv: PathBuf,
    pub load_csv: PathBuf,
    pub capacity_factor_csv: PathBuf,
    pub scenario_config: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden_report: Option<PathBuf>,
    pub schemes: Vec<SchemeSpec>,
    #[serde(default = "default_p_max")]
    pub p_max: f64,
    /// Actual-excess window for MPC re-solves.
    #[serde(default)]
    pub actual_window: ActualWindow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_max) {
            return Err(Error::Config(format!("p_max {} outside [0, 1]", self.p_max)));
        }
        for s in &self.schemes {
            s.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

/// Raw scenario inputs, already parsed.
#[derive(Debug, Clone)]
pub struct ScenarioInputs {
    pub fleet: FleetParams,
    pub distribution: HourlyDistribution,
    pub load: GridSeries,
    pub wind_cf: GridSeries,
    pub solar_cf: GridSeries,
    pub grid: ScenarioConfig,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub projection: FleetProjection,
    pub ev_count: f64,
    pub daily_ev_mwh: f64,
    pub bau: Profile,
    pub excess: GridSeries,
    pub days: Vec<CurtailmentDay>,
}

impl Scenario {
    /// EV demand comes from the fleet in its final projected year; the grid
    /// load is scaled without EV demand, so the excess is what EV charging
    /// could absorb.
    pub fn build(inputs: &ScenarioInputs) -> Result<Self> {
        inputs.grid.validate()?;
        let projection = project_fleet(&inputs.fleet)?;
        let ev_count = projection.final_count();
        let daily_ev_mwh =
            fleet_daily_energy(ev_count, inputs.fleet.km_per_ev_day, inputs.fleet.kwh_per_km)?;
        let bau = build_bau_profile(daily_ev_mwh, &inputs.distribution)?;
        let load = scale_series(&inputs.load, inputs.grid.population_growth_factor)?;
        let res = res_output_series(&inputs.wind_cf, &inputs.solar_cf, inputs.grid.capacity())?;
        let excess = excess_res_series(&res, &load)?;
        let days = pair_curtailment_days(&excess);
        Ok(Scenario {
            projection,
            ev_count,
            daily_ev_mwh,
            bau,
            excess,
            days,
        })
    }
}

/// A run config with its inputs loaded and the scenario built.
#[derive(Debug, Clone)]
pub struct LoadedRun {
    pub config: RunConfig,
    pub base_dir: PathBuf,
    pub scenario: Scenario,
}

impl LoadedRun {
    pub fn load(config_path: &Path) -> Result<Self> {
        let config: RunConfig = io::read_json(config_path)?;
        config.validate()?;
        let base_dir = config_path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        let resolve = |p: &Path| base_dir.join(p);
        let (wind_cf, solar_cf) =
            io::parse_capacity_factor_csv(&io::read_text(&resolve(&config.capacity_factor_csv))?)?;
        let inputs = ScenarioInputs {
            fleet: io::read_fleet_config(&resolve(&config.fleet_config))?,
            distribution: io::parse_distribution_csv(&io::read_text(&resolve(
                &config.distribution_csv,
            ))?)?,
            load: io::parse_load_csv(&io::read_text(&resolve(&config.load_csv))?)?,
            wind_cf,
            solar_cf,
            grid: io::read_scenario_config(&resolve(&config.scenario_config))?,
        };
        let scenario = Scenario::build(&inputs)?;
        Ok(LoadedRun {
            config,
            base_dir,
            scenario,
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        self.base_dir.join(p)
    }
}
