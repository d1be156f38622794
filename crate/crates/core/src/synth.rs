//! Seeded synthetic scenario year.
//!
//! Stands in for measured grid data with simple, documented shapes:
//!
//! * load: summer and mid-winter seasonal peaks, an afternoon diurnal peak,
//!   lighter weekends and autocorrelated day-to-day noise;
//! * solar: a clear-sky bell between sunrise and sunset whose width follows
//!   day length, times an autocorrelated daily clearness index;
//! * wind: a logistic transform of an hourly AR(1) process with a windy
//!   spring and a night-time bump.
//!
//! The defaults put roughly a third of the days into renewable excess.
//! Output is a pure function of the parameters; every number is written with
//! six decimals, so equal seeds give byte-identical files.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::control::{ActualWindow, SchemeSpec};
use crate::error::{Error, Result};
use crate::fleet::{FleetParams, HourlyDistribution};
use crate::io::{self, ScenarioConfig};
use crate::profile::{DAYS_PER_YEAR, HOURS_PER_DAY, HOURS_PER_YEAR};
use crate::scenario::{RunConfig, Scenario, ScenarioInputs, DEFAULT_P_MAX};
use crate::sim::first_day_per_month;

/// Per-hour share of daily EV charging: small overnight tail, a midday
/// plateau and an evening peak after commuters get home.
pub const DEFAULT_CHARGING_DISTRIBUTION: [f64; HOURS_PER_DAY] = [
    0.055, 0.045, 0.035, 0.025, 0.020, 0.018, 0.020, 0.025, 0.030, 0.032, 0.033, 0.034, 0.035,
    0.036, 0.038, 0.040, 0.045, 0.055, 0.065, 0.065, 0.062, 0.065, 0.065, 0.057,
];

/// Fleet adoption calibrated so the stock reaches 9.45 million EVs in 2035
/// at 8.724 kWh per EV-day (82,443 MWh/day for that fleet).
pub fn default_fleet_params() -> FleetParams {
    FleetParams {
        start_year: 2024,
        end_year: 2035,
        initial_ev_count: 300_000.0,
        ldv_total_by_year: (2025..=2035).map(|y| (y, 27_294_839.0)).collect(),
        market_share_points: vec![(2024, 0.05), (2030, 0.5), (2035, 0.85)],
        lifetime_r: 12,
        km_per_ev_day: 43.62,
        kwh_per_km: 0.2,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub seed: u64,
    pub wind_mw: f64,
    pub solar_mw: f64,
    pub population_growth_factor: f64,
    /// Mean unscaled grid load in MW.
    pub base_load_mw: f64,
    pub p_max: f64,
    pub actual_window: ActualWindow,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            seed: 42,
            wind_mw: 64_000.0,
            solar_mw: 55_000.0,
            population_growth_factor: 1.13,
            base_load_mw: 47_000.0,
            p_max: DEFAULT_P_MAX,
            actual_window: ActualWindow::Hours(3),
        }
    }
}

/// Reference values recorded alongside a generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthManifest {
    pub seed: u64,
    pub curtailment_day_count: usize,
    pub curtailment_day_indices: Vec<usize>,
    pub sample_day_indices: Vec<usize>,
}

/// File names written by [`synth_dataset`].
pub mod files {
    pub const LOAD: &str = "load.csv";
    pub const CAPACITY_FACTORS: &str = "capacity_factors.csv";
    pub const DISTRIBUTION: &str = "charging_distribution.csv";
    pub const FLEET: &str = "fleet.json";
    pub const SCENARIO: &str = "scenario.json";
    pub const RUN: &str = "run.json";
    pub const MANIFEST: &str = "manifest.json";
    pub const GOLDEN_REPORT: &str = "golden_report.json";
}

/// In-memory dataset: `(file name, contents)` pairs plus the manifest.
pub struct SynthDataset {
    pub files: Vec<(&'static str, String)>,
    pub manifest: SynthManifest,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

struct Series {
    load: Vec<f64>,
    wind: Vec<f64>,
    solar: Vec<f64>,
}

fn generate_series(params: &SynthParams) -> Series {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut load = Vec::with_capacity(HOURS_PER_YEAR);
    let mut wind = Vec::with_capacity(HOURS_PER_YEAR);
    let mut solar = Vec::with_capacity(HOURS_PER_YEAR);

    let mut load_noise = 0.0;
    let mut cloud = 0.0;
    let mut wind_state = 0.0;
    for d in 0..DAYS_PER_YEAR {
        let df = d as f64;
        let year_phase = 2.0 * PI * (df - 80.0) / 365.0;

        load_noise = 0.7 * load_noise + 0.02 * unit.sample(&mut rng);
        cloud = 0.6 * cloud + 0.8 * unit.sample(&mut rng);
        let seasonal = 1.0
            + 0.20 * (-((df - 205.0) / 45.0).powi(2)).exp()
            + 0.06 * (-((df - 20.0) / 20.0).powi(2)).exp();
        let weekend = if d % 7 >= 5 { 0.94 } else { 1.0 };
        let clearness = logistic(1.4 + cloud);
        let day_length = 12.0 + 1.8 * year_phase.sin();
        let sunrise = 13.5 - day_length / 2.0;
        let solar_peak = 0.72 + 0.08 * year_phase.sin();
        let wind_mean = -0.55 + 0.35 * (2.0 * PI * (df - 100.0) / 365.0).cos();

        for h in 0..HOURS_PER_DAY {
            let hf = h as f64;
            let diurnal = 1.0 + 0.13 * (2.0 * PI * (hf - 11.0) / 24.0).sin();
            let hourly = 1.0 + 0.01 * unit.sample(&mut rng);
            load.push(params.base_load_mw * seasonal * diurnal * weekend * (1.0 + load_noise) * hourly);

            let t = hf + 0.5 - sunrise;
            let bell = if t > 0.0 && t < day_length {
                (PI * t / day_length).sin().powf(1.3)
            } else {
                0.0
            };
            let jitter = 1.0 + 0.03 * unit.sample(&mut rng);
            solar.push((solar_peak * bell * clearness * jitter).clamp(0.0, 1.0));

            wind_state = 0.96 * wind_state + 0.28 * unit.sample(&mut rng);
            let night = 0.35 * (2.0 * PI * (hf - 3.0) / 24.0).cos();
            wind.push((0.95 * logistic(wind_mean + night + wind_state)).clamp(0.0, 1.0));
        }
    }
    Series { load, wind, solar }
}

/// Builds every dataset file in memory.
pub fn build_dataset(params: &SynthParams) -> Result<SynthDataset> {
    for (name, v) in [
        ("wind_mw", params.wind_mw),
        ("solar_mw", params.solar_mw),
        ("population_growth_factor", params.population_growth_factor),
        ("base_load_mw", params.base_load_mw),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Config(format!("{name} must be >= 0, got {v}")));
        }
    }
    let series = generate_series(params);
    let fleet = default_fleet_params();
    let grid = ScenarioConfig {
        wind_mw: params.wind_mw,
        solar_mw: params.solar_mw,
        population_growth_factor: params.population_growth_factor,
    };
    let run = RunConfig {
        name: format!("synthetic-seed{}", params.seed),
        fleet_config: PathBuf::from(files::FLEET),
        distribution_csv: PathBuf::from(files::DISTRIBUTION),
        load_csv: PathBuf::from(files::LOAD),
        capacity_factor_csv: PathBuf::from(files::CAPACITY_FACTORS),
        scenario_config: PathBuf::from(files::SCENARIO),
        golden_report: Some(PathBuf::from(files::GOLDEN_REPORT)),
        schemes: vec![
            SchemeSpec::OPEN_LOOP,
            SchemeSpec::mpc(6)?,
            SchemeSpec::mpc(3)?,
        ],
        p_max: params.p_max,
        actual_window: params.actual_window,
        seed: Some(params.seed),
    };

    let load_text = io::load_csv(&series.load);
    let cf_text = io::capacity_factor_csv(&series.wind, &series.solar);
    let dist_text = io::distribution_csv(&DEFAULT_CHARGING_DISTRIBUTION);

    // The manifest describes the files as written, so re-read the text.
    let (wind_cf, solar_cf) = io::parse_capacity_factor_csv(&cf_text)?;
    let inputs = ScenarioInputs {
        fleet: fleet.clone(),
        distribution: io::parse_distribution_csv(&dist_text)?,
        load: io::parse_load_csv(&load_text)?,
        wind_cf,
        solar_cf,
        grid,
    };
    let scenario = Scenario::build(&inputs)?;
    let indices: Vec<usize> = scenario.days.iter().map(|d| d.day_index).collect();
    let manifest = SynthManifest {
        seed: params.seed,
        curtailment_day_count: indices.len(),
        sample_day_indices: first_day_per_month(&indices),
        curtailment_day_indices: indices,
    };

    Ok(SynthDataset {
        files: vec![
            (files::LOAD, load_text),
            (files::CAPACITY_FACTORS, cf_text),
            (files::DISTRIBUTION, dist_text),
            (files::FLEET, io::to_json(&fleet)?),
            (files::SCENARIO, io::to_json(&grid)?),
            (files::RUN, io::to_json(&run)?),
            (files::MANIFEST, io::to_json(&manifest)?),
        ],
        manifest,
    })
}

/// Generates the dataset and writes it under `out_dir`.
pub fn synth_dataset(params: &SynthParams, out_dir: &Path) -> Result<SynthManifest> {
    let dataset = build_dataset(params)?;
    for (name, text) in &dataset.files {
        io::write_text(&out_dir.join(name), text)?;
    }
    Ok(dataset.manifest)
}

/// The bundled charging distribution.
pub fn default_distribution() -> HourlyDistribution {
    HourlyDistribution::new(&DEFAULT_CHARGING_DISTRIBUTION).expect("bundled distribution sums to 1")
}
