//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or configuration error,
//! 3 solver or internal error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::control::{SchemeKind, SchemeSpec};
use crate::error::{Error, Result};
use crate::fleet::{fleet_daily_energy, project_fleet};
use crate::io;
use crate::scenario::LoadedRun;
use crate::sim::{aggregate, first_day_per_month, render_sample_table, render_summary, sample_day_table, simulate_days, AnnualReport, ScenarioInfo};
use crate::synth::{synth_dataset, SynthParams};
use crate::optimizer::build_shift_lp;

#[derive(Debug, Parser)]
#[command(name = "evshift", version, about = "EV load shifting toward excess renewable output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded synthetic scenario dataset.
    Synth(SynthArgs),
    /// Print the fleet projection.
    Fleet(FleetArgs),
    /// Write the paired curtailment days as CSV.
    BuildDays(BuildDaysArgs),
    /// Run control schemes over the scenario year and write a report.
    Simulate(SimulateArgs),
    /// Render tables from a report JSON.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Generator settings JSON; `--seed` overrides its seed.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FleetArgs {
    #[arg(long)]
    config: PathBuf,
    /// Also write the projection to `<out>/fleet_projection.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BuildDaysArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// bau | open-loop | mpc; repeatable.
    #[arg(long = "scheme")]
    schemes: Vec<String>,
    /// Step size for each `mpc` scheme, in order; one value applies to all.
    #[arg(long = "step-hours")]
    step_hours: Vec<usize>,
    #[arg(long)]
    p_max: Option<f64>,
    /// Number of days simulated concurrently.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Write per-day trace CSVs and progress on stderr.
    #[arg(long)]
    verbose: bool,
    /// Also overwrite the config's golden report.
    #[arg(long)]
    bless: bool,
    /// Dump every solved program in tableau text form.
    #[arg(long)]
    dump_lp: bool,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Report JSON written by `simulate`.
    #[arg(long)]
    config: PathBuf,
    /// Also write the rendered tables to `<out>/report.txt`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(stdout) => {
            print!("{stdout}");
            0
        }
        Err(e) => {
            eprintln!("evshift: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Synth(args) => synth(args),
        Command::Fleet(args) => fleet(args),
        Command::BuildDays(args) => build_days(args),
        Command::Simulate(args) => simulate(args),
        Command::Report(args) => report(args),
    }
}

fn write_all(outputs: &[(PathBuf, String)]) -> Result<()> {
    for (path, text) in outputs {
        io::write_text(path, text)?;
    }
    Ok(())
}

fn synth(args: SynthArgs) -> Result<String> {
    let mut params = match &args.config {
        Some(path) => io::read_json::<SynthParams>(path)?,
        None => SynthParams::default(),
    };
    params.seed = args.seed;
    let manifest = synth_dataset(&params, &args.out)?;
    Ok(format!(
        "wrote seed {} dataset to {} ({} curtailment days)\n",
        manifest.seed,
        args.out.display(),
        manifest.curtailment_day_count
    ))
}

fn fleet(args: FleetArgs) -> Result<String> {
    let params = io::read_fleet_config(&args.config)?;
    let projection = project_fleet(&params)?;
    let mut csv = String::from("year,market_share,ev_count\n");
    for y in &projection.years {
        let _ = writeln!(csv, "{},{:.6},{:.6}", y.year, y.market_share, y.ev_count);
    }
    let final_count = projection.final_count();
    let daily = fleet_daily_energy(final_count, params.km_per_ev_day, params.kwh_per_km)?;
    if let Some(out) = &args.out {
        io::write_text(&out.join("fleet_projection.csv"), &csv)?;
    }
    let _ = writeln!(
        csv,
        "# {}: {:.0} EVs, {:.0} MWh/day",
        params.end_year, final_count, daily
    );
    Ok(csv)
}

fn build_days(args: BuildDaysArgs) -> Result<String> {
    let run = LoadedRun::load(&args.config)?;
    let path = args.out.join("curtailment_days.csv");
    io::write_text(&path, &io::days_csv(&run.scenario.days))?;
    Ok(format!(
        "{} curtailment days -> {}\n",
        run.scenario.days.len(),
        path.display()
    ))
}

/// Resolves `--scheme`/`--step-hours` against the config's default list.
fn resolve_schemes(
    flags: &[String],
    step_hours: &[usize],
    defaults: &[SchemeSpec],
) -> Result<Vec<SchemeSpec>> {
    if flags.is_empty() {
        if !step_hours.is_empty() {
            return Err(Error::Usage("--step-hours needs --scheme mpc".into()));
        }
        if defaults.is_empty() {
            return Err(Error::Usage("no schemes in config or on the command line".into()));
        }
        return Ok(defaults.to_vec());
    }
    let kinds = flags
        .iter()
        .map(|s| s.parse::<SchemeKind>())
        .collect::<Result<Vec<_>>>()?;
    let mpc_count = kinds.iter().filter(|k| **k == SchemeKind::Mpc).count();
    let steps: Vec<usize> = match (mpc_count, step_hours.len()) {
        (0, 0) => Vec::new(),
        (0, _) => return Err(Error::Usage("--step-hours given without an mpc scheme".into())),
        (n, 1) => vec![step_hours[0]; n],
        (n, m) if n == m => step_hours.to_vec(),
        (_, 0) => return Err(Error::Usage("mpc needs --step-hours".into())),
        (n, m) => {
            return Err(Error::Usage(format!(
                "{n} mpc schemes but {m} --step-hours values"
            )))
        }
    };
    let mut steps = steps.into_iter();
    kinds
        .into_iter()
        .map(|kind| match kind {
            SchemeKind::Mpc => SchemeSpec::mpc(steps.next().unwrap_or_default()),
            SchemeKind::Bau => Ok(SchemeSpec::BAU),
            SchemeKind::OpenLoop => Ok(SchemeSpec::OPEN_LOOP),
        })
        .collect()
}

fn simulate(args: SimulateArgs) -> Result<String> {
    let p_max_flag = args.p_max;
    if let Some(p) = p_max_flag {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Usage(format!("--p-max {p} outside [0, 1]")));
        }
    }
    if args.parallel == 0 {
        return Err(Error::Usage("--parallel must be at least 1".into()));
    }
    // Flag validation only needs the config's default scheme list.
    let config: crate::scenario::RunConfig = io::read_json(&args.config)?;
    let schemes = resolve_schemes(&args.schemes, &args.step_hours, &config.schemes)?;
    if args.bless && config.golden_report.is_none() {
        return Err(Error::Usage("--bless needs golden_report in the run config".into()));
    }

    let run = LoadedRun::load(&args.config)?;
    let p_max = p_max_flag.unwrap_or(run.config.p_max);
    if args.verbose {
        eprintln!(
            "{}: {} curtailment days, {} EVs, {:.0} MWh/day, schemes {}",
            run.config.name,
            run.scenario.days.len(),
            run.scenario.ev_count.round(),
            run.scenario.daily_ev_mwh,
            schemes.iter().map(SchemeSpec::label).collect::<Vec<_>>().join(",")
        );
    }
    let outcomes = simulate_days(&run.scenario.days, &run.scenario.bau, &schemes, p_max, run.config.actual_window, args.parallel)?;
    let indices: Vec<usize> = outcomes.iter().map(|o| o.day.day_index).collect();
    let scenario = ScenarioInfo {
        name: run.config.name.clone(),
        p_max,
        actual_window: run.config.actual_window,
        sample_day_indices: first_day_per_month(&indices),
    };
    let report = aggregate(&outcomes, &schemes, scenario);
    let report_json = io::to_json(&report)?;

    let mut outputs = vec![(args.out.join("report.json"), report_json.clone())];
    for outcome in &outcomes {
        let day = outcome.day.day_index;
        for result in &outcome.results {
            let label = result.scheme.label();
            outputs.push((
                args.out.join("excess").join(format!("day{day:03}_{label}.csv")),
                io::remaining_excess_csv(&outcome.day, &run.scenario.bau, result),
            ));
            if args.verbose {
                outputs.push((
                    args.out.join("trace").join(format!("day{day:03}_{label}.csv")),
                    io::trace_csv(result),
                ));
            }
            if args.dump_lp {
                for solve in &result.solves {
                    outputs.push((
                        args.out
                            .join("lp")
                            .join(format!("day{day:03}_{label}_h{:02}.lp", solve.start_hour)),
                        build_shift_lp(&solve.instance).to_tableau_text(),
                    ));
                }
            }
        }
    }
    if args.bless {
        if let Some(golden) = &run.config.golden_report {
            outputs.push((run.resolve(golden), report_json));
        }
    }
    write_all(&outputs)?;
    Ok(render_summary(&report))
}

fn report(args: ReportArgs) -> Result<String> {
    let report: AnnualReport = io::read_json(&args.config)?;
    let table = sample_day_table(&report, &report.scenario.sample_day_indices)?;
    let mut text = render_summary(&report);
    text.push('\n');
    text.push_str(&render_sample_table(&table));
    if let Some(out) = &args.out {
        io::write_text(&out.join("report.txt"), &text)?;
    }
    Ok(text)
}

/// Reads a report and returns its rendered text; used by tests and tools.
pub fn render_report_file(path: &Path) -> Result<String> {
    report(ReportArgs {
        config: path.to_path_buf(),
        out: None,
    })
}
