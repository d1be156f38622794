//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evshift::control::{run_open_loop, run_scheme, ActualWindow, SchemeKind, SchemeSpec};
use evshift::fleet::{fleet_daily_energy, project_fleet};
use evshift::grid::CurtailmentDay;
use evshift::io::{read_fleet_config, to_json};
use evshift::optimizer::{curtailment, optimize_shift, oracle_search, ShiftInstance};
use evshift::profile::Profile;
use evshift::scenario::LoadedRun;
use evshift::sim::{simulate_days, AnnualReport};

const FLEET_TARGET_EVS: f64 = 9_450_000.0;
const FLEET_TARGET_MWH: f64 = 82_443.0;
const FLEET_REL_TOL: f64 = 0.005;
const FLEET_MAX_TIME: Duration = Duration::from_millis(1);

const ORACLE_INSTANCES: usize = 500;
const ORACLE_GRID: usize = 50;
const ORACLE_SLACK: f64 = 1e-6;
const ORACLE_GAP_FRACTION: f64 = 0.01;
const ORACLE_PASS_SHARE: f64 = 0.99;
const ORACLE_MAX_TIME: Duration = Duration::from_secs(30);

const HAND_TOL: f64 = 1e-6;
const HAND_MAX_TIME: Duration = Duration::from_millis(1);

const CONSERVATION_REL_TOL: f64 = 1e-6;

const PERFECT_DAYS: usize = 50;
const PERFECT_TOL: f64 = 1e-6;
const PERFECT_MAX_TIME: Duration = Duration::from_secs(5);

const DOMINANCE_TOL: f64 = 1e-6;

const GOLDEN_MAX_TIME: Duration = Duration::from_secs(10);

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/seed42")
}

fn seed42() -> LoadedRun {
    LoadedRun::load(&data_dir().join("run.json")).expect("bundled seed-42 run loads")
}

fn all_schemes() -> Vec<SchemeSpec> {
    vec![
        SchemeSpec::BAU,
        SchemeSpec::OPEN_LOOP,
        SchemeSpec::mpc(6).unwrap(),
        SchemeSpec::mpc(3).unwrap(),
    ]
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn fleet_calibration() -> Outcome {
    let params = read_fleet_config(&data_dir().join("fleet.json")).unwrap();
    let t = Instant::now();
    let proj = project_fleet(&params).unwrap();
    let evs = proj.count_in(2035).unwrap_or(f64::NAN);
    let mwh = fleet_daily_energy(evs, params.km_per_ev_day, params.kwh_per_km).unwrap();
    let dt = t.elapsed();
    let ev_ok = (evs - FLEET_TARGET_EVS).abs() <= FLEET_REL_TOL * FLEET_TARGET_EVS;
    let mwh_ok = (mwh - FLEET_TARGET_MWH).abs() <= FLEET_REL_TOL * FLEET_TARGET_MWH;
    outcome(
        ev_ok && mwh_ok && dt < FLEET_MAX_TIME,
        format!("EVs(2035) = {evs:.0}, {mwh:.1} MWh/day, {dt:?}"),
    )
}

fn lp_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    let p_choices = [0.25, 0.5, 1.0];
    let t = Instant::now();
    let mut above_oracle = 0;
    let mut within_gap = 0;
    let mut worst_gap = 0.0f64;
    for _ in 0..ORACLE_INSTANCES {
        let h = rng.random_range(1..=6);
        let excess: Vec<f64> = (0..h).map(|_| rng.random_range(0..=20) as f64).collect();
        let demand: Vec<f64> = (0..h).map(|_| rng.random_range(0..=20) as f64).collect();
        let p = p_choices[rng.random_range(0..p_choices.len())];
        let total_excess: f64 = excess.iter().sum();
        let inst = ShiftInstance::new(excess.into(), demand.into(), 0.0, p).unwrap();
        let lp = optimize_shift(&inst).unwrap().curtailment;
        let oracle = oracle_search(&inst, ORACLE_GRID).unwrap();
        if lp > oracle + ORACLE_SLACK {
            above_oracle += 1;
        }
        let gap = oracle - lp;
        worst_gap = worst_gap.max(gap / total_excess.max(1.0));
        if gap <= ORACLE_GAP_FRACTION * total_excess + ORACLE_SLACK {
            within_gap += 1;
        }
    }
    let dt = t.elapsed();
    let share = within_gap as f64 / ORACLE_INSTANCES as f64;
    outcome(
        above_oracle == 0 && share >= ORACLE_PASS_SHARE && dt < ORACLE_MAX_TIME,
        format!(
            "{ORACLE_INSTANCES} instances, {above_oracle} above oracle, {:.1}% within gap (worst {:.4}), {dt:.2?}",
            100.0 * share,
            worst_gap
        ),
    )
}

fn hand_instance() -> Outcome {
    let t = Instant::now();
    let inst = ShiftInstance::new(
        Profile::new(vec![0.0, 0.0, 20.0, 0.0]),
        Profile::new(vec![10.0; 4]),
        0.0,
        0.5,
    )
    .unwrap();
    let plan = optimize_shift(&inst).unwrap();
    let dt = t.elapsed();
    let p_ok = plan
        .uptake
        .iter()
        .zip([0.5, 0.5, 0.0, 0.0])
        .all(|(got, want)| (got - want).abs() <= HAND_TOL);
    outcome(
        (plan.curtailment - 2.5).abs() <= HAND_TOL && p_ok && dt < HAND_MAX_TIME,
        format!("curtailment {:.6}, p = {:?}, {dt:?}", plan.curtailment, plan.uptake),
    )
}

fn conservation(run: &LoadedRun) -> Outcome {
    let s = &run.scenario;
    let bau_total: f64 = s.bau.iter().sum();
    let outcomes = simulate_days(&s.days, &s.bau, &all_schemes(), run.config.p_max, run.config.actual_window, 1).unwrap();
    let mut checked = 0;
    let mut violations = 0;
    for o in &outcomes {
        for r in &o.results {
            checked += 1;
            if !rel_close(r.realized_load.iter().sum(), bau_total, CONSERVATION_REL_TOL) {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{checked} day-scheme results, {violations} violations"))
}

fn perfect_forecast(run: &LoadedRun) -> Outcome {
    let s = &run.scenario;
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut n = 0;
    for d in s.days.iter().take(PERFECT_DAYS) {
        let day = CurtailmentDay {
            forecast_excess: d.actual_excess.clone(),
            ..d.clone()
        };
        let ol = run_open_loop(&day, &s.bau, run.config.p_max).unwrap().realized_curtailment;
        for step in [3, 6] {
            for window in [ActualWindow::Step, run.config.actual_window] {
                let m = run_scheme(&day, &s.bau, SchemeSpec::mpc(step).unwrap(), run.config.p_max, window)
                    .unwrap()
                    .realized_curtailment;
                worst = worst.max((ol - m).abs());
            }
        }
        n += 1;
    }
    let dt = t.elapsed();
    outcome(
        n == PERFECT_DAYS && worst <= PERFECT_TOL && dt < PERFECT_MAX_TIME,
        format!("{n} days, max |open_loop - mpc| = {worst:.3e} MWh, {dt:.2?}"),
    )
}

fn bau_neutrality(run: &LoadedRun) -> Outcome {
    let s = &run.scenario;
    let bau_json = to_json(&s.bau).unwrap();
    let outcomes = simulate_days(&s.days, &s.bau, &all_schemes(), 0.0, run.config.actual_window, 1).unwrap();
    let mut mismatches = 0;
    let mut checked = 0;
    for o in &outcomes {
        for r in &o.results {
            checked += 1;
            let same_bits = r.realized_load.iter().zip(s.bau.iter()).all(|(a, b)| a.to_bits() == b.to_bits());
            if !same_bits || to_json(&r.realized_load).unwrap() != bau_json {
                mismatches += 1;
            }
        }
    }
    outcome(mismatches == 0, format!("{checked} day-scheme results at p_max = 0, {mismatches} differ from BAU"))
}

fn dominance_on_forecast(run: &LoadedRun) -> Outcome {
    let s = &run.scenario;
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for d in &s.days {
        let r = run_open_loop(d, &s.bau, run.config.p_max).unwrap();
        let plan_c = curtailment(&d.forecast_excess, &r.realized_load).unwrap();
        let bau_c = curtailment(&d.forecast_excess, &s.bau).unwrap();
        worst = worst.max(plan_c - bau_c);
        if plan_c > bau_c + DOMINANCE_TOL {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{} days, {violations} violations, max(plan - bau) = {worst:.3e} MWh", s.days.len()),
    )
}

fn adversarial() -> Outcome {
    let mut forecast = vec![0.0; 24];
    let mut actual = vec![0.0; 24];
    forecast[2] = 20.0;
    actual[0] = 20.0;
    let day = CurtailmentDay {
        day_index: 0,
        actual_day_index: 1,
        forecast_excess: forecast.into(),
        actual_excess: actual.into(),
    };
    let r = run_open_loop(&day, &Profile::new(vec![10.0; 24]), 0.5).unwrap();
    outcome(
        r.additional_res_used < 0.0,
        format!("additional RES used = {:.6} MWh", r.additional_res_used),
    )
}

fn simulate_into(config: &Path, out: &Path, extra: &[&str]) -> i32 {
    let mut args: Vec<String> = vec!["evshift".into(), "simulate".into()];
    args.extend(["--config".into(), config.display().to_string()]);
    args.extend(["--out".into(), out.display().to_string()]);
    args.extend(extra.iter().map(|s| s.to_string()));
    evshift::cli::main(args)
}

fn golden(run: &LoadedRun) -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let t = Instant::now();
    let code = simulate_into(&data_dir().join("run.json"), tmp.path(), &[]);
    let dt = t.elapsed();
    if code != 0 {
        return outcome(false, format!("simulate exited {code}"));
    }
    let golden_path = run.resolve(run.config.golden_report.as_deref().unwrap());
    let produced = fs::read(tmp.path().join("report.json")).unwrap();
    let expected = fs::read(&golden_path).unwrap();
    let matches = produced == expected;

    let report: AnnualReport = serde_json::from_slice(&expected).unwrap();
    let total = |kind: SchemeKind, step: Option<usize>| {
        report
            .schemes
            .iter()
            .find(|s| s.kind == kind && s.step_hours == step)
            .map(|s| (s.total_additional_res_mwh, s.worse_than_bau_days))
    };
    let (ol, _) = total(SchemeKind::OpenLoop, None).unwrap();
    let (m6, m6_worse) = total(SchemeKind::Mpc, Some(6)).unwrap();
    let (m3, _) = total(SchemeKind::Mpc, Some(3)).unwrap();
    let ordered = m3 > m6 && m6 > ol && ol > 0.0;
    outcome(
        matches && ordered && m6_worse == 0 && dt < GOLDEN_MAX_TIME,
        format!(
            "golden {}, mpc-3 {:.0} > mpc-6 {:.0} > open_loop {:.0} > 0: {ordered}, mpc-6 worse-than-BAU days = {m6_worse} (need 0), {dt:.2?}",
            if matches { "matches" } else { "DIFFERS" },
            m3,
            m6,
            ol
        ),
    )
}

fn read_tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut trees = Vec::new();
    for (i, parallel) in ["1", "1", "4"].iter().enumerate() {
        let data = tmp.path().join(format!("data{i}"));
        let out = tmp.path().join(format!("out{i}"));
        let code = evshift::cli::main([
            "evshift",
            "synth",
            "--seed",
            "42",
            "--out",
            data.to_str().unwrap(),
        ]);
        if code != 0 {
            return outcome(false, format!("synth exited {code}"));
        }
        let code = simulate_into(&data.join("run.json"), &out, &["--parallel", parallel, "--verbose"]);
        if code != 0 {
            return outcome(false, format!("simulate exited {code}"));
        }
        let mut tree = read_tree(&data);
        for (k, v) in read_tree(&out) {
            tree.insert(Path::new("out").join(k), v);
        }
        trees.push(tree);
    }
    let files = trees[0].len();
    let identical = trees.windows(2).all(|w| w[0] == w[1]);
    outcome(
        identical && files > 0,
        format!("3 runs (parallel 1, 1, 4), {files} files each, identical: {identical}"),
    )
}

fn main() -> ExitCode {
    let run = seed42();
    let criteria: Vec<Criterion> = vec![
        ("fleet calibration", Box::new(fleet_calibration)),
        ("LP vs oracle", Box::new(lp_vs_oracle)),
        ("hand-derived instance", Box::new(hand_instance)),
        ("conservation", Box::new(|| conservation(&run))),
        ("perfect-forecast equivalence", Box::new(|| perfect_forecast(&run))),
        ("BAU neutrality", Box::new(|| bau_neutrality(&run))),
        ("dominance on forecast", Box::new(|| dominance_on_forecast(&run))),
        ("adversarial open-loop", Box::new(adversarial)),
        ("golden end-to-end", Box::new(|| golden(&run))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
