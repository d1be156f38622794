use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use evshift_ffi::*;

fn seed42_run() -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/seed42/run.json");
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = evs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn hand_instance_through_c_abi() {
    let excess = [0.0, 0.0, 20.0, 0.0];
    let demand = [10.0; 4];
    let mut load = [0.0; 4];
    let mut s = [0.0; 4];
    let mut p = [0.0; 4];
    let mut c = 0.0;
    let st = unsafe {
        evs_optimize_shift(
            4,
            excess.as_ptr(),
            demand.as_ptr(),
            0.0,
            0.5,
            load.as_mut_ptr(),
            s.as_mut_ptr(),
            p.as_mut_ptr(),
            &mut c,
        )
    };
    assert_eq!(st, EvsStatus::Ok);
    assert!((c - 2.5).abs() < 1e-6);
    assert!((load.iter().sum::<f64>() - 40.0).abs() < 1e-6);
    assert_eq!(s[3], 0.0);
    assert!((s[1] - 7.5).abs() < 1e-6 && (p[0] - 0.5).abs() < 1e-6);

    let mut check = 0.0;
    let st = unsafe { evs_curtailment(4, excess.as_ptr(), load.as_ptr(), &mut check) };
    assert_eq!(st, EvsStatus::Ok);
    assert!((check - c).abs() < 1e-9);

    let mut oracle = 0.0;
    let st = unsafe { evs_oracle_search(4, excess.as_ptr(), demand.as_ptr(), 0.0, 0.5, 10, &mut oracle) };
    assert_eq!(st, EvsStatus::Ok);
    assert!(c <= oracle + 1e-6);
}

#[test]
fn optional_outputs_may_be_null() {
    let excess = [3.0, 0.0];
    let demand = [1.0, 1.0];
    let mut c = -1.0;
    let st = unsafe {
        evs_optimize_shift(2, excess.as_ptr(), demand.as_ptr(), 0.0, 1.0, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), &mut c)
    };
    assert_eq!(st, EvsStatus::Ok);
    assert!(c >= 0.0);
}

#[test]
fn error_codes_and_messages() {
    let mut out = 0.0;
    let st = unsafe { evs_fleet_daily_energy(-1.0, 40.0, 0.2, &mut out) };
    assert_eq!(st, EvsStatus::Data);
    assert!(!last_error().is_empty());

    let st = unsafe { evs_fleet_daily_energy(1000.0, 40.0, 0.2, &mut out) };
    assert_eq!(st, EvsStatus::Ok);
    assert!((out - 8.0).abs() < 1e-12);
    assert!(evs_last_error().is_null());

    let st = unsafe { evs_curtailment(3, ptr::null(), ptr::null(), &mut out) };
    assert_eq!(st, EvsStatus::NullPointer);
    assert!(last_error().contains("excess"));

    let excess = [1.0; 3];
    let demand = [1.0; 3];
    let st = unsafe {
        evs_optimize_shift(3, excess.as_ptr(), demand.as_ptr(), 0.0, 1.5, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut())
    };
    assert_ne!(st, EvsStatus::Ok);
}

#[test]
fn run_day_rejects_bad_step() {
    let f = [1.0; 24];
    let mut add = 0.0;
    let st = unsafe {
        evs_run_day(f.as_ptr(), f.as_ptr(), f.as_ptr(), EvsScheme::Mpc, 5, 0, 0.5, ptr::null_mut(), &mut add)
    };
    assert_eq!(st, EvsStatus::Usage);
}

#[test]
fn run_day_perfect_forecast_matches_open_loop() {
    let mut e = [0.0; 24];
    for (h, v) in e.iter_mut().enumerate() {
        *v = if (10..15).contains(&h) { 800.0 } else { 0.0 };
    }
    let bau: Vec<f64> = (0..24).map(|h| 100.0 + 10.0 * h as f64).collect();
    let mut ol = 0.0;
    let mut mpc = 0.0;
    let mut load = [0.0; 24];
    unsafe {
        assert_eq!(
            evs_run_day(e.as_ptr(), e.as_ptr(), bau.as_ptr(), EvsScheme::OpenLoop, 0, 0, 0.5, load.as_mut_ptr(), &mut ol),
            EvsStatus::Ok
        );
        assert_eq!(
            evs_run_day(e.as_ptr(), e.as_ptr(), bau.as_ptr(), EvsScheme::Mpc, 3, 0, 0.5, ptr::null_mut(), &mut mpc),
            EvsStatus::Ok
        );
    }
    assert!(ol > 0.0);
    assert!((ol - mpc).abs() < 1e-6);
    assert!((load.iter().sum::<f64>() - bau.iter().sum::<f64>()).abs() < 1e-6);
}

#[test]
fn run_handle_round_trip() {
    let path = seed42_run();
    let mut run: *mut EvsRun = ptr::null_mut();
    assert_eq!(unsafe { evs_run_load(path.as_ptr(), &mut run) }, EvsStatus::Ok);
    assert!(!run.is_null());
    let days = unsafe { evs_run_day_count(run) };
    assert!(days > 0);

    let mut bau = [0.0; 24];
    assert_eq!(unsafe { evs_run_bau_profile(run, bau.as_mut_ptr()) }, EvsStatus::Ok);
    assert!(bau.iter().all(|&v| v >= 0.0));

    let mut report: *mut EvsReport = ptr::null_mut();
    assert_eq!(unsafe { evs_run_simulate(run, 2, &mut report) }, EvsStatus::Ok);
    let n = unsafe { evs_report_scheme_count(report) };
    assert!(n >= 1);
    for i in 0..n {
        let mut kind = EvsScheme::Bau;
        let mut step = 0usize;
        let mut total = 0.0;
        let mut wins = -1.0;
        let mut worse = 0usize;
        let st = unsafe { evs_report_scheme(report, i, &mut kind, &mut step, &mut total, &mut wins, &mut worse) };
        assert_eq!(st, EvsStatus::Ok);
        assert!((0.0..=1.0).contains(&wins));
        assert!(worse <= days);
        if kind == EvsScheme::Mpc {
            assert!(step > 0);
        }
    }
    let st = unsafe { evs_report_scheme(report, n, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, EvsStatus::Data);

    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { evs_report_to_json(report, &mut json) }, EvsStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"curtailment_day_count\""));
    unsafe {
        evs_string_free(json);
        evs_report_free(report);
        evs_run_free(run);
    }
}

#[test]
fn missing_config_is_reported() {
    let path = CString::new("/nonexistent/run.json").unwrap();
    let mut run: *mut EvsRun = ptr::null_mut();
    let st = unsafe { evs_run_load(path.as_ptr(), &mut run) };
    assert_eq!(st, EvsStatus::Data);
    assert!(run.is_null());
    assert!(last_error().contains("nonexistent"));
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        evs_run_free(ptr::null_mut());
        evs_report_free(ptr::null_mut());
        evs_string_free(ptr::null_mut());
        assert_eq!(evs_run_day_count(ptr::null()), 0);
        assert_eq!(evs_report_scheme_count(ptr::null()), 0);
        let mut r: *mut EvsReport = ptr::null_mut();
        assert_eq!(evs_run_simulate(ptr::null(), 1, &mut r), EvsStatus::NullPointer);
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/evshift.h")).unwrap();
    for name in [
        "evs_last_error",
        "evs_fleet_daily_energy",
        "evs_curtailment",
        "evs_optimize_shift",
        "evs_oracle_search",
        "evs_run_day",
        "evs_run_load",
        "evs_run_free",
        "evs_run_day_count",
        "evs_run_bau_profile",
        "evs_run_simulate",
        "evs_report_free",
        "evs_report_scheme_count",
        "evs_report_scheme",
        "evs_report_to_json",
        "evs_string_free",
        "typedef struct EvsRun EvsRun",
        "typedef struct EvsReport EvsReport",
        "EVS_STATUS_NULL_POINTER = 4",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}
