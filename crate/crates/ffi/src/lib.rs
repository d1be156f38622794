//! C ABI for evshift.
//!
//! Every fallible function returns an [`EvsStatus`] code; on failure a
//! message is available from [`evs_last_error`] on the same thread until the
//! next call. Scenario runs and reports are opaque handles released with
//! their `_free` functions. Arrays are caller-allocated `double` buffers.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use evshift::control::{run_scheme, ActualWindow, SchemeKind, SchemeSpec};
use evshift::error::Error;
use evshift::fleet::fleet_daily_energy;
use evshift::grid::CurtailmentDay;
use evshift::optimizer::{curtailment, optimize_shift, oracle_search, ShiftInstance};
use evshift::profile::{Profile, HOURS_PER_DAY};
use evshift::scenario::LoadedRun;
use evshift::sim::{run_year, AnnualReport};

/// Result codes; the non-zero values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvsStatus {
    Ok = 0,
    Usage = 1,
    Data = 2,
    Solver = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvsScheme {
    Bau = 0,
    OpenLoop = 1,
    Mpc = 2,
}

/// A loaded scenario year.
pub struct EvsRun {
    inner: LoadedRun,
}

/// An annual report produced by [`evs_run_simulate`].
pub struct EvsReport {
    inner: AnnualReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> EvsStatus {
    match err.exit_code() {
        1 => EvsStatus::Usage,
        2 => EvsStatus::Data,
        _ => EvsStatus::Solver,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), EvsStatusError>) -> EvsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EvsStatus::Ok,
        Ok(Err(EvsStatusError::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            EvsStatus::NullPointer
        }
        Ok(Err(EvsStatusError::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside evshift".into());
            EvsStatus::Panic
        }
    }
}

enum EvsStatusError {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for EvsStatusError {
    fn from(e: Error) -> Self {
        EvsStatusError::Lib(e)
    }
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], EvsStatusError> {
    if p.is_null() {
        return Err(EvsStatusError::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a>(p: *mut f64, len: usize, what: &'static str) -> Result<&'a mut [f64], EvsStatusError> {
    if p.is_null() {
        return Err(EvsStatusError::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, EvsStatusError> {
    p.as_mut().ok_or(EvsStatusError::Null(what))
}

fn scheme_spec(kind: EvsScheme, step_hours: usize) -> Result<SchemeSpec, Error> {
    match kind {
        EvsScheme::Bau => Ok(SchemeSpec::BAU),
        EvsScheme::OpenLoop => Ok(SchemeSpec::OPEN_LOOP),
        EvsScheme::Mpc => SchemeSpec::mpc(step_hours),
    }
}

/// Message for the last failed call on this thread, or NULL.
///
/// The pointer stays valid until the next evshift call on this thread.
#[no_mangle]
pub extern "C" fn evs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Daily fleet energy in MWh.
///
/// # Safety
/// `out_mwh` must point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn evs_fleet_daily_energy(
    ev_count: f64,
    km_per_ev_day: f64,
    kwh_per_km: f64,
    out_mwh: *mut f64,
) -> EvsStatus {
    guard(|| {
        *out(out_mwh, "out_mwh")? = fleet_daily_energy(ev_count, km_per_ev_day, kwh_per_km)?;
        Ok(())
    })
}

/// `Σ max(excess[k] - load[k], 0)` over `len` hours.
///
/// # Safety
/// `excess` and `load` must hold `len` doubles; `out_mwh` must be writable.
#[no_mangle]
pub unsafe extern "C" fn evs_curtailment(
    len: usize,
    excess: *const f64,
    load: *const f64,
    out_mwh: *mut f64,
) -> EvsStatus {
    guard(|| {
        let e = slice(excess, len, "excess")?;
        let l = slice(load, len, "load")?;
        *out(out_mwh, "out_mwh")? = curtailment(e, l)?;
        Ok(())
    })
}

/// Solves the load-shift program over `horizon` hours (1 to 24).
///
/// Output arrays hold `horizon` doubles each; any of them may be NULL when
/// not wanted.
///
/// # Safety
/// `excess` and `demand` must hold `horizon` doubles; non-null outputs must
/// be writable for `horizon` doubles (`out_curtailment` for one).
#[no_mangle]
pub unsafe extern "C" fn evs_optimize_shift(
    horizon: usize,
    excess: *const f64,
    demand: *const f64,
    carry_in: f64,
    p_max: f64,
    out_load: *mut f64,
    out_deferral: *mut f64,
    out_uptake: *mut f64,
    out_curtailment: *mut f64,
) -> EvsStatus {
    guard(|| {
        let inst = ShiftInstance::new(
            slice(excess, horizon, "excess")?.to_vec().into(),
            slice(demand, horizon, "demand")?.to_vec().into(),
            carry_in,
            p_max,
        )?;
        let plan = optimize_shift(&inst)?;
        if !out_load.is_null() {
            slice_mut(out_load, horizon, "out_load")?.copy_from_slice(&plan.load);
        }
        if !out_deferral.is_null() {
            slice_mut(out_deferral, horizon, "out_deferral")?.copy_from_slice(&plan.deferrals);
        }
        if !out_uptake.is_null() {
            slice_mut(out_uptake, horizon, "out_uptake")?.copy_from_slice(&plan.uptake);
        }
        if let Some(c) = out_curtailment.as_mut() {
            *c = plan.curtailment;
        }
        Ok(())
    })
}

/// Brute-force grid search over uptake fractions (horizon at most 8).
///
/// # Safety
/// `excess` and `demand` must hold `horizon` doubles; `out_mwh` writable.
#[no_mangle]
pub unsafe extern "C" fn evs_oracle_search(
    horizon: usize,
    excess: *const f64,
    demand: *const f64,
    carry_in: f64,
    p_max: f64,
    grid_steps: usize,
    out_mwh: *mut f64,
) -> EvsStatus {
    guard(|| {
        let inst = ShiftInstance::new(
            slice(excess, horizon, "excess")?.to_vec().into(),
            slice(demand, horizon, "demand")?.to_vec().into(),
            carry_in,
            p_max,
        )?;
        *out(out_mwh, "out_mwh")? = oracle_search(&inst, grid_steps)?;
        Ok(())
    })
}

/// Runs one scheme on one day of 24-hour profiles.
///
/// `actual_window_hours` of 0 means MPC sees actuals for exactly its step.
///
/// # Safety
/// `forecast`, `actual` and `bau` must hold 24 doubles; `out_load` (may be
/// NULL) 24 writable doubles; `out_additional_mwh` one writable double.
#[no_mangle]
pub unsafe extern "C" fn evs_run_day(
    forecast: *const f64,
    actual: *const f64,
    bau: *const f64,
    scheme: EvsScheme,
    step_hours: usize,
    actual_window_hours: usize,
    p_max: f64,
    out_load: *mut f64,
    out_additional_mwh: *mut f64,
) -> EvsStatus {
    guard(|| {
        let day = CurtailmentDay {
            day_index: 0,
            actual_day_index: 0,
            forecast_excess: slice(forecast, HOURS_PER_DAY, "forecast")?.to_vec().into(),
            actual_excess: slice(actual, HOURS_PER_DAY, "actual")?.to_vec().into(),
        };
        let bau = Profile::new(slice(bau, HOURS_PER_DAY, "bau")?.to_vec());
        let window = match actual_window_hours {
            0 => ActualWindow::Step,
            n => ActualWindow::Hours(n),
        };
        let result = run_scheme(&day, &bau, scheme_spec(scheme, step_hours)?, p_max, window)?;
        if !out_load.is_null() {
            slice_mut(out_load, HOURS_PER_DAY, "out_load")?.copy_from_slice(&result.realized_load);
        }
        *out(out_additional_mwh, "out_additional_mwh")? = result.additional_res_used;
        Ok(())
    })
}

/// Loads a run config JSON and builds its scenario year.
///
/// # Safety
/// `config_path` must be a NUL-terminated UTF-8 string; `out_run` writable.
#[no_mangle]
pub unsafe extern "C" fn evs_run_load(config_path: *const c_char, out_run: *mut *mut EvsRun) -> EvsStatus {
    guard(|| {
        let slot = out(out_run, "out_run")?;
        *slot = ptr::null_mut();
        if config_path.is_null() {
            return Err(EvsStatusError::Null("config_path"));
        }
        let path = CStr::from_ptr(config_path)
            .to_str()
            .map_err(|_| Error::Usage("config path is not UTF-8".into()))?;
        let inner = LoadedRun::load(Path::new(path))?;
        *slot = Box::into_raw(Box::new(EvsRun { inner }));
        Ok(())
    })
}

/// # Safety
/// `run` must come from [`evs_run_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn evs_run_free(run: *mut EvsRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Number of curtailment days in the scenario (0 for NULL).
///
/// # Safety
/// `run` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn evs_run_day_count(run: *const EvsRun) -> usize {
    run.as_ref().map_or(0, |r| r.inner.scenario.days.len())
}

/// Copies the 24-hour BAU charging profile.
///
/// # Safety
/// `run` must be a live handle; `out_profile` writable for 24 doubles.
#[no_mangle]
pub unsafe extern "C" fn evs_run_bau_profile(run: *const EvsRun, out_profile: *mut f64) -> EvsStatus {
    guard(|| {
        let run = run.as_ref().ok_or(EvsStatusError::Null("run"))?;
        slice_mut(out_profile, HOURS_PER_DAY, "out_profile")?.copy_from_slice(&run.inner.scenario.bau);
        Ok(())
    })
}

/// Simulates the run config's schemes over every curtailment day.
///
/// # Safety
/// `run` must be a live handle; `out_report` writable.
#[no_mangle]
pub unsafe extern "C" fn evs_run_simulate(
    run: *const EvsRun,
    parallel: usize,
    out_report: *mut *mut EvsReport,
) -> EvsStatus {
    guard(|| {
        let slot = out(out_report, "out_report")?;
        *slot = ptr::null_mut();
        let run = run.as_ref().ok_or(EvsStatusError::Null("run"))?;
        let cfg = &run.inner.config;
        let s = &run.inner.scenario;
        let mut report = run_year(&s.days, &s.bau, &cfg.schemes, cfg.p_max, cfg.actual_window, parallel)?;
        report.scenario.name = cfg.name.clone();
        *slot = Box::into_raw(Box::new(EvsReport { inner: report }));
        Ok(())
    })
}

/// # Safety
/// `report` must come from [`evs_run_simulate`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn evs_report_free(report: *mut EvsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of schemes in the report (0 for NULL).
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn evs_report_scheme_count(report: *const EvsReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.schemes.len())
}

/// Aggregates for scheme `index`: total additional RES (MWh), win fraction
/// and days worse than BAU. Any output pointer may be NULL.
///
/// # Safety
/// `report` must be a live handle; non-null outputs writable.
#[no_mangle]
pub unsafe extern "C" fn evs_report_scheme(
    report: *const EvsReport,
    index: usize,
    out_kind: *mut EvsScheme,
    out_step_hours: *mut usize,
    out_total_mwh: *mut f64,
    out_win_fraction: *mut f64,
    out_worse_days: *mut usize,
) -> EvsStatus {
    guard(|| {
        let report = report.as_ref().ok_or(EvsStatusError::Null("report"))?;
        let s = report
            .inner
            .schemes
            .get(index)
            .ok_or_else(|| Error::Lookup(format!("scheme index {index} out of range")))?;
        if let Some(k) = out_kind.as_mut() {
            *k = match s.kind {
                SchemeKind::Bau => EvsScheme::Bau,
                SchemeKind::OpenLoop => EvsScheme::OpenLoop,
                SchemeKind::Mpc => EvsScheme::Mpc,
            };
        }
        if let Some(v) = out_step_hours.as_mut() {
            *v = s.step_hours.unwrap_or(0);
        }
        if let Some(v) = out_total_mwh.as_mut() {
            *v = s.total_additional_res_mwh;
        }
        if let Some(v) = out_win_fraction.as_mut() {
            *v = s.win_fraction;
        }
        if let Some(v) = out_worse_days.as_mut() {
            *v = s.worse_than_bau_days;
        }
        Ok(())
    })
}

/// Serializes the report as JSON; free the string with [`evs_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn evs_report_to_json(report: *const EvsReport, out_json: *mut *mut c_char) -> EvsStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        let report = report.as_ref().ok_or(EvsStatusError::Null("report"))?;
        let json = evshift::io::to_json(&report.inner)?;
        *slot = CString::new(json)
            .map_err(|_| Error::Internal("report JSON contains NUL".into()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn evs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
