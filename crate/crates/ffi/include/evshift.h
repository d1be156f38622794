#ifndef EVSHIFT_H
#define EVSHIFT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EvsScheme {
  EVS_SCHEME_BAU = 0,
  EVS_SCHEME_OPEN_LOOP = 1,
  EVS_SCHEME_MPC = 2,
} EvsScheme;

// Result codes; the non-zero values match the CLI exit codes.
typedef enum EvsStatus {
  EVS_STATUS_OK = 0,
  EVS_STATUS_USAGE = 1,
  EVS_STATUS_DATA = 2,
  EVS_STATUS_SOLVER = 3,
  EVS_STATUS_NULL_POINTER = 4,
  EVS_STATUS_PANIC = 5,
} EvsStatus;

// An annual report produced by [`evs_run_simulate`].
typedef struct EvsReport EvsReport;

// A loaded scenario year.
typedef struct EvsRun EvsRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL.
//
// The pointer stays valid until the next evshift call on this thread.
const char *evs_last_error(void);

// Daily fleet energy in MWh.
//
// # Safety
// `out_mwh` must point to a writable `double`.
enum EvsStatus evs_fleet_daily_energy(double ev_count,
                                      double km_per_ev_day,
                                      double kwh_per_km,
                                      double *out_mwh);

// `Σ max(excess[k] - load[k], 0)` over `len` hours.
//
// # Safety
// `excess` and `load` must hold `len` doubles; `out_mwh` must be writable.
enum EvsStatus evs_curtailment(size_t len,
                               const double *excess,
                               const double *load,
                               double *out_mwh);

// Solves the load-shift program over `horizon` hours (1 to 24).
//
// Output arrays hold `horizon` doubles each; any of them may be NULL when
// not wanted.
//
// # Safety
// `excess` and `demand` must hold `horizon` doubles; non-null outputs must
// be writable for `horizon` doubles (`out_curtailment` for one).
enum EvsStatus evs_optimize_shift(size_t horizon,
                                  const double *excess,
                                  const double *demand,
                                  double carry_in,
                                  double p_max,
                                  double *out_load,
                                  double *out_deferral,
                                  double *out_uptake,
                                  double *out_curtailment);

// Brute-force grid search over uptake fractions (horizon at most 8).
//
// # Safety
// `excess` and `demand` must hold `horizon` doubles; `out_mwh` writable.
enum EvsStatus evs_oracle_search(size_t horizon,
                                 const double *excess,
                                 const double *demand,
                                 double carry_in,
                                 double p_max,
                                 size_t grid_steps,
                                 double *out_mwh);

// Runs one scheme on one day of 24-hour profiles.
//
// `actual_window_hours` of 0 means MPC sees actuals for exactly its step.
//
// # Safety
// `forecast`, `actual` and `bau` must hold 24 doubles; `out_load` (may be
// NULL) 24 writable doubles; `out_additional_mwh` one writable double.
enum EvsStatus evs_run_day(const double *forecast,
                           const double *actual,
                           const double *bau,
                           enum EvsScheme scheme,
                           size_t step_hours,
                           size_t actual_window_hours,
                           double p_max,
                           double *out_load,
                           double *out_additional_mwh);

// Loads a run config JSON and builds its scenario year.
//
// # Safety
// `config_path` must be a NUL-terminated UTF-8 string; `out_run` writable.
enum EvsStatus evs_run_load(const char *config_path, struct EvsRun **out_run);

// # Safety
// `run` must come from [`evs_run_load`] and not be used afterwards.
void evs_run_free(struct EvsRun *run);

// Number of curtailment days in the scenario (0 for NULL).
//
// # Safety
// `run` must be NULL or a live handle.
size_t evs_run_day_count(const struct EvsRun *run);

// Copies the 24-hour BAU charging profile.
//
// # Safety
// `run` must be a live handle; `out_profile` writable for 24 doubles.
enum EvsStatus evs_run_bau_profile(const struct EvsRun *run, double *out_profile);

// Simulates the run config's schemes over every curtailment day.
//
// # Safety
// `run` must be a live handle; `out_report` writable.
enum EvsStatus evs_run_simulate(const struct EvsRun *run,
                                size_t parallel,
                                struct EvsReport **out_report);

// # Safety
// `report` must come from [`evs_run_simulate`] and not be used afterwards.
void evs_report_free(struct EvsReport *report);

// Number of schemes in the report (0 for NULL).
//
// # Safety
// `report` must be NULL or a live handle.
size_t evs_report_scheme_count(const struct EvsReport *report);

// Aggregates for scheme `index`: total additional RES (MWh), win fraction
// and days worse than BAU. Any output pointer may be NULL.
//
// # Safety
// `report` must be a live handle; non-null outputs writable.
enum EvsStatus evs_report_scheme(const struct EvsReport *report,
                                 size_t index,
                                 enum EvsScheme *out_kind,
                                 size_t *out_step_hours,
                                 double *out_total_mwh,
                                 double *out_win_fraction,
                                 size_t *out_worse_days);

// Serializes the report as JSON; free the string with [`evs_string_free`].
//
// # Safety
// `report` must be a live handle; `out_json` writable.
enum EvsStatus evs_report_to_json(const struct EvsReport *report, char **out_json);

// # Safety
// `s` must be NULL or a string returned by this library, freed once.
void evs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVSHIFT_H */
