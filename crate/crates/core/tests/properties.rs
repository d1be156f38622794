use proptest::prelude::*;

use evshift::control::{run_open_loop, run_scheme, ActualWindow, SchemeSpec};
use evshift::fleet::project_fleet;
use evshift::grid::{pair_curtailment_days, CurtailmentDay, GridSeries};
use evshift::optimizer::{curtailment, optimize_shift, oracle_search, ShiftInstance};
use evshift::profile::{Profile, HOURS_PER_YEAR};
use evshift::synth::default_fleet_params;

const TOL: f64 = 1e-6;

fn instance(max_h: usize) -> impl Strategy<Value = ShiftInstance> {
    (1..=max_h)
        .prop_flat_map(|h| {
            (
                prop::collection::vec(0.0..50.0f64, h),
                prop::collection::vec(0.0..50.0f64, h),
                0.0..10.0f64,
                0.0..=1.0f64,
            )
        })
        .prop_map(|(e, d, c, p)| ShiftInstance::new(e.into(), d.into(), c, p).unwrap())
}

fn day_profiles() -> impl Strategy<Value = (CurtailmentDay, Profile)> {
    (
        prop::collection::vec(prop_oneof![Just(0.0), 0.0..400.0f64], 24),
        prop::collection::vec(prop_oneof![Just(0.0), 0.0..400.0f64], 24),
        prop::collection::vec(1.0..200.0f64, 24),
    )
        .prop_map(|(f, a, b)| {
            (
                CurtailmentDay {
                    day_index: 0,
                    actual_day_index: 1,
                    forecast_excess: f.into(),
                    actual_excess: a.into(),
                },
                Profile::new(b),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn plan_conserves_and_respects_uptake(inst in instance(24)) {
        let plan = optimize_shift(&inst).unwrap();
        let want = inst.demand.total() + inst.carry_in;
        prop_assert!((plan.load.total() - want).abs() <= TOL * want.max(1.0));
        prop_assert!(plan.uptake.iter().all(|&p| (-1e-12..=inst.p_max + 1e-9).contains(&p)));
        prop_assert!(plan.deferrals.iter().all(|&s| s >= 0.0));
        prop_assert_eq!(*plan.deferrals.last().unwrap(), 0.0);
        prop_assert!(plan.load.iter().all(|&l| l >= -1e-9));
    }

    #[test]
    fn curtailment_bounds(inst in instance(24)) {
        let plan = optimize_shift(&inst).unwrap();
        let mut unshifted = inst.demand.values().to_vec();
        unshifted[0] += inst.carry_in;
        let bau = curtailment(&inst.excess, &unshifted).unwrap();
        let floor = (inst.excess.total() - plan.load.total()).max(0.0);
        prop_assert!(plan.curtailment <= bau + TOL);
        prop_assert!(plan.curtailment >= floor - TOL);
        prop_assert!(plan.curtailment <= inst.excess.total() + TOL);
        let direct = curtailment(&inst.excess, &plan.load).unwrap();
        prop_assert!((direct - plan.curtailment).abs() <= TOL);
    }

    #[test]
    fn more_uptake_never_hurts(inst in instance(12), extra in 0.0..=1.0f64) {
        let hi = (inst.p_max + extra).min(1.0);
        let wider = ShiftInstance { p_max: hi, ..inst.clone() };
        let a = optimize_shift(&inst).unwrap().curtailment;
        let b = optimize_shift(&wider).unwrap().curtailment;
        prop_assert!(b <= a + TOL, "p {} -> {}: {} vs {}", inst.p_max, hi, a, b);
    }

    #[test]
    fn lp_never_worse_than_oracle(inst in instance(4)) {
        let lp = optimize_shift(&inst).unwrap().curtailment;
        let oracle = oracle_search(&inst, 10).unwrap();
        prop_assert!(lp <= oracle + TOL);
    }

    #[test]
    fn solve_is_deterministic(inst in instance(24)) {
        prop_assert_eq!(optimize_shift(&inst).unwrap(), optimize_shift(&inst).unwrap());
    }

    #[test]
    fn zero_uptake_leaves_demand(inst in instance(24)) {
        let frozen = ShiftInstance { p_max: 0.0, carry_in: 0.0, ..inst };
        let plan = optimize_shift(&frozen).unwrap();
        prop_assert_eq!(plan.load.values(), frozen.demand.values());
    }

    #[test]
    fn schemes_conserve_daily_energy((day, bau) in day_profiles(), p in 0.0..=1.0f64) {
        let total = bau.total();
        let schemes = [
            SchemeSpec::BAU,
            SchemeSpec::OPEN_LOOP,
            SchemeSpec::mpc(3).unwrap(),
            SchemeSpec::mpc(6).unwrap(),
        ];
        for scheme in schemes {
            for window in [ActualWindow::Step, ActualWindow::Hours(3)] {
                let r = run_scheme(&day, &bau, scheme, p, window).unwrap();
                prop_assert!((r.realized_load.total() - total).abs() <= TOL * total);
                prop_assert!((r.additional_res_used - (r.bau_curtailment - r.realized_curtailment)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn open_loop_dominates_on_forecast((day, bau) in day_profiles(), p in 0.0..=1.0f64) {
        let r = run_open_loop(&day, &bau, p).unwrap();
        let plan = curtailment(&day.forecast_excess, &r.realized_load).unwrap();
        let base = curtailment(&day.forecast_excess, &bau).unwrap();
        prop_assert!(plan <= base + TOL);
    }

    #[test]
    fn pairing_is_a_cyclic_shift(active in prop::collection::vec(any::<bool>(), 365), level in 0.1..100.0f64) {
        let mut values = vec![0.0; HOURS_PER_YEAR];
        for (d, on) in active.iter().enumerate() {
            if *on {
                values[d * 24 + 12] = level + d as f64;
            }
        }
        let excess = GridSeries::new(values).unwrap();
        let days = pair_curtailment_days(&excess);
        let selected: Vec<usize> = (0..365).filter(|&d| active[d]).collect();
        prop_assert_eq!(days.iter().map(|d| d.day_index).collect::<Vec<_>>(), selected.clone());
        for (i, d) in days.iter().enumerate() {
            let next = selected[(i + 1) % selected.len()];
            prop_assert_eq!(d.actual_day_index, next);
            prop_assert_eq!(d.forecast_excess.values(), excess.day(d.day_index));
            prop_assert_eq!(d.actual_excess.values(), excess.day(next));
        }
    }

    #[test]
    fn fleet_scales_linearly(k in 0.1..10.0f64) {
        let base = default_fleet_params();
        let mut scaled = base.clone();
        scaled.initial_ev_count *= k;
        for v in scaled.ldv_total_by_year.values_mut() {
            *v *= k;
        }
        let a = project_fleet(&base).unwrap();
        let b = project_fleet(&scaled).unwrap();
        for (x, y) in a.years.iter().zip(&b.years) {
            prop_assert_eq!(x.market_share, y.market_share);
            prop_assert!((y.ev_count - k * x.ev_count).abs() <= 1e-9 * y.ev_count.max(1.0));
        }
    }
}
