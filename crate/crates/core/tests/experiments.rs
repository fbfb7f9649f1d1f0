use std::f64::consts::FRAC_PI_2;

use analog_search::analytics;
use analog_search::dynamics::{RotorState, SystemSpec};
use analog_search::experiments::{self, ExperimentConfig};
use analog_search::integrator::{self, IntegratorConfig};
use analog_search::{Schedule, ScheduleKind};

fn cfg() -> ExperimentConfig {
    ExperimentConfig::default()
}

#[test]
fn linear_single_rotor_runtime_is_stable_in_hit_tol() {
    let a = experiments::find_min_runtime(1, ScheduleKind::Linear, &cfg()).unwrap();
    assert!(a.is_finite() && a > 0.0);
    let loose = ExperimentConfig { hit_tol: 2e-4, ..cfg() };
    let b = experiments::find_min_runtime(1, ScheduleKind::Linear, &loose).unwrap();
    assert!((a - b).abs() / a < 0.01, "{a} vs {b}");
}

#[test]
fn constant_schedule_runtime_is_first_passage() {
    let t = experiments::find_min_runtime(10, ScheduleKind::ConstantHalf, &cfg()).unwrap();
    let q = analytics::quadrature_runtime(10).unwrap();
    assert!((t - q).abs() / q < 0.01, "{t} vs {q}");
}

#[test]
fn constant_schedule_at_twenty_rotors() {
    let t = experiments::find_min_runtime(20, ScheduleKind::ConstantHalf, &cfg()).unwrap();
    let q = analytics::quadrature_runtime(20).unwrap();
    assert!((t - q).abs() / q < 0.01);
    let ratio = t / analytics::asymptotic_runtime(20).unwrap();
    assert!((1.6..=1.8).contains(&ratio), "ratio {ratio}");
}

#[test]
fn runtime_scan_reaches_the_marked_angle() {
    let grid = experiments::log_grid(0.1, 100.0, 2000).unwrap();
    let scan = experiments::final_angle_curve(6, ScheduleKind::Linear, &grid, &cfg()).unwrap();
    assert!(scan.grid.iter().all(|p| p.error.is_none()));
    let best = scan.grid.iter().filter_map(|p| p.cos_theta_end).fold(f64::INFINITY, f64::min);
    assert!(best <= -1.0 + 1e-4, "closest approach {best}");
    // short runs barely move
    assert!(scan.grid[0].cos_theta_end.unwrap().abs() < 0.01);
    assert!(scan.t_min.is_some());
}

#[test]
fn bisection_brackets_the_first_success() {
    let c = cfg();
    for kind in [ScheduleKind::Linear, ScheduleKind::Sine] {
        for n in [2usize, 5, 9] {
            let t = experiments::find_min_runtime(n, kind, &c).unwrap();
            let at = experiments::final_angle(n, kind, t, &c.integrator).unwrap();
            let before = experiments::final_angle(n, kind, t * (1.0 - 2e-3), &c.integrator).unwrap();
            assert!(experiments::scan_success(at, c.hit_tol), "{kind} n={n}");
            assert!(!experiments::scan_success(before, c.hit_tol), "{kind} n={n}");
        }
    }
}

#[test]
fn scaling_sweep_reports_each_schedule() {
    let ns: Vec<usize> = (8..=14).collect();
    let r = experiments::scaling_sweep(&ns, &ScheduleKind::ALL, &cfg()).unwrap();
    assert_eq!(r.schedules.len(), 3);
    for s in &r.schedules {
        assert!(s.warnings.is_empty());
        let fit = s.fit.unwrap();
        assert!((0.40..=0.60).contains(&fit.slope), "{} slope {}", s.kind, fit.slope);
    }
}

#[test]
fn missing_points_are_excluded_with_warning() {
    let tiny_cap = ExperimentConfig { t_cap: 10.0, ..cfg() };
    let r = experiments::scaling_sweep(&[4, 5, 6, 12, 13], &[ScheduleKind::Linear], &tiny_cap).unwrap();
    let s = &r.schedules[0];
    assert!(s.points[3].t_min.is_none() && s.points[3].error.is_some());
    assert_eq!(s.warnings.len(), 2);
    assert!(s.fit.is_some());
}

#[test]
fn unperturbed_full_run_matches_reduced_hit_time() {
    let icfg = IntegratorConfig::default();
    for n in [3usize, 6, 10] {
        let reduced = experiments::first_passage_time(n, &icfg).unwrap();
        let spec = SystemSpec::all_ones(n).unwrap();
        let sched = Schedule::constant_half(3.0 * reduced).unwrap();
        let run = integrator::integrate_full(&spec, &sched, &RotorState::uniform(n, FRAC_PI_2, 0.0), &icfg, true).unwrap();
        let full = run.hit_time.unwrap();
        assert!((full - reduced).abs() / reduced < 1e-3, "n={n}: {full} vs {reduced}");
    }
}

#[test]
fn quarter_turn_error_leaves_only_the_all_plus_draw() {
    let c = cfg();
    for n in [2usize, 4, 6] {
        let t_run = experiments::default_run_time(n, &c).unwrap();
        let est = experiments::success_probability(n, FRAC_PI_2, t_run, 10_000, 17, &c).unwrap();
        let p = (-(n as f64)).exp2();
        let se = (p * (1.0 - p) / 10_000.0).sqrt();
        assert!((est.p_hat - p).abs() < 4.0 * se, "n={n}: {} vs {p}", est.p_hat);
    }
}

#[test]
fn sensitivity_is_reproducible_and_thread_independent() {
    let grid = experiments::log_grid(1e-3, 1.0, 7).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| experiments::sensitivity_sweep(&[4, 6], &grid, 40, 99, &cfg()).unwrap())
    };
    let a = run(1);
    assert_eq!(a, run(1));
    assert_eq!(a, run(3));
    let other = experiments::sensitivity_sweep(&[4, 6], &grid, 40, 100, &cfg()).unwrap();
    assert_ne!(a, other);
}

#[test]
fn sensitivity_trend_holds_across_seeds() {
    let grid = experiments::log_grid(1e-4, 1.0, 13).unwrap();
    for seed in [1u64, 2, 3] {
        let r = experiments::sensitivity_sweep(&[4, 6, 8, 10], &grid, 100, seed, &cfg()).unwrap();
        for c in &r.curves {
            assert!(c.points.iter().all(|p| (0.0..=1.0).contains(&p.p_success)));
        }
        let stars: Vec<f64> = r.curves.iter().map(|c| c.eps_star.unwrap()).collect();
        assert!(stars.windows(2).all(|w| w[1] < w[0]), "seed {seed}: {stars:?}");
        assert!(r.fit.unwrap().slope < 0.0);
        assert!(r.randomness_model.contains("sigma_i"));
    }
}
