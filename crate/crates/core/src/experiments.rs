//! Runtime-scaling and precision-sensitivity experiments.
//!
//! Independent work items (runtimes, problem sizes, perturbation magnitudes,
//! trials) run on the ambient rayon pool. Results are gathered in parameter
//! order and every random stream is derived from the master seed and the item's
//! indices, so output does not depend on the number of threads.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{RotorState, SystemSpec};
use crate::error::{Error, Result};
use crate::fit::{fit_loglinear, LineFit};
use crate::integrator::{self, IntegratorConfig, Termination};
use crate::schedule::{Schedule, ScheduleKind};

/// Description of the sign-randomization model, embedded in reports.
pub const RANDOMNESS_MODEL: &str = "theta_i(0) = pi/2 + sigma_i * eps with independent uniform signs sigma_i per rotor per trial";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub integrator: IntegratorConfig,
    /// Runtime-scan success: `cos θ(end) ≤ −1 + hit_tol`.
    pub hit_tol: f64,
    /// Perturbed-run success: `cos θᵢ(end) ≤ −1 + success_tol` for every rotor.
    pub success_tol: f64,
    /// Perturbed runs last this multiple of the unperturbed first-passage time.
    pub t_run_factor: f64,
    pub scan_start: f64,
    pub scan_factor: f64,
    /// Bisection stops once the bracket is narrower than this fraction of its upper end.
    pub bisect_rel_width: f64,
    pub t_cap: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig::default(),
            hit_tol: 1e-4,
            success_tol: 0.01,
            t_run_factor: 1.0,
            scan_start: 1.0,
            scan_factor: 1.1,
            bisect_rel_width: 1e-3,
            t_cap: 1e6,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.integrator.validate()?;
        let positive = [
            ("hit_tol", self.hit_tol),
            ("success_tol", self.success_tol),
            ("t_run_factor", self.t_run_factor),
            ("scan_start", self.scan_start),
            ("bisect_rel_width", self.bisect_rel_width),
            ("t_cap", self.t_cap),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.scan_factor > 1.0) {
            return Err(Error::Config("scan_factor must exceed 1".into()));
        }
        if self.hit_tol >= 2.0 || self.success_tol >= 2.0 {
            return Err(Error::Config("success tolerances must be below 2".into()));
        }
        Ok(())
    }

    /// Integrator settings for runs whose trajectory is not kept.
    fn endpoint_only(&self) -> IntegratorConfig {
        IntegratorConfig { sample_count: 2, ..self.integrator }
    }
}

/// Derives an independent 64-bit seed from a sequence of indices.
pub fn derive_seed(parts: &[u64]) -> u64 {
    // splitmix64 finalizer folded over the parts
    let mut h = 0x9E37_79B9_7F4A_7C15u64;
    for &p in parts {
        h ^= p;
        h = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

fn horizon_for(n: usize) -> f64 {
    // comfortably past the first passage, which tends to (π/2)·√(2^{n+1}/n)
    let nf = n as f64;
    10.0 * (0.5 * ((nf + 1.0) * std::f64::consts::LN_2 - nf.ln())).exp().max(1.0)
}

/// First-passage time of the reduced system at `s = 1/2` from `(π/2, 0)`.
pub fn first_passage_time(n: usize, cfg: &IntegratorConfig) -> Result<f64> {
    let sched = Schedule::constant_half(horizon_for(n))?;
    let cfg = IntegratorConfig { sample_count: 2, ..*cfg };
    let run = integrator::integrate_reduced(n, &sched, integrator::standard_reduced_start(), &cfg, true)?;
    run.hit_time.ok_or(Error::NotFound { cap: sched.total_time })
}

/// Final angle of an annealing run of total time `t_total` from `(π/2, 0)`.
pub fn final_angle(n: usize, kind: ScheduleKind, t_total: f64, cfg: &IntegratorConfig) -> Result<f64> {
    let sched = Schedule::new(kind, t_total)?;
    let cfg = IntegratorConfig { sample_count: 2, ..*cfg };
    let run = integrator::integrate_reduced(n, &sched, integrator::standard_reduced_start(), &cfg, false)?;
    match run.termination {
        Termination::StepBudget => Err(Error::Numerical(format!("step budget exhausted at 𝒯 = {t_total}"))),
        _ => Ok(run.final_state.theta),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub t_total: f64,
    pub cos_theta_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeScan {
    pub n: usize,
    pub kind: ScheduleKind,
    pub grid: Vec<ScanPoint>,
    /// Smallest runtime meeting the success predicate (first passage for the
    /// constant schedule).
    pub t_min: Option<f64>,
    pub hit_tolerance: f64,
}

/// Records `cos θ(end)` over a grid of runtimes.
///
/// Under the constant schedule `s(t)` does not depend on `𝒯`, so each grid
/// point is simply the free trajectory read at time `𝒯`. Integrator errors are
/// stored per point.
pub fn final_angle_curve(n: usize, kind: ScheduleKind, t_grid: &[f64], cfg: &ExperimentConfig) -> Result<RuntimeScan> {
    cfg.validate()?;
    if t_grid.iter().any(|&t| !(t > 0.0)) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("runtime grid must be positive and strictly ascending".into()));
    }
    let grid = t_grid
        .par_iter()
        .map(|&t_total| match final_angle(n, kind, t_total, &cfg.integrator) {
            Ok(theta) => ScanPoint { t_total, cos_theta_end: Some(theta.cos()), error: None },
            Err(e) => ScanPoint { t_total, cos_theta_end: None, error: Some(e.to_string()) },
        })
        .collect();
    let t_min = find_min_runtime(n, kind, cfg).ok();
    Ok(RuntimeScan { n, kind, grid, t_min, hit_tolerance: cfg.hit_tol })
}

/// Success predicate of a runtime scan.
pub fn scan_success(theta_end: f64, hit_tol: f64) -> bool {
    theta_end.cos() <= -1.0 + hit_tol
}

/// Smallest runtime whose final angle lands on `π` within `hit_tol`.
///
/// A geometric scan finds the first runtime whose final angle has reached the
/// success window `θ ≥ π − w`, `w = acos(1 − hit_tol)`, and bisection narrows
/// the bracket to `bisect_rel_width`. Scanning on the window edge rather than on
/// the predicate itself keeps the bracket valid when a coarse step jumps over
/// the narrow window. For the constant schedule this is the first-passage time.
pub fn find_min_runtime(n: usize, kind: ScheduleKind, cfg: &ExperimentConfig) -> Result<f64> {
    cfg.validate()?;
    if !kind.is_annealing() {
        return first_passage_time(n, &cfg.integrator);
    }
    let edge = PI - (1.0 - cfg.hit_tol).acos();
    let reached = |t: f64| -> Result<(bool, f64)> {
        let theta = final_angle(n, kind, t, &cfg.integrator)?;
        Ok((theta >= edge, theta))
    };

    let mut lo = 0.0;
    let mut hi = cfg.scan_start;
    loop {
        if hi > cfg.t_cap {
            return Err(Error::NotFound { cap: cfg.t_cap });
        }
        if reached(hi)?.0 {
            break;
        }
        lo = hi;
        hi *= cfg.scan_factor;
    }
    let mut iterations = 0;
    loop {
        let narrow = hi - lo <= cfg.bisect_rel_width * hi;
        if narrow {
            let (_, theta) = reached(hi)?;
            if scan_success(theta, cfg.hit_tol) {
                return Ok(hi);
            }
        }
        iterations += 1;
        if iterations > 200 {
            return Err(Error::Numerical(format!("bisection failed to isolate the success window near 𝒯 = {hi}")));
        }
        let mid = 0.5 * (lo + hi);
        if reached(mid)?.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub t_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleScaling {
    pub kind: ScheduleKind,
    pub points: Vec<ScalingPoint>,
    /// Fit of `log₂ T_min = slope·n + intercept` over the points that succeeded.
    pub fit: Option<LineFit>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub schedules: Vec<ScheduleScaling>,
}

/// Minimal runtime for every `(n, kind)` and a log₂-linear fit per schedule.
pub fn scaling_sweep(n_values: &[usize], kinds: &[ScheduleKind], cfg: &ExperimentConfig) -> Result<ScalingReport> {
    cfg.validate()?;
    if n_values.is_empty() || n_values.windows(2).any(|w| w[1] <= w[0]) || n_values[0] == 0 {
        return Err(Error::Domain("n values must be nonempty, positive and strictly ascending".into()));
    }
    let jobs: Vec<(ScheduleKind, usize)> =
        kinds.iter().flat_map(|&k| n_values.iter().map(move |&n| (k, n))).collect();
    let results: Vec<Result<f64>> = jobs.par_iter().map(|&(k, n)| find_min_runtime(n, k, cfg)).collect();

    let mut schedules = Vec::with_capacity(kinds.len());
    for (ki, &kind) in kinds.iter().enumerate() {
        let slice = &results[ki * n_values.len()..(ki + 1) * n_values.len()];
        let mut warnings = Vec::new();
        let points: Vec<ScalingPoint> = n_values
            .iter()
            .zip(slice)
            .map(|(&n, r)| match r {
                Ok(t) => ScalingPoint { n, t_min: Some(*t), error: None },
                Err(e) => {
                    warnings.push(format!("n={n}: {e}; excluded from fit"));
                    ScalingPoint { n, t_min: None, error: Some(e.to_string()) }
                }
            })
            .collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            points.iter().filter_map(|p| p.t_min.map(|t| (p.n as f64, t.log2()))).unzip();
        let fit = match fit_loglinear(&xs, &ys) {
            Ok(f) => Some(f),
            Err(e) => {
                warnings.push(format!("fit unavailable: {e}"));
                None
            }
        };
        schedules.push(ScheduleScaling { kind, points, fit, warnings });
    }
    Ok(ScalingReport { schedules })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessEstimate {
    pub p_hat: f64,
    pub std_err: f64,
    pub successes: usize,
    pub trials: usize,
    pub integrator_failures: usize,
}

/// Outcome of one perturbed full-system run.
fn perturbed_trial(n: usize, eps: f64, t_run: f64, seed: u64, cfg: &ExperimentConfig) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta: Vec<f64> = (0..n).map(|_| FRAC_PI_2 + if rng.random::<bool>() { eps } else { -eps }).collect();
    let spec = SystemSpec::all_ones(n)?;
    let init = RotorState { t: 0.0, theta, omega: vec![0.0; n] };
    let sched = Schedule::constant_half(t_run)?;
    let run = integrator::integrate_full(&spec, &sched, &init, &cfg.endpoint_only(), false)?;
    if run.termination == Termination::StepBudget {
        return Err(Error::Numerical("step budget exhausted".into()));
    }
    Ok(run.final_state.theta.iter().all(|th| th.cos() <= -1.0 + cfg.success_tol))
}

/// Fraction of perturbed constant-schedule runs that end on the marked state.
///
/// Trial `k` draws its signs from a stream seeded by `derive_seed([seed, k])`.
/// Integrator failures count as unsuccessful and are tallied separately.
pub fn success_probability(
    n: usize,
    eps: f64,
    t_run: f64,
    trials: usize,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<SuccessEstimate> {
    cfg.validate()?;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be nonnegative, got {eps}")));
    }
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    if !(t_run > 0.0) {
        return Err(Error::Domain(format!("run time must be positive, got {t_run}")));
    }
    let outcomes: Vec<Result<bool>> = (0..trials)
        .into_par_iter()
        .map(|k| perturbed_trial(n, eps, t_run, derive_seed(&[seed, k as u64]), cfg))
        .collect();
    let successes = outcomes.iter().filter(|o| matches!(o, Ok(true))).count();
    let integrator_failures = outcomes.iter().filter(|o| o.is_err()).count();
    let p_hat = successes as f64 / trials as f64;
    let std_err = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
    Ok(SuccessEstimate { p_hat, std_err, successes, trials, integrator_failures })
}

/// Default perturbed-run duration for size `n`.
pub fn default_run_time(n: usize, cfg: &ExperimentConfig) -> Result<f64> {
    Ok(cfg.t_run_factor * first_passage_time(n, &cfg.integrator)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityPoint {
    pub eps: f64,
    pub p_success: f64,
    pub std_err: f64,
    pub integrator_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityCurve {
    pub n: usize,
    pub t_run: f64,
    pub points: Vec<SensitivityPoint>,
    pub eps_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub curves: Vec<SensitivityCurve>,
    /// Fit of `ln ε* = slope·n + intercept`; `slope = −α`.
    pub fit: Option<LineFit>,
    pub trials: usize,
    pub master_seed: u64,
    pub randomness_model: String,
    pub warnings: Vec<String>,
}

pub const SUCCESS_LEVEL: f64 = 0.9;

/// `ε` at which the success curve first drops through `level`, interpolated
/// linearly in `(ln ε, P)` between the bracketing grid points.
pub fn interpolate_eps_star(points: &[SensitivityPoint], level: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.p_success >= level && b.p_success < level {
            let (la, lb) = (a.eps.ln(), b.eps.ln());
            let frac = (a.p_success - level) / (a.p_success - b.p_success);
            Some((la + frac * (lb - la)).exp())
        } else {
            None
        }
    })
}

/// Success-probability curves over `eps_grid` for each `n`, with `ε*` at
/// `P = 0.9` and a fit of `ln ε*` against `n`.
pub fn sensitivity_sweep(
    n_values: &[usize],
    eps_grid: &[f64],
    trials: usize,
    master_seed: u64,
    cfg: &ExperimentConfig,
) -> Result<SensitivityReport> {
    cfg.validate()?;
    if eps_grid.is_empty() || eps_grid.iter().any(|&e| !(e > 0.0)) || eps_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("eps grid must be positive and strictly ascending".into()));
    }
    if n_values.is_empty() || n_values.windows(2).any(|w| w[1] <= w[0]) || n_values[0] == 0 {
        return Err(Error::Domain("n values must be nonempty, positive and strictly ascending".into()));
    }
    let run_times = n_values
        .par_iter()
        .map(|&n| default_run_time(n, cfg))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize)> =
        (0..n_values.len()).flat_map(|ni| (0..eps_grid.len()).map(move |ei| (ni, ei))).collect();
    let estimates = jobs
        .par_iter()
        .map(|&(ni, ei)| {
            let n = n_values[ni];
            let seed = derive_seed(&[master_seed, n as u64, ei as u64]);
            success_probability(n, eps_grid[ei], run_times[ni], trials, seed, cfg)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    let mut curves = Vec::with_capacity(n_values.len());
    for (ni, &n) in n_values.iter().enumerate() {
        let points: Vec<SensitivityPoint> = eps_grid
            .iter()
            .zip(&estimates[ni * eps_grid.len()..(ni + 1) * eps_grid.len()])
            .map(|(&eps, est)| SensitivityPoint {
                eps,
                p_success: est.p_hat,
                std_err: est.std_err,
                integrator_failures: est.integrator_failures,
            })
            .collect();
        let eps_star = interpolate_eps_star(&points, SUCCESS_LEVEL);
        if eps_star.is_none() {
            warnings.push(format!("n={n}: success curve does not cross {SUCCESS_LEVEL}; excluded from fit"));
        }
        curves.push(SensitivityCurve { n, t_run: run_times[ni], points, eps_star });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        curves.iter().filter_map(|c| c.eps_star.map(|e| (c.n as f64, e.ln()))).unzip();
    let fit = match fit_loglinear(&xs, &ys) {
        Ok(f) => Some(f),
        Err(e) => {
            warnings.push(format!("fit unavailable: {e}"));
            None
        }
    };
    Ok(SensitivityReport {
        curves,
        fit,
        trials,
        master_seed,
        randomness_model: RANDOMNESS_MODEL.to_string(),
        warnings,
    })
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || count < 2 {
        return Err(Error::Domain(format!("invalid log grid [{lo}, {hi}] with {count} points")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|k| {
            if k + 1 == count {
                hi
            } else {
                (a + (b - a) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub big_n: u64,
    pub trials: usize,
    pub mean_queries: f64,
    pub std_err: f64,
}

/// Classical sequential search: a uniformly random marked item among `N`,
/// found by querying items one at a time.
pub fn digital_baseline(big_n: u64, seed: u64, trials: usize) -> Result<BaselineResult> {
    if big_n == 0 {
        return Err(Error::Domain("search space must contain at least one item".into()));
    }
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        let marked = rng.random_range(0..big_n);
        let mut queries = 0u64;
        for item in 0..big_n {
            queries += 1;
            if item == marked {
                break;
            }
        }
        let q = queries as f64;
        sum += q;
        sum_sq += q * q;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = if trials > 1 { ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0) } else { 0.0 };
    Ok(BaselineResult { big_n, trials, mean_queries: mean, std_err: (var / t).sqrt() })
}
