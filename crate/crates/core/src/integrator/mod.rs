//! Adaptive integration of the full and reduced equations of motion.
//!
//! Both systems are advanced as first-order ODEs in `(θ, ω)` with an embedded
//! Dormand–Prince 5(4) pair. After every accepted step the first-passage event
//! (working-frame angle crossing `π` from below) is checked and, on a sign
//! change, located on the continuous extension of that step.
//!
//! Annealing schedules make the equations singular at `s = 1`; integration stops
//! at the time where `s = 1 − s_clamp` and that state is reported as final.

mod dopri;

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{self, ReducedState, RotorState, SystemSpec};
use crate::error::{Error, Result};
use crate::schedule::Schedule;
use dopri::{OdeSystem, Stepper};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: u64,
    /// Endpoint margin δ: annealing runs stop once `s ≥ 1 − δ`.
    pub s_clamp: f64,
    pub sample_count: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_steps: 10_000_000, s_clamp: 1e-9, sample_count: 512 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !(self.s_clamp > 0.0 && self.s_clamp < 1.0) {
            return Err(Error::Config(format!("s_clamp must lie in (0, 1), got {}", self.s_clamp)));
        }
        if self.max_steps < 1 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        if self.sample_count < 2 {
            return Err(Error::Config("sample_count must be at least 2".into()));
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ReachedEnd,
    FirstPassage,
    StepBudget,
}

/// Outcome of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<S> {
    /// Uniformly spaced samples over the planned horizon, plus the final state
    /// when the run stopped early.
    pub samples: Vec<S>,
    pub final_state: S,
    /// First time the working-frame angle crossed `π` from below.
    pub hit_time: Option<f64>,
    /// `max |E(t) − E(0)|` over all accepted steps and samples; constant
    /// schedule only.
    pub energy_drift: Option<f64>,
    pub initial_energy: Option<f64>,
    pub steps_taken: u64,
    pub termination: Termination,
    /// Largest schedule value at which the right-hand side was evaluated.
    pub max_schedule_value: f64,
}

impl<S> RunResult<S> {
    /// Energy drift relative to `|E(0)|`.
    pub fn relative_energy_drift(&self) -> Option<f64> {
        Some(self.energy_drift? / self.initial_energy?.abs())
    }
}

/// Schedule evaluation shared by both systems, tracking the largest `s` used.
struct Drive<'a> {
    sched: &'a Schedule,
    max_t: Cell<f64>,
}

impl<'a> Drive<'a> {
    fn new(sched: &'a Schedule) -> Self {
        Self { sched, max_t: Cell::new(f64::NEG_INFINITY) }
    }

    /// `(s, 1 − s, ṡ)` at `t`.
    #[inline]
    fn at(&self, t: f64) -> (f64, f64, f64) {
        if t > self.max_t.get() {
            self.max_t.set(t);
        }
        let s = self.sched.value_unchecked(t);
        (s, self.sched.one_minus_value(t), self.sched.rate_unchecked(t))
    }

    fn max_value(&self) -> f64 {
        let t = self.max_t.get();
        if t.is_finite() {
            self.sched.value_unchecked(t)
        } else {
            0.0
        }
    }
}

/// Integration problem: right-hand side, first-passage event and energy.
trait Problem: OdeSystem {
    /// Negative before first passage, crossing zero at it.
    fn event(&self, y: &[f64]) -> f64;
    fn energy(&self, y: &[f64]) -> f64;
    fn drive(&self) -> &Drive<'_>;
}

struct ReducedProblem<'a> {
    n: usize,
    drive: Drive<'a>,
}

impl OdeSystem for ReducedProblem<'_> {
    fn dim(&self) -> usize {
        2
    }

    #[inline]
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let (s, one_minus_s, rate) = self.drive.at(t);
        dy[0] = y[1];
        dy[1] = (rate * y[1] + s * dynamics::reduced_force(self.n, y[0])) / one_minus_s;
    }
}

impl Problem for ReducedProblem<'_> {
    fn event(&self, y: &[f64]) -> f64 {
        y[0] - PI
    }

    fn energy(&self, y: &[f64]) -> f64 {
        dynamics::conserved_energy(self.n, &ReducedState::new(0.0, y[0], y[1]))
    }

    fn drive(&self) -> &Drive<'_> {
        &self.drive
    }
}

/// Full system in the working frame, where every rotor is marked `1` and
/// the target is all-`π`.
struct FullProblem<'a> {
    ones: Vec<bool>,
    drive: Drive<'a>,
}

impl OdeSystem for FullProblem<'_> {
    fn dim(&self) -> usize {
        2 * self.ones.len()
    }

    #[inline]
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.ones.len();
        let (s, one_minus_s, rate) = self.drive.at(t);
        let (theta, omega) = y.split_at(n);
        let (dtheta, domega) = dy.split_at_mut(n);
        dtheta.copy_from_slice(omega);
        dynamics::torques_into(&self.ones, theta, domega);
        let inv = 1.0 / one_minus_s;
        for (a, &w) in domega.iter_mut().zip(omega) {
            *a = (rate * w + s * *a) * inv;
        }
    }
}

impl Problem for FullProblem<'_> {
    /// `min_i θ_i − π`.
    fn event(&self, y: &[f64]) -> f64 {
        y[..self.ones.len()].iter().copied().fold(f64::INFINITY, f64::min) - PI
    }

    /// Mechanical energy per rotor, `(½Σω² + V)/n`; equals the reduced energy
    /// on the symmetric sector and is unchanged by the gauge map.
    fn energy(&self, y: &[f64]) -> f64 {
        let n = self.ones.len();
        let kinetic: f64 = y[n..].iter().map(|w| 0.5 * w * w).sum();
        let v: f64 = -y[..n].iter().map(|&th| (0.5 * th).sin().powi(2)).product::<f64>();
        (kinetic + v) / n as f64
    }

    fn drive(&self) -> &Drive<'_> {
        &self.drive
    }
}

struct RawRun {
    samples: Vec<(f64, Vec<f64>)>,
    final_state: (f64, Vec<f64>),
    hit_time: Option<f64>,
    energy_drift: Option<f64>,
    initial_energy: Option<f64>,
    steps_taken: u64,
    termination: Termination,
    max_schedule_value: f64,
}

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const PI_BETA: f64 = 0.04;

fn drive<P: Problem>(
    sys: &P,
    sched: &Schedule,
    t0: f64,
    y0: Vec<f64>,
    cfg: &IntegratorConfig,
    stop_on_hit: bool,
) -> Result<RawRun> {
    cfg.validate()?;
    let t_end = sched.clamp_time(cfg.s_clamp);
    if !(t0 >= 0.0 && t0 < t_end) {
        return Err(Error::Domain(format!("initial time {t0} outside [0, {t_end})")));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("initial state is not finite".into()));
    }
    let dim = sys.dim();
    let span = t_end - t0;
    let conserve = !sched.kind.is_annealing();
    let hit_tol = cfg.rel_tol * span;

    let sample_times: Vec<f64> = (0..cfg.sample_count)
        .map(|k| {
            if k + 1 == cfg.sample_count {
                t_end
            } else {
                t0 + span * k as f64 / (cfg.sample_count - 1) as f64
            }
        })
        .collect();
    let mut samples = Vec::with_capacity(cfg.sample_count);
    samples.push((t0, y0.clone()));
    let mut next_sample = 1;

    let e0 = conserve.then(|| sys.energy(&y0));
    let mut drift = 0.0f64;
    let mut track = |y: &[f64]| {
        if let Some(e0) = e0 {
            drift = drift.max((sys.energy(y) - e0).abs());
        }
    };

    let mut stepper = Stepper::new(dim);
    let mut y = y0;
    let mut t = t0;
    sys.rhs(t, &y, stepper.k1_mut());
    let f0 = stepper.k1_mut().to_vec();
    let mut h = dopri::initial_step(sys, t, &y, &f0, span, cfg.rel_tol, cfg.abs_tol);
    let mut err_old = 1e-4f64;
    let mut steps = 0u64;
    let mut g_old = sys.event(&y);
    let mut hit_time = None;
    let mut termination = Termination::ReachedEnd;
    let mut reject_streak = 0u32;

    while t < t_end {
        if steps >= cfg.max_steps {
            termination = Termination::StepBudget;
            break;
        }
        let last = t + h >= t_end || t_end - (t + h) < 1e-12 * span;
        if last {
            h = t_end - t;
        }
        let err = stepper.attempt(sys, t, &y, h, cfg.rel_tol, cfg.abs_tol);
        if !err.is_finite() {
            h *= MIN_FACTOR;
            reject_streak += 1;
            if h < 1e-14 * t.abs().max(1.0) || reject_streak > 200 {
                return Err(Error::NumericalBlowup { t });
            }
            continue;
        }
        if err > 1.0 {
            h *= (SAFETY * err.powf(-0.2)).max(MIN_FACTOR);
            reject_streak += 1;
            if h < 1e-14 * t.abs().max(1.0) || reject_streak > 200 {
                return Err(Error::Numerical(format!("step size underflow at t = {t}")));
            }
            continue;
        }
        reject_streak = 0;
        steps += 1;
        let t_new = if last { t_end } else { t + h };
        if !(t_new > t) {
            return Err(Error::Numerical(format!("step size underflow at t = {t}")));
        }
        stepper.accept(t, &y, h);

        let g_new = sys.event(&stepper.y_new);
        let mut stop_at = None;
        if hit_time.is_none() && g_old < 0.0 && g_new >= 0.0 {
            let th = locate_event(sys, &stepper, t, t_new, g_old, g_new, hit_tol);
            hit_time = Some(th);
            if stop_on_hit {
                stop_at = Some(th);
            }
        }
        let horizon = stop_at.unwrap_or(t_new);
        while next_sample < sample_times.len() && sample_times[next_sample] <= horizon {
            let ts = sample_times[next_sample];
            let mut ys = vec![0.0; dim];
            if ts == t_new {
                ys.copy_from_slice(&stepper.y_new);
            } else {
                stepper.interpolate(ts, &mut ys);
            }
            track(&ys);
            samples.push((ts, ys));
            next_sample += 1;
        }
        if let Some(th) = stop_at {
            let mut ys = vec![0.0; dim];
            stepper.interpolate(th, &mut ys);
            track(&ys);
            if samples.last().map(|(ts, _)| *ts) != Some(th) {
                samples.push((th, ys.clone()));
            }
            t = th;
            y = ys;
            termination = Termination::FirstPassage;
            break;
        }
        std::mem::swap(&mut y, &mut stepper.y_new);
        t = t_new;
        track(&y);
        g_old = g_new;

        let fac = SAFETY * err.max(1e-10).powf(-0.2 + 0.75 * PI_BETA) * err_old.powf(PI_BETA);
        h *= fac.clamp(MIN_FACTOR, MAX_FACTOR);
        err_old = err.max(1e-4);
    }

    if termination == Termination::StepBudget && samples.last().map(|(ts, _)| *ts) != Some(t) {
        samples.push((t, y.clone()));
    }

    Ok(RawRun {
        samples,
        final_state: (t, y),
        hit_time,
        energy_drift: e0.map(|_| drift),
        initial_energy: e0,
        steps_taken: steps,
        termination,
        max_schedule_value: sys.drive().max_value(),
    })
}

/// Illinois-modified regula falsi on the continuous extension of the last step.
fn locate_event<P: Problem>(
    sys: &P,
    stepper: &Stepper,
    mut a: f64,
    mut b: f64,
    mut ga: f64,
    mut gb: f64,
    tol: f64,
) -> f64 {
    let dim = sys.dim();
    let mut buf = vec![0.0; dim];
    let mut side = 0i8;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mut c = (a * gb - b * ga) / (gb - ga);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        stepper.interpolate(c, &mut buf);
        let gc = sys.event(&buf);
        if gc >= 0.0 {
            b = c;
            gb = gc;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            ga = gc;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        }
        if gc == 0.0 {
            return c;
        }
    }
    b
}

/// Integrates the reduced single-angle equation.
pub fn integrate_reduced(
    n: usize,
    sched: &Schedule,
    init: ReducedState,
    cfg: &IntegratorConfig,
    stop_on_hit: bool,
) -> Result<RunResult<ReducedState>> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let problem = ReducedProblem { n, drive: Drive::new(sched) };
    let raw = drive(&problem, sched, init.t, vec![init.theta, init.omega], cfg, stop_on_hit)?;
    let to_state = |(t, y): (f64, Vec<f64>)| ReducedState::new(t, y[0], y[1]);
    Ok(RunResult {
        samples: raw.samples.into_iter().map(to_state).collect(),
        final_state: to_state(raw.final_state),
        hit_time: raw.hit_time,
        energy_drift: raw.energy_drift,
        initial_energy: raw.initial_energy,
        steps_taken: raw.steps_taken,
        termination: raw.termination,
        max_schedule_value: raw.max_schedule_value,
    })
}

/// Integrates the full `n`-rotor system.
///
/// The initial state is gauge-transformed so that every target angle is `π`,
/// the working-frame equations are integrated, and samples are mapped back to
/// the frame of `spec`. First passage fires when the slowest rotor reaches its
/// marked angle.
pub fn integrate_full(
    spec: &SystemSpec,
    sched: &Schedule,
    init: &RotorState,
    cfg: &IntegratorConfig,
    stop_on_hit: bool,
) -> Result<RunResult<RotorState>> {
    let n = spec.n();
    for len in [init.theta.len(), init.omega.len()] {
        if len != n {
            return Err(Error::Shape { expected: n, actual: len });
        }
    }
    let problem = FullProblem { ones: vec![true; n], drive: Drive::new(sched) };
    let mut y0 = dynamics::gauge_transform(spec, &init.theta)?;
    y0.extend(dynamics::gauge_transform_velocity(spec, &init.omega)?);
    let raw = drive(&problem, sched, init.t, y0, cfg, stop_on_hit)?;
    let to_state = |(t, y): (f64, Vec<f64>)| -> Result<RotorState> {
        let (theta, omega) = y.split_at(n);
        Ok(RotorState {
            t,
            theta: dynamics::gauge_transform(spec, theta)?,
            omega: dynamics::gauge_transform_velocity(spec, omega)?,
        })
    };
    Ok(RunResult {
        samples: raw.samples.into_iter().map(to_state).collect::<Result<_>>()?,
        final_state: to_state(raw.final_state)?,
        hit_time: raw.hit_time,
        energy_drift: raw.energy_drift,
        initial_energy: raw.initial_energy,
        steps_taken: raw.steps_taken,
        termination: raw.termination,
        max_schedule_value: raw.max_schedule_value,
    })
}

/// The standard start: every rotor at `π/2` and at rest.
pub fn standard_reduced_start() -> ReducedState {
    ReducedState::new(0.0, PI / 2.0, 0.0)
}
