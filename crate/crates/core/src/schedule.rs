//! Annealing schedules `s(t)` and their exact rates.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    /// `s(t) = 1/2` throughout; runs end by first passage rather than at `s = 1`.
    #[serde(rename = "constant")]
    ConstantHalf,
    /// `s(t) = t/𝒯`
    Linear,
    /// `s(t) = sin(πt / 2𝒯)`
    Sine,
}

impl ScheduleKind {
    pub const ALL: [ScheduleKind; 3] = [ScheduleKind::ConstantHalf, ScheduleKind::Linear, ScheduleKind::Sine];

    /// Canonical name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::ConstantHalf => "constant",
            ScheduleKind::Linear => "linear",
            ScheduleKind::Sine => "sine",
        }
    }

    pub fn is_annealing(self) -> bool {
        !matches!(self, ScheduleKind::ConstantHalf)
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(ScheduleKind::ConstantHalf),
            "linear" => Ok(ScheduleKind::Linear),
            "sine" => Ok(ScheduleKind::Sine),
            other => Err(Error::Domain(format!("unknown schedule kind {other:?}"))),
        }
    }
}

/// A schedule kind together with its total runtime `𝒯`.
///
/// For [`ScheduleKind::ConstantHalf`] the runtime does not enter `s(t)`; it
/// only bounds how long an integration may run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub total_time: f64,
}

impl Schedule {
    pub fn new(kind: ScheduleKind, total_time: f64) -> Result<Self> {
        if !(total_time > 0.0 && total_time.is_finite()) {
            return Err(Error::Domain(format!("total time must be positive and finite, got {total_time}")));
        }
        Ok(Self { kind, total_time })
    }

    pub fn constant_half(horizon: f64) -> Result<Self> {
        Self::new(ScheduleKind::ConstantHalf, horizon)
    }

    pub fn linear(total_time: f64) -> Result<Self> {
        Self::new(ScheduleKind::Linear, total_time)
    }

    pub fn sine(total_time: f64) -> Result<Self> {
        Self::new(ScheduleKind::Sine, total_time)
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.total_time).contains(&t) {
            return Err(Error::Domain(format!("time {t} outside [0, {}]", self.total_time)));
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.value_unchecked(t))
    }

    pub fn rate(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.rate_unchecked(t))
    }

    #[inline]
    pub(crate) fn value_unchecked(&self, t: f64) -> f64 {
        match self.kind {
            ScheduleKind::ConstantHalf => 0.5,
            ScheduleKind::Linear => t / self.total_time,
            ScheduleKind::Sine => (FRAC_PI_2 * t / self.total_time).sin(),
        }
    }

    #[inline]
    pub(crate) fn rate_unchecked(&self, t: f64) -> f64 {
        match self.kind {
            ScheduleKind::ConstantHalf => 0.0,
            ScheduleKind::Linear => 1.0 / self.total_time,
            ScheduleKind::Sine => FRAC_PI_2 / self.total_time * (FRAC_PI_2 * t / self.total_time).cos(),
        }
    }

    /// `1 − s(t)`, computed without cancellation near the end of the sine schedule.
    #[inline]
    pub(crate) fn one_minus_value(&self, t: f64) -> f64 {
        match self.kind {
            ScheduleKind::ConstantHalf => 0.5,
            ScheduleKind::Linear => (self.total_time - t) / self.total_time,
            ScheduleKind::Sine => {
                // 1 − sin x = 2 sin²(π/4 − x/2)
                let half = 0.5 * (FRAC_PI_2 - FRAC_PI_2 * t / self.total_time);
                let v = half.sin();
                2.0 * v * v
            }
        }
    }

    /// Time at which `s` reaches `1 − margin`, or the full runtime for the
    /// constant schedule.
    ///
    /// The result is rounded down until both `s` and `1 − s`, as evaluated,
    /// respect the margin.
    pub fn clamp_time(&self, margin: f64) -> f64 {
        let mut t = match self.kind {
            ScheduleKind::ConstantHalf => return self.total_time,
            ScheduleKind::Linear => self.total_time * (1.0 - margin),
            ScheduleKind::Sine => {
                // sin(πt/2𝒯) = 1 − δ  ⇔  t = 𝒯(1 − (2/π)·acos(1 − δ)), acos(1 − δ) = 2 asin(√(δ/2))
                let gap = 2.0 * (0.5 * margin).sqrt().asin();
                self.total_time * (1.0 - gap / FRAC_PI_2)
            }
        };
        while t > 0.0 && (self.value_unchecked(t) > 1.0 - margin || self.one_minus_value(t) < margin) {
            t = t.next_down();
        }
        t
    }
}
