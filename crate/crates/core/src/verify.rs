//! Self-check suite behind the `verify` subcommand.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::quantum_gap;
use crate::dynamics::{self, SystemSpec};
use crate::error::{Error, Result};
use crate::spin::{self, DiagonalOracle};

pub const ORACLE_MAX_N: usize = 12;
pub const PROJECTOR_MAX_N: usize = 10;
pub const GAP_MAX_N: usize = 12;
pub const ORACLE_SAMPLES: usize = 100;
pub const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub n_max: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, n_max: usize, max_error: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), n_max, max_error, tolerance, passed: max_error <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

fn random_spec(rng: &mut ChaCha8Rng, n: usize) -> Result<SystemSpec> {
    let bits: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
    SystemSpec::new(&bits)
}

/// Largest `|product − expansion|` over `samples` random `(m, θ)` per `n`.
pub fn oracle_equivalence(n_max: usize, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for _ in 0..samples {
            let spec = random_spec(&mut rng, n)?;
            let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let a = dynamics::potential_product(&spec, &theta)?;
            let b = dynamics::potential_expansion(&spec, &theta)?;
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Largest relative deviation of the torques from central differences of the
/// potential with step `h`, scaled by `max(‖τ‖∞, |V|)`.
pub fn torque_consistency(n_max: usize, samples: usize, h: f64, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for _ in 0..samples {
            let spec = random_spec(&mut rng, n)?;
            let mut theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let tau = dynamics::torques(&spec, &theta)?;
            let v = dynamics::potential_product(&spec, &theta)?;
            let scale = tau.iter().fold(v.abs(), |m, t| m.max(t.abs()));
            if scale == 0.0 {
                continue;
            }
            for r in 0..n {
                let orig = theta[r];
                theta[r] = orig + h;
                let vp = dynamics::potential_product(&spec, &theta)?;
                theta[r] = orig - h;
                let vm = dynamics::potential_product(&spec, &theta)?;
                theta[r] = orig;
                let fd = -(vp - vm) / (2.0 * h);
                worst = worst.max((fd - tau[r]).abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// Largest deviation of the Pauli expansion from `−|m⟩⟨m|` over every marked
/// bitstring of every size up to `n_max`.
pub fn projector_identity(n_max: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for m in 0..1usize << n {
            let bits: Vec<u8> = (0..n).map(|i| DiagonalOracle::bit(n, m, i)).collect();
            let spec = SystemSpec::new(&bits)?;
            let diag = spin::build_pauli_expansion(&spec)?;
            for (z, &e) in diag.entries.iter().enumerate() {
                let expect = if z == m { -1.0 } else { 0.0 };
                worst = worst.max((e - expect).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest deviation of the two-level gap from the closed form on a uniform
/// grid of `points` values of `s`.
pub fn gap_formula(n_max: usize, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(Error::Domain("gap grid needs at least 2 points".into()));
    }
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for k in 0..points {
            let s = k as f64 / (points - 1) as f64;
            let g = spin::two_level_gap(s, n)?;
            worst = worst.max((g - quantum_gap(s, 1u64 << n)?).abs());
        }
    }
    Ok(worst)
}

/// Largest deviation of the gap at `s = 1/2` from `2^{−n/2}`.
pub fn gap_minimum(n_max: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        let g = spin::two_level_gap(0.5, n)?;
        worst = worst.max((g - (-0.5 * n as f64).exp2()).abs());
    }
    Ok(worst)
}

/// At the corners `θᵢ ∈ {0, π}` the rotor potential must reproduce the
/// diagonal of the projector oracle.
pub fn corner_correspondence(n_max: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for m in 0..1usize << n {
            let bits: Vec<u8> = (0..n).map(|i| DiagonalOracle::bit(n, m, i)).collect();
            let spec = SystemSpec::new(&bits)?;
            let diag = spin::build_pauli_expansion(&spec)?;
            for (z, &e) in diag.entries.iter().enumerate() {
                let theta: Vec<f64> =
                    (0..n).map(|i| if DiagonalOracle::bit(n, z, i) == 1 { PI } else { 0.0 }).collect();
                let v = dynamics::potential_product(&spec, &theta)?;
                worst = worst.max((v - e).abs());
            }
        }
    }
    Ok(worst)
}

/// Runs every check with sizes capped at `n_max`.
pub fn run_verify(n_max: usize, seed: u64) -> Result<VerifyReport> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let oracle_n = n_max.min(ORACLE_MAX_N);
    let projector_n = n_max.min(PROJECTOR_MAX_N);
    let gap_n = n_max.min(GAP_MAX_N);
    let checks = vec![
        CheckResult::new("oracle_equivalence", oracle_n, oracle_equivalence(oracle_n, ORACLE_SAMPLES, seed)?, 1e-12),
        CheckResult::new(
            "torque_finite_difference",
            oracle_n,
            torque_consistency(oracle_n, ORACLE_SAMPLES, FD_STEP, seed ^ 1)?,
            1e-6,
        ),
        CheckResult::new("projector_identity", projector_n, projector_identity(projector_n)?, 0.0),
        CheckResult::new("gap_closed_form", gap_n, gap_formula(gap_n, 1000)?, 1e-12),
        CheckResult::new("gap_minimum", gap_n, gap_minimum(gap_n)?, 1e-12),
        CheckResult::new("corner_correspondence", projector_n, corner_correspondence(projector_n)?, 1e-15),
    ];
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { checks, all_passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = run_verify(6, 3).unwrap();
        assert!(r.all_passed, "{r:?}");
        assert_eq!(r.checks.len(), 6);
    }

    #[test]
    fn caps_apply() {
        let r = run_verify(30, 0).unwrap();
        assert!(r.checks.iter().all(|c| c.n_max <= ORACLE_MAX_N));
        assert!(run_verify(0, 0).is_err());
    }
}
