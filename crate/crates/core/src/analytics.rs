//! Closed-form and quadrature runtimes for the constant schedule, plus the
//! spectral gap of the quantum search Hamiltonian.
//!
//! With `s = 1/2` the reduced equation conserves `E = ω²/2 − sin^{2n}(θ/2)/n`,
//! so the time to travel from `π/2` to `π` is
//!
//! ```text
//! 𝒯 = ∫_{π/2}^{π} √( n2ⁿ / (2^{n+1} sin^{2n}(θ/2) − 2) ) dθ.
//! ```
//!
//! Dropping the `−2` gives `√n · ₂F₁(1/2, (n+1)/2; 3/2; 1/2)`, and for large `n`
//! that tends to `√(2^{n+1}/n)`. Formulae are supported for `1 ≤ n ≤ 64`.

use std::f64::consts::{FRAC_PI_2, LN_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Largest size accepted by the runtime formulae.
pub const MAX_FORMULA_N: usize = 64;

const HYPERGEOMETRIC_REL_TOL: f64 = 1e-12;

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n > MAX_FORMULA_N {
        return Err(Error::Capacity { n, max: MAX_FORMULA_N });
    }
    Ok(())
}

/// The three runtime estimates for one problem size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuntimeFormulae {
    pub n: usize,
    pub quadrature_t: f64,
    pub hypergeometric_t: f64,
    pub asymptotic_t: f64,
}

impl RuntimeFormulae {
    pub fn compute(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            quadrature_t: quadrature_runtime(n)?,
            hypergeometric_t: hypergeometric_runtime(n)?,
            asymptotic_t: asymptotic_runtime(n)?,
        })
    }
}

/// Integrand of the exact runtime integral in the variable `u`, where
/// `θ = π/2 + u²`.
///
/// The denominator `2^{n+1} sin^{2n}(θ/2) − 2` equals `2((1 + sin u²)ⁿ − 1)`,
/// evaluated through `expm1`/`ln_1p` so it keeps full precision as `u → 0`.
/// The Jacobian `2u` cancels the inverse square root there.
pub(crate) fn runtime_integrand(n: usize, u: f64) -> f64 {
    let x = u * u;
    let excess = (n as f64 * x.sin().ln_1p()).exp_m1();
    let prefactor = (n as f64).sqrt() * (0.5 * (n as f64 - 1.0) * LN_2).exp();
    2.0 * u * prefactor / excess.sqrt()
}

/// The exact integrand in `θ`, `√(n2ⁿ / (2^{n+1} sin^{2n}(θ/2) − 2))`.
pub fn runtime_integrand_theta(n: usize, theta: f64) -> f64 {
    let nf = n as f64;
    let s = (0.5 * theta).sin();
    let denom = (nf + 1.0).exp2() * (s * s).powi(n as i32) - 2.0;
    (nf * nf.exp2() / denom).sqrt()
}

/// First-passage time of the constant schedule from `(π/2, 0)` by quadrature.
pub fn quadrature_runtime(n: usize) -> Result<f64> {
    check_n(n)?;
    let upper = FRAC_PI_2.sqrt();
    quadrature::integrate(|u| runtime_integrand(n, u), 0.0, upper, 1e-10, 1e-13, 4000)
}

/// `√n · ₂F₁(1/2, (n+1)/2; 3/2; 1/2)` by direct power series.
///
/// All terms are positive. They grow while `k ≲ n/2` and then decay
/// geometrically with ratio tending to `1/2`; `n = 64` converges in about 140
/// terms, well inside the `10n + 200` budget.
pub fn hypergeometric_runtime(n: usize) -> Result<f64> {
    check_n(n)?;
    let (a, b, c, z) = (0.5, 0.5 * (n as f64 + 1.0), 1.5, 0.5);
    let budget = 10 * n + 200;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..budget {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        // every later ratio is below z·(b + j)/(j + 1) ≤ z·(1 + (b − 1)/(k + 2)) since
        // a < c and b ≥ 1, so the tail is bounded by a geometric series
        let bound = z * (1.0 + (b - 1.0) / (kf + 2.0));
        if bound < 1.0 && term * bound / (1.0 - bound) < HYPERGEOMETRIC_REL_TOL * sum {
            return Ok((n as f64).sqrt() * sum);
        }
    }
    Err(Error::Numerical(format!("hypergeometric series did not converge in {budget} terms")))
}

/// Large-`n` runtime `√(2^{n+1}/n)`, evaluated in log space.
pub fn asymptotic_runtime(n: usize) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    Ok((0.5 * ((nf + 1.0) * LN_2 - nf.ln())).exp())
}

/// Gap `g(s) = √(1 − 4s(1−s)(1 − 1/N))` of `H(s) = −(1−s)|+⟩⟨+| − s|m⟩⟨m|`.
pub fn quantum_gap(s: f64, big_n: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("schedule value {s} outside [0, 1]")));
    }
    if big_n == 0 {
        return Err(Error::Domain("search space size must be at least 1".into()));
    }
    let inv_n = 1.0 / big_n as f64;
    Ok((1.0 - 4.0 * s * (1.0 - s) * (1.0 - inv_n)).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn asymptotic_examples() {
        assert!((asymptotic_runtime(10).unwrap() - (2048.0f64 / 10.0).sqrt()).abs() < 1e-12);
        assert!((asymptotic_runtime(10).unwrap() - 14.3108).abs() < 1e-4);
        assert!((asymptotic_runtime(1).unwrap() - 2.0).abs() < 1e-15);
        for n in 1..40 {
            let ratio = asymptotic_runtime(n + 2).unwrap() / asymptotic_runtime(n).unwrap();
            let expect = 2.0 * (n as f64 / (n as f64 + 2.0)).sqrt();
            assert!((ratio - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn hypergeometric_n1_closed_form() {
        // ₂F₁(1/2, 1; 3/2; z²) = atanh(z)/z with z = 1/√2
        let expect = SQRT_2 * (1.0 / SQRT_2).atanh();
        let got = hypergeometric_runtime(1).unwrap();
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
        assert!((got - 1.246450).abs() < 1e-6);
    }

    #[test]
    fn hypergeometric_n2_is_two() {
        // ₂F₁(1/2, 3/2; 3/2; 1/2) = (1 − 1/2)^{-1/2} = √2
        assert!((hypergeometric_runtime(2).unwrap() - 2.0).abs() < 2.0 * 1e-12);
    }

    #[test]
    fn formulae_cover_the_supported_range() {
        for n in 1..=MAX_FORMULA_N {
            let f = RuntimeFormulae::compute(n).unwrap();
            assert!(f.quadrature_t > 0.0 && f.hypergeometric_t > 0.0 && f.asymptotic_t > 0.0);
        }
        assert!(matches!(hypergeometric_runtime(65), Err(Error::Capacity { .. })));
        assert!(matches!(quadrature_runtime(0), Err(Error::Domain(_))));
    }

    #[test]
    fn quadrature_n1_matches_beta_function() {
        // ∫_{π/2}^{π} (−cos θ)^{-1/2} dθ = B(1/4, 1/2)/2 = 2.62205755429211981...
        let got = quadrature_runtime(1).unwrap();
        assert!((got - 2.622_057_554_292_119_8).abs() < 1e-9, "{got}");
    }

    #[test]
    fn integrand_at_pi() {
        for n in [1usize, 3, 10, 20] {
            let nf = n as f64;
            let expect = (nf * nf.exp2() / ((nf + 1.0).exp2() - 2.0)).sqrt();
            assert!((runtime_integrand_theta(n, PI) - expect).abs() < 1e-12 * expect);
            // u² = π/2 ↔ θ = π; u-form differs by the Jacobian 2u
            let u = FRAC_PI_2.sqrt();
            assert!((runtime_integrand(n, u) / (2.0 * u) - expect).abs() < 1e-10 * expect);
        }
    }

    #[test]
    fn hypergeometric_tracks_asymptotic_for_large_n() {
        let ratio = |n| hypergeometric_runtime(n).unwrap() / asymptotic_runtime(n).unwrap();
        let mut prev = f64::INFINITY;
        for n in [20, 24, 28, 32] {
            let r = ratio(n);
            assert!((0.85..=1.15).contains(&r), "n={n} ratio={r}");
            assert!((r - 1.0).abs() < prev);
            prev = (r - 1.0).abs();
        }
        assert!((ratio(64) - 1.0).abs() < 0.05);
    }

    #[test]
    fn gap_examples() {
        for big_n in [1u64, 2, 1024] {
            assert!((quantum_gap(0.0, big_n).unwrap() - 1.0).abs() < 1e-15);
            assert!((quantum_gap(1.0, big_n).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((quantum_gap(0.5, 1024).unwrap() - 1.0 / 32.0).abs() < 1e-15);
        for k in 0..=10 {
            assert!((quantum_gap(k as f64 / 10.0, 1).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(quantum_gap(1.2, 4).is_err());
        assert!(quantum_gap(0.5, 0).is_err());
    }

    #[test]
    fn gap_minimised_at_half() {
        let g_half = quantum_gap(0.5, 256).unwrap();
        for k in 1..=50 {
            let h = k as f64 / 100.0;
            assert!(quantum_gap(0.5 + h, 256).unwrap() > g_half);
            assert!(quantum_gap(0.5 - h, 256).unwrap() > g_half);
        }
    }
}
