//! Rotor potential, torques and equations of motion.
//!
//! The oracle potential of an `n`-rotor system with marked bitstring `m` is
//!
//! ```text
//! V(θ) = −2^{−n} ∏ᵢ (1 + (−1)^{mᵢ} cos θᵢ) = −∏ᵢ hᵢ(θᵢ)
//! ```
//!
//! where `hᵢ = sin²(θᵢ/2)` for `mᵢ = 1` and `cos²(θᵢ/2)` for `mᵢ = 0`. Every
//! half-factor lies in `[0, 1]`, so the product never overflows for any `n`.
//!
//! The Lagrangian `L = (1−s)·½Σθ̇² − s·V` (unit moment of inertia) gives the
//! equations of motion `(1−s)θ̈ᵢ − ṡθ̇ᵢ − sτᵢ = 0` with torques `τ = −∇V`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest size accepted by the explicit `2^n`-term expansion.
pub const MAX_EXPANSION_N: usize = 20;

/// Problem size and marked configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SystemSpec {
    marked: Vec<bool>,
}

impl SystemSpec {
    /// Builds a spec from marked bits, each of which must be 0 or 1.
    pub fn new(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Domain("system needs at least one rotor".into()));
        }
        let marked = bits
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Domain(format!("marked bit must be 0 or 1, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { marked })
    }

    /// The transformed-frame system whose marked state is all ones.
    pub fn all_ones(n: usize) -> Result<Self> {
        Self::new(&vec![1; n])
    }

    /// Parses a bitstring such as `"0110"`.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::Domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&bits)
    }

    pub fn n(&self) -> usize {
        self.marked.len()
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    pub fn bitstring(&self) -> String {
        self.marked.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn is_all_ones(&self) -> bool {
        self.marked.iter().all(|&b| b)
    }

    /// `(−1)^{mᵢ}` for rotor `i`.
    #[inline]
    pub fn parity(&self, i: usize) -> f64 {
        if self.marked[i] {
            -1.0
        } else {
            1.0
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::Shape { expected: self.n(), actual: len });
        }
        Ok(())
    }
}

/// Full-system state: angles and angular velocities at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotorState {
    pub t: f64,
    pub theta: Vec<f64>,
    pub omega: Vec<f64>,
}

impl RotorState {
    /// Every rotor at `theta` with velocity `omega`.
    pub fn uniform(n: usize, theta: f64, omega: f64) -> Self {
        Self { t: 0.0, theta: vec![theta; n], omega: vec![omega; n] }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.theta.iter().all(|x| x.is_finite())
            && self.omega.iter().all(|x| x.is_finite())
    }
}

/// Single-angle state of the symmetric reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub t: f64,
    pub theta: f64,
    pub omega: f64,
}

impl ReducedState {
    pub fn new(t: f64, theta: f64, omega: f64) -> Self {
        Self { t, theta, omega }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.theta.is_finite() && self.omega.is_finite()
    }
}

/// `(1 + (−1)^m cos θ)/2`, written as a square so it stays accurate near its zero.
#[inline]
fn half_factor(marked: bool, theta: f64) -> f64 {
    let half = 0.5 * theta;
    if marked {
        let v = half.sin();
        v * v
    } else {
        let v = half.cos();
        v * v
    }
}

/// Oracle potential in product form, O(n).
pub fn potential_product(spec: &SystemSpec, theta: &[f64]) -> Result<f64> {
    spec.check_len(theta.len())?;
    Ok(-spec
        .marked
        .iter()
        .zip(theta)
        .map(|(&m, &th)| half_factor(m, th))
        .product::<f64>())
}

/// Oracle potential as the explicit sum over all `2^n` subsets of rotors.
///
/// Exists as an independent check on [`potential_product`]; cost is `O(n·2^n)`.
pub fn potential_expansion(spec: &SystemSpec, theta: &[f64]) -> Result<f64> {
    spec.check_len(theta.len())?;
    let n = spec.n();
    if n > MAX_EXPANSION_N {
        return Err(Error::Capacity { n, max: MAX_EXPANSION_N });
    }
    let signed_cos: Vec<f64> = (0..n).map(|i| spec.parity(i) * theta[i].cos()).collect();
    let mut sum = 0.0;
    for subset in 0u64..(1u64 << n) {
        let mut term = 1.0;
        for (i, c) in signed_cos.iter().enumerate() {
            if subset >> i & 1 == 1 {
                term *= c;
            }
        }
        sum += term;
    }
    Ok(-sum * (-(n as f64)).exp2())
}

/// All torques `τ_r = −∂V/∂θ_r` in O(n) total.
pub fn torques(spec: &SystemSpec, theta: &[f64]) -> Result<Vec<f64>> {
    spec.check_len(theta.len())?;
    let mut out = vec![0.0; theta.len()];
    torques_into(spec.marked(), theta, &mut out);
    Ok(out)
}

/// Torque kernel writing into `out`.
///
/// The product over `j ≠ r` is assembled from a prefix product (accumulated
/// in `out`) and a running suffix product, so no division by a possibly
/// vanishing factor ever happens.
pub(crate) fn torques_into(marked: &[bool], theta: &[f64], out: &mut [f64]) {
    let n = theta.len();
    debug_assert_eq!(marked.len(), n);
    debug_assert_eq!(out.len(), n);
    let mut prefix = 1.0;
    for r in 0..n {
        out[r] = prefix;
        prefix *= half_factor(marked[r], theta[r]);
    }
    let mut suffix = 1.0;
    for r in (0..n).rev() {
        let sign = if marked[r] { -1.0 } else { 1.0 };
        // ∂h_r/∂θ_r = −(−1)^{m_r}·sin θ_r / 2
        out[r] *= -sign * 0.5 * theta[r].sin() * suffix;
        suffix *= half_factor(marked[r], theta[r]);
    }
}

/// Effective single-angle potential `V_n(θ) = −sin^{2n}(θ/2)/n`.
pub fn effective_potential(n: usize, theta: f64) -> f64 {
    let s = (0.5 * theta).sin();
    -(s * s).powi(n as i32) / n as f64
}

/// Force of the reduced equation, `sin^{2n−1}(θ/2)·cos(θ/2) = −dV_n/dθ`.
#[inline]
pub fn reduced_force(n: usize, theta: f64) -> f64 {
    let (sin_h, cos_h) = (0.5 * theta).sin_cos();
    sin_h.powi(2 * n as i32 - 1) * cos_h
}

/// Relabels angles so that the marked configuration becomes all-π.
///
/// Rotors with `mᵢ = 0` map to `π − θᵢ`; the map is its own inverse.
pub fn gauge_transform(spec: &SystemSpec, theta: &[f64]) -> Result<Vec<f64>> {
    spec.check_len(theta.len())?;
    Ok(spec
        .marked
        .iter()
        .zip(theta)
        .map(|(&m, &th)| if m { th } else { PI - th })
        .collect())
}

/// Velocities transform with the derivative of the gauge map: `ω → −ω` where `mᵢ = 0`.
pub fn gauge_transform_velocity(spec: &SystemSpec, omega: &[f64]) -> Result<Vec<f64>> {
    spec.check_len(omega.len())?;
    Ok(spec
        .marked
        .iter()
        .zip(omega)
        .map(|(&m, &w)| if m { w } else { -w })
        .collect())
}

fn check_schedule_value(s: f64) -> Result<()> {
    if !(s < 1.0) {
        return Err(Error::SingularCoefficient { s });
    }
    if s < 0.0 {
        return Err(Error::Domain(format!("schedule value {s} is negative")));
    }
    Ok(())
}

/// Right-hand side of the full equations of motion.
///
/// Returns `(dθ/dt, dω/dt)` with `dωᵢ/dt = (ṡ·ωᵢ + s·τᵢ)/(1−s)`.
pub fn eom_full_rhs(
    spec: &SystemSpec,
    state: &RotorState,
    s: f64,
    s_rate: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    spec.check_len(state.theta.len())?;
    spec.check_len(state.omega.len())?;
    check_schedule_value(s)?;
    let mut domega = vec![0.0; spec.n()];
    full_accel_into(spec.marked(), &state.theta, &state.omega, s, s_rate, &mut domega);
    Ok((state.omega.clone(), domega))
}

pub(crate) fn full_accel_into(
    marked: &[bool],
    theta: &[f64],
    omega: &[f64],
    s: f64,
    s_rate: f64,
    out: &mut [f64],
) {
    torques_into(marked, theta, out);
    let inv = 1.0 / (1.0 - s);
    for (a, &w) in out.iter_mut().zip(omega) {
        *a = (s_rate * w + s * *a) * inv;
    }
}

/// Right-hand side of the reduced single-angle equation.
pub fn eom_reduced_rhs(n: usize, state: &ReducedState, s: f64, s_rate: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    check_schedule_value(s)?;
    Ok((state.omega, reduced_accel(n, state.theta, state.omega, s, s_rate)))
}

#[inline]
pub(crate) fn reduced_accel(n: usize, theta: f64, omega: f64, s: f64, s_rate: f64) -> f64 {
    (s_rate * omega + s * reduced_force(n, theta)) / (1.0 - s)
}

/// Energy `ω²/2 − sin^{2n}(θ/2)/n`, conserved when the schedule is constant.
pub fn conserved_energy(n: usize, state: &ReducedState) -> f64 {
    0.5 * state.omega * state.omega + effective_potential(n, state.theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn spec(bits: &[u8]) -> SystemSpec {
        SystemSpec::new(bits).unwrap()
    }

    #[test]
    fn product_potential_examples() {
        assert_eq!(potential_product(&spec(&[1, 1]), &[PI, PI]).unwrap(), -1.0);
        assert!(potential_product(&spec(&[1, 1]), &[0.0, 0.0]).unwrap().abs() < 1e-300);
        for m in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let v = potential_product(&spec(&m), &[FRAC_PI_2, FRAC_PI_2]).unwrap();
            assert!((v + 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn expansion_examples() {
        let v = potential_expansion(&spec(&[1]), &[PI]).unwrap();
        assert!((v + 1.0).abs() < 1e-15);
        let v = potential_expansion(&spec(&[1, 0]), &[PI, 0.0]).unwrap();
        assert!((v + 1.0).abs() < 1e-15);
    }

    #[test]
    fn expansion_rejects_large_n() {
        let s = SystemSpec::all_ones(21).unwrap();
        let err = potential_expansion(&s, &vec![0.0; 21]).unwrap_err();
        assert_eq!(err, Error::Capacity { n: 21, max: 20 });
    }

    #[test]
    fn shape_errors() {
        let s = spec(&[1, 0, 1]);
        assert!(matches!(potential_product(&s, &[0.0]), Err(Error::Shape { expected: 3, actual: 1 })));
        assert!(matches!(torques(&s, &[0.0; 4]), Err(Error::Shape { .. })));
        assert!(matches!(gauge_transform(&s, &[0.0; 2]), Err(Error::Shape { .. })));
    }

    #[test]
    fn invalid_bits_rejected() {
        assert!(SystemSpec::new(&[0, 2]).is_err());
        assert!(SystemSpec::new(&[]).is_err());
        assert!(SystemSpec::from_bitstring("01x").is_err());
        assert_eq!(SystemSpec::from_bitstring("0110").unwrap().bitstring(), "0110");
    }

    #[test]
    fn torque_examples() {
        let t = torques(&spec(&[1]), &[FRAC_PI_2]).unwrap();
        assert!((t[0] - 0.5).abs() < 1e-15);

        let t = torques(&spec(&[1, 0]), &[FRAC_PI_2, FRAC_PI_2]).unwrap();
        assert!((t[0] - 0.25).abs() < 1e-15);
        assert!((t[1] + 0.25).abs() < 1e-15);

        let t = torques(&spec(&[1, 1]), &[FRAC_PI_2, 0.0]).unwrap();
        assert_eq!(t[0], 0.0);
    }

    #[test]
    fn torques_with_exact_zero_factor() {
        // h₂ = sin²(0) = 0 exactly, so every other rotor feels no torque
        let s = spec(&[1, 1, 1]);
        let t = torques(&s, &[1.0, 0.0, 2.0]).unwrap();
        assert_eq!(t, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn torques_match_direct_products() {
        let s = spec(&[1, 0, 0, 1, 0]);
        let th = [0.3, 2.2, 1.7, 0.9, 3.0];
        let t = torques(&s, &th).unwrap();
        for r in 0..th.len() {
            let others: f64 = (0..th.len())
                .filter(|&j| j != r)
                .map(|j| (1.0 + s.parity(j) * th[j].cos()) / 2.0)
                .product();
            let direct = -s.parity(r) * th[r].sin() / 2.0 * others;
            assert!((t[r] - direct).abs() < 1e-15, "rotor {r}");
        }
    }

    #[test]
    fn effective_potential_examples() {
        assert!((effective_potential(4, PI) + 0.25).abs() < 1e-15);
        assert_eq!(effective_potential(7, 0.0), 0.0);
        assert!((effective_potential(3, FRAC_PI_2) + 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn gauge_examples() {
        let th = [0.3, 1.1, 2.0];
        assert_eq!(gauge_transform(&spec(&[1, 1, 1]), &th).unwrap(), th.to_vec());
        let g = gauge_transform(&spec(&[0, 0]), &[FRAC_PI_2, FRAC_PI_2]).unwrap();
        assert!(g.iter().all(|&x| (x - FRAC_PI_2).abs() < 1e-15));
        assert_eq!(gauge_transform(&spec(&[0, 1]), &[0.0, PI]).unwrap(), vec![PI, PI]);
    }

    #[test]
    fn full_rhs_examples() {
        let s = spec(&[1, 0, 1]);
        let st = RotorState { t: 0.0, theta: vec![0.4, 1.2, 2.9], omega: vec![0.1, -0.2, 0.3] };
        let (dth, dom) = eom_full_rhs(&s, &st, 0.0, 0.7).unwrap();
        assert_eq!(dth, st.omega);
        for (a, w) in dom.iter().zip(&st.omega) {
            assert!((a - 0.7 * w).abs() < 1e-15);
        }

        let n = 5;
        let ones = SystemSpec::all_ones(n).unwrap();
        let st = RotorState::uniform(n, FRAC_PI_2, 0.0);
        let (_, dom) = eom_full_rhs(&ones, &st, 0.5, 0.0).unwrap();
        let tau = torques(&ones, &st.theta).unwrap();
        for (a, t) in dom.iter().zip(&tau) {
            assert!(*a > 0.0);
            assert!((a - t).abs() < 1e-18);
        }

        let (th, w, sv, rate) = (1.3, 0.25, 0.3, 0.8);
        let st = RotorState::uniform(2, th, w);
        let (_, dom) = eom_full_rhs(&spec(&[1, 1]), &st, sv, rate).unwrap();
        let h = (th / 2.0).sin();
        let expect = sv * th.sin() * h * h / (2.0 * (1.0 - sv)) + rate * w / (1.0 - sv);
        assert!((dom[0] - expect).abs() < 1e-15);
        assert_eq!(dom[0], dom[1]);
    }

    #[test]
    fn singular_coefficient_rejected() {
        let st = RotorState::uniform(2, 1.0, 0.0);
        assert!(matches!(
            eom_full_rhs(&spec(&[1, 1]), &st, 1.0, 0.0),
            Err(Error::SingularCoefficient { .. })
        ));
        let r = ReducedState::new(0.0, 1.0, 0.0);
        assert!(matches!(eom_reduced_rhs(3, &r, 1.5, 0.0), Err(Error::SingularCoefficient { .. })));
    }

    #[test]
    fn reduced_rhs_examples() {
        for th in [0.0, PI] {
            assert!(reduced_force(4, th).abs() < 1e-15);
        }
        // (1 − s)θ̈ = s·sin(π/4)cos(π/4) with s = 1/2 gives θ̈ = 1/2
        let (_, a) = eom_reduced_rhs(1, &ReducedState::new(0.0, FRAC_PI_2, 0.0), 0.5, 0.0).unwrap();
        assert!((a - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reduced_force_matches_potential_slope() {
        // central differences of V_n; error O(h²)
        let h = 1e-4;
        for n in [1usize, 2, 5, 12] {
            for k in 1..20 {
                let th = 0.15 * k as f64;
                let fd = -(effective_potential(n, th + h) - effective_potential(n, th - h)) / (2.0 * h);
                assert!((fd - reduced_force(n, th)).abs() < 1e-7, "n={n} θ={th}");
            }
        }
    }

    #[test]
    fn energy_examples() {
        let e = conserved_energy(2, &ReducedState::new(0.0, FRAC_PI_2, 0.0));
        assert!((e + 0.125).abs() < 1e-15);
        let e = conserved_energy(1, &ReducedState::new(0.0, PI, 0.0));
        assert!((e + 1.0).abs() < 1e-15);
    }
}
