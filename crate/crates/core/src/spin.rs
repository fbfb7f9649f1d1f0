//! Small-n checks of the quantum search Hamiltonian.
//!
//! Basis states are indexed by bitstrings `z = z₁…zₙ` with `z₁` the most
//! significant bit. `σᶻ` acts as `σᶻ|zᵢ⟩ = (−1)^{zᵢ}|zᵢ⟩`. Everything here is
//! real-valued.
//!
//! `H(s) = −(1−s)|+⟩⟨+| − s|m⟩⟨m|` has rank two, so its nontrivial spectrum is
//! the generalized eigenproblem on `span{|m⟩, |+⟩}` with overlap `⟨m|+⟩ = 1/√N`.

use serde::{Deserialize, Serialize};

use crate::dynamics::SystemSpec;
use crate::error::{Error, Result};

/// Largest size accepted when materializing a diagonal over all `2^n` states.
pub const MAX_DIAGONAL_N: usize = 20;

/// Diagonal of a Hamiltonian that is a sum of `σᶻ` products.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOracle {
    pub n: usize,
    pub entries: Vec<f64>,
}

impl DiagonalOracle {
    /// Bit `zᵢ` (0-based `i`) of basis index `z`.
    #[inline]
    pub fn bit(n: usize, z: usize, i: usize) -> u8 {
        ((z >> (n - 1 - i)) & 1) as u8
    }

    /// Basis index of a bitstring given as bits `z₁…zₙ`.
    pub fn index_of(bits: &[bool]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }
}

/// Builds the diagonal of the projector oracle from its Pauli-`Z` expansion.
///
/// The sum over subsets `S` of `∏_{i∈S} (−1)^{mᵢ}(−1)^{zᵢ}` factorizes into
/// `∏ᵢ (1 + (−1)^{mᵢ+zᵢ})`, so each entry is a product of 0s and 2s times
/// `2^{−n}` and comes out exact.
pub fn build_pauli_expansion(spec: &SystemSpec) -> Result<DiagonalOracle> {
    let n = spec.n();
    if n > MAX_DIAGONAL_N {
        return Err(Error::Capacity { n, max: MAX_DIAGONAL_N });
    }
    let scale = (-(n as f64)).exp2();
    let entries = (0..1usize << n)
        .map(|z| {
            let prod: f64 = spec
                .marked()
                .iter()
                .enumerate()
                .map(|(i, &m)| if (m as u8 ^ DiagonalOracle::bit(n, z, i)) == 0 { 2.0 } else { 0.0 })
                .product();
            -scale * prod
        })
        .collect();
    Ok(DiagonalOracle { n, entries })
}

/// `H(s)` restricted to `span{|m⟩, |+⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelBlock {
    pub s: f64,
    pub overlap: f64,
    pub h_mm: f64,
    pub h_mp: f64,
    pub h_pp: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
}

impl TwoLevelBlock {
    pub fn new(s: f64, n: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(format!("schedule value {s} outside [0, 1]")));
        }
        if n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        let inv_n = (-(n as f64)).exp2();
        let q = inv_n.sqrt();
        let h_mm = -(1.0 - s) * inv_n - s;
        let h_pp = -(1.0 - s) - s * inv_n;
        let h_mp = -(1.0 - s) * q - s * q;
        // det(H − λS) = 0 with S = [[1, q], [q, 1]]:
        // (1 − q²)λ² − (h_mm + h_pp − 2q·h_mp)λ + (h_mm·h_pp − h_mp²) = 0
        let a = 1.0 - q * q;
        let b = h_mm + h_pp - 2.0 * q * h_mp;
        let c = h_mm * h_pp - h_mp * h_mp;
        let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
        // b < 0 always, so −b + disc has no cancellation
        let lambda_minus = (b - disc) / (2.0 * a);
        let lambda_plus = if lambda_minus != 0.0 { c / (a * lambda_minus) } else { 0.0 };
        Ok(Self { s, overlap: q, h_mm, h_mp, h_pp, lambda_minus, lambda_plus })
    }

    pub fn gap(&self) -> f64 {
        self.lambda_plus - self.lambda_minus
    }
}

/// Gap of `H(s)` for `N = 2ⁿ` from the two-level reduction.
pub fn two_level_gap(s: f64, n: usize) -> Result<f64> {
    Ok(TwoLevelBlock::new(s, n)?.gap())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapWidth {
    pub s_min: f64,
    pub g_min: f64,
    /// Length of `{s : g(s) ≤ 2·g_min}` measured on the grid.
    pub width: f64,
}

pub const GAP_SCAN_POINTS: usize = 100_000;

/// Scans the two-level gap over a uniform grid on `[0, 1]`.
pub fn gap_width_scan(n: usize) -> Result<GapWidth> {
    if n < 2 {
        return Err(Error::Domain("gap width scan needs n ≥ 2".into()));
    }
    let step = 1.0 / (GAP_SCAN_POINTS - 1) as f64;
    let gaps = (0..GAP_SCAN_POINTS)
        .map(|k| two_level_gap(k as f64 * step, n))
        .collect::<Result<Vec<_>>>()?;
    let (k_min, g_min) = gaps
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty grid");
    let inside = gaps.iter().filter(|&&g| g <= 2.0 * g_min).count();
    Ok(GapWidth { s_min: k_min as f64 * step, g_min, width: inside as f64 * step })
}

/// Exact width of `{s : g(s) ≤ 2·g_min}`, `√(3/(N − 1))` capped at 1.
pub fn gap_width_exact(n: usize) -> f64 {
    let big_n = (n as f64).exp2();
    (3.0 / (big_n - 1.0)).sqrt().min(1.0)
}
