//! Gap recovery by projection onto band-limited sequences.
//!
//! The recovered block `y` is the restriction to the gap of the band-limited
//! sequence closest (in ℓ₂ over the observed indices) to the observations.
//! It solves `(I − A) y = z` with `A` the gap matrix and
//! `z[p] = Σ_{t ∉ gap} h(s+p−t) x(t)`.

use crate::error::Result;
use crate::lowpass::{sinc, Kernel};
use crate::sequence::{FiniteSequence, GapSpec, NormKind, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct BLRecoveryResult {
    pub gap: GapSpec,
    /// `recovered[p]` estimates `x(s+p)`.
    pub recovered: Vec<C64>,
    pub rhs: Vec<C64>,
    /// `‖I−A‖₂ · ‖(I−A)⁻¹‖₂`.
    pub condition_estimate: f64,
}

impl BLRecoveryResult {
    /// Observations with the recovered block written into the gap.
    pub fn completed(&self, x_obs: &FiniteSequence) -> Result<FiniteSequence> {
        x_obs.overlay_gap(&self.gap, &self.recovered)
    }
}

/// `z[p] = Σ_{t ∉ gap} h(s+p−t) x(t)`.
pub fn rhs_vector(x_obs: &FiniteSequence, gap: &GapSpec, kernel: &Kernel) -> Vec<C64> {
    gap.indices()
        .map(|target| {
            x_obs
                .iter()
                .filter(|(t, _)| !gap.contains(*t))
                .map(|(t, v)| v * kernel.value(target - t))
                .sum()
        })
        .collect()
}

/// Solves the band-limited normal equations on the gap. Samples stored at gap
/// indices are ignored.
pub fn recover_bl(x_obs: &FiniteSequence, gap: &GapSpec, kernel: &Kernel) -> Result<BLRecoveryResult> {
    gap.check_normalized()?;
    let rhs = rhs_vector(x_obs, gap, kernel);
    let system = kernel.gap_matrix(gap.m).system();
    let lu = system.lu()?;
    let recovered = lu.solve(&rhs);
    let condition_estimate = system.spectral_norm() * lu.inverse().spectral_norm();
    Ok(BLRecoveryResult {
        gap: *gap,
        recovered,
        rhs,
        condition_estimate,
    })
}

/// Closed form for one missing sample: `Ω/(π−Ω) Σ_{t≠s} x(t) sinc(Ω(s−t))`.
pub fn recover_bl_single(x_obs: &FiniteSequence, s: i64, kernel: &Kernel) -> C64 {
    let omega = kernel.cutoff();
    let sum: C64 = x_obs
        .iter()
        .filter(|(t, _)| *t != s)
        .map(|(t, v)| v * sinc(omega * (s - t) as f64))
        .sum();
    sum * kernel.single_gap_gain()
}

/// Weight the single-gap formula puts on the sample at offset `d = t − s`.
pub fn single_gap_coefficient(kernel: &Kernel, d: i64) -> f64 {
    kernel.single_gap_gain() * sinc(kernel.cutoff() * d as f64)
}

/// Largest deviation from the fixed point
/// `y[p] = Σ_{t∉gap} h(s+p−t)x(t) + Σ_k h(p−k) y[k]`.
pub fn fixed_point_residual(
    x_obs: &FiniteSequence,
    gap: &GapSpec,
    kernel: &Kernel,
    recovered: &[C64],
) -> f64 {
    let rhs = rhs_vector(x_obs, gap, kernel);
    let deviations: Vec<C64> = (0..gap.len())
        .map(|p| {
            let inner: C64 = recovered
                .iter()
                .enumerate()
                .map(|(k, y)| y * kernel.value(p as i64 - k as i64))
                .sum();
            recovered[p] - rhs[p] - inner
        })
        .collect();
    NormKind::Inf.of(&deviations)
}
