//! Test-signal synthesis: band-limited sinc mixtures, decaying ℓ₁ paths,
//! degenerate completions, additive noise and truncation.
//!
//! Every random generator takes an explicit RNG or seed; there is no global
//! state.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::degrecover::recover_deg;
use crate::error::{RecoveryError, Result};
use crate::lowpass::sinc;
use crate::parallel::{map_range, Execution};
use crate::sequence::{FiniteSequence, GapSpec, NormKind, C64};

/// Deterministic RNG for `(seed, stream)`; distinct streams are independent.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One shifted sinc `weight · sinc(Ω'(t − center))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub center: f64,
    pub weight: C64,
}

/// Mixture of shifted sincs sharing a cutoff; band-limited to `[−Ω', Ω']`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BLAtomSpec {
    pub cutoff: f64,
    pub atoms: Vec<Atom>,
}

impl BLAtomSpec {
    pub fn new(cutoff: f64, atoms: Vec<Atom>) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff < std::f64::consts::PI) {
            return Err(RecoveryError::InvalidParameter(format!(
                "atom cutoff must lie in (0, π), got {cutoff}"
            )));
        }
        if atoms.is_empty() {
            return Err(RecoveryError::EmptyInput);
        }
        Ok(BLAtomSpec { cutoff, atoms })
    }

    /// Single atom `weight · sinc(Ω'(t − center))`.
    pub fn single(cutoff: f64, center: f64, weight: C64) -> Result<Self> {
        BLAtomSpec::new(cutoff, vec![Atom { center, weight }])
    }

    /// `n_atoms` atoms with centers uniform in `[−spread, spread]` and
    /// standard normal weights (real or circular complex).
    pub fn random<R: Rng>(cutoff: f64, n_atoms: usize, spread: f64, real: bool, rng: &mut R) -> Result<Self> {
        let atoms = (0..n_atoms)
            .map(|_| {
                let center = if spread > 0.0 { rng.random_range(-spread..=spread) } else { 0.0 };
                let weight = gaussian(rng, real);
                Atom { center, weight }
            })
            .collect();
        BLAtomSpec::new(cutoff, atoms)
    }

    pub fn value(&self, t: i64) -> C64 {
        self.atoms
            .iter()
            .map(|a| a.weight * sinc(self.cutoff * (t as f64 - a.center)))
            .sum()
    }
}

fn gaussian<R: Rng>(rng: &mut R, real: bool) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    if real {
        C64::new(re, 0.0)
    } else {
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Samples the atom mixture on `window`.
pub fn synth_bandlimited(spec: &BLAtomSpec, window: RangeInclusive<i64>) -> Result<FiniteSequence> {
    synth_bandlimited_with(spec, window, Execution::Parallel)
}

pub fn synth_bandlimited_with(
    spec: &BLAtomSpec,
    window: RangeInclusive<i64>,
    exec: Execution,
) -> Result<FiniteSequence> {
    let (lo, hi) = (*window.start(), *window.end());
    if lo > hi {
        return Ok(FiniteSequence::empty());
    }
    let values = map_range((hi - lo + 1) as usize, exec, |k| spec.value(lo + k as i64));
    FiniteSequence::new(lo, values)
}

/// Gaussian white samples under the envelope `(1+|t|)^{-2}`, an ℓ₁ path
/// with finite moments up to order one and fast-enough decay for small orders.
pub fn synth_ell1<R: Rng>(window: RangeInclusive<i64>, real: bool, rng: &mut R) -> Result<FiniteSequence> {
    let (lo, hi) = (*window.start(), *window.end());
    if lo > hi {
        return Ok(FiniteSequence::empty());
    }
    let values = (lo..=hi)
        .map(|t| {
            let envelope = (1.0 + t.unsigned_abs() as f64).powi(-2);
            gaussian(rng, real) * envelope
        })
        .collect();
    FiniteSequence::new(lo, values)
}

/// Overwrites the gap so the result is degenerate of order `m` at `omega0`.
pub fn make_degenerate(x: &FiniteSequence, gap: &GapSpec, omega0: f64) -> Result<FiniteSequence> {
    let r = recover_deg(x, gap, omega0)?;
    x.overlay_gap(gap, &r.recovered)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    /// Circular complex Gaussian.
    #[default]
    Complex,
    /// Real Gaussian (imaginary parts zero).
    Real,
}

/// Adds Gaussian noise `η` on the stored window of `x`, rescaled so that
/// `‖η‖₂ = level · ‖x‖₂`. Returns `(x + η, η)`.
pub fn add_noise(x: &FiniteSequence, level: f64, seed: u64) -> Result<(FiniteSequence, FiniteSequence)> {
    add_noise_with(x, level, seed, NoiseKind::Complex)
}

pub fn add_noise_with(
    x: &FiniteSequence,
    level: f64,
    seed: u64,
    kind: NoiseKind,
) -> Result<(FiniteSequence, FiniteSequence)> {
    if !(level >= 0.0 && level.is_finite()) {
        return Err(RecoveryError::InvalidParameter(format!(
            "noise level must be a finite non-negative number, got {level}"
        )));
    }
    let mut rng = seeded_rng(seed, 0);
    let raw = FiniteSequence::new(
        x.start(),
        (0..x.len()).map(|_| gaussian(&mut rng, kind == NoiseKind::Real)).collect(),
    )?;
    let target = level * x.norm(NormKind::Two);
    let raw_norm = raw.norm(NormKind::Two);
    let eta = if target == 0.0 || raw_norm == 0.0 {
        raw.scale(C64::new(0.0, 0.0))?
    } else {
        raw.scale(C64::new(target / raw_norm, 0.0))?
    };
    Ok((x.add(&eta)?, eta))
}

/// Splits `x` into the part on `|t| ≤ q` and the discarded tail.
pub fn truncate(x: &FiniteSequence, q: u64) -> Result<(FiniteSequence, FiniteSequence)> {
    if q == 0 {
        return Err(RecoveryError::InvalidParameter("truncation radius must be at least 1".into()));
    }
    let q = q.min(i64::MAX as u64) as i64;
    let kept = x.restrict(-q..=q);
    let tail = x.subtract(&kept)?.trimmed();
    Ok((kept, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn single_atom_peak() {
        let cutoff = 0.2 * PI;
        let spec = BLAtomSpec::single(cutoff, 0.0, c(PI / cutoff)).unwrap();
        let x = synth_bandlimited(&spec, -10..=10).unwrap();
        assert!((x.get(0) - c(PI / cutoff)).norm() < 1e-14);
    }

    #[test]
    fn symmetric_atoms_give_even_sequence() {
        let spec = BLAtomSpec::new(
            0.3,
            vec![
                Atom { center: -5.0, weight: c(1.5) },
                Atom { center: 5.0, weight: c(1.5) },
            ],
        )
        .unwrap();
        let x = synth_bandlimited(&spec, -40..=40).unwrap();
        for t in 0..=40 {
            assert!((x.get(t) - x.get(-t)).norm() < 1e-14);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(BLAtomSpec::new(PI, vec![Atom { center: 0.0, weight: c(1.0) }]).is_err());
        assert_eq!(BLAtomSpec::new(0.5, vec![]), Err(RecoveryError::EmptyInput));
    }

    #[test]
    fn degenerate_examples() {
        let gap = GapSpec::single(0);
        let y = make_degenerate(&FiniteSequence::delta(1, c(1.0)), &gap, PI).unwrap();
        assert_eq!(y.get(0), c(1.0));
        assert_eq!(y.get(1), c(1.0));
        let again = make_degenerate(&y, &gap, PI).unwrap();
        assert!((again.get(0) - y.get(0)).norm() < 1e-12);
        let z = make_degenerate(&FiniteSequence::empty(), &GapSpec::new(0, 2), 1.0).unwrap();
        assert_eq!(z.norm(NormKind::Inf), 0.0);
    }

    #[test]
    fn noise_examples() {
        let x = FiniteSequence::from_real(-5, &[1.0, -2.0, 3.0, 0.5, 0.0, 1.0, 2.0, -1.0, 4.0, 0.1, 0.2]).unwrap();
        let (noisy, eta) = add_noise(&x, 0.0, 7).unwrap();
        assert_eq!(eta.norm(NormKind::Inf), 0.0);
        assert_eq!(noisy, x);

        let (_, eta) = add_noise(&x, 0.3, 7).unwrap();
        let ratio = eta.norm(NormKind::Two) / x.norm(NormKind::Two);
        assert!((ratio - 0.3).abs() < 1e-12);

        let (_, again) = add_noise(&x, 0.3, 7).unwrap();
        assert_eq!(eta, again);
        let (_, other) = add_noise(&x, 0.3, 8).unwrap();
        assert_ne!(eta, other);

        let (_, real) = add_noise_with(&x, 0.3, 7, NoiseKind::Real).unwrap();
        assert!(real.is_real());
        assert!((real.norm(NormKind::Two) / x.norm(NormKind::Two) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn truncate_examples() {
        let x = FiniteSequence::from_samples([(-3, c(1.0)), (0, c(2.0)), (5, c(1.0))]).unwrap();
        let (kept, tail) = truncate(&x, 3).unwrap();
        assert_eq!(kept.get(-3), c(1.0));
        assert_eq!(kept.get(0), c(2.0));
        assert!(!kept.stores(5));
        assert_eq!(tail.start(), 5);
        assert_eq!(tail.len(), 1);
        let total = kept.norm(NormKind::Two).powi(2) + tail.norm(NormKind::Two).powi(2);
        assert!((total - x.norm(NormKind::Two).powi(2)).abs() < 1e-14);

        let (_, tail) = truncate(&x, 100).unwrap();
        assert!(tail.is_empty());
        assert!(truncate(&x, 0).is_err());
    }

    #[test]
    fn ell1_paths_are_reproducible_and_decay() {
        let a = synth_ell1(-100..=100, true, &mut seeded_rng(3, 1)).unwrap();
        let b = synth_ell1(-100..=100, true, &mut seeded_rng(3, 1)).unwrap();
        assert_eq!(a, b);
        assert!(a.get(100).norm() < 1e-2);
        assert!(a.weighted_moment(1).is_finite());
    }
}
