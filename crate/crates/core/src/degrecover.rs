//! Gap recovery without smoothing, from degeneracy of the Z-transform.
//!
//! A sequence is degenerate of order `m` at `ω₀` when its transform and the
//! first `m` derivatives in `ω` vanish at `e^{iω₀}`. Those `m+1` linear
//! conditions pin down the `m+1` missing samples exactly:
//! `B(ω₀) y = z(ω₀)` with `B[p][k] = (−i(s+k))^p e^{−iω₀(s+k)}` and
//! `z_p(ω₀) = −Σ_{t∉gap} (−it)^p e^{−iω₀t} x(t)`.

use std::f64::consts::PI;

use crate::error::{RecoveryError, Result};
use crate::linalg::CMatrix;
use crate::sequence::{phase, FiniteSequence, GapSpec, SpectralProbe, C64};

/// Largest gap order accepted by [`recover_deg`]. The constraint matrix
/// grows like `m^m` and becomes numerically useless beyond this.
pub const DEFAULT_MAX_ORDER: usize = 16;

pub fn check_probe_frequency(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > -PI && omega <= PI {
        Ok(())
    } else {
        Err(RecoveryError::InvalidParameter(format!(
            "probe frequency must lie in (−π, π], got {omega}"
        )))
    }
}

/// `B(ω)` for a given gap.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintMatrix {
    pub omega: f64,
    pub gap: GapSpec,
    pub entries: CMatrix,
}

impl ConstraintMatrix {
    pub fn new(omega: f64, gap: &GapSpec) -> Result<Self> {
        gap.check_normalized()?;
        let n = gap.len();
        let mut entries = CMatrix::zeros(n, n);
        for k in 0..n {
            let t = gap.s + k as i64;
            let factor = C64::new(0.0, -(t as f64));
            let mut v = phase(omega, t);
            for p in 0..n {
                entries[(p, k)] = v;
                v *= factor;
            }
        }
        Ok(ConstraintMatrix {
            omega,
            gap: *gap,
            entries,
        })
    }

    pub fn determinant(&self) -> C64 {
        self.entries.determinant()
    }

    /// `1 / ‖B⁻¹‖₂`.
    pub fn smallest_singular_value(&self) -> Result<f64> {
        Ok(1.0 / self.entries.inverse()?.spectral_norm())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegRecoveryResult {
    pub gap: GapSpec,
    pub omega0: f64,
    pub recovered: Vec<C64>,
    /// `z(ω₀)`.
    pub rhs: Vec<C64>,
    /// Transform derivatives of the completed sequence at `ω₀`; all zero up to rounding.
    pub residual_probe: SpectralProbe,
    pub condition_estimate: f64,
}

/// Recovers the gap so the completed sequence is degenerate of order `m` at `omega0`.
pub fn recover_deg(x_obs: &FiniteSequence, gap: &GapSpec, omega0: f64) -> Result<DegRecoveryResult> {
    recover_deg_capped(x_obs, gap, omega0, DEFAULT_MAX_ORDER)
}

/// [`recover_deg`] with an explicit cap on the gap order.
pub fn recover_deg_capped(
    x_obs: &FiniteSequence,
    gap: &GapSpec,
    omega0: f64,
    max_order: usize,
) -> Result<DegRecoveryResult> {
    check_probe_frequency(omega0)?;
    if gap.m > max_order {
        return Err(RecoveryError::OrderTooLarge {
            m: gap.m,
            cap: max_order,
        });
    }
    let b = ConstraintMatrix::new(omega0, gap)?;
    let rhs: Vec<C64> = x_obs
        .z_derivatives(omega0, gap.m, Some(gap))
        .derivs
        .into_iter()
        .map(|d| -d)
        .collect();
    let lu = b.entries.lu()?;
    let recovered = lu.solve(&rhs);
    let condition_estimate = b.entries.spectral_norm() * lu.inverse().spectral_norm();
    let completed = x_obs.overlay_gap(gap, &recovered)?;
    let residual_probe = completed.z_derivatives(omega0, gap.m, None);
    Ok(DegRecoveryResult {
        gap: *gap,
        omega0,
        recovered,
        rhs,
        residual_probe,
        condition_estimate,
    })
}

/// Closed form for one missing sample: `−Σ_{t≠s} e^{iω₀(s−t)} x(t)`.
/// At `ω₀ = π` the phases are exact signs, `−Σ (−1)^{t−s} x(t)`.
pub fn recover_deg_single(x_obs: &FiniteSequence, s: i64, omega0: f64) -> C64 {
    -x_obs
        .iter()
        .filter(|(t, _)| *t != s)
        .map(|(t, v)| phase(omega0, t - s) * v)
        .sum::<C64>()
}

/// Error of the single-sample estimator against known ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxIdentity {
    /// `x̂(s) − x(s)`.
    pub error: C64,
    /// `X(e^{iω₀})` of the full sequence.
    pub probe: C64,
    /// `−e^{iω₀s} X(e^{iω₀})`, what `error` must equal.
    pub predicted: C64,
}

impl MinimaxIdentity {
    pub fn discrepancy(&self) -> f64 {
        (self.error - self.predicted).norm()
    }
}

/// Runs the single-sample estimator on `x_full` with `x(s)` hidden and
/// compares its error to the transform value at `ω₀`.
pub fn minimax_error_identity(x_full: &FiniteSequence, s: i64, omega0: f64) -> Result<MinimaxIdentity> {
    if !x_full.stores(s) {
        return Err(RecoveryError::MissingGroundTruth(s));
    }
    let estimate = recover_deg_single(x_full, s, omega0);
    let error = estimate - x_full.get(s);
    let probe = x_full.z_derivatives(omega0, 0, None).value();
    let predicted = -phase(omega0, -s) * probe;
    Ok(MinimaxIdentity {
        error,
        probe,
        predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constraint_matrix_examples() {
        let b = ConstraintMatrix::new(PI, &GapSpec::single(3)).unwrap();
        assert_eq!(b.entries[(0, 0)], c(-1.0, 0.0));

        let b = ConstraintMatrix::new(0.7, &GapSpec::single(0)).unwrap();
        assert_eq!(b.entries[(0, 0)], c(1.0, 0.0));

        let w = 0.7;
        let b = ConstraintMatrix::new(w, &GapSpec::new(0, 1)).unwrap();
        let e = C64::from_polar(1.0, -w);
        assert_eq!(b.entries[(0, 0)], c(1.0, 0.0));
        assert!((b.entries[(0, 1)] - e).norm() < 1e-15);
        assert_eq!(b.entries[(1, 0)], c(0.0, 0.0));
        assert!((b.entries[(1, 1)] - c(0.0, -1.0) * e).norm() < 1e-15);
        assert!((b.determinant() - c(0.0, -1.0) * e).norm() < 1e-15);
    }

    #[test]
    fn constraint_matrix_rejects_unnormalized_gap() {
        assert!(matches!(
            ConstraintMatrix::new(PI, &GapSpec::new(1, 1)),
            Err(RecoveryError::InvalidGap(_))
        ));
    }

    #[test]
    fn recover_deg_examples() {
        let gap = GapSpec::single(0);
        let r = recover_deg(&FiniteSequence::delta(1, c(1.0, 0.0)), &gap, PI).unwrap();
        assert_eq!(r.recovered, vec![c(1.0, 0.0)]);
        assert_eq!(r.residual_probe.value(), c(0.0, 0.0));

        let x = FiniteSequence::from_samples([(-1, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
        assert_eq!(recover_deg(&x, &gap, PI).unwrap().recovered, vec![c(2.0, 0.0)]);

        let r = recover_deg(&FiniteSequence::empty(), &GapSpec::new(0, 3), 1.1).unwrap();
        assert!(r.recovered.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn single_examples() {
        assert_eq!(recover_deg_single(&FiniteSequence::delta(1, c(1.0, 0.0)), 0, PI), c(1.0, 0.0));
        let x = FiniteSequence::from_samples([(2, c(1.0, 0.0)), (4, c(1.0, 0.0))]).unwrap();
        assert_eq!(recover_deg_single(&x, 0, PI), c(-2.0, 0.0));
    }

    #[test]
    fn identity_on_a_single_sample() {
        let id = minimax_error_identity(&FiniteSequence::delta(0, c(1.0, 0.0)), 0, PI).unwrap();
        assert_eq!(id.probe, c(1.0, 0.0));
        assert_eq!(id.error, c(-1.0, 0.0));
        assert_eq!(id.discrepancy(), 0.0);
    }

    #[test]
    fn identity_requires_ground_truth() {
        let r = minimax_error_identity(&FiniteSequence::delta(4, c(1.0, 0.0)), 0, PI);
        assert_eq!(r, Err(RecoveryError::MissingGroundTruth(0)));
    }

    #[test]
    fn order_cap_and_frequency_range() {
        let gap = GapSpec::new(0, 17);
        assert!(matches!(
            recover_deg(&FiniteSequence::empty(), &gap, PI),
            Err(RecoveryError::OrderTooLarge { m: 17, cap: 16 })
        ));
        assert!(recover_deg_capped(&FiniteSequence::empty(), &gap, PI, 20).is_ok());
        assert!(recover_deg(&FiniteSequence::empty(), &GapSpec::single(0), -PI).is_err());
        assert!(recover_deg(&FiniteSequence::empty(), &GapSpec::single(0), 3.5).is_err());
    }
}
