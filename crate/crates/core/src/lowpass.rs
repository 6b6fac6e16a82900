//! Ideal low-pass kernel `h(t) = Ω·sinc(Ωt)/π` and the gap matrix built from it.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use crate::error::{RecoveryError, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::parallel::{map_range, Execution};
use crate::sequence::{FiniteSequence, C64};

/// Below this many output samples a convolution is not worth splitting.
const PARALLEL_MIN_OUTPUTS: usize = 64;

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Impulse response of the ideal low-pass filter with cutoff `Ω ∈ (0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    omega_cap: f64,
}

impl Kernel {
    pub fn new(omega_cap: f64) -> Result<Self> {
        if !(omega_cap > 0.0 && omega_cap < PI) {
            return Err(RecoveryError::InvalidParameter(format!(
                "low-pass cutoff must lie in (0, π), got {omega_cap}"
            )));
        }
        Ok(Kernel { omega_cap })
    }

    pub fn cutoff(&self) -> f64 {
        self.omega_cap
    }

    /// `h(t)`. Exactly even in `t`, and `h(0) = Ω/π`.
    pub fn value(&self, t: i64) -> f64 {
        if t == 0 {
            return self.omega_cap / PI;
        }
        let u = t.unsigned_abs() as f64;
        (self.omega_cap * u).sin() / (PI * u)
    }

    /// `(h∘x)(t) = Σ_u h(t−u) x(u)` for each `t` in `out`.
    pub fn convolve(&self, x: &FiniteSequence, out: RangeInclusive<i64>) -> FiniteSequence {
        self.convolve_with(x, out, Execution::Parallel)
    }

    pub fn convolve_with(
        &self,
        x: &FiniteSequence,
        out: RangeInclusive<i64>,
        exec: Execution,
    ) -> FiniteSequence {
        let (lo, hi) = (*out.start(), *out.end());
        if lo > hi {
            return FiniteSequence::empty();
        }
        let n = (hi - lo + 1) as usize;
        let exec = if n < PARALLEL_MIN_OUTPUTS { Execution::Sequential } else { exec };
        let values = map_range(n, exec, |k| {
            let t = lo + k as i64;
            x.iter()
                .map(|(u, v)| v * self.value(t - u))
                .sum::<C64>()
        });
        FiniteSequence::new(lo, values).expect("convolution of finite data stays finite")
    }

    /// The `(m+1)×(m+1)` matrix `A[k][p] = h(k−p)`.
    pub fn gap_matrix(&self, m: usize) -> GapMatrix {
        let n = m + 1;
        let taps: Vec<f64> = (0..n as i64).map(|d| self.value(d)).collect();
        let entries = CMatrix::from_fn(n, n, |k, p| C64::new(taps[k.abs_diff(p)], 0.0));
        GapMatrix {
            kernel: *self,
            entries,
        }
    }

    /// The single-gap weight `Ω/(π−Ω)`.
    pub fn single_gap_gain(&self) -> f64 {
        self.omega_cap / (PI - self.omega_cap)
    }
}

/// Real symmetric Toeplitz matrix of kernel values on the gap.
#[derive(Debug, Clone, PartialEq)]
pub struct GapMatrix {
    kernel: Kernel,
    entries: CMatrix,
}

impl GapMatrix {
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn order(&self) -> usize {
        self.entries.rows() - 1
    }

    /// `I − A`, the operator of the band-limited normal equations.
    pub fn system(&self) -> CMatrix {
        CMatrix::identity(self.entries.rows()).sub(&self.entries)
    }

    /// Largest eigenvalue modulus; `A` is Hermitian, so this is `‖A‖₂`.
    pub fn spectral_norm(&self) -> f64 {
        hermitian_eigenvalues(&self.entries)
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(omega: f64) -> Kernel {
        Kernel::new(omega).unwrap()
    }

    #[test]
    fn kernel_value_examples() {
        assert!((k(0.1 * PI).value(0) - 0.1).abs() < 1e-15);
        assert!((k(PI / 2.0).value(1) - 1.0 / PI).abs() < 1e-15);
        assert!(k(PI / 2.0).value(2).abs() < 1e-16);
    }

    #[test]
    fn kernel_is_even() {
        let h = k(0.37);
        for t in 1..200 {
            assert_eq!(h.value(t), h.value(-t));
        }
    }

    #[test]
    fn cutoff_range_is_enforced() {
        for bad in [0.0, -0.1, PI, 4.0, f64::NAN] {
            assert!(Kernel::new(bad).is_err());
        }
    }

    #[test]
    fn convolve_examples() {
        let delta = FiniteSequence::delta(0, C64::new(1.0, 0.0));
        let h = k(0.3);
        assert!((h.convolve(&delta, 0..=0).get(0).re - 0.3 / PI).abs() < 1e-15);
        let h = k(PI / 2.0);
        assert!(h.convolve(&delta, 2..=2).get(2).norm() < 1e-16);
        let pair = FiniteSequence::from_real(0, &[1.0, 1.0]).unwrap();
        let y = h.convolve(&pair, 0..=0).get(0).re;
        assert!((y - (0.5 + 1.0 / PI)).abs() < 1e-15);
    }

    #[test]
    fn convolution_modes_agree() {
        let x = FiniteSequence::from_real(-50, &(0..101).map(|i| (i as f64).cos()).collect::<Vec<_>>())
            .unwrap();
        let h = k(0.7);
        let a = h.convolve_with(&x, -200..=200, Execution::Parallel);
        let b = h.convolve_with(&x, -200..=200, Execution::Sequential);
        assert_eq!(a, b);
    }

    #[test]
    fn gap_matrix_examples() {
        let a = k(0.1 * PI).gap_matrix(0);
        assert!((a.entries()[(0, 0)].re - 0.1).abs() < 1e-15);

        let a = k(PI / 2.0).gap_matrix(1);
        let e = a.entries();
        assert!((e[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((e[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!((e[(0, 1)].re - 1.0 / PI).abs() < 1e-15);
        assert_eq!(e[(0, 1)], e[(1, 0)]);
    }

    #[test]
    fn gap_matrix_is_contractive() {
        for omega in [0.05 * PI, 0.5 * PI] {
            for m in 0..10 {
                assert!(k(omega).gap_matrix(m).spectral_norm() < 1.0);
            }
        }
        // Near π the margin 1 − ‖A‖₂ shrinks below double resolution once m
        // grows (about 1e−18 at m = 4), so only short gaps are checked there.
        for m in 0..3 {
            assert!(k(0.99 * PI).gap_matrix(m).spectral_norm() < 1.0);
        }
    }
}
