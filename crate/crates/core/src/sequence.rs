//! Finite-support complex sequences, gap blocks and Z-transform probes.
//!
//! A [`FiniteSequence`] is a dense window `values[k] = x(start + k)`; every
//! index outside the window is an implicit zero. This is how the infinite
//! sequences of the recovery problem are represented after truncation.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{RecoveryError, Result};

pub type C64 = Complex<f64>;

/// The three `ℓ_r` norms the recovery bounds are stated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    One,
    Two,
    Inf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::One, NormKind::Two, NormKind::Inf];

    /// Norm of a plain slice of complex numbers.
    pub fn of(self, v: &[C64]) -> f64 {
        match self {
            NormKind::One => v.iter().map(|c| c.norm()).sum(),
            NormKind::Two => v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
            NormKind::Inf => v.iter().map(|c| c.norm()).fold(0.0, f64::max),
        }
    }

    /// Norm of a slice of non-negative reals.
    pub fn of_real(self, v: &[f64]) -> f64 {
        match self {
            NormKind::One => v.iter().map(|x| x.abs()).sum(),
            NormKind::Two => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::Inf => v.iter().map(|x| x.abs()).fold(0.0, f64::max),
        }
    }

    pub fn parse(s: &str) -> Option<NormKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "one" => Some(NormKind::One),
            "2" | "two" => Some(NormKind::Two),
            "inf" | "infinity" | "max" => Some(NormKind::Inf),
            _ => None,
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::One => f.write_str("1"),
            NormKind::Two => f.write_str("2"),
            NormKind::Inf => f.write_str("inf"),
        }
    }
}

/// The missing block `{s, s+1, ..., s+m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSpec {
    pub s: i64,
    pub m: usize,
}

impl GapSpec {
    pub fn new(s: i64, m: usize) -> Self {
        GapSpec { s, m }
    }

    pub fn single(s: i64) -> Self {
        GapSpec { s, m: 0 }
    }

    /// Number of missing samples, `m + 1`.
    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> i64 {
        self.s + self.m as i64
    }

    pub fn contains(&self, t: i64) -> bool {
        t >= self.s && t <= self.last()
    }

    pub fn indices(&self) -> RangeInclusive<i64> {
        self.s..=self.last()
    }

    /// Solvers accept blocks with `m = 0` anywhere, longer blocks only at `s = 0`.
    pub fn check_normalized(&self) -> Result<()> {
        if self.m > 0 && self.s != 0 {
            return Err(RecoveryError::InvalidGap(format!(
                "blocks with m > 0 must start at s = 0 (got s = {}, m = {})",
                self.s, self.m
            )));
        }
        Ok(())
    }
}

/// `e^{-iωt}`, exact on the quarter-turn frequencies.
pub(crate) fn phase(omega: f64, t: i64) -> C64 {
    if t == 0 || omega == 0.0 {
        return C64::new(1.0, 0.0);
    }
    if omega == PI || omega == -PI {
        return C64::new(if t.rem_euclid(2) == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    if omega == FRAC_PI_2 || omega == -FRAC_PI_2 {
        // e^{-iπt/2} = (-i)^t, and the conjugate for -π/2.
        let quarter = t.rem_euclid(4);
        let c = match quarter {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, -1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 1.0),
        };
        return if omega > 0.0 { c } else { c.conj() };
    }
    C64::from_polar(1.0, -omega * t as f64)
}

/// Values of `d^p X / dω^p (e^{iω})` for `p = 0..=m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralProbe {
    pub omega: f64,
    pub derivs: Vec<C64>,
}

impl SpectralProbe {
    /// `X(e^{iω})`.
    pub fn value(&self) -> C64 {
        self.derivs[0]
    }

    pub fn order(&self) -> usize {
        self.derivs.len() - 1
    }

    /// Whether the probe lies inside the class bounded by `|derivs[p]| ≤ sigma[p]`.
    pub fn within(&self, sigma: &[f64]) -> bool {
        self.derivs.len() == sigma.len()
            && self.derivs.iter().zip(sigma).all(|(d, s)| d.norm() <= *s)
    }

    pub fn max_modulus(&self) -> f64 {
        NormKind::Inf.of(&self.derivs)
    }
}

/// Complex sequence stored on a contiguous window of integer indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FiniteSequence {
    start: i64,
    values: Vec<C64>,
}

impl FiniteSequence {
    pub fn empty() -> Self {
        FiniteSequence::default()
    }

    /// Window starting at `start`. Rejects NaN or infinite samples.
    pub fn new(start: i64, values: Vec<C64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(RecoveryError::NonFinite(start + k as i64));
        }
        if values.is_empty() {
            return Ok(FiniteSequence::empty());
        }
        Ok(FiniteSequence { start, values })
    }

    pub fn from_real(start: i64, values: &[f64]) -> Result<Self> {
        FiniteSequence::new(start, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    /// Builds a sequence from `(t, x(t))` samples with strictly increasing `t`.
    /// Indices skipped between samples are zero.
    pub fn from_samples<I>(samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, C64)>,
    {
        let mut start = 0;
        let mut values: Vec<C64> = Vec::new();
        let mut last: Option<i64> = None;
        for (t, v) in samples {
            if !v.is_finite() {
                return Err(RecoveryError::NonFinite(t));
            }
            match last {
                None => start = t,
                Some(prev) if t <= prev => {
                    return Err(RecoveryError::InvalidParameter(format!(
                        "sample indices must be strictly increasing ({t} follows {prev})"
                    )))
                }
                Some(prev) => {
                    let fill = (t - prev - 1) as usize;
                    values.extend(std::iter::repeat_n(C64::new(0.0, 0.0), fill));
                }
            }
            values.push(v);
            last = Some(t);
        }
        Ok(if values.is_empty() {
            FiniteSequence::empty()
        } else {
            FiniteSequence { start, values }
        })
    }

    /// Sequence with a single non-zero sample.
    pub fn delta(t: i64, v: C64) -> Self {
        FiniteSequence {
            start: t,
            values: vec![v],
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> Option<RangeInclusive<i64>> {
        if self.is_empty() {
            None
        } else {
            Some(self.start..=self.end() - 1)
        }
    }

    pub fn stores(&self, t: i64) -> bool {
        t >= self.start && t < self.end()
    }

    /// `x(t)`, zero outside the stored window.
    pub fn get(&self, t: i64) -> C64 {
        if self.stores(t) {
            self.values[(t - self.start) as usize]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// `(t, x(t))` in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.start + k as i64, v))
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        kind.of(&self.values)
    }

    /// `Σ_t |t|^m |x(t)|` over the stored window. With `m = 0` this is the ℓ₁ norm.
    pub fn weighted_moment(&self, m: usize) -> f64 {
        self.iter()
            .map(|(t, v)| (t.unsigned_abs() as f64).powi(m as i32) * v.norm())
            .sum()
    }

    /// `Σ_{t ∉ exclude} (-it)^p e^{-iωt} x(t)` for `p = 0..=m`.
    pub fn z_derivatives(&self, omega: f64, m: usize, exclude: Option<&GapSpec>) -> SpectralProbe {
        let mut derivs = vec![C64::new(0.0, 0.0); m + 1];
        for (t, v) in self.iter() {
            if exclude.is_some_and(|g| g.contains(t)) {
                continue;
            }
            let factor = C64::new(0.0, -(t as f64));
            let mut term = phase(omega, t) * v;
            derivs[0] += term;
            for d in derivs.iter_mut().skip(1) {
                term *= factor;
                *d += term;
            }
        }
        SpectralProbe { omega, derivs }
    }

    fn combine(&self, other: &FiniteSequence, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        let (start, end) = match (self.support(), other.support()) {
            (None, None) => return Ok(FiniteSequence::empty()),
            (Some(a), None) => (*a.start(), *a.end()),
            (None, Some(b)) => (*b.start(), *b.end()),
            (Some(a), Some(b)) => (*a.start().min(b.start()), *a.end().max(b.end())),
        };
        let values = (start..=end).map(|t| f(self.get(t), other.get(t))).collect();
        FiniteSequence::new(start, values)
    }

    pub fn add(&self, other: &FiniteSequence) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn subtract(&self, other: &FiniteSequence) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: C64) -> Result<Self> {
        FiniteSequence::new(self.start, self.values.iter().map(|&v| v * c).collect())
    }

    /// Writes `fill[p]` at index `gap.s + p`, growing the window if needed.
    pub fn overlay_gap(&self, gap: &GapSpec, fill: &[C64]) -> Result<Self> {
        if fill.len() != gap.len() {
            return Err(RecoveryError::InvalidParameter(format!(
                "gap of length {} cannot take {} fill values",
                gap.len(),
                fill.len()
            )));
        }
        let (start, end) = match self.support() {
            None => (gap.s, gap.last()),
            Some(r) => ((*r.start()).min(gap.s), (*r.end()).max(gap.last())),
        };
        let values = (start..=end)
            .map(|t| {
                if gap.contains(t) {
                    fill[(t - gap.s) as usize]
                } else {
                    self.get(t)
                }
            })
            .collect();
        FiniteSequence::new(start, values)
    }

    /// Zeroes the samples on the gap, leaving only observations.
    pub fn erase_gap(&self, gap: &GapSpec) -> Self {
        let mut out = self.clone();
        for (k, v) in out.values.iter_mut().enumerate() {
            if gap.contains(self.start + k as i64) {
                *v = C64::new(0.0, 0.0);
            }
        }
        out
    }

    /// The samples stored on the gap, zero where the window does not reach.
    pub fn gap_values(&self, gap: &GapSpec) -> Vec<C64> {
        gap.indices().map(|t| self.get(t)).collect()
    }

    /// Whether any stored sample inside the gap is non-zero.
    pub fn touches_gap(&self, gap: &GapSpec) -> bool {
        gap.indices().any(|t| self.get(t) != C64::new(0.0, 0.0))
    }

    /// Restriction to `range` (intersected with the stored window).
    pub fn restrict(&self, range: RangeInclusive<i64>) -> Self {
        let lo = (*range.start()).max(self.start);
        let hi = (*range.end()).min(self.end() - 1);
        if self.is_empty() || lo > hi {
            return FiniteSequence::empty();
        }
        let a = (lo - self.start) as usize;
        let b = (hi - self.start) as usize;
        FiniteSequence {
            start: lo,
            values: self.values[a..=b].to_vec(),
        }
    }

    /// Drops leading and trailing zero samples.
    pub fn trimmed(&self) -> Self {
        let zero = C64::new(0.0, 0.0);
        let Some(first) = self.values.iter().position(|&v| v != zero) else {
            return FiniteSequence::empty();
        };
        let last = self.values.iter().rposition(|&v| v != zero).unwrap_or(first);
        FiniteSequence {
            start: self.start + first as i64,
            values: self.values[first..=last].to_vec(),
        }
    }

    /// Applies `f` to every stored sample.
    pub fn map(&self, f: impl Fn(i64, C64) -> C64) -> Result<Self> {
        FiniteSequence::new(self.start, self.iter().map(|(t, v)| f(t, v)).collect())
    }
}
