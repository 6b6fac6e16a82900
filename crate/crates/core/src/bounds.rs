//! Mixed operator norms of the recovery maps and numerical checks of the
//! robustness inequalities.
//!
//! Both recovery schemes are linear maps from observations to the gap, so
//! their sensitivity to a perturbation `η` of the observations is governed by
//! `‖(I−A)⁻¹‖_{2,θ}` (band-limited) and `‖B(ω₀)⁻¹‖_{∞,θ}` (degenerate).
//!
//! Norms are taken over complex vectors. Where no closed form exists the
//! reported `value` is a lower bound found by search, and `upper_bound` is a
//! cheap entrywise bound; checks that need a guaranteed constant use the latter.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blrecover::recover_bl;
use crate::degrecover::{recover_deg, ConstraintMatrix};
use crate::error::{RecoveryError, Result};
use crate::genlib::{seeded_rng, synth_ell1, BLAtomSpec};
use crate::linalg::CMatrix;
use crate::lowpass::Kernel;
use crate::parallel::{map_range, Execution};
use crate::sequence::{FiniteSequence, GapSpec, NormKind, C64};

/// Largest matrix accepted by [`op_norm`] (gap order 16).
pub const MAX_NORM_DIM: usize = 17;

/// Relative slack allowed when comparing the two sides of an inequality.
pub const BOUND_SLACK: f64 = 1e-9;

const PHASE_GRID: usize = 64;
const GRID_MAX_DIM: usize = 4;
/// Cap on phase-grid evaluations per search.
const GRID_BUDGET: usize = 1 << 15;
const RANDOM_RESTARTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixId {
    /// `(I − A)⁻¹`
    GapInverse,
    /// `B(ω₀)⁻¹`
    ConstraintInverse,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMethod {
    /// Closed form (or converged power iteration for the spectral norm).
    Exact,
    /// Exhaustive over real sign vectors; exact on real inputs.
    Enumerated,
    /// Best value found by phase search; a lower bound.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub matrix_id: MatrixId,
    pub from_norm: NormKind,
    pub to_norm: NormKind,
    pub value: f64,
    /// Guaranteed upper bound; equals `value` for exact methods.
    pub upper_bound: f64,
    pub method: NormMethod,
}

/// `‖S‖_{from,to} = sup ‖Sx‖_to / ‖x‖_from` over complex `x`.
pub fn op_norm(s: &CMatrix, from: NormKind, to: NormKind) -> Result<NormReport> {
    op_norm_of(MatrixId::Other, s, from, to)
}

pub fn op_norm_of(id: MatrixId, s: &CMatrix, from: NormKind, to: NormKind) -> Result<NormReport> {
    if !s.is_square() {
        return Err(RecoveryError::InvalidParameter(format!(
            "operator norm needs a square matrix, got {}×{}",
            s.rows(),
            s.cols()
        )));
    }
    let n = s.rows();
    if n > MAX_NORM_DIM {
        return Err(RecoveryError::DimensionTooLarge {
            dim: n,
            max: MAX_NORM_DIM,
        });
    }
    let exact = |value: f64| NormReport {
        matrix_id: id,
        from_norm: from,
        to_norm: to,
        value,
        upper_bound: value,
        method: NormMethod::Exact,
    };
    if n == 0 {
        return Ok(exact(0.0));
    }
    if n == 1 {
        return Ok(exact(s[(0, 0)].norm()));
    }
    use NormKind::*;
    let report = match (from, to) {
        // Extreme points of the ℓ₁ ball are the scaled unit vectors.
        (One, _) => exact((0..n).map(|j| to.of(&s.column(j))).fold(0.0, f64::max)),
        (Two, Two) => exact(s.spectral_norm()),
        (Two, Inf) => exact((0..n).map(|i| Two.of(s.row(i))).fold(0.0, f64::max)),
        (Inf, Inf) => exact((0..n).map(|i| One.of(s.row(i))).fold(0.0, f64::max)),
        (Inf, target) => {
            let (value, method) = search_polydisc(s, target);
            NormReport {
                matrix_id: id,
                from_norm: from,
                to_norm: to,
                value,
                upper_bound: inf_norm_upper_bound(s, target).max(value),
                method,
            }
        }
        (Two, One) => {
            // ‖S‖_{2,1} = ‖Sᴴ‖_{∞,2}.
            let adj = s.adjoint();
            let (value, method) = search_polydisc(&adj, Two);
            let row_sum: f64 = (0..n).map(|i| Two.of(s.row(i))).sum();
            let upper = inf_norm_upper_bound(&adj, Two).min(row_sum).max(value);
            NormReport {
                matrix_id: id,
                from_norm: from,
                to_norm: to,
                value,
                upper_bound: upper,
                method,
            }
        }
    };
    Ok(report)
}

/// `‖ |S|·𝟙 ‖_θ`, an upper bound on `‖S‖_{∞,θ}`.
pub fn inf_norm_upper_bound(s: &CMatrix, to: NormKind) -> f64 {
    let row_sums: Vec<f64> = (0..s.rows()).map(|i| NormKind::One.of(s.row(i))).collect();
    to.of_real(&row_sums)
}

fn objective(s: &CMatrix, x: &[C64], to: NormKind) -> f64 {
    to.of(&s.mul_vec(x))
}

/// Maximizes `‖Sx‖_to` over `|x_i| = 1`.
fn search_polydisc(s: &CMatrix, to: NormKind) -> (f64, NormMethod) {
    let n = s.rows();
    let mut best = 0.0;
    let mut best_x = vec![C64::new(1.0, 0.0); n];
    if s.is_real() {
        let (v, x) = enumerate_signs(s, to);
        best = v;
        best_x = x;
    }
    let grid_best = if n <= GRID_MAX_DIM {
        let mut phases = PHASE_GRID;
        while phases > 2 && phases.pow((n - 1) as u32) > GRID_BUDGET {
            phases /= 2;
        }
        let (v, x) = phase_grid(s, to, phases);
        let (v, x) = coordinate_ascent(s, to, x, v);
        (v, x)
    } else {
        let mut rng = seeded_rng(0x0005_eed0_fa11, n as u64);
        let mut top = (0.0, best_x.clone());
        for _ in 0..RANDOM_RESTARTS {
            let x0: Vec<C64> = (0..n)
                .map(|_| C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
                .collect();
            let v0 = objective(s, &x0, to);
            let (v, x) = coordinate_ascent(s, to, x0, v0);
            if v > top.0 {
                top = (v, x);
            }
        }
        top
    };
    let (v, _) = coordinate_ascent(s, to, best_x, best);
    let sign_best = best;
    best = best.max(v).max(grid_best.0);
    let method = if s.is_real() && best <= sign_best * (1.0 + 1e-12) {
        NormMethod::Enumerated
    } else {
        NormMethod::Sampled
    };
    (best, method)
}

/// Exhaustive search over `x ∈ {±1}ⁿ` with `x₀ = 1`.
fn enumerate_signs(s: &CMatrix, to: NormKind) -> (f64, Vec<C64>) {
    let n = s.rows();
    let mut best = (0.0, vec![C64::new(1.0, 0.0); n]);
    for mask in 0u64..(1u64 << (n - 1)) {
        let x: Vec<C64> = (0..n)
            .map(|i| {
                let negative = i > 0 && (mask >> (i - 1)) & 1 == 1;
                C64::new(if negative { -1.0 } else { 1.0 }, 0.0)
            })
            .collect();
        let v = objective(s, &x, to);
        if v > best.0 {
            best = (v, x);
        }
    }
    best
}

/// Exhaustive search over phases `2πk/phases`, first coordinate fixed.
fn phase_grid(s: &CMatrix, to: NormKind, phases: usize) -> (f64, Vec<C64>) {
    let n = s.rows();
    let units: Vec<C64> = (0..phases)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / phases as f64))
        .collect();
    // rotated[j][k] = column j times the k-th phase.
    let rotated: Vec<Vec<Vec<C64>>> = (1..n)
        .map(|j| {
            let col = s.column(j);
            units.iter().map(|&u| col.iter().map(|&c| c * u).collect()).collect()
        })
        .collect();
    let mut partial = vec![s.column(0)];
    partial.extend((1..n).map(|_| vec![C64::new(0.0, 0.0); n]));
    let mut choice = vec![0usize; n - 1];
    let mut best = (0.0, vec![C64::new(1.0, 0.0); n]);
    // Depth-first walk; partial[d] holds the sum of the first d columns.
    fn walk(
        depth: usize,
        rotated: &[Vec<Vec<C64>>],
        partial: &mut [Vec<C64>],
        choice: &mut [usize],
        to: NormKind,
        best: &mut (f64, Vec<usize>),
    ) {
        if depth == rotated.len() {
            let v = to.of(&partial[depth]);
            if v > best.0 {
                best.0 = v;
                best.1.copy_from_slice(choice);
            }
            return;
        }
        for (k, col) in rotated[depth].iter().enumerate() {
            let (done, rest) = partial.split_at_mut(depth + 1);
            for ((out, a), b) in rest[0].iter_mut().zip(&done[depth]).zip(col) {
                *out = a + b;
            }
            choice[depth] = k;
            walk(depth + 1, rotated, partial, choice, to, best);
        }
    }
    let mut found = (0.0, vec![0usize; n - 1]);
    walk(0, &rotated, &mut partial, &mut choice, to, &mut found);
    if found.0 > 0.0 {
        best.0 = found.0;
        for (j, &k) in found.1.iter().enumerate() {
            best.1[j + 1] = units[k];
        }
    }
    best
}

/// Phase-grid lower bound on `‖S‖_{∞,to}` with `phases` points per coordinate.
/// Doubling `phases` refines the grid, so the value never decreases.
pub fn sampled_inf_norm(s: &CMatrix, to: NormKind, phases: usize) -> Result<f64> {
    let n = s.rows();
    if n > GRID_MAX_DIM {
        return Err(RecoveryError::DimensionTooLarge {
            dim: n,
            max: GRID_MAX_DIM,
        });
    }
    if n == 0 || phases == 0 {
        return Ok(0.0);
    }
    Ok(phase_grid(s, to, phases).0)
}

/// Improves one phase at a time until a full sweep gains nothing.
fn coordinate_ascent(s: &CMatrix, to: NormKind, mut x: Vec<C64>, mut value: f64) -> (f64, Vec<C64>) {
    let n = x.len();
    let units: Vec<C64> = (0..PHASE_GRID)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / PHASE_GRID as f64))
        .collect();
    let columns: Vec<Vec<C64>> = (0..n).map(|j| s.column(j)).collect();
    let mut sx = s.mul_vec(&x);
    let mut trial = vec![C64::new(0.0, 0.0); n];
    let shift = |sx: &[C64], col: &[C64], delta: C64, out: &mut [C64]| {
        for ((o, a), c) in out.iter_mut().zip(sx).zip(col) {
            *o = a + c * delta;
        }
    };
    for _sweep in 0..50 {
        let mut improved = false;
        for j in 0..n {
            let keep = x[j];
            let candidates: Vec<C64> = if to == NormKind::Two {
                // ‖r + s_j x_j‖² is maximized by aligning x_j with s_jᴴ r.
                let dot: C64 = columns[j]
                    .iter()
                    .zip(&sx)
                    .map(|(c, r)| c.conj() * (r - c * keep))
                    .sum();
                if dot.norm() > 0.0 {
                    vec![dot / dot.norm()]
                } else {
                    Vec::new()
                }
            } else {
                units.clone()
            };
            let mut best_phase = keep;
            for u in candidates {
                shift(&sx, &columns[j], u - keep, &mut trial);
                let v = to.of(&trial);
                if v > value * (1.0 + 1e-14) {
                    value = v;
                    best_phase = u;
                    improved = true;
                }
            }
            if best_phase != keep {
                shift(&sx.clone(), &columns[j], best_phase - keep, &mut sx);
                x[j] = best_phase;
            }
        }
        if !improved {
            break;
        }
    }
    (value, x)
}

/// Outcome of checking `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl BoundCheck {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        BoundCheck {
            lhs,
            rhs,
            holds: lhs <= rhs * (1.0 + BOUND_SLACK),
        }
    }
}

/// Band-limited recovery from `clean` and from `clean + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlScenario {
    pub clean: FiniteSequence,
    pub noise: FiniteSequence,
    pub gap: GapSpec,
    pub kernel: Kernel,
}

/// Degenerate recovery from `clean` and from `clean + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegScenario {
    pub clean: FiniteSequence,
    pub noise: FiniteSequence,
    pub gap: GapSpec,
    pub omega0: f64,
}

fn check_noise_off_gap(noise: &FiniteSequence, gap: &GapSpec) -> Result<()> {
    if noise.touches_gap(gap) {
        return Err(RecoveryError::ScenarioMismatch(format!(
            "noise has non-zero samples inside the gap {}..={}",
            gap.s,
            gap.last()
        )));
    }
    Ok(())
}

fn gap_difference(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(u, v)| u - v).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct R1Report {
    pub theta: NormKind,
    pub norm: NormReport,
    /// `‖x̂‖_θ ≤ ‖(I−A)⁻¹‖_{2,θ} ‖x‖₂`.
    pub proposition: BoundCheck,
    /// `‖x̂ − x̂_η‖_θ ≤ ‖(I−A)⁻¹‖_{2,θ} ‖η‖₂`.
    pub noise: BoundCheck,
    /// Single-gap form `|x̂ − x̂_η| ≤ Ω/(π−Ω) ‖η‖₂`; only for `m = 0`.
    pub single: Option<BoundCheck>,
}

impl R1Report {
    pub fn holds(&self) -> bool {
        self.proposition.holds && self.noise.holds && self.single.is_none_or(|c| c.holds)
    }
}

pub fn check_r1_bound(sc: &BlScenario, theta: NormKind) -> Result<R1Report> {
    check_noise_off_gap(&sc.noise, &sc.gap)?;
    let clean_obs = sc.clean.erase_gap(&sc.gap);
    let noisy_obs = clean_obs.add(&sc.noise)?;
    let clean = recover_bl(&clean_obs, &sc.gap, &sc.kernel)?;
    let noisy = recover_bl(&noisy_obs, &sc.gap, &sc.kernel)?;

    let inverse = sc.kernel.gap_matrix(sc.gap.m).system().inverse()?;
    let norm = op_norm_of(MatrixId::GapInverse, &inverse, NormKind::Two, theta)?;
    let constant = norm.upper_bound;

    let proposition = BoundCheck::new(
        theta.of(&clean.recovered),
        constant * clean_obs.norm(NormKind::Two),
    );
    let diff = theta.of(&gap_difference(&clean.recovered, &noisy.recovered));
    let eta_norm = sc.noise.norm(NormKind::Two);
    let noise = BoundCheck::new(diff, constant * eta_norm);
    let single = (sc.gap.m == 0).then(|| BoundCheck::new(diff, sc.kernel.single_gap_gain() * eta_norm));
    Ok(R1Report {
        theta,
        norm,
        proposition,
        noise,
        single,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct R2Report {
    pub theta: NormKind,
    pub norm: NormReport,
    /// `‖x̂‖_θ ≤ ‖B⁻¹‖_{∞,θ} Σ|t|^m |x(t)|`.
    pub proposition: BoundCheck,
    /// `‖x̂ − x̂_η‖_θ ≤ ‖B⁻¹‖_{∞,θ} Σ|t|^m |η(t)|`; for `m = 0` the right side is `‖η‖₁`.
    pub noise: BoundCheck,
}

impl R2Report {
    pub fn holds(&self) -> bool {
        self.proposition.holds && self.noise.holds
    }
}

pub fn check_r2_bound(sc: &DegScenario, theta: NormKind) -> Result<R2Report> {
    check_noise_off_gap(&sc.noise, &sc.gap)?;
    let clean_obs = sc.clean.erase_gap(&sc.gap);
    let noisy_obs = clean_obs.add(&sc.noise)?;
    let clean = recover_deg(&clean_obs, &sc.gap, sc.omega0)?;
    let noisy = recover_deg(&noisy_obs, &sc.gap, sc.omega0)?;

    let inverse = ConstraintMatrix::new(sc.omega0, &sc.gap)?.entries.inverse()?;
    let norm = op_norm_of(MatrixId::ConstraintInverse, &inverse, NormKind::Inf, theta)?;
    let constant = norm.upper_bound;

    let m = sc.gap.m;
    let proposition = BoundCheck::new(theta.of(&clean.recovered), constant * clean_obs.weighted_moment(m));
    let diff = theta.of(&gap_difference(&clean.recovered, &noisy.recovered));
    let noise = BoundCheck::new(diff, constant * sc.noise.weighted_moment(m));
    Ok(R2Report {
        theta,
        norm,
        proposition,
        noise,
    })
}

/// Seeded random scenarios for Monte-Carlo checks of the inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    /// Observations cover `[-half_width, half_width]`.
    pub half_width: i64,
    pub max_order: usize,
    pub noise_range: (f64, f64),
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            half_width: 100,
            max_order: 3,
            noise_range: (0.01, 0.5),
        }
    }
}

fn random_gap<R: Rng>(rng: &mut R, max_order: usize) -> GapSpec {
    let m = rng.random_range(0..=max_order);
    if m == 0 {
        GapSpec::single(rng.random_range(-5..=5))
    } else {
        GapSpec::new(0, m)
    }
}

fn noise_for<R: Rng>(
    rng: &mut R,
    clean: &FiniteSequence,
    gap: &GapSpec,
    range: (f64, f64),
) -> Result<FiniteSequence> {
    let level = rng.random_range(range.0..=range.1);
    let seed: u64 = rng.random();
    let (_, eta) = crate::genlib::add_noise(&clean.erase_gap(gap), level, seed)?;
    Ok(eta.erase_gap(gap))
}

pub fn random_bl_scenario(seed: u64, index: u64, params: &ScenarioParams) -> Result<BlScenario> {
    let mut rng = seeded_rng(seed, index);
    let cutoffs = [0.1 * PI, 0.25 * PI, 0.5 * PI, 0.75 * PI];
    let cutoff = cutoffs[rng.random_range(0..cutoffs.len())];
    let spec = BLAtomSpec::random(cutoff, 4, 10.0, false, &mut rng)?;
    let w = params.half_width;
    let clean = crate::genlib::synth_bandlimited_with(&spec, -w..=w, Execution::Sequential)?;
    let gap = random_gap(&mut rng, params.max_order);
    let noise = noise_for(&mut rng, &clean, &gap, params.noise_range)?;
    Ok(BlScenario {
        clean,
        noise,
        gap,
        kernel: Kernel::new(cutoff)?,
    })
}

pub fn random_deg_scenario(seed: u64, index: u64, params: &ScenarioParams) -> Result<DegScenario> {
    let mut rng = seeded_rng(seed, index);
    let omega0 = match rng.random_range(0..3) {
        0 => PI,
        1 => PI / 2.0,
        _ => rng.random_range(-3.0..3.0),
    };
    let w = params.half_width;
    let clean = synth_ell1(-w..=w, false, &mut rng)?;
    let gap = random_gap(&mut rng, params.max_order);
    let noise = noise_for(&mut rng, &clean, &gap, params.noise_range)?;
    Ok(DegScenario {
        clean,
        noise,
        gap,
        omega0,
    })
}

/// Runs `check_r1_bound` on `count` seeded scenarios for every `θ`.
pub fn r1_batch(seed: u64, count: usize, params: &ScenarioParams, exec: Execution) -> Result<Vec<R1Report>> {
    let nested = map_range(count, exec, |i| -> Result<Vec<R1Report>> {
        let sc = random_bl_scenario(seed, i as u64, params)?;
        NormKind::ALL.iter().map(|&theta| check_r1_bound(&sc, theta)).collect()
    });
    Ok(nested.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// Runs `check_r2_bound` on `count` seeded scenarios for every `θ`.
pub fn r2_batch(seed: u64, count: usize, params: &ScenarioParams, exec: Execution) -> Result<Vec<R2Report>> {
    let nested = map_range(count, exec, |i| -> Result<Vec<R2Report>> {
        let sc = random_deg_scenario(seed, i as u64, params)?;
        NormKind::ALL.iter().map(|&theta| check_r2_bound(&sc, theta)).collect()
    });
    Ok(nested.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use NormKind::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn scalar_norm_is_modulus() {
        let s = CMatrix::from_rows(&[vec![c(3.0, -4.0)]]);
        for from in NormKind::ALL {
            for to in NormKind::ALL {
                let r = op_norm(&s, from, to).unwrap();
                assert_eq!(r.value, 5.0);
                assert_eq!(r.method, NormMethod::Exact);
            }
        }
    }

    #[test]
    fn identity_spectral_norm() {
        assert_eq!(op_norm(&CMatrix::identity(2), Two, Two).unwrap().value, 1.0);
    }

    #[test]
    fn rank_one_inf_inf() {
        let s = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]);
        let r = op_norm(&s, Inf, Inf).unwrap();
        assert_eq!(r.value, 2.0);
        let r = op_norm(&s, Inf, Two).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert_eq!(r.method, NormMethod::Enumerated);
    }

    #[test]
    fn complex_phases_can_beat_signs() {
        // Over real signs the max is 2; x = (1, i) reaches 2√2.
        let s = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]);
        let r = op_norm(&s, Inf, One).unwrap();
        assert!((r.value - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(r.method, NormMethod::Sampled);
        assert!(r.upper_bound >= r.value);
    }

    #[test]
    fn too_large_is_rejected() {
        let s = CMatrix::identity(18);
        assert!(matches!(op_norm(&s, Two, Two), Err(RecoveryError::DimensionTooLarge { .. })));
    }

    #[test]
    fn single_gap_spectral_constant() {
        for omega in [0.1 * PI, 0.5 * PI, 0.9 * PI] {
            let k = Kernel::new(omega).unwrap();
            let inv = k.gap_matrix(0).system().inverse().unwrap();
            let r = op_norm(&inv, Two, Two).unwrap();
            assert!((r.value - PI / (PI - omega)).abs() < 1e-12);
            assert!((k.single_gap_gain() - r.value * omega / PI).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_noise_bounds_are_tight_at_zero() {
        let k = Kernel::new(0.4).unwrap();
        let clean = FiniteSequence::from_real(-10, &(0..21).map(|i| (i as f64 * 0.3).sin()).collect::<Vec<_>>())
            .unwrap();
        let sc = BlScenario {
            noise: FiniteSequence::empty(),
            clean: clean.clone(),
            gap: GapSpec::single(0),
            kernel: k,
        };
        let r = check_r1_bound(&sc, Two).unwrap();
        assert_eq!(r.noise.lhs, 0.0);
        assert_eq!(r.noise.rhs, 0.0);
        assert!(r.holds());

        let sc = DegScenario {
            clean,
            noise: FiniteSequence::empty(),
            gap: GapSpec::single(0),
            omega0: PI,
        };
        let r = check_r2_bound(&sc, Inf).unwrap();
        assert_eq!((r.noise.lhs, r.noise.rhs), (0.0, 0.0));
        assert!(r.holds());
    }

    #[test]
    fn r11_constant_example() {
        let k = Kernel::new(PI / 2.0).unwrap();
        assert!((k.single_gap_gain() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn r2_equality_case() {
        // Single sample: |x̂(0)| = 1 = ‖x‖₁.
        let sc = DegScenario {
            clean: FiniteSequence::delta(1, c(1.0, 0.0)),
            noise: FiniteSequence::empty(),
            gap: GapSpec::single(0),
            omega0: PI,
        };
        let r = check_r2_bound(&sc, Inf).unwrap();
        assert_eq!(r.proposition.lhs, 1.0);
        assert_eq!(r.proposition.rhs, 1.0);
        assert!(r.proposition.holds);
    }

    #[test]
    fn noise_inside_the_gap_is_a_mismatch() {
        let sc = BlScenario {
            clean: FiniteSequence::delta(1, c(1.0, 0.0)),
            noise: FiniteSequence::delta(0, c(0.1, 0.0)),
            gap: GapSpec::single(0),
            kernel: Kernel::new(1.0).unwrap(),
        };
        assert!(matches!(check_r1_bound(&sc, Two), Err(RecoveryError::ScenarioMismatch(_))));
    }

    #[test]
    fn grid_refinement_is_monotone() {
        let s = CMatrix::from_rows(&[
            vec![c(1.0, 0.5), c(-0.3, 0.2), c(0.7, -1.1)],
            vec![c(0.2, 0.0), c(1.4, -0.6), c(-0.5, 0.3)],
            vec![c(-0.9, 0.4), c(0.1, 0.8), c(0.6, 0.6)],
        ]);
        for to in [One, Two] {
            let mut prev = 0.0;
            for phases in [4, 8, 16, 32, 64] {
                let v = sampled_inf_norm(&s, to, phases).unwrap();
                assert!(v >= prev);
                prev = v;
            }
            let r = op_norm(&s, Inf, to).unwrap();
            assert!(r.value >= prev - 1e-12);
            assert!(r.upper_bound >= r.value);
        }
    }
}
