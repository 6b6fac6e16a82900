//! Monte-Carlo comparison of the recovery formulas on synthetic paths.
//!
//! Each trial draws a path from the configured generator, hides the gap,
//! runs every configured method on the remaining observations and records
//! the gap error together with the matching robustness bound. Trials are
//! seeded independently (`seed`, stream = trial id), so the records do not
//! depend on how trials are scheduled.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Deserializer, Serialize};

use crate::blrecover::{recover_bl, recover_bl_single};
use crate::bounds::{check_r1_bound, check_r2_bound, BlScenario, DegScenario};
use crate::degrecover::{check_probe_frequency, recover_deg, recover_deg_single};
use crate::error::{RecoveryError, Result};
use crate::genlib::{add_noise_with, make_degenerate, seeded_rng, synth_bandlimited_with, synth_ell1, BLAtomSpec, NoiseKind};
use crate::lowpass::Kernel;
use crate::parallel::{map_range, Execution};
use crate::sequence::{FiniteSequence, GapSpec, NormKind, C64};

/// Parses `pi`, `-pi`, `0.1pi`, `0.1*pi`, `pi/4`, `3pi/4` or plain radians.
pub fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().ok()?),
        None => (s.as_str(), 1.0),
    };
    let coef = num.strip_suffix("pi")?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let factor = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    let v = factor * PI / den;
    (v.is_finite() && den != 0.0).then_some(v)
}

fn angle<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Number(v) => Ok(v),
        Raw::Text(t) => parse_angle(&t).ok_or_else(|| serde::de::Error::custom(format!("bad angle {t:?}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Real sinc-atom mixture band-limited to `cutoff_true`.
    Bl,
    /// `Bl` plus white noise; the truth includes the noise.
    NoisyBl,
    /// Decaying Gaussian ℓ₁ path.
    Ell1,
    /// `Ell1` made degenerate of order `m` at `omega0`.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Method {
    /// Single-gap band-limited closed form.
    Wx1 {
        #[serde(deserialize_with = "angle")]
        cutoff: f64,
    },
    /// Single-gap degenerate closed form.
    Wx2 {
        #[serde(deserialize_with = "angle")]
        omega0: f64,
    },
    /// Band-limited linear system for any gap length.
    Theorem1 {
        #[serde(deserialize_with = "angle")]
        cutoff: f64,
    },
    /// Degenerate linear system for any gap length.
    Theorem2 {
        #[serde(deserialize_with = "angle")]
        omega0: f64,
    },
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Wx1 { .. } => "wx1",
            Method::Wx2 { .. } => "wx2",
            Method::Theorem1 { .. } => "theorem1",
            Method::Theorem2 { .. } => "theorem2",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            Method::Wx1 { cutoff } | Method::Theorem1 { cutoff } => cutoff,
            Method::Wx2 { omega0 } | Method::Theorem2 { omega0 } => omega0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Method::Wx1 { cutoff } | Method::Theorem1 { cutoff } => Kernel::new(cutoff).map(|_| ()),
            Method::Wx2 { omega0 } | Method::Theorem2 { omega0 } => check_probe_frequency(omega0),
        }
    }
}

fn default_cutoff() -> f64 {
    0.1 * PI
}
fn default_gap() -> GapSpec {
    GapSpec::single(0)
}
fn default_q() -> u64 {
    u64::MAX
}
fn default_n_obs() -> usize {
    100
}
fn default_trials() -> usize {
    50
}
fn default_seed() -> u64 {
    crate::DEFAULT_SEED
}
fn default_omega0() -> f64 {
    PI
}
fn default_atoms() -> usize {
    4
}
fn default_spread() -> f64 {
    10.0
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generator: Generator,
    #[serde(default = "default_cutoff", deserialize_with = "angle")]
    pub cutoff_true: f64,
    #[serde(default = "default_gap")]
    pub gap: GapSpec,
    pub methods: Vec<Method>,
    /// Observations are further restricted to `|t − s| ≤ q`.
    #[serde(default = "default_q")]
    pub q: u64,
    /// Observation window `[s − n_obs/2, s − n_obs/2 + n_obs − 1]`, gap excluded.
    #[serde(default = "default_n_obs")]
    pub n_obs: usize,
    /// Noise energy relative to the clean path (`noisy-bl` only).
    #[serde(default)]
    pub noise_level: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Degeneracy point of the `degenerate` generator.
    #[serde(default = "default_omega0", deserialize_with = "angle")]
    pub omega0: f64,
    #[serde(default = "default_atoms")]
    pub atoms: usize,
    /// Atom centers are drawn from `[s − spread, s + spread]`.
    #[serde(default = "default_spread")]
    pub atom_spread: f64,
    /// Real-valued paths and noise.
    #[serde(default = "default_true")]
    pub real: bool,
}

impl ExperimentConfig {
    /// The band-limited comparison: truth band `0.1π`, three estimators.
    pub fn figure_one() -> Self {
        ExperimentConfig {
            generator: Generator::Bl,
            cutoff_true: 0.1 * PI,
            gap: GapSpec::single(0),
            methods: vec![
                Method::Wx1 { cutoff: 0.1 * PI },
                Method::Wx1 { cutoff: 0.05 * PI },
                Method::Wx2 { omega0: PI },
            ],
            q: default_q(),
            n_obs: 100,
            noise_level: 0.0,
            trials: 50,
            seed: crate::DEFAULT_SEED,
            omega0: PI,
            atoms: default_atoms(),
            atom_spread: default_spread(),
            real: true,
        }
    }

    /// The noisy comparison.
    pub fn figure_two() -> Self {
        ExperimentConfig {
            generator: Generator::NoisyBl,
            noise_level: 0.2,
            ..ExperimentConfig::figure_one()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RecoveryError::InvalidParameter(msg));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if self.q < 1 {
            return bad("q must be at least 1".into());
        }
        if self.n_obs < 2 * self.gap.m + 2 {
            return bad(format!("n_obs = {} is below 2m+2 = {}", self.n_obs, 2 * self.gap.m + 2));
        }
        if self.methods.is_empty() {
            return Err(RecoveryError::EmptyInput);
        }
        if !(self.noise_level >= 0.0 && self.noise_level.is_finite()) {
            return bad(format!("noise level {} is not a non-negative number", self.noise_level));
        }
        if matches!(self.generator, Generator::Bl | Generator::NoisyBl) {
            Kernel::new(self.cutoff_true)?;
            if self.atoms == 0 {
                return Err(RecoveryError::EmptyInput);
            }
        }
        if self.generator == Generator::Degenerate {
            check_probe_frequency(self.omega0)?;
        }
        self.gap.check_normalized()?;
        self.methods.iter().try_for_each(Method::validate)
    }

    /// Index range the observations are drawn from.
    pub fn window(&self) -> (i64, i64) {
        let s = self.gap.s;
        let half = (self.n_obs / 2) as i64;
        let lo = s - half;
        let hi = lo + self.n_obs as i64 - 1;
        let q = self.q.min(i64::MAX as u64 / 2) as i64;
        (lo.max(s.saturating_sub(q)), hi.min(s.saturating_add(q)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub method: Method,
    pub recovered: Vec<C64>,
    /// `max_p |recovered[p] − truth[p]|`.
    pub err_abs: f64,
    pub bound: f64,
    pub holds: bool,
    /// Set when the method could not run on this trial.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub truth: Vec<C64>,
    pub outcomes: Vec<MethodOutcome>,
}

struct TrialPath {
    /// What is observed off the gap and the ground truth on it.
    full: FiniteSequence,
    /// Noise-free component, for the noise inequalities.
    clean: FiniteSequence,
}

fn draw_path(cfg: &ExperimentConfig, trial: usize) -> Result<TrialPath> {
    let mut rng = seeded_rng(cfg.seed, trial as u64);
    let (lo, hi) = cfg.window();
    let window = lo..=hi;
    let s = cfg.gap.s as f64;
    match cfg.generator {
        Generator::Bl | Generator::NoisyBl => {
            let mut spec = BLAtomSpec::random(cfg.cutoff_true, cfg.atoms, cfg.atom_spread, cfg.real, &mut rng)?;
            spec.atoms.iter_mut().for_each(|a| a.center += s);
            let clean = synth_bandlimited_with(&spec, window, Execution::Sequential)?;
            if cfg.generator == Generator::Bl || cfg.noise_level == 0.0 {
                return Ok(TrialPath {
                    full: clean.clone(),
                    clean,
                });
            }
            let kind = if cfg.real { NoiseKind::Real } else { NoiseKind::Complex };
            let noise_seed = rand::Rng::random::<u64>(&mut rng);
            let (full, _) = add_noise_with(&clean, cfg.noise_level, noise_seed, kind)?;
            Ok(TrialPath { full, clean })
        }
        Generator::Ell1 => {
            let path = synth_ell1(window, cfg.real, &mut rng)?;
            Ok(TrialPath {
                full: path.clone(),
                clean: path,
            })
        }
        Generator::Degenerate => {
            let path = synth_ell1(window, cfg.real, &mut rng)?;
            let path = make_degenerate(&path, &cfg.gap, cfg.omega0)?;
            Ok(TrialPath {
                full: path.clone(),
                clean: path,
            })
        }
    }
}

fn run_method(method: &Method, path: &TrialPath, gap: &GapSpec, truth: &[C64]) -> Result<MethodOutcome> {
    let observed = path.full.erase_gap(gap);
    let clean = path.clean.erase_gap(gap);
    let noise = observed.subtract(&clean)?;
    let single_only = |name: &str| -> Result<()> {
        if gap.m != 0 {
            return Err(RecoveryError::InvalidGap(format!("{name} handles a single missing sample only")));
        }
        Ok(())
    };
    let (recovered, bound, holds) = match *method {
        Method::Wx1 { cutoff } | Method::Theorem1 { cutoff } => {
            let kernel = Kernel::new(cutoff)?;
            let recovered = if matches!(method, Method::Wx1 { .. }) {
                single_only("wx1")?;
                vec![recover_bl_single(&observed, gap.s, &kernel)]
            } else {
                recover_bl(&observed, gap, &kernel)?.recovered
            };
            let report = check_r1_bound(
                &BlScenario {
                    clean,
                    noise: noise.clone(),
                    gap: *gap,
                    kernel,
                },
                NormKind::Inf,
            )?;
            let bound = if noise.is_empty() { report.proposition.rhs } else { report.noise.rhs };
            (recovered, bound, report.holds())
        }
        Method::Wx2 { omega0 } | Method::Theorem2 { omega0 } => {
            let recovered = if matches!(method, Method::Wx2 { .. }) {
                single_only("wx2")?;
                vec![recover_deg_single(&observed, gap.s, omega0)]
            } else {
                recover_deg(&observed, gap, omega0)?.recovered
            };
            let report = check_r2_bound(
                &DegScenario {
                    clean,
                    noise: noise.clone(),
                    gap: *gap,
                    omega0,
                },
                NormKind::Inf,
            )?;
            let bound = if noise.is_empty() { report.proposition.rhs } else { report.noise.rhs };
            (recovered, bound, report.holds())
        }
    };
    let err_abs = recovered
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(MethodOutcome {
        method: *method,
        recovered,
        err_abs,
        bound,
        holds,
        failure: None,
    })
}

fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialRecord> {
    let path = draw_path(cfg, trial)?;
    let truth = path.full.gap_values(&cfg.gap);
    let outcomes = cfg
        .methods
        .iter()
        .map(|m| {
            run_method(m, &path, &cfg.gap, &truth).unwrap_or_else(|e| MethodOutcome {
                method: *m,
                recovered: Vec::new(),
                err_abs: f64::NAN,
                bound: f64::NAN,
                holds: false,
                failure: Some(e.to_string()),
            })
        })
        .collect();
    Ok(TrialRecord { trial, truth, outcomes })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    run_experiment_with(cfg, Execution::Parallel)
}

pub fn run_experiment_with(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    map_range(cfg.trials, exec, |t| run_trial(cfg, t))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub param: f64,
    pub trials: usize,
    pub failures: usize,
    pub mean_error: f64,
    pub median_error: f64,
    pub max_error: f64,
    pub bound_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub methods: Vec<MethodSummary>,
}

impl Summary {
    pub fn method(&self, label: &str, param: f64) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == label && m.param == param)
    }

    pub fn total_violations(&self) -> usize {
        self.methods.iter().map(|m| m.bound_violations).sum()
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Per-method error statistics. Records are ordered by trial id first, so
/// the result does not depend on the order they arrive in.
pub fn summarize(records: &[TrialRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(RecoveryError::EmptyInput);
    }
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.trial);
    let n_methods = sorted[0].outcomes.len();
    let methods = (0..n_methods)
        .map(|k| {
            let method = sorted[0].outcomes[k].method;
            let outcomes: Vec<&MethodOutcome> = sorted.iter().filter_map(|r| r.outcomes.get(k)).collect();
            let ok: Vec<&MethodOutcome> = outcomes.iter().copied().filter(|o| o.failure.is_none()).collect();
            let errors: Vec<f64> = ok.iter().map(|o| o.err_abs).collect();
            let mut ordered = errors.clone();
            ordered.sort_by(f64::total_cmp);
            let (mean, med, max) = if errors.is_empty() {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                (
                    errors.iter().sum::<f64>() / errors.len() as f64,
                    median(&ordered),
                    ordered[ordered.len() - 1],
                )
            };
            MethodSummary {
                method: method.label().to_string(),
                param: method.param(),
                trials: outcomes.len(),
                failures: outcomes.len() - ok.len(),
                mean_error: mean,
                median_error: med,
                max_error: max,
                bound_violations: ok.iter().filter(|o| !o.holds).count(),
            }
        })
        .collect();
    Ok(Summary {
        trials: sorted.len(),
        methods,
    })
}

/// One row per trial and method: `trial,method,param,err_abs,bound,holds`.
pub fn write_trials_csv<W: Write>(records: &[TrialRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trial", "method", "param", "err_abs", "bound", "holds"])?;
    for r in records {
        for o in &r.outcomes {
            w.write_record([
                r.trial.to_string(),
                o.method.label().to_string(),
                format!("{:.16e}", o.method.param()),
                format!("{:.16e}", o.err_abs),
                format!("{:.16e}", o.bound),
                o.holds.to_string(),
            ])?;
        }
    }
    w.flush()
}
