//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 when the
//! numerics fail (singular or non-finite systems).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::blrecover::recover_bl;
use crate::bounds::{check_r1_bound, check_r2_bound, op_norm_of, BlScenario, DegScenario, MatrixId, NormReport};
use crate::degrecover::{check_probe_frequency, recover_deg_capped, ConstraintMatrix, DEFAULT_MAX_ORDER};
use crate::error::RecoveryError;
use crate::genlib::{add_noise_with, make_degenerate, seeded_rng, synth_bandlimited, synth_ell1, BLAtomSpec, NoiseKind};
use crate::harness::{parse_angle, run_experiment_with, summarize, write_trials_csv, ExperimentConfig};
use crate::io::{read_sequence_csv, write_samples_csv, write_sequence_csv, SequenceIoError};
use crate::lowpass::Kernel;
use crate::parallel::Execution;
use crate::sequence::{FiniteSequence, GapSpec, NormKind, C64};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("{path}: {source}")]
    Input { path: String, source: SequenceIoError },

    #[error(transparent)]
    Recovery(#[from] RecoveryError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Recovery(e) if e.is_numeric() => 2,
            _ => 1,
        }
    }
}

fn angle_arg(s: &str) -> Result<f64, String> {
    parse_angle(s).ok_or_else(|| format!("`{s}` is not an angle (try `pi`, `0.1pi`, `pi/4` or radians)"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// One `t value` line per sample, e.g. `0 1+0i`.
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "gaprecover", version, about = "Recover missing samples of discrete-time sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    /// First missing index.
    #[arg(long = "gap", default_value_t = 0, allow_hyphen_values = true)]
    pub s: i64,
    /// Gap order; m+1 samples are missing. Needs --gap 0 when positive.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
}

impl GapArgs {
    fn gap(&self) -> GapSpec {
        GapSpec::new(self.s, self.m)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write results here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to `text` for recovery and `csv` otherwise.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Band-limited projection recovery.
    RecoverBl {
        /// Sequence CSV (`t,re,im`); `-` reads standard input.
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        gap: GapArgs,
        /// Cutoff Ω in (0, π), e.g. `0.1pi`.
        #[arg(long, value_parser = angle_arg)]
        cutoff: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Degenerate Z-transform recovery.
    RecoverDeg {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        gap: GapArgs,
        /// Probe frequency ω₀ in (−π, π].
        #[arg(long, value_parser = angle_arg, default_value = "pi", allow_hyphen_values = true)]
        omega0: f64,
        /// Largest accepted gap order.
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Synthesize a test sequence on `[-q, q]`.
    Generate {
        #[arg(long, value_enum, default_value_t = GenKind::Bl)]
        kind: GenKind,
        /// Band of the `bl` generator.
        #[arg(long, value_parser = angle_arg, default_value = "0.1pi")]
        cutoff: f64,
        #[arg(long, default_value_t = 4)]
        atoms: usize,
        #[arg(long, default_value_t = 10.0)]
        spread: f64,
        #[arg(long, default_value_t = 50)]
        q: u64,
        /// Gap made degenerate by the `degenerate` generator.
        #[command(flatten)]
        gap: GapArgs,
        #[arg(long, value_parser = angle_arg, default_value = "pi", allow_hyphen_values = true)]
        omega0: f64,
        /// Relative noise energy added to the path.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = crate::DEFAULT_SEED)]
        seed: u64,
        /// Complex-valued path instead of a real one.
        #[arg(long)]
        complex: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte-Carlo comparison from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Also write the JSON summary to this file.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Run trials on the calling thread only.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Operator norms of a recovery map, and bound checks on a sequence.
    Bounds {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[command(flatten)]
        gap: GapArgs,
        #[arg(long, value_parser = angle_arg)]
        cutoff: Option<f64>,
        #[arg(long, value_parser = angle_arg, default_value = "pi", allow_hyphen_values = true)]
        omega0: f64,
        /// Sequence to check the inequalities on.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Relative noise energy for the perturbation checks.
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = crate::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Bl,
    Ell1,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Bl,
    Deg,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let rendered = e.render().to_string();
            if informational {
                let _ = write!(stdout, "{rendered}");
                return 0;
            }
            let _ = write!(stderr, "{rendered}");
            return 1;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: &Path) -> Result<FiniteSequence, CliError> {
    let label = path.display().to_string();
    let wrap = |source: SequenceIoError| CliError::Input {
        path: label.clone(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| CliError::Io { path: label.clone(), source })?;
        return read_sequence_csv(buf.as_bytes()).map_err(wrap);
    }
    let file = File::open(path).map_err(|source| CliError::Io { path: label.clone(), source })?;
    read_sequence_csv(BufReader::new(file)).map_err(wrap)
}

/// Runs `f` against `--out` when given, otherwise against `stdout`.
fn with_output(
    out: Option<&Path>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let label = path.display().to_string();
            let file = File::create(path).map_err(|source| CliError::Io { path: label.clone(), source })?;
            let mut w = BufWriter::new(file);
            f(&mut w)
                .and_then(|_| w.flush())
                .map_err(|source| CliError::Io { path: label, source })
        }
        None => f(stdout).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn io_err(e: SequenceIoError) -> io::Error {
    match e {
        SequenceIoError::Io(e) => e,
        other => io::Error::other(other.to_string()),
    }
}

fn json_line<T: Serialize>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::other)?;
    writeln!(w)
}

#[derive(Serialize)]
struct RecoveryJson {
    scheme: &'static str,
    gap: GapSpec,
    parameter: f64,
    recovered: Vec<[f64; 2]>,
    rhs: Vec<[f64; 2]>,
    condition_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
}

/// `a+bi` / `a-bi` without the `+-0` that negative zeros would produce.
fn complex_text(v: C64) -> String {
    fn real(x: f64) -> String {
        let x = x + 0.0;
        if x != 0.0 && !(1e-5..1e16).contains(&x.abs()) {
            format!("{x:e}")
        } else {
            format!("{x}")
        }
    }
    if v.im < 0.0 {
        format!("{}-{}i", real(v.re), real(-v.im))
    } else {
        format!("{}+{}i", real(v.re), real(v.im))
    }
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn emit_recovery(output: &OutputArgs, stdout: &mut dyn Write, report: RecoveryJson, recovered: &[C64]) -> Result<(), CliError> {
    let gap = report.gap;
    with_output(output.out.as_deref(), stdout, |w| match output.format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Text => gap
            .indices()
            .zip(recovered)
            .try_for_each(|(t, v)| writeln!(w, "{t} {}", complex_text(*v))),
        OutputFormat::Csv => write_samples_csv(gap.indices().zip(recovered.iter().copied()), w).map_err(io_err),
        OutputFormat::Json => json_line(w, &report),
    })
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::RecoverBl {
            input,
            gap,
            cutoff,
            output,
        } => {
            let kernel = Kernel::new(cutoff)?;
            let gap = gap.gap();
            gap.check_normalized()?;
            let x = read_input(&input)?;
            let r = recover_bl(&x, &gap, &kernel)?;
            let report = RecoveryJson {
                scheme: "bl",
                gap,
                parameter: cutoff,
                recovered: pairs(&r.recovered),
                rhs: pairs(&r.rhs),
                condition_estimate: r.condition_estimate,
                residual: None,
            };
            emit_recovery(&output, stdout, report, &r.recovered)
        }
        Command::RecoverDeg {
            input,
            gap,
            omega0,
            max_order,
            output,
        } => {
            check_probe_frequency(omega0)?;
            let gap = gap.gap();
            gap.check_normalized()?;
            let x = read_input(&input)?;
            let r = recover_deg_capped(&x, &gap, omega0, max_order)?;
            let report = RecoveryJson {
                scheme: "deg",
                gap,
                parameter: omega0,
                recovered: pairs(&r.recovered),
                rhs: pairs(&r.rhs),
                condition_estimate: r.condition_estimate,
                residual: Some(r.residual_probe.max_modulus()),
            };
            emit_recovery(&output, stdout, report, &r.recovered)
        }
        Command::Generate {
            kind,
            cutoff,
            atoms,
            spread,
            q,
            gap,
            omega0,
            noise,
            seed,
            complex,
            out,
        } => {
            if q < 1 {
                return Err(CliError::Usage("--q must be at least 1".into()));
            }
            let q = q.min(i64::MAX as u64 / 2) as i64;
            let mut rng = seeded_rng(seed, 0);
            let x = match kind {
                GenKind::Bl => {
                    let spec = BLAtomSpec::random(cutoff, atoms, spread, !complex, &mut rng)?;
                    synth_bandlimited(&spec, -q..=q)?
                }
                GenKind::Ell1 => synth_ell1(-q..=q, !complex, &mut rng)?,
                GenKind::Degenerate => {
                    check_probe_frequency(omega0)?;
                    let gap = gap.gap();
                    gap.check_normalized()?;
                    make_degenerate(&synth_ell1(-q..=q, !complex, &mut rng)?, &gap, omega0)?
                }
            };
            let x = if noise > 0.0 {
                let kind = if complex { NoiseKind::Complex } else { NoiseKind::Real };
                add_noise_with(&x, noise, seed.wrapping_add(1), kind)?.0
            } else {
                x
            };
            with_output(out.as_deref(), stdout, |w| write_sequence_csv(&x, w).map_err(io_err))
        }
        Command::Experiment {
            config,
            seed,
            trials,
            summary,
            sequential,
            output,
        } => {
            let label = config.display().to_string();
            let text = std::fs::read_to_string(&config).map_err(|source| CliError::Io { path: label.clone(), source })?;
            let mut cfg: ExperimentConfig =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{label}: {e}")))?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(trials) = trials {
                cfg.trials = trials;
            }
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let records = run_experiment_with(&cfg, exec)?;
            let stats = summarize(&records)?;
            if let Some(path) = summary {
                with_output(Some(&path), stdout, |w| json_line(w, &stats))?;
            }
            with_output(output.out.as_deref(), stdout, |w| match output.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Text => {
                    writeln!(w, "{} trials", stats.trials)?;
                    for m in &stats.methods {
                        writeln!(
                            w,
                            "{}({:.6}): mean {:.3e}, median {:.3e}, max {:.3e}, failures {}, bound violations {}",
                            m.method, m.param, m.mean_error, m.median_error, m.max_error, m.failures, m.bound_violations
                        )?;
                    }
                    Ok(())
                }
                OutputFormat::Csv => write_trials_csv(&records, w),
                OutputFormat::Json => json_line(w, &stats),
            })
        }
        Command::Bounds {
            scheme,
            gap,
            cutoff,
            omega0,
            input,
            noise,
            seed,
            output,
        } => run_bounds(scheme, gap.gap(), cutoff, omega0, input, noise, seed, &output, stdout),
    }
}

#[derive(Serialize)]
struct BoundsJson {
    norms: Vec<NormReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    checks: Vec<CheckRow>,
}

#[derive(Serialize)]
struct CheckRow {
    inequality: &'static str,
    theta: NormKind,
    lhs: f64,
    rhs: f64,
    holds: bool,
}

#[allow(clippy::too_many_arguments)]
fn run_bounds(
    scheme: Scheme,
    gap: GapSpec,
    cutoff: Option<f64>,
    omega0: f64,
    input: Option<PathBuf>,
    noise: f64,
    seed: u64,
    output: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    gap.check_normalized()?;
    let (id, inverse, from, kernel) = match scheme {
        Scheme::Bl => {
            let cutoff = cutoff.ok_or_else(|| CliError::Usage("--scheme bl needs --cutoff".into()))?;
            let kernel = Kernel::new(cutoff)?;
            let inv = kernel.gap_matrix(gap.m).system().inverse()?;
            (MatrixId::GapInverse, inv, NormKind::Two, Some(kernel))
        }
        Scheme::Deg => {
            check_probe_frequency(omega0)?;
            let inv = ConstraintMatrix::new(omega0, &gap)?.entries.inverse()?;
            (MatrixId::ConstraintInverse, inv, NormKind::Inf, None)
        }
    };
    let norms = NormKind::ALL
        .iter()
        .map(|&theta| op_norm_of(id, &inverse, from, theta))
        .collect::<Result<Vec<_>, _>>()?;

    let mut checks = Vec::new();
    if let Some(path) = input {
        let x = read_input(&path)?.erase_gap(&gap);
        let (_, eta) = add_noise_with(&x, noise, seed, NoiseKind::Complex)?;
        let eta = eta.erase_gap(&gap);
        for theta in NormKind::ALL {
            match kernel {
                Some(kernel) => {
                    let r = check_r1_bound(
                        &BlScenario {
                            clean: x.clone(),
                            noise: eta.clone(),
                            gap,
                            kernel,
                        },
                        theta,
                    )?;
                    checks.push(row("R1", theta, r.proposition));
                    checks.push(row("r1", theta, r.noise));
                    if let Some(single) = r.single {
                        checks.push(row("r11", theta, single));
                    }
                }
                None => {
                    let r = check_r2_bound(
                        &DegScenario {
                            clean: x.clone(),
                            noise: eta.clone(),
                            gap,
                            omega0,
                        },
                        theta,
                    )?;
                    checks.push(row("R2", theta, r.proposition));
                    checks.push(row("r2", theta, r.noise));
                }
            }
        }
    }

    with_output(output.out.as_deref(), stdout, |w| match output.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => json_line(w, &BoundsJson { norms, checks }),
        OutputFormat::Text | OutputFormat::Csv => {
            writeln!(w, "kind,label,from,to,value,upper_bound,method_or_holds")?;
            for n in &norms {
                writeln!(
                    w,
                    "norm,{:?},{},{},{:.16e},{:.16e},{:?}",
                    n.matrix_id, n.from_norm, n.to_norm, n.value, n.upper_bound, n.method
                )?;
            }
            for c in &checks {
                writeln!(w, "check,{},-,{},{:.16e},{:.16e},{}", c.inequality, c.theta, c.lhs, c.rhs, c.holds)?;
            }
            Ok(())
        }
    })
}

fn row(inequality: &'static str, theta: NormKind, c: crate::bounds::BoundCheck) -> CheckRow {
    CheckRow {
        inequality,
        theta,
        lhs: c.lhs,
        rhs: c.rhs,
        holds: c.holds,
    }
}
