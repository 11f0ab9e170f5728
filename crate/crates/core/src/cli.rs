//! The `gwline` command line.
//!
//! Exit codes: 0 success, 1 validation error, 2 counterexample inequalities
//! not strict, 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::counterexample::{
    degenerate_gap, in_proposition_regime, verify_instance, verify_proposition, CounterexampleSpec,
    VerificationRecord,
};
use crate::error::Error;
use crate::experiments::{default_epsilon_grid, monte_carlo_study, report_to_json, sweep_epsilon, write_sweep_csv};
use crate::numfmt::format_g17;
use crate::objective::{assignment_objective, gm_objective, rearrangement_terms};
use crate::solvers::{evaluate_baselines, solve_brute_force, solve_local_search, SolveResult, DEFAULT_BRUTE_FORCE_CAP};
use crate::types::{CostParams, Permutation, PointConfiguration};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gwline", version, about = "Gromov-Monge assignment problems on the real line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolveMethod {
    Brute,
    Local,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate F_sigma, the map objective and the rearrangement residual.
    Eval {
        /// JSON file `{"x": [...], "y": [...]}`.
        #[arg(long)]
        points: PathBuf,
        /// 1-based images, e.g. `3,1,2`.
        #[arg(long)]
        perm: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Maximize F_sigma over all permutations.
    Solve {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = SolveMethod::Brute)]
        method: SolveMethod,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Largest n accepted by the brute-force method.
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
    },
    /// Build and brute-force the cyclic counterexample.
    Counterexample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, conflicts_with = "auto_eps", allow_negative_numbers = true)]
        eps: Option<f64>,
        /// Search for a witness epsilon (the default when --eps is absent).
        #[arg(long)]
        auto_eps: bool,
        /// Also write the instance as a points file.
        #[arg(long)]
        emit_points: Option<PathBuf>,
    },
    /// Tabulate f_id, f_cyc and the brute-force maximum over an epsilon grid.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Comma-separated grid; defaults to 2/(n-3) * 2^-k, k = 1..20.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        eps: Option<Vec<f64>>,
        /// Skip the brute-force columns.
        #[arg(long)]
        no_brute: bool,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate how often the identity or anti-identity is optimal.
    Montecarlo {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `uniform` or `gaussian`.
        #[arg(long, default_value = "uniform")]
        dist: String,
        /// JSON destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Assertion(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            Self::Validation(_) => EXIT_VALIDATION,
            Self::Assertion(_) => EXIT_ASSERTION,
            Self::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Validation(m) | Self::Assertion(m) | Self::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Validation(e.to_string())
    }
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

type CliResult<T> = Result<T, CliError>;

/// Two point vectors, stored as `{"x": [...], "y": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsFile {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PointsFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("points file: {e}")))
    }

    pub fn into_configurations(self) -> Result<(PointConfiguration, PointConfiguration), Error> {
        if self.x.len() != self.y.len() {
            return Err(Error::DimensionMismatch {
                what: "y",
                expected: self.x.len(),
                found: self.y.len(),
            });
        }
        Ok((PointConfiguration::new(self.x)?, PointConfiguration::new(self.y)?))
    }
}

fn load_points(path: &Path) -> CliResult<(PointConfiguration, PointConfiguration)> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(PointsFile::parse(&text)?.into_configurations()?)
}

/// Writes `bytes` to a temporary file next to `path` and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, bytes).map_err(|e| io_err(p, e)),
        None => out
            .write_all(bytes)
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_VALIDATION
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Eval { points, perm, alpha } => cmd_eval(&points, &perm, alpha, out),
        Command::Solve {
            points,
            alpha,
            method,
            restarts,
            seed,
            cap,
        } => cmd_solve(&points, alpha, method, restarts, seed, cap, out),
        Command::Counterexample {
            n,
            alpha,
            eps,
            auto_eps: _,
            emit_points,
        } => cmd_counterexample(n, alpha, eps, emit_points.as_deref(), out, err),
        Command::Sweep {
            n,
            alpha,
            eps,
            no_brute,
            out: path,
        } => cmd_sweep(n, alpha, eps, !no_brute, path.as_deref(), out, err),
        Command::Montecarlo {
            n,
            alpha,
            trials,
            seed,
            dist,
            out: path,
        } => cmd_montecarlo(n, alpha, trials, seed, &dist, path.as_deref(), out),
    }
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| CliError::Io(format!("stdout: {e}")))?
    };
}

fn cmd_eval(points: &Path, perm: &str, alpha: f64, out: &mut dyn Write) -> CliResult<i32> {
    let cost = CostParams::new(alpha)?;
    let (x, y) = load_points(points)?;
    let sigma: Permutation = perm.parse()?;
    let f = assignment_objective(&x, &y, &sigma, &cost)?;
    let gm = gm_objective(&x, &y, &sigma, &cost)?;
    let terms = rearrangement_terms(&x, &y, &sigma, &cost)?;
    say!(out, "n = {}", x.len());
    say!(out, "alpha = {}", format_g17(alpha));
    say!(out, "sigma = {sigma}");
    say!(out, "F = {}", format_g17(f));
    say!(out, "gm_objective = {}", format_g17(gm));
    say!(out, "rearrangement_residual = {}", format_g17(terms.residual()));
    Ok(EXIT_OK)
}

fn print_solve(out: &mut dyn Write, r: &SolveResult, f_id: f64, f_aid: f64) -> CliResult<()> {
    let method = match r.method {
        crate::solvers::Method::Brute => "brute",
        crate::solvers::Method::Local => "local",
        crate::solvers::Method::Baseline => "baseline",
    };
    say!(out, "method = {method}");
    say!(out, "best_value = {}", format_g17(r.best_value));
    for m in &r.maximizers {
        say!(out, "maximizer = {m}");
    }
    say!(out, "evaluations = {}", r.evaluations);
    say!(out, "F_id = {}", format_g17(f_id));
    say!(out, "F_aid = {}", format_g17(f_aid));
    Ok(())
}

fn cmd_solve(
    points: &Path,
    alpha: f64,
    method: SolveMethod,
    restarts: usize,
    seed: u64,
    cap: usize,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let cost = CostParams::new(alpha)?;
    let (x, y) = load_points(points)?;
    let result = match method {
        SolveMethod::Brute => solve_brute_force(&x, &y, &cost, cap)?,
        SolveMethod::Local => solve_local_search(&x, &y, &cost, restarts, seed)?,
    };
    let (f_id, f_aid) = evaluate_baselines(&x, &y, &cost)?;
    say!(out, "n = {}", x.len());
    print_solve(out, &result, f_id, f_aid)?;
    Ok(EXIT_OK)
}

fn print_record(out: &mut dyn Write, r: &VerificationRecord) -> CliResult<()> {
    let g = format_g17;
    say!(out, "n = {}", r.n);
    say!(out, "alpha = {}", g(r.alpha));
    say!(out, "epsilon = {}", g(r.epsilon));
    say!(out, "degenerate_gap = {}", g(r.degenerate_gap));
    say!(out, "F_id = {}", g(r.f_id));
    say!(out, "F_aid = {}", g(r.f_aid));
    say!(out, "f_id_closed_form = {}", g(r.f_id_closed_form));
    say!(out, "f_cyc = {}", g(r.f_cyc));
    say!(out, "f_cyc_closed_form = {}", g(r.f_cyc_closed_form));
    say!(out, "max = {}", g(r.f_max));
    for m in &r.maximizers {
        say!(out, "maximizer = {m}");
    }
    say!(out, "cyc_is_maximizer = {}", r.cyc_is_maximizer);
    say!(out, "evaluations = {}", r.evaluations);
    say!(out, "check baselines_tie = {}", r.baselines_tie());
    say!(out, "check max_exceeds_baselines = {}", r.max_exceeds_baselines());
    say!(out, "check max_dominates_cyc = {}", r.max_dominates_cyc());
    Ok(())
}

fn cmd_counterexample(
    n: usize,
    alpha: f64,
    eps: Option<f64>,
    emit_points: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let cost = CostParams::new(alpha)?;
    let record = match eps {
        Some(eps) => verify_instance(&CounterexampleSpec::new(n, cost, eps)?, DEFAULT_BRUTE_FORCE_CAP)?,
        None => match verify_proposition(n, &cost) {
            Ok(r) => r,
            Err(e @ (Error::OutsideRegime { .. } | Error::WitnessNotFound { .. })) => {
                say!(out, "n = {n}");
                say!(out, "alpha = {}", format_g17(alpha));
                say!(out, "degenerate_gap = {}", format_g17(degenerate_gap(n, &cost)));
                return Err(CliError::Assertion(e.to_string()));
            }
            Err(e) => return Err(e.into()),
        },
    };
    if let Some(path) = emit_points {
        let file = PointsFile {
            x: record.x.clone(),
            y: record.y.clone(),
        };
        let mut json = serde_json::to_string_pretty(&file).expect("points serialize");
        json.push('\n');
        write_atomic(path, json.as_bytes()).map_err(|e| io_err(path, e))?;
    }
    print_record(out, &record)?;
    if record.holds() {
        say!(out, "result = holds");
        Ok(EXIT_OK)
    } else {
        say!(out, "result = fails");
        if !in_proposition_regime(n, &cost) {
            let _ = writeln!(err, "note: n = {n} is not above 2 + 2^alpha");
        }
        Err(CliError::Assertion(
            "F_id < max and F_aid < max do not both hold strictly".into(),
        ))
    }
}

fn cmd_sweep(
    n: usize,
    alpha: f64,
    grid: Option<Vec<f64>>,
    with_brute_force: bool,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let cost = CostParams::new(alpha)?;
    let grid = match grid {
        Some(g) => g,
        None => default_epsilon_grid(n)?,
    };
    let entries = sweep_epsilon(n, &cost, &grid, with_brute_force)?;
    for failure in entries.iter().filter_map(|e| e.as_ref().err()) {
        let _ = writeln!(
            err,
            "warning: epsilon {} skipped: {}",
            format_g17(failure.epsilon),
            failure.error
        );
    }
    let mut csv = Vec::new();
    write_sweep_csv(&entries, &mut csv).expect("in-memory write");
    emit(out, path, &csv)?;
    Ok(EXIT_OK)
}

fn cmd_montecarlo(
    n: usize,
    alpha: f64,
    trials: u64,
    seed: u64,
    dist: &str,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let cost = CostParams::new(alpha)?;
    let distribution = dist.parse()?;
    let report = monte_carlo_study(n, &cost, trials, seed, distribution)?;
    let json = report_to_json(&report);
    emit(out, path, json.as_bytes())?;
    if path.is_some() {
        say!(out, "fraction_id_or_aid = {}", format_g17(report.fraction_id_or_aid));
    }
    Ok(EXIT_OK)
}
