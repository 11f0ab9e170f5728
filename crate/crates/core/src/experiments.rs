//! Epsilon sweeps over the counterexample family and the Monte Carlo study
//! of how often the identity or anti-identity is the maximizer.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::counterexample::{
    construct_instance, epsilon_upper_bound, f_cyc_closed_form, f_id_closed_form, CounterexampleSpec,
};
use crate::error::{Error, Result};
use crate::numfmt::format_g17;
use crate::solvers::{solve_brute_force, DEFAULT_BRUTE_FORCE_CAP};
use crate::types::{CostParams, Permutation, PointConfiguration};

/// Number of halvings in [`default_epsilon_grid`].
pub const DEFAULT_GRID_HALVINGS: i32 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub f_id: f64,
    pub f_cyc: f64,
    /// Brute-force maximum; `None` when the sweep ran without brute force.
    pub f_max: Option<f64>,
    /// Lexicographically first maximizer.
    pub argmax: Option<Permutation>,
}

/// A grid point that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub epsilon: f64,
    pub error: Error,
}

pub type SweepEntry = std::result::Result<SweepRow, SweepFailure>;

/// `2/(n-3) * 2^-k` for `k = 1..=20`, decreasing.
pub fn default_epsilon_grid(n: usize) -> Result<Vec<f64>> {
    if n <= 3 {
        return Err(Error::InstanceTooSmall(n));
    }
    let upper = epsilon_upper_bound(n);
    Ok((1..=DEFAULT_GRID_HALVINGS).map(|k| upper * 2f64.powi(-k)).collect())
}

fn sweep_row(n: usize, cost: &CostParams, epsilon: f64, with_brute_force: bool) -> Result<SweepRow> {
    let spec = CounterexampleSpec::new(n, *cost, epsilon)?;
    let f_id = f_id_closed_form(n, cost, epsilon)?;
    let f_cyc = f_cyc_closed_form(n, cost, epsilon)?;
    let (f_max, argmax) = if with_brute_force {
        let (x, y) = construct_instance(&spec)?;
        let solved = solve_brute_force(&x, &y, cost, DEFAULT_BRUTE_FORCE_CAP)?;
        (Some(solved.best_value), solved.maximizers.into_iter().next())
    } else {
        (None, None)
    };
    Ok(SweepRow {
        epsilon,
        f_id,
        f_cyc,
        f_max,
        argmax,
    })
}

/// One entry per grid point, in grid order. Invalid points become
/// [`SweepFailure`] entries rather than aborting the sweep.
pub fn sweep_epsilon(n: usize, cost: &CostParams, grid: &[f64], with_brute_force: bool) -> Result<Vec<SweepEntry>> {
    if n <= 3 {
        return Err(Error::InstanceTooSmall(n));
    }
    if with_brute_force && n > DEFAULT_BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap {
            n,
            cap: DEFAULT_BRUTE_FORCE_CAP,
        });
    }
    Ok(grid
        .par_iter()
        .map(|&epsilon| sweep_row(n, cost, epsilon, with_brute_force).map_err(|error| SweepFailure { epsilon, error }))
        .collect())
}

pub const SWEEP_CSV_HEADER: &str = "epsilon,f_id,f_cyc,f_max,argmax";

/// Writes the sweep as CSV. Missing values (no brute force, or a failed
/// grid point) are left empty.
pub fn write_sweep_csv<W: Write>(entries: &[SweepEntry], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for entry in entries {
        match entry {
            Ok(row) => writeln!(
                out,
                "{},{},{},{},{}",
                format_g17(row.epsilon),
                format_g17(row.f_id),
                format_g17(row.f_cyc),
                row.f_max.map(format_g17).unwrap_or_default(),
                row.argmax.as_ref().map(Permutation::to_dashed).unwrap_or_default(),
            )?,
            Err(failure) => writeln!(out, "{},,,,", format_g17(failure.epsilon))?,
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Uniform on `[0, 1)`.
    Uniform,
    /// Standard normal.
    Gaussian,
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "gaussian" => Ok(Self::Gaussian),
            other => Err(Error::Config(format!(
                "unknown distribution {other:?} (expected \"uniform\" or \"gaussian\")"
            ))),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Gaussian => "gaussian",
        })
    }
}

impl Distribution {
    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Uniform => rng.random::<f64>(),
            Self::Gaussian => rng.sample(StandardNormal),
        }
    }

    /// `n` sorted draws; redraws the whole vector if two coincide.
    pub fn draw_sorted<R: Rng>(&self, rng: &mut R, n: usize) -> PointConfiguration {
        loop {
            let mut v: Vec<f64> = (0..n).map(|_| self.sample(rng)).collect();
            v.sort_by(f64::total_cmp);
            if v.windows(2).all(|w| w[0] != w[1]) {
                return PointConfiguration::new(v).expect("sorted distinct finite draws");
            }
        }
    }
}

/// RNG for trial `trial` of a study: stream `trial` of ChaCha8 keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Only the identity (possibly tied with the anti-identity) is optimal.
    Identity,
    AntiIdentity,
    /// No baseline is among the maximizers.
    Other,
    /// A baseline ties with some non-baseline permutation.
    Tie,
}

/// Classifies a maximizer set. When both baselines tie and nothing else
/// does, the trial counts as [`Outcome::Identity`].
pub fn classify(maximizers: &[Permutation]) -> Outcome {
    let has_id = maximizers.iter().any(Permutation::is_identity);
    let has_aid = maximizers.iter().any(Permutation::is_anti_identity);
    let has_other = maximizers.iter().any(|m| !m.is_identity() && !m.is_anti_identity());
    match (has_id, has_aid, has_other) {
        (true, _, true) | (_, true, true) => Outcome::Tie,
        (true, _, false) => Outcome::Identity,
        (false, true, false) => Outcome::AntiIdentity,
        (false, false, _) => Outcome::Other,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    id: u64,
    aid: u64,
    other: u64,
    ties: u64,
}

impl Tally {
    fn record(mut self, outcome: Outcome) -> Self {
        match outcome {
            Outcome::Identity => self.id += 1,
            Outcome::AntiIdentity => self.aid += 1,
            Outcome::Other => self.other += 1,
            Outcome::Tie => self.ties += 1,
        }
        self
    }

    fn merge(self, o: Self) -> Self {
        Self {
            id: self.id + o.id,
            aid: self.aid + o.aid,
            other: self.other + o.other,
            ties: self.ties + o.ties,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub alpha: f64,
    pub trials: u64,
    pub seed: u64,
    pub distribution: Distribution,
    pub count_id_optimal: u64,
    pub count_aid_optimal: u64,
    pub count_other_optimal: u64,
    pub count_ties: u64,
    pub fraction_id_or_aid: f64,
}

/// Draws `trials` random instances, brute-forces each, and tallies which
/// permutations are optimal.
pub fn monte_carlo_study(
    n: usize,
    cost: &CostParams,
    trials: u64,
    seed: u64,
    distribution: Distribution,
) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::EmptyConfiguration);
    }
    if n > DEFAULT_BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap {
            n,
            cap: DEFAULT_BRUTE_FORCE_CAP,
        });
    }

    let tally = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Outcome> {
            let mut rng = trial_rng(seed, t);
            let x = distribution.draw_sorted(&mut rng, n);
            let y = distribution.draw_sorted(&mut rng, n);
            let solved = solve_brute_force(&x, &y, cost, DEFAULT_BRUTE_FORCE_CAP)?;
            Ok(classify(&solved.maximizers))
        })
        .try_fold(Tally::default, |acc, o| o.map(|o| acc.record(o)))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

    Ok(ExperimentReport {
        n,
        alpha: cost.alpha(),
        trials,
        seed,
        distribution,
        count_id_optimal: tally.id,
        count_aid_optimal: tally.aid,
        count_other_optimal: tally.other,
        count_ties: tally.ties,
        fraction_id_or_aid: (tally.id + tally.aid) as f64 / trials as f64,
    })
}

#[derive(Serialize)]
struct ReportFile<'a> {
    #[serde(flatten)]
    report: &'a ExperimentReport,
    tool_version: &'static str,
}

/// Pretty JSON for the report plus a `tool_version` key, newline-terminated.
pub fn report_to_json(report: &ExperimentReport) -> String {
    let file = ReportFile {
        report,
        tool_version: env!("CARGO_PKG_VERSION"),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("report serializes");
    s.push('\n');
    s
}
