//! The cyclic counterexample family.
//!
//! For `n > 3` and `0 < eps < 2/(n-3)`:
//!
//! ```text
//! x = (-1, (3-n)eps/2, (5-n)eps/2, ..., (n-3)eps/2, 1)
//! y = (-1, -1+eps, eps, 2eps, ..., (n-2)eps)
//! ```
//!
//! `x` is antisymmetric, so the identity and anti-identity tie. As `eps -> 0`
//! the identity tends to `2^a + (n-2)` while the cyclic shift tends to
//! `2(n-2)`, so for `n > 2 + 2^a` the cyclic shift wins for small `eps`
//! and neither baseline is optimal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::objective::{assignment_value, PairCosts};
use crate::solvers::{solve_brute_force, within_tie, DEFAULT_BRUTE_FORCE_CAP};
use crate::types::{CostParams, Permutation, PointConfiguration};

/// Halvings tried by [`find_witness_epsilon`].
pub const WITNESS_MAX_HALVINGS: u32 = 60;

/// Margin a witness must exceed.
pub const WITNESS_MIN_MARGIN: f64 = 1e-9;

/// Upper end `2/(n-3)` of the admissible epsilon interval.
pub fn epsilon_upper_bound(n: usize) -> f64 {
    2.0 / (n as f64 - 3.0)
}

/// `n > 2 + 2^alpha`.
pub fn in_proposition_regime(n: usize, cost: &CostParams) -> bool {
    degenerate_gap(n, cost) > 0.0
}

/// `f_cyc(0) - f_id(0) = (n - 2) - 2^alpha`.
pub fn degenerate_gap(n: usize, cost: &CostParams) -> f64 {
    (n as f64 - 2.0) - 2f64.powf(cost.alpha())
}

fn check_n(n: usize) -> Result<()> {
    if n > 3 {
        Ok(())
    } else {
        Err(Error::InstanceTooSmall(n))
    }
}

/// Parameters of one member of the family; `epsilon` lies in the open interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleSpec {
    n: usize,
    cost: CostParams,
    epsilon: f64,
}

impl CounterexampleSpec {
    pub fn new(n: usize, cost: CostParams, epsilon: f64) -> Result<Self> {
        check_n(n)?;
        let upper = epsilon_upper_bound(n);
        if !(epsilon > 0.0 && epsilon < upper) {
            return Err(Error::EpsilonOutOfRange {
                epsilon,
                upper,
                interval: "(0, 2/(n-3))",
            });
        }
        Ok(Self { n, cost, epsilon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cost(&self) -> &CostParams {
        &self.cost
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn in_proposition_regime(&self) -> bool {
        in_proposition_regime(self.n, &self.cost)
    }
}

fn raw_x(n: usize, eps: f64) -> Vec<f64> {
    let nf = n as f64;
    (1..=n)
        .map(|i| match i {
            1 => -1.0,
            i if i == n => 1.0,
            i => (2.0 * i as f64 - nf - 1.0) / 2.0 * eps,
        })
        .collect()
}

fn raw_y(n: usize, eps: f64) -> Vec<f64> {
    (1..=n)
        .map(|i| match i {
            1 => -1.0,
            2 => -1.0 + eps,
            i => (i as f64 - 2.0) * eps,
        })
        .collect()
}

/// The points `(x(eps), y(eps))`.
pub fn construct_instance(spec: &CounterexampleSpec) -> Result<(PointConfiguration, PointConfiguration)> {
    let x = PointConfiguration::new(raw_x(spec.n, spec.epsilon))?;
    let y = PointConfiguration::new(raw_y(spec.n, spec.epsilon))?;
    Ok((x, y))
}

/// Like [`CounterexampleSpec::new`] but admits `eps = 0`.
fn check_closed_form_args(n: usize, epsilon: f64) -> Result<()> {
    check_n(n)?;
    let upper = epsilon_upper_bound(n);
    if !(epsilon >= 0.0 && epsilon < upper) {
        return Err(Error::EpsilonOutOfRange {
            epsilon,
            upper,
            interval: "[0, 2/(n-3))",
        });
    }
    Ok(())
}

/// `f_id(eps) = F_id(x(eps), y(eps))` via its expansion into the pairs among
/// positions `3..n-1` and those touching positions `1`, `2` or `n`.
///
/// Defined at `eps = 0`, where it equals `2^alpha + (n - 2)`.
pub fn f_id_closed_form(n: usize, cost: &CostParams, epsilon: f64) -> Result<f64> {
    check_closed_form_args(n, epsilon)?;
    let c = |v: f64| cost.pow_abs(v);
    let e = epsilon;
    let e_a = c(e);
    let nf = n as f64;
    let mid = |i: usize| (2.0 * i as f64 - nf - 1.0) / 2.0 * e;

    // pairs 3 <= i < k <= n-1
    let mut inner = 0.0;
    for i in 3..n {
        for k in (i + 1)..n {
            let d = c((k - i) as f64);
            inner += d * d;
        }
    }
    let inner = e_a * e_a * inner;

    // (i, n) for 3 <= i <= n-1
    let to_last: f64 = (3..n).map(|i| c(mid(i) - 1.0) * c(i as f64 - nf)).sum();
    let to_last = e_a * to_last;

    // (1, 2)
    let first_second = e_a * c((3.0 - nf) / 2.0 * e + 1.0);

    // (2, k) for 3 <= k <= n-1
    let from_second: f64 = (3..n).map(|k| c(2.0 - k as f64) * c((k as f64 - 3.0) * e + 1.0)).sum();
    let from_second = e_a * from_second;

    // (1, k) for 3 <= k <= n-1
    let from_first: f64 = (3..n).map(|k| c(mid(k) + 1.0) * c((k as f64 - 2.0) * e + 1.0)).sum();

    // (1, n)
    let ends = 2f64.powf(cost.alpha()) * c((nf - 2.0) * e + 1.0);

    // (2, n)
    let second_last = c((3.0 - nf) / 2.0 * e - 1.0) * c((nf - 3.0) * e + 1.0);

    Ok(inner + to_last + first_second + from_second + from_first + ends + second_last)
}

/// `f_cyc(eps) = F_cyc(x(eps), y(eps))` with `cyc(i) = i + 1 (mod n)`.
///
/// Defined at `eps = 0`, where it equals `2(n - 2)`.
pub fn f_cyc_closed_form(n: usize, cost: &CostParams, epsilon: f64) -> Result<f64> {
    check_closed_form_args(n, epsilon)?;
    let c = |v: f64| cost.pow_abs(v);
    let e = epsilon;
    let e_a = c(e);
    let nf = n as f64;
    let mid = |i: usize| (2.0 * i as f64 - nf - 1.0) / 2.0 * e;

    // pairs 2 <= i < k <= n-1
    let mut inner = 0.0;
    for i in 2..n {
        for k in (i + 1)..n {
            let d = c((k - i) as f64);
            inner += d * d;
        }
    }
    let inner = e_a * e_a * inner;

    // (1, n)
    let ends = 2f64.powf(cost.alpha()) * e_a;

    // (1, k) for 2 <= k <= n-1
    let from_first: f64 = (2..n).map(|k| c(mid(k) + 1.0) * c((k as f64 - 2.0) * e + 1.0)).sum();

    // (i, n) for 2 <= i <= n-1
    let to_last: f64 = (2..n).map(|i| c(mid(i) - 1.0) * c((i as f64 - 1.0) * e + 1.0)).sum();

    Ok(inner + ends + from_first + to_last)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub epsilon: f64,
    /// `f_cyc(epsilon) - f_id(epsilon)`.
    pub margin: f64,
    /// `k` in `epsilon = 2/(n-3) * 2^-k`.
    pub halvings: u32,
}

/// First `eps_k = 2/(n-3) * 2^-k`, `k = 1..=60`, with
/// `f_cyc(eps_k) - f_id(eps_k) > 1e-9`.
///
/// The margin is not monotone in `eps`, so this walks a fixed grid instead
/// of bisecting.
pub fn find_witness_epsilon(n: usize, cost: &CostParams) -> Result<Witness> {
    check_n(n)?;
    let upper = epsilon_upper_bound(n);
    for k in 1..=WITNESS_MAX_HALVINGS {
        let epsilon = upper * 2f64.powi(-(k as i32));
        let margin = f_cyc_closed_form(n, cost, epsilon)? - f_id_closed_form(n, cost, epsilon)?;
        if margin > WITNESS_MIN_MARGIN {
            return Ok(Witness {
                epsilon,
                margin,
                halvings: k,
            });
        }
    }
    Err(Error::WitnessNotFound {
        n,
        alpha: cost.alpha(),
        halvings: WITNESS_MAX_HALVINGS,
        degenerate_gap: degenerate_gap(n, cost),
    })
}

/// Audit record of one brute-force check of the counterexample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub n: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub degenerate_gap: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub f_id: f64,
    pub f_aid: f64,
    pub f_id_closed_form: f64,
    pub f_cyc: f64,
    pub f_cyc_closed_form: f64,
    pub f_max: f64,
    pub maximizers: Vec<Permutation>,
    /// Informational only: the cyclic shift need not be a maximizer itself.
    pub cyc_is_maximizer: bool,
    pub evaluations: u64,
}

/// Relative tolerance for the baseline tie on antisymmetric `x`.
pub const BASELINE_TIE_TOLERANCE: f64 = 1e-12;

impl VerificationRecord {
    pub fn baselines_tie(&self) -> bool {
        (self.f_id - self.f_aid).abs() <= BASELINE_TIE_TOLERANCE * self.f_id.abs().max(self.f_aid.abs()).max(1.0)
    }

    /// Strict `F_id < max` and `F_a-id < max`.
    pub fn max_exceeds_baselines(&self) -> bool {
        self.f_max > self.f_id && self.f_max > self.f_aid
    }

    pub fn max_dominates_cyc(&self) -> bool {
        within_tie(self.f_cyc_closed_form, self.f_max) || self.f_max >= self.f_cyc_closed_form
    }

    pub fn holds(&self) -> bool {
        self.baselines_tie() && self.max_exceeds_baselines() && self.max_dominates_cyc()
    }
}

/// Brute-forces the instance at `spec` and records every objective involved.
pub fn verify_instance(spec: &CounterexampleSpec, n_cap: usize) -> Result<VerificationRecord> {
    let (x, y) = construct_instance(spec)?;
    let (n, cost, eps) = (spec.n, spec.cost, spec.epsilon);
    let solved = solve_brute_force(&x, &y, &cost, n_cap)?;

    let cx = PairCosts::new(&x, &cost);
    let cy = PairCosts::new(&y, &cost);
    let cyc = Permutation::cyclic(n);
    let f_id = assignment_value(&cx, &cy, Permutation::identity(n).as_slice());
    let f_aid = assignment_value(&cx, &cy, Permutation::anti_identity(n).as_slice());
    let f_cyc = assignment_value(&cx, &cy, cyc.as_slice());

    Ok(VerificationRecord {
        n,
        alpha: cost.alpha(),
        epsilon: eps,
        degenerate_gap: degenerate_gap(n, &cost),
        f_id,
        f_aid,
        f_id_closed_form: f_id_closed_form(n, &cost, eps)?,
        f_cyc,
        f_cyc_closed_form: f_cyc_closed_form(n, &cost, eps)?,
        f_max: solved.best_value,
        cyc_is_maximizer: solved.contains(&cyc),
        maximizers: solved.maximizers,
        evaluations: solved.evaluations,
        x: x.into_vec(),
        y: y.into_vec(),
    })
}

/// Finds a witness epsilon for `(n, alpha)` and verifies it by brute force.
///
/// Requires `n > 2 + 2^alpha` and `n <= DEFAULT_BRUTE_FORCE_CAP`.
pub fn verify_proposition(n: usize, cost: &CostParams) -> Result<VerificationRecord> {
    check_n(n)?;
    if !in_proposition_regime(n, cost) {
        return Err(Error::OutsideRegime {
            n,
            alpha: cost.alpha(),
            degenerate_gap: degenerate_gap(n, cost),
        });
    }
    if n > DEFAULT_BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap {
            n,
            cap: DEFAULT_BRUTE_FORCE_CAP,
        });
    }
    let witness = find_witness_epsilon(n, cost)?;
    verify_instance(&CounterexampleSpec::new(n, *cost, witness.epsilon)?, DEFAULT_BRUTE_FORCE_CAP)
}
