//! Maximization of the assignment objective over all permutations.
//!
//! [`solve_brute_force`] enumerates `S_n` exactly, [`solve_local_search`]
//! runs steepest ascent over pairwise swaps, and [`evaluate_baselines`]
//! reports the identity and anti-identity values.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::objective::{assignment_value, PairCosts};
use crate::types::{CostParams, Permutation, PointConfiguration};

/// Largest `n` enumerated by default (`11! ≈ 4e7`).
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 11;

/// Relative tolerance for collecting co-maximizers.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Minimum gain for a swap to be taken during local search.
pub const IMPROVEMENT_THRESHOLD: f64 = 1e-12;

/// `best - value <= TIE_TOLERANCE * (1 + |best|)`.
#[inline]
pub fn within_tie(value: f64, best: f64) -> bool {
    best - value <= TIE_TOLERANCE * (1.0 + best.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Brute,
    Local,
    Baseline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub best_value: f64,
    /// Every permutation found within tie tolerance of `best_value`, lexicographic.
    pub maximizers: Vec<Permutation>,
    pub method: Method,
    pub evaluations: u64,
}

impl SolveResult {
    pub fn contains(&self, sigma: &Permutation) -> bool {
        self.maximizers.iter().any(|m| m == sigma)
    }
}

fn check_pair(x: &PointConfiguration, y: &PointConfiguration) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "y",
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(())
}

/// Advances `slice` to its lexicographic successor and returns the first
/// index that changed, or `None` after the last permutation.
fn next_permutation(slice: &mut [usize]) -> Option<usize> {
    let n = slice.len();
    if n < 2 {
        return None;
    }
    let mut i = n - 1;
    while i > 0 && slice[i - 1] >= slice[i] {
        i -= 1;
    }
    if i == 0 {
        return None;
    }
    let pivot = i - 1;
    let mut j = n - 1;
    while slice[j] <= slice[pivot] {
        j -= 1;
    }
    slice.swap(pivot, j);
    slice[i..].reverse();
    Some(pivot)
}

#[derive(Debug, Default)]
struct Candidates {
    best: f64,
    entries: Vec<(f64, Vec<usize>)>,
}

impl Candidates {
    fn new() -> Self {
        Self {
            best: f64::NEG_INFINITY,
            entries: Vec::new(),
        }
    }

    fn offer(&mut self, value: f64, images: &[usize]) {
        if value > self.best {
            self.best = value;
            let best = self.best;
            self.entries.retain(|(v, _)| within_tie(*v, best));
            self.entries.push((value, images.to_vec()));
        } else if within_tie(value, self.best) {
            self.entries.push((value, images.to_vec()));
        }
    }
}

/// All permutations whose first image is `first`, in lexicographic order.
///
/// Keeps prefix sums of `F` so that a successor only recomputes the pairs
/// touching the positions that changed.
fn enumerate_branch(cx: &PairCosts, cy: &PairCosts, first: usize) -> (Candidates, u64) {
    let n = cx.len();
    let mut perm: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&j| j != first)).collect();
    let mut prefix = vec![0.0; n + 1];
    let extend = |perm: &[usize], prefix: &mut [f64], from: usize| {
        for k in from..n {
            let yk = perm[k];
            let add: f64 = perm[..k].iter().enumerate().map(|(i, &yi)| cx.get(i, k) * cy.get(yi, yk)).sum();
            prefix[k + 1] = prefix[k] + add;
        }
    };
    extend(&perm, &mut prefix, 1);

    let mut found = Candidates::new();
    let mut evaluations = 0u64;
    loop {
        evaluations += 1;
        found.offer(prefix[n], &perm);
        match next_permutation(&mut perm[1..]) {
            Some(pivot) => extend(&perm, &mut prefix, pivot + 1),
            None => break,
        }
    }
    (found, evaluations)
}

/// Exact maximum of `F_sigma(x, y)` over all `n!` permutations.
///
/// Branches on the first image and evaluates branches in parallel; the
/// merged maximizer list is in lexicographic order regardless of scheduling.
pub fn solve_brute_force(
    x: &PointConfiguration,
    y: &PointConfiguration,
    cost: &CostParams,
    n_cap: usize,
) -> Result<SolveResult> {
    check_pair(x, y)?;
    let n = x.len();
    if n > n_cap {
        return Err(Error::BruteForceCap { n, cap: n_cap });
    }
    let cx = PairCosts::new(x, cost);
    let cy = PairCosts::new(y, cost);

    let branches: Vec<(Candidates, u64)> = (0..n)
        .into_par_iter()
        .map(|first| enumerate_branch(&cx, &cy, first))
        .collect();

    let best = branches.iter().map(|(c, _)| c.best).fold(f64::NEG_INFINITY, f64::max);
    let evaluations = branches.iter().map(|(_, e)| e).sum();
    let maximizers = branches
        .into_iter()
        .flat_map(|(c, _)| c.entries)
        .filter(|(v, _)| within_tie(*v, best))
        .map(|(_, images)| Permutation::from_zero_based_unchecked(images))
        .collect();

    Ok(SolveResult {
        best_value: best,
        maximizers,
        method: Method::Brute,
        evaluations,
    })
}

/// Change in `F` from swapping the images at positions `a` and `b`.
#[inline]
fn swap_delta(cx: &PairCosts, cy: &PairCosts, images: &[usize], a: usize, b: usize) -> f64 {
    let (ya, yb) = (cy.row(images[a]), cy.row(images[b]));
    let (xa, xb) = (cx.row(a), cx.row(b));
    let mut delta = 0.0;
    for (k, &yk) in images.iter().enumerate() {
        if k != a && k != b {
            delta += (xa[k] - xb[k]) * (yb[yk] - ya[yk]);
        }
    }
    delta
}

/// Steepest ascent over all transpositions until no swap gains more than
/// [`IMPROVEMENT_THRESHOLD`].
fn climb(cx: &PairCosts, cy: &PairCosts, mut images: Vec<usize>) -> (Vec<usize>, f64, u64) {
    let n = images.len();
    let mut evaluations = 1u64;
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..n {
            for b in (a + 1)..n {
                evaluations += 1;
                let delta = swap_delta(cx, cy, &images, a, b);
                if delta > IMPROVEMENT_THRESHOLD && best.is_none_or(|(d, _, _)| delta > d) {
                    best = Some((delta, a, b));
                }
            }
        }
        match best {
            Some((_, a, b)) => images.swap(a, b),
            None => break,
        }
    }
    let value = assignment_value(cx, cy, &images);
    (images, value, evaluations)
}

fn restart_origin(n: usize, restart: usize, seed: u64) -> Vec<usize> {
    match restart {
        0 => (0..n).collect(),
        1 => (0..n).rev().collect(),
        r => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut images: Vec<usize> = (0..n).collect();
            images.shuffle(&mut rng);
            images
        }
    }
}

/// Multi-start steepest ascent over the pairwise-swap neighborhood.
///
/// The first start is the identity, the second the anti-identity, and the
/// rest are uniform random permutations; restart `r` draws from ChaCha8
/// stream `r` of `seed`, so the result is fixed by `(restarts, seed)`.
pub fn solve_local_search(
    x: &PointConfiguration,
    y: &PointConfiguration,
    cost: &CostParams,
    restarts: usize,
    seed: u64,
) -> Result<SolveResult> {
    check_pair(x, y)?;
    if restarts == 0 {
        return Err(Error::NoRestarts);
    }
    let n = x.len();
    let cx = PairCosts::new(x, cost);
    let cy = PairCosts::new(y, cost);

    let optima: Vec<(Vec<usize>, f64, u64)> = (0..restarts)
        .into_par_iter()
        .map(|r| climb(&cx, &cy, restart_origin(n, r, seed)))
        .collect();

    let best = optima.iter().map(|o| o.1).fold(f64::NEG_INFINITY, f64::max);
    let evaluations = optima.iter().map(|o| o.2).sum();
    let mut maximizers: Vec<Vec<usize>> = optima
        .into_iter()
        .filter(|o| within_tie(o.1, best))
        .map(|o| o.0)
        .collect();
    maximizers.sort();
    maximizers.dedup();

    Ok(SolveResult {
        best_value: best,
        maximizers: maximizers.into_iter().map(Permutation::from_zero_based_unchecked).collect(),
        method: Method::Local,
        evaluations,
    })
}

/// `(F_id, F_a-id)`.
pub fn evaluate_baselines(x: &PointConfiguration, y: &PointConfiguration, cost: &CostParams) -> Result<(f64, f64)> {
    check_pair(x, y)?;
    let n = x.len();
    let cx = PairCosts::new(x, cost);
    let cy = PairCosts::new(y, cost);
    let f_id = assignment_value(&cx, &cy, Permutation::identity(n).as_slice());
    let f_aid = assignment_value(&cx, &cy, Permutation::anti_identity(n).as_slice());
    Ok((f_id, f_aid))
}

/// The better of the two baselines as a [`SolveResult`].
pub fn solve_baselines(x: &PointConfiguration, y: &PointConfiguration, cost: &CostParams) -> Result<SolveResult> {
    let (f_id, f_aid) = evaluate_baselines(x, y, cost)?;
    let n = x.len();
    let best = f_id.max(f_aid);
    let mut maximizers = Vec::new();
    if within_tie(f_id, best) {
        maximizers.push(Permutation::identity(n));
    }
    if n > 1 && within_tie(f_aid, best) {
        maximizers.push(Permutation::anti_identity(n));
    }
    maximizers.sort();
    Ok(SolveResult {
        best_value: best,
        maximizers,
        method: Method::Baseline,
        evaluations: 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[f64]) -> PointConfiguration {
        PointConfiguration::new(v.to_vec()).unwrap()
    }

    fn one() -> CostParams {
        CostParams::new(1.0).unwrap()
    }

    #[test]
    fn successor_walks_lexicographically() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p).is_some() {
            seen.push(p.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
        assert_eq!(next_permutation(&mut [0]), None);
        assert_eq!(next_permutation(&mut []), None);
    }

    #[test]
    fn single_point() {
        let r = solve_brute_force(&pts(&[3.0]), &pts(&[-1.0]), &one(), DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!(r.best_value, 0.0);
        assert_eq!(r.maximizers, vec![Permutation::identity(1)]);
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn two_points_tie() {
        let r = solve_brute_force(&pts(&[0.0, 2.0]), &pts(&[-1.0, 4.0]), &one(), DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!(r.best_value, 10.0);
        assert_eq!(r.maximizers, vec![Permutation::identity(2), Permutation::anti_identity(2)]);
        assert_eq!(r.method, Method::Brute);

        let l = solve_local_search(&pts(&[0.0, 2.0]), &pts(&[-1.0, 4.0]), &one(), 1, 0).unwrap();
        assert_eq!(l.best_value, 10.0);
    }

    #[test]
    fn brute_force_counts_all_permutations() {
        let x = pts(&[0.0, 0.3, 1.1, 2.0, 2.2]);
        let y = pts(&[-1.0, 0.0, 0.4, 0.5, 3.0]);
        let r = solve_brute_force(&x, &y, &one(), 5).unwrap();
        assert_eq!(r.evaluations, 120);
        assert!(!r.maximizers.is_empty());
        let mut sorted = r.maximizers.clone();
        sorted.sort();
        assert_eq!(sorted, r.maximizers);
    }

    #[test]
    fn refuses_above_cap() {
        let x = pts(&[0.0, 1.0, 2.0, 3.0]);
        let err = solve_brute_force(&x, &x, &one(), 3).unwrap_err();
        assert_eq!(err, Error::BruteForceCap { n: 4, cap: 3 });
        assert!(err.to_string().contains("local search"));
    }

    #[test]
    fn swap_delta_matches_full_evaluation() {
        let x = pts(&[-2.0, -0.5, 0.1, 0.9, 1.5, 4.0]);
        let y = pts(&[0.0, 0.2, 1.0, 1.7, 2.0, 2.1]);
        let c = CostParams::new(1.3).unwrap();
        let cx = PairCosts::new(&x, &c);
        let cy = PairCosts::new(&y, &c);
        let base = vec![3, 0, 5, 1, 4, 2];
        let f0 = assignment_value(&cx, &cy, &base);
        for a in 0..6 {
            for b in (a + 1)..6 {
                let mut swapped = base.clone();
                swapped.swap(a, b);
                let direct = assignment_value(&cx, &cy, &swapped) - f0;
                assert!((swap_delta(&cx, &cy, &base, a, b) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn local_search_is_deterministic() {
        let x = pts(&[0.0, 0.1, 0.5, 0.55, 0.9, 1.3, 2.0, 2.4, 3.0]);
        let y = pts(&[-1.0, -0.2, 0.0, 0.3, 0.31, 1.0, 1.5, 1.6, 4.0]);
        let a = solve_local_search(&x, &y, &one(), 12, 7).unwrap();
        let b = solve_local_search(&x, &y, &one(), 12, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(solve_local_search(&x, &y, &one(), 0, 7), Err(Error::NoRestarts));
    }

    #[test]
    fn baseline_examples() {
        let x = pts(&[0.0, 1.0, 3.0]);
        let (f_id, f_aid) = evaluate_baselines(&x, &x, &one()).unwrap();
        // id: 1*1 + 3*3 + 2*2; a-id: 1*2 + 3*3 + 2*1
        assert_eq!(f_id, 14.0);
        assert_eq!(f_aid, 13.0);

        let xs = pts(&[-2.0, -0.5, 0.5, 2.0]);
        let y = pts(&[0.0, 0.1, 3.0, 3.3]);
        let (f_id, f_aid) = evaluate_baselines(&xs, &y, &one()).unwrap();
        assert!((f_id - f_aid).abs() <= 1e-12 * f_id);

        let b = solve_baselines(&x, &x, &one()).unwrap();
        assert_eq!(b.best_value, 14.0);
        assert_eq!(b.maximizers, vec![Permutation::identity(3)]);
        assert_eq!(b.method, Method::Baseline);
    }
}
