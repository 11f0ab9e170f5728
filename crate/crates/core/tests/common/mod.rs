//! Reference implementations used only by tests. Nothing here calls into the
//! crate's evaluation or enumeration code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `1/2 * sum_{i,k} |x_i - x_k|^a |y_s(i) - y_s(k)|^a` straight from the definition.
pub fn naive_assignment(x: &[f64], y: &[f64], sigma: &[usize], a: f64) -> f64 {
    let n = x.len();
    let mut full = 0.0;
    for i in 0..n {
        for k in 0..n {
            full += (x[i] - x[k]).abs().powf(a) * (y[sigma[i]] - y[sigma[k]]).abs().powf(a);
        }
    }
    0.5 * full
}

pub fn naive_gm(x: &[f64], y: &[f64], sigma: &[usize], a: f64) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for i in 0..n {
        for k in 0..n {
            let d = (x[i] - x[k]).abs().powf(a) - (y[sigma[i]] - y[sigma[k]]).abs().powf(a);
            total += d * d;
        }
    }
    total / (n * n) as f64
}

/// All permutations of `0..n` by Heap's algorithm (not lexicographic).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        heap(k - 1, a, out);
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Exhaustive optimum of `score` with its tie set, sorted lexicographically.
pub fn exhaustive<F: Fn(&[usize]) -> f64>(n: usize, score: F, maximize: bool) -> (f64, Vec<Vec<usize>>) {
    let perms = all_permutations(n);
    let vals: Vec<f64> = perms.iter().map(|p| score(p)).collect();
    let best = if maximize {
        vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    } else {
        vals.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let tol = 1e-9 * (1.0 + best.abs());
    let mut set: Vec<Vec<usize>> = perms
        .into_iter()
        .zip(vals)
        .filter(|(_, v)| (v - best).abs() <= tol)
        .map(|(p, _)| p)
        .collect();
    set.sort();
    (best, set)
}

/// Strictly increasing points built from positive gaps.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(n);
    let mut cur: f64 = rng.random_range(-5.0..5.0);
    for _ in 0..n {
        v.push(cur);
        cur += rng.random_range(0.05..2.0);
    }
    v
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
