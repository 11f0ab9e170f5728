//! Domain types: cost exponent, point configurations, permutations, and
//! discrete measures with their couplings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exponent of the power cost `c(s, t) = |s - t|^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    alpha: f64,
}

impl CostParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self { alpha })
        } else {
            Err(Error::InvalidAlpha(alpha))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `|s - t|^alpha`, with `|0|^alpha = 0`.
    #[inline]
    pub fn cost(&self, s: f64, t: f64) -> f64 {
        self.pow_abs(s - t)
    }

    #[inline]
    pub(crate) fn pow_abs(&self, v: f64) -> f64 {
        let d = v.abs();
        if d == 0.0 {
            0.0
        } else {
            d.powf(self.alpha)
        }
    }
}

/// Strictly increasing, finite real coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    points: Vec<f64>,
}

impl PointConfiguration {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        for (i, &v) in points.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteCoordinate {
                    index: i + 1,
                    value: v,
                });
            }
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::NotStrictlyIncreasing {
                    index: i + 2,
                    value: w[1],
                    prev_value: w[0],
                });
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.points
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.points
    }

    /// `x_i = -x_{n-i+1}` for every `i`, up to `tol` absolute.
    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        let n = self.points.len();
        (0..n).all(|i| (self.points[i] + self.points[n - 1 - i]).abs() <= tol)
    }
}

/// A bijection of `{1, ..., n}`.
///
/// Stored 0-based; constructors and `Display` use the 1-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from 0-based images.
    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &j) in images.iter().enumerate() {
            if j >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {} of position {} is outside 1..={}",
                    j + 1,
                    i + 1,
                    n
                )));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidPermutation(format!(
                    "image {} appears more than once",
                    j + 1
                )));
            }
        }
        Ok(Self { images })
    }

    /// Builds a permutation from 1-based images, e.g. `[3, 1, 2]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let zero = images
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                j.checked_sub(1).ok_or_else(|| {
                    Error::InvalidPermutation(format!("image 0 at position {} (images are 1-based)", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_zero_based(zero)
    }

    pub(crate) fn from_zero_based_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_zero_based(images.clone()).is_ok());
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// `a-id(i) = n - i + 1`.
    pub fn anti_identity(n: usize) -> Self {
        Self {
            images: (0..n).rev().collect(),
        }
    }

    /// `cyc(i) = i + 1` for `i < n`, `cyc(n) = 1`.
    pub fn cyclic(n: usize) -> Self {
        Self {
            images: (0..n).map(|i| (i + 1) % n.max(1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// 0-based images.
    pub fn as_slice(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|j| j + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                what: "permutation",
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Self {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_anti_identity(&self) -> bool {
        let n = self.images.len();
        self.images.iter().enumerate().all(|(i, &j)| j == n - 1 - i)
    }

    /// Dash-separated 1-based images, e.g. `2-3-4-5-6-1`.
    pub fn to_dashed(&self) -> String {
        self.join("-")
    }

    fn join(&self, sep: &str) -> String {
        self.images
            .iter()
            .map(|j| (j + 1).to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dashed())
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_dashed())
    }
}

/// Parses 1-based images separated by commas or dashes: `3,1,2` or `3-1-2`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split([',', '-'])
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("cannot parse {tok:?} as an index")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&images)
    }
}

/// Tolerance on the total mass of a [`DiscreteMeasure`].
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Tolerance on plan marginals against the measure weights.
pub const MARGINAL_TOLERANCE: f64 = 1e-10;

/// `sum_i p_i delta_{x_i}` with non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    support: PointConfiguration,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(support: PointConfiguration, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != support.len() {
            return Err(Error::DimensionMismatch {
                what: "weights",
                expected: support.len(),
                found: weights.len(),
            });
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidWeights(format!(
                "weight {} is {w}; weights must be finite and non-negative",
                i + 1
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { support, weights })
    }

    pub fn uniform(support: PointConfiguration) -> Self {
        let n = support.len();
        Self {
            weights: vec![1.0 / n as f64; n],
            support,
        }
    }

    pub fn support(&self) -> &PointConfiguration {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Non-negative `rows x cols` coupling matrix, row-major.
///
/// Marginals are checked against a pair of measures with [`TransportPlan::check_marginals`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl TransportPlan {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "plan entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidPlan(format!(
                "entry ({}, {}) is {}; entries must be finite and non-negative",
                pos / cols + 1,
                pos % cols + 1,
                entries[pos]
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                what: "plan row",
                expected: cols,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// Checks `plan 1 = p` and `1^T plan = q^T` within [`MARGINAL_TOLERANCE`].
    pub fn check_marginals(&self, p: &[f64], q: &[f64]) -> Result<()> {
        if p.len() != self.rows {
            return Err(Error::DimensionMismatch {
                what: "plan rows",
                expected: p.len(),
                found: self.rows,
            });
        }
        if q.len() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "plan columns",
                expected: q.len(),
                found: self.cols,
            });
        }
        let sides = [("row", self.row_sums(), p), ("column", self.col_sums(), q)];
        for (side, sums, target) in sides {
            for (index, (&found, &expected)) in sums.iter().zip(target).enumerate() {
                if (found - expected).abs() > MARGINAL_TOLERANCE {
                    return Err(Error::MarginalViolation {
                        side,
                        index: index + 1,
                        expected,
                        found,
                    });
                }
            }
        }
        Ok(())
    }
}
