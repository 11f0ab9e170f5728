//! Evaluation of the assignment, Gromov-Monge and Gromov-Wasserstein
//! objectives for power costs on the real line.
//!
//! For sorted points `x`, `y` of equal length `n` and a permutation `sigma`,
//!
//! ```text
//! F_sigma(x, y) = sum_{i<k} |x_i - x_k|^a |y_sigma(i) - y_sigma(k)|^a
//! GM_sigma(x, y) = 1/n^2 sum_{i,k} (|x_i - x_k|^a - |y_sigma(i) - y_sigma(k)|^a)^2
//! ```
//!
//! and `n^2 GM_sigma = sum c(x)^2 - 4 F_sigma + sum c(y)^2`, so minimizing the
//! map objective is the same as maximizing `F`.

use crate::error::{Error, Result};
use crate::types::{CostParams, DiscreteMeasure, Permutation, PointConfiguration, TransportPlan};

/// Symmetric matrix of pairwise costs `c(p_i, p_k)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCosts {
    n: usize,
    data: Vec<f64>,
}

impl PairCosts {
    pub fn new(points: &PointConfiguration, cost: &CostParams) -> Self {
        let p = points.as_slice();
        let n = p.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in (i + 1)..n {
                let c = cost.cost(p[i], p[k]);
                data[i * n + k] = c;
                data[k * n + i] = c;
            }
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i * self.n + k]
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// `sum_{i,k} c(p_i, p_k)^2` over the full square.
    pub fn sum_of_squares(&self) -> f64 {
        self.data.iter().map(|c| c * c).sum()
    }
}

/// `F` for 0-based images, strict upper triangle.
#[inline]
pub(crate) fn assignment_value(cx: &PairCosts, cy: &PairCosts, images: &[usize]) -> f64 {
    let n = images.len();
    let mut total = 0.0;
    for i in 0..n {
        let row_x = cx.row(i);
        let row_y = cy.row(images[i]);
        for k in (i + 1)..n {
            total += row_x[k] * row_y[images[k]];
        }
    }
    total
}

pub(crate) fn check_dims(x: &PointConfiguration, y: &PointConfiguration, sigma: &Permutation) -> Result<()> {
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "y",
            expected: x.len(),
            found: y.len(),
        });
    }
    if sigma.len() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "permutation",
            expected: x.len(),
            found: sigma.len(),
        });
    }
    Ok(())
}

/// The assignment objective `F_sigma(x, y)`.
pub fn assignment_objective(
    x: &PointConfiguration,
    y: &PointConfiguration,
    sigma: &Permutation,
    cost: &CostParams,
) -> Result<f64> {
    check_dims(x, y, sigma)?;
    let cx = PairCosts::new(x, cost);
    let cy = PairCosts::new(y, cost);
    Ok(assignment_value(&cx, &cy, sigma.as_slice()))
}

/// The Gromov-Monge map objective, normalized by `1/n^2`.
pub fn gm_objective(
    x: &PointConfiguration,
    y: &PointConfiguration,
    sigma: &Permutation,
    cost: &CostParams,
) -> Result<f64> {
    check_dims(x, y, sigma)?;
    let cx = PairCosts::new(x, cost);
    let cy = PairCosts::new(y, cost);
    Ok(gm_value(&cx, &cy, sigma.as_slice()))
}

pub(crate) fn gm_value(cx: &PairCosts, cy: &PairCosts, images: &[usize]) -> f64 {
    let n = images.len();
    let mut total = 0.0;
    for i in 0..n {
        for k in 0..n {
            let d = cx.get(i, k) - cy.get(images[i], images[k]);
            total += d * d;
        }
    }
    total / (n * n) as f64
}

/// Both sides of the expansion of the unnormalized map objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RearrangementTerms {
    /// `n^2 * gm_objective`.
    pub lhs: f64,
    /// `sum_{i,k} c(x_i, x_k)^2`.
    pub sum_x_squared: f64,
    /// `F_sigma(x, y)`, so the cross term is `-2 * (2 F_sigma)`.
    pub assignment: f64,
    /// `sum_{i,k} c(y_i, y_k)^2`.
    pub sum_y_squared: f64,
}

impl RearrangementTerms {
    pub fn rhs(&self) -> f64 {
        self.sum_x_squared - 4.0 * self.assignment + self.sum_y_squared
    }

    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs()
    }

    /// Sum of the absolute sizes of all terms involved.
    pub fn magnitude(&self) -> f64 {
        self.lhs.abs() + self.sum_x_squared.abs() + 4.0 * self.assignment.abs() + self.sum_y_squared.abs()
    }

    /// `|residual| / (1 + magnitude)`.
    pub fn relative_residual(&self) -> f64 {
        self.residual().abs() / (1.0 + self.magnitude())
    }
}

pub fn rearrangement_terms(
    x: &PointConfiguration,
    y: &PointConfiguration,
    sigma: &Permutation,
    cost: &CostParams,
) -> Result<RearrangementTerms> {
    check_dims(x, y, sigma)?;
    let cx = PairCosts::new(x, cost);
    let cy = PairCosts::new(y, cost);
    let n = x.len();
    Ok(RearrangementTerms {
        lhs: (n * n) as f64 * gm_value(&cx, &cy, sigma.as_slice()),
        sum_x_squared: cx.sum_of_squares(),
        assignment: assignment_value(&cx, &cy, sigma.as_slice()),
        sum_y_squared: cy.sum_of_squares(),
    })
}

/// `n^2 GM_sigma - [sum c(x)^2 - 2 (2 F_sigma) + sum c(y)^2]`; zero up to rounding.
pub fn rearrangement_residual(
    x: &PointConfiguration,
    y: &PointConfiguration,
    sigma: &Permutation,
    cost: &CostParams,
) -> Result<f64> {
    rearrangement_terms(x, y, sigma, cost).map(|t| t.residual())
}

/// Gromov-Wasserstein quadruple sum for a given coupling.
///
/// No minimization over couplings is attempted; this only evaluates
/// `sum_{i,j,k,l} |c(x_i,x_k) - c(y_j,y_l)|^2 plan_ij plan_kl`.
pub fn gw_plan_objective(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    plan: &TransportPlan,
    cost: &CostParams,
) -> Result<f64> {
    plan.check_marginals(mu.weights(), nu.weights())?;
    let cx = PairCosts::new(mu.support(), cost);
    let cy = PairCosts::new(nu.support(), cost);
    let (n, m) = (plan.rows(), plan.cols());

    let support: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, plan.get(i, j)))
        .filter(|&(_, _, w)| w > 0.0)
        .collect();

    let mut total = 0.0;
    for &(i, j, w_ij) in &support {
        let mut inner = 0.0;
        for &(k, l, w_kl) in &support {
            let d = cx.get(i, k) - cy.get(j, l);
            inner += d * d * w_kl;
        }
        total += w_ij * inner;
    }
    Ok(total)
}

/// Embeds `sigma` as the coupling with entry `1/n` at `(i, sigma(i))`.
pub fn plan_from_permutation(sigma: &Permutation) -> TransportPlan {
    let n = sigma.len();
    let mut entries = vec![0.0; n * n];
    let w = 1.0 / n as f64;
    for (i, &j) in sigma.as_slice().iter().enumerate() {
        entries[i * n + j] = w;
    }
    TransportPlan::new(n, n, entries).expect("permutation plan is non-negative and square")
}
