use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cost exponent must be a finite positive number, got {0}")]
    InvalidAlpha(f64),

    #[error("point configuration is empty")]
    EmptyConfiguration,

    #[error("coordinate {index} is not finite ({value})")]
    NonFiniteCoordinate { index: usize, value: f64 },

    /// `index` is 1-based and names the first coordinate that fails to exceed its predecessor.
    #[error("coordinates must be strictly increasing: x[{index}] = {value} does not exceed x[{prev_index}] = {prev_value}", prev_index = .index - 1)]
    NotStrictlyIncreasing {
        index: usize,
        value: f64,
        prev_value: f64,
    },

    #[error("dimension mismatch: {what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid transport plan: {0}")]
    InvalidPlan(String),

    #[error("plan {side} marginal {index} is {found}, expected {expected}")]
    MarginalViolation {
        side: &'static str,
        index: usize,
        expected: f64,
        found: f64,
    },

    #[error("n = {n} exceeds the brute-force cap of {cap} ({n}! permutations); use local search instead")]
    BruteForceCap { n: usize, cap: usize },

    #[error("restarts must be at least 1")]
    NoRestarts,

    #[error("counterexample family requires n > 3, got {0}")]
    InstanceTooSmall(usize),

    #[error("epsilon {epsilon} outside the admissible interval {interval} (upper bound 2/(n-3) = {upper})")]
    EpsilonOutOfRange {
        epsilon: f64,
        upper: f64,
        interval: &'static str,
    },

    #[error(
        "no witness epsilon with positive margin after {halvings} halvings for n = {n}, alpha = {alpha}; \
         degenerate gap (n-2) - 2^alpha = {degenerate_gap}"
    )]
    WitnessNotFound {
        n: usize,
        alpha: f64,
        halvings: u32,
        degenerate_gap: f64,
    },

    #[error(
        "n = {n}, alpha = {alpha} is outside the regime n > 2 + 2^alpha; \
         degenerate gap (n-2) - 2^alpha = {degenerate_gap} is not positive"
    )]
    OutsideRegime { n: usize, alpha: f64, degenerate_gap: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}
