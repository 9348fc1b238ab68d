use thiserror::Error;

/// Errors surfaced by constructors and verification passes.
///
/// Everything here is an input problem or an exhausted numerical budget;
/// internal invariant breaches (dimension mismatches between exponent
/// vectors, evaluation at the excluded origin) panic instead, since they
/// indicate caller bugs rather than bad data.
#[derive(Debug, Error)]
pub enum TodaError {
    #[error("rank n = {0} is outside the supported range 1..=4")]
    UnsupportedRank(usize),

    #[error("expected {expected} gamma entries for n = {n}, found {found}")]
    GammaCount { n: usize, expected: usize, found: usize },

    #[error("gamma[{index}] = {value} violates the integrability requirement gamma_i > -1")]
    GammaOutOfRange { index: usize, value: String },

    #[error("invalid rational literal {0:?}: expected an integer or \"p/q\" with nonzero q")]
    InvalidRational(String),

    #[error("expected n + 1 = {expected} lambda entries, found {found}")]
    LambdaCount { expected: usize, found: usize },

    #[error("at most one lambda slot may be \"auto\"")]
    MultipleAutoLambda,

    #[error("lambda[{index}] must be a positive finite number, got {value}")]
    NonpositiveLambda { index: usize, value: f64 },

    #[error(
        "lambda product {found:e} misses the constraint value \
         2^(-n(n+1)) * prod_(1<=i<=j<=n) (mu_i + ... + mu_j)^(-2) = {target:e} \
         by relative deviation {deviation:e} (allowed {allowed:e}); \
         mark one slot \"auto\" to have it solved"
    )]
    LambdaProduct { found: f64, target: f64, deviation: f64, allowed: f64 },

    #[error("coefficient index (i = {i}, j = {j}) violates 0 <= j < i <= {n}")]
    CoefficientIndex { i: usize, j: usize, n: usize },

    #[error(
        "coefficient c[{i}][{j}] must vanish: mu_{low}+...+mu_{i} = {sum} is not a \
         positive integer, so a nonzero coefficient would make the solution multivalued",
        low = j + 1
    )]
    InadmissibleCoefficient { i: usize, j: usize, sum: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("numerical budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("moment data is not hermitian positive definite: {0}")]
    BadMomentMatrix(String),

    #[error("the closed-form n = 2 oracle cannot serve rank n = {0}")]
    OracleRank(usize),

    #[error("oracle coefficient {name} must vanish in resonance case {case}")]
    OracleCoefficient { name: &'static str, case: String },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, TodaError>;
