use thiserror::Error;

/// Errors surfaced by the library. Every rejection carries enough context to
/// act on (the offending value and, where applicable, the required minimum).
#[derive(Error, Debug)]
pub enum Error {
    #[error("unsupported Eisenstein weight {0}: only weights 4 and 6 are generated directly")]
    UnsupportedEisensteinWeight(u32),

    #[error("weight {0} is odd; level-one modular forms require even weight")]
    OddWeight(i64),

    #[error("mixed weights in linear combination: {0} vs {1}")]
    MixedWeights(u32, u32),

    #[error("truncation {given} too small: need at least {required}")]
    TruncationTooSmall { given: usize, required: usize },

    #[error("weight {0} is below 12; S_k is trivial there")]
    WeightBelowTwelve(u32),

    #[error("repeated T_2 eigenvalue at weight {0}: the space does not split under T_2 alone")]
    DegenerateEigenvalue(u32),

    #[error("root isolation failed at weight {0}: {1}")]
    RootIsolation(u32, String),

    #[error("eigenvector system singular at weight {k}, eigenvalue index {index}")]
    SingularEigenvectorSystem { k: u32, index: usize },

    #[error("empty space: dim S_{0} = 0")]
    EmptySpace(u32),

    #[error("prime cutoff {0} too small: need P >= {1} (tail dominates below that)")]
    PrimeCutoffTooSmall(u64, u64),

    #[error("Satake data missing for prime {p}: coefficients stored only up to {trunc}")]
    SatakeOutOfRange { p: u64, trunc: usize },

    #[error("precondition mn <= k^2/10^4 violated: m*n = {mn}, bound = {bound}")]
    PeterssonRangeViolated { mn: u64, bound: u64 },

    #[error("quadratic form weight incompatibility: k_{i} + k_{j} = {sum} != {k} while a[{i}][{j}] != 0")]
    WeightIncompatibility { i: usize, j: usize, sum: u32, k: u32 },

    #[error("eigenform index {index} out of range for S_{k} (dim {dim})")]
    EigenformIndexOutOfRange { index: usize, k: u32, dim: usize },

    #[error("coefficient matrix a is not symmetric at ({0},{1})")]
    AsymmetricCoefficients(usize, usize),

    #[error("l^p exponent must satisfy 0 < p <= 2, got {0}")]
    InvalidLpExponent(f64),

    #[error("decomposition system singular or ill-conditioned at weight {0}")]
    SingularDecomposition(u32),

    #[error("decomposition residual {residual:.3e} above tolerance {tol:.3e}: truncation or precision bug")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("parity mismatch: D_(k,l) requires l = k (mod 2), got k={k}, l={l}")]
    ParityMismatch { k: u32, l: u32 },

    #[error("smoothing length must satisfy y >= 2, got {0}")]
    WindowTooSmall(f64),

    #[error("moment precondition x <= k^(1/(10 r)) violated: x = {x}, bound = {bound:.6}")]
    MomentRangeViolated { x: f64, bound: f64 },

    #[error("coefficient rule violates |a_p| <= 8 p^(1/8) at p = {p}: |a_p| = {value:.6}")]
    CoefficientRuleUnbounded { p: u64, value: f64 },

    #[error("calibration unavailable: {0}")]
    CalibrationUnavailable(String),

    #[error("quadrature truncation insufficient: have N = {given}, need N >= {required} for target error")]
    QuadratureTruncation { given: usize, required: usize },

    #[error("cache entry corrupt or mismatched: {0}")]
    Cache(String),

    #[error("config: {0}")]
    Config(String),

    #[error("spec file: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
