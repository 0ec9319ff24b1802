use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {dim} exceeds the configured cap {cap} (set SYMSCOPE_DIM_CAP to raise it)")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid symmetry action: {0}")]
    InvalidAction(String),

    #[error("support {support:?} grown by radius {radius} escapes the {num_sites}-site chain; enlarge the chain")]
    BoundaryTruncation { support: Vec<usize>, radius: usize, num_sites: usize },

    #[error("operator is zero")]
    ZeroOperator,

    #[error("invalid window schedule: {0}")]
    InvalidSchedule(String),

    #[error("extension does not restrict to the target state (trace distance {0:e})")]
    RestrictionMismatch(f64),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("cochain is not a cocycle")]
    NotCocycle,

    #[error("cochain mismatch: {0}")]
    CochainMismatch(String),

    #[error("matrices are not a projective representation (residual {0:e})")]
    NotProjective(f64),

    #[error("phase {value} has no representative with denominator dividing {bound} within {tol:e}")]
    PhaseSnap { value: f64, bound: u64, tol: f64 },

    #[error("integer overflow while solving the coboundary system")]
    Overflow,

    #[error("map is not inner on the window (Choi rank ratio {0:e}); enlarge the window")]
    NotInner(f64),

    #[error("anomaly cocycle entry is not a scalar (deviation {0:e}); enlarge the boundary window")]
    NonScalarAnomaly(f64),

    #[error("invalid half-chain restriction: {0}")]
    HalfChain(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
