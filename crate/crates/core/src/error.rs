use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// Several variants (`ChainTooLong`, `CapExceeded`, `RankViolation`) are
/// "hard anomalies": under the stated hypotheses they cannot occur, so
/// seeing one means either the input does not satisfy the hypotheses or a
/// tolerance is miscalibrated.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix algebra dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("Kraus list is empty")]
    EmptyKraus,

    #[error("map is not completely positive: Choi eigenvalue {min_eigenvalue:e} (largest {max_eigenvalue:e})")]
    NotCompletelyPositive {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("weight matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    WeightNotPositiveDefinite { min_eigenvalue: f64 },

    #[error("map is not primitive: {0}")]
    NotPrimitive(String),

    #[error("Perron-Frobenius eigenvector is too close to singular (eigenvalue ratio {ratio:e})")]
    SingularEigenvector { ratio: f64 },

    #[error("spectrum is inconclusive: eigenvalue of modulus {modulus} sits at the peripheral band edge of radius {radius}")]
    InconclusiveSpectrum { modulus: f64, radius: f64 },

    #[error("eigensolver failed to converge on a {0}x{0} matrix")]
    Eigensolver(usize),

    #[error("map is not unital (|phi(I) - I| = {defect:e})")]
    NotUnital { defect: f64 },

    #[error("quadratic form for n = {n} is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    FormNotPsd { n: usize, min_eigenvalue: f64 },

    #[error("kernel is not closed under multiplication (residual {residual:e})")]
    NonAlgebraKernel { residual: f64 },

    #[error("multiplicative domain chain did not stabilize within {bound} steps (ranks {ranks:?})")]
    ChainTooLong { ranks: Vec<usize>, bound: usize },

    #[error("stabilized multiplicative domain has rank {rank}, expected the scalars")]
    StabilizedNotTrivial { rank: usize },

    #[error("no strictly positive power found up to the cap {cap}")]
    CapExceeded { cap: usize },

    #[error("word span did not fill the matrix algebra by length {cap} (profile {profile:?})")]
    WielengthCapExceeded { cap: usize, profile: Vec<usize> },

    #[error("generating set is empty")]
    EmptySet,

    #[error("rank did not increase: projection of rank {rank_p} mapped to rank {rank_image}")]
    RankViolation {
        rank_p: usize,
        rank_image: usize,
        projection: crate::CMatrix,
    },

    #[error("adjacency column {0} is all zero")]
    ZeroColumn(usize),

    #[error("matrix is not unitary (|U*U - I| = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("no primitive draw after {attempts} attempts")]
    RejectionLimit { attempts: usize },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid map file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
