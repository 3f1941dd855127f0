use thiserror::Error;

/// Errors produced by the state, propagation, bound, and optimization layers.
#[derive(Debug, Error)]
pub enum QslError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("time grids do not match")]
    GridMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expectation value has imaginary residue {residue:.3e} above tolerance")]
    ImaginaryResidue { residue: f64 },

    #[error("variance is negative beyond tolerance ({value:.3e})")]
    NegativeVariance { value: f64 },

    #[error("eigendecomposition failed: {0}")]
    EigensolveFailed(String),

    #[error("spectrum is degenerate or clusters are inconsistent at t = {t}")]
    DegenerateSpectrum { t: f64 },

    #[error("initial state is not an instantaneous eigenstate (best overlap {overlap})")]
    NotAnEigenstate { overlap: f64 },

    #[error("eigenvalue gap closes along the path near t = {t} (gap {gap:.3e})")]
    GapClosure { t: f64, gap: f64 },

    #[error(
        "step refinement did not converge: state drift {fine:.3e} (n vs n/2), {coarse:.3e} (n/2 vs n/4)"
    )]
    StepRefinementDiverged { fine: f64, coarse: f64 },

    #[error("time-window doubling did not converge after {0} doublings")]
    WindowNotConverged(u32),

    #[error("finite-difference step did not converge (change {change:.3e} on halving)")]
    FiniteDifferenceDiverged { change: f64 },

    #[error("requested angle is never reached by the trace")]
    ThresholdNotReached,

    #[error("optimizer failed at t = {t}: every candidate was rejected")]
    OptimizerFailed { t: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QslError>;
