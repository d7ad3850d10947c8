use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not symmetric (|a[{i}][{j}] - a[{j}][{i}]| = {defect:.3e})")]
    NotSymmetric { i: usize, j: usize, defect: f64 },

    #[error("recession extrapolation did not converge: last increment {increment:.3e} > tol {tol:.3e}")]
    RecessionDiverged { increment: f64, tol: f64 },

    #[error("operator has no concavity certificate")]
    MissingConcavityCertificate,

    #[error("grid error: {0}")]
    Grid(String),

    #[error("solver failed to converge: {0}")]
    SolverDiverged(String),

    #[error("continuation sweep aborted at stage {stage}: {source}")]
    SweepAborted { stage: usize, source: Box<Error> },

    #[error("barrier amplitude tuning failed: {0}")]
    BarrierTuning(String),

    #[error("empty free boundary: no grid edge crosses the threshold")]
    EmptyFreeBoundary,

    #[error("estimator rejected input: {0}")]
    EstimatorInput(String),

    #[error("radial integration failed: {0}")]
    RadialIntegration(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("field file format error: {0}")]
    FieldFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
