use thiserror::Error;

/// Errors raised by the model, grid, solver and scaling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The ghost-point system is singular because `h * xi >= 2`.
    #[error("ghost-point system is singular: h * xi = {product} >= 2")]
    Singular { product: f64 },

    /// The interface slope `u_{N+1} - u_{N-1}` fell below the floor.
    #[error("interface slope collapsed: |u_(N+1) - u_(N-1)| = {difference:e} < {floor:e}")]
    DegenerateSlope { difference: f64, floor: f64 },

    /// A linear solve hit a vanishing pivot.
    #[error("zero pivot in row {row} of the linear system")]
    ZeroPivot { row: usize },

    /// The state became non-finite or the interface left `(0, inf)`.
    #[error("numerical breakdown at t = {t}: {reason}")]
    Breakdown { t: f64, reason: String },

    /// Inconsistent grid or run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Not enough samples to fit a line.
    #[error("degenerate fit: {count} usable samples, at least 3 are needed")]
    DegenerateFit { count: usize },

    /// The best extinction-time candidate sits on the edge of the scan grid.
    #[error(
        "minimum error at t0 = {t0} lies on the {edge} edge of the scan grid; widen the t0 range"
    )]
    ScanBoundary { t0: f64, edge: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
