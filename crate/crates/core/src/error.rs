use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The two distributions do not live on the same parameter space.
    #[error("distributions live on different parameter spaces")]
    MismatchedSpace,

    /// Inferential gain is undefined because the divergence from the
    /// reference to the benchmark is infinite.
    #[error("inferential gain undefined: reference-to-benchmark divergence is infinite")]
    UndefinedGain,

    /// A mean was requested for a discrete distribution whose state labels
    /// are not numeric.
    #[error("mean undefined: state labels are not numeric")]
    NonNumericStates,

    /// The working posterior is not a member of the knowledge base.
    #[error("working posterior is not a member of the knowledge base")]
    WorkingNotPlausible,

    /// Caution must lie in [0, 1].
    #[error("caution must lie in [0, 1], got {0}")]
    InvalidKappa(f64),

    /// The benchmark set is empty.
    #[error("benchmark set is empty")]
    EmptyBenchmarks,

    /// Every plausible posterior has infinite divergence to a benchmark, so
    /// the projection problem is degenerate.
    #[error("divergence to a benchmark is infinite for every plausible posterior")]
    InfiniteBenchmarkDivergence,

    /// The projection refinement failed to reach its objective tolerance.
    #[error("projection failed to converge within tolerance")]
    NonConvergence,

    /// The per-state mass intervals admit no probability vector.
    #[error("interval bounds admit no probability vector")]
    InfeasibleSet,

    /// The loss specification does not match the posterior type.
    #[error("loss specification does not match the posterior")]
    LossMismatch,

    /// A projection was requested for a set/benchmark pairing it does not
    /// support.
    #[error("unsupported projection: {0}")]
    UnsupportedProjection(&'static str),

    /// A constructor rejected its arguments.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
