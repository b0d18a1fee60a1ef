use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("partition time {time} is not a point of the sampling grid")]
    PartitionNotOnGrid { time: f64 },

    #[error("path too long for {what}: {len} points exceeds limit {limit}")]
    LengthGuard {
        what: &'static str,
        len: usize,
        limit: usize,
    },

    #[error("circulant embedding has negative eigenvalue {min_eigenvalue:e} for {points} points")]
    EmbeddingNotPositive { min_eigenvalue: f64, points: usize },

    #[error("quadrature did not converge: node doubling changed {what} by {disagreement:e} (relative)")]
    QuadratureNonConvergence { what: &'static str, disagreement: f64 },

    /// `t` is NaN when raised by a solver that does not know the time.
    #[error("near-expiry degeneracy at t={t}: hedge gamma {gamma:e} below floor {floor:e}")]
    NearExpiryDegeneracy { t: f64, gamma: f64, floor: f64 },

    #[error("hedge instrument has vanishing delta {delta:e}")]
    DegenerateHedge { delta: f64 },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("convergence fit needs at least {needed} levels, got {got}")]
    TooFewLevels { needed: usize, got: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
