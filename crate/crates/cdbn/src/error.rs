use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CdbnError>;

/// Errors produced while loading data, building designs or running inference.
#[derive(Debug, Error)]
pub enum CdbnError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid intervention design: {0}")]
    InvalidDesign(String),

    #[error("invalid prior network: {0}")]
    InvalidPrior(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An augmented design matrix lost full column rank. The offending
    /// column is identified by its provenance tag.
    #[error("rank-deficient design for node {node}: column {column} {reason}")]
    RankDeficient {
        node: usize,
        column: String,
        reason: String,
    },

    /// The residual quadratic form of the marginal likelihood was not
    /// strictly positive, which indicates a numerically exact fit.
    #[error("nonpositive residual quadratic form ({value:.3e}) for node {node}")]
    NonpositiveQuadraticForm { node: usize, value: f64 },

    #[error("all {count} candidate models for node {node} were excluded")]
    AllModelsExcluded { node: usize, count: usize },

    #[error("degenerate paired t-test: {0}")]
    DegenerateTest(String),

    #[error("invalid evaluation input: {0}")]
    InvalidEvaluation(String),
}
