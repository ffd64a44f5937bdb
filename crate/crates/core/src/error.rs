use thiserror::Error;

use crate::bench_io::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("candidate list is empty")]
    EmptyCandidateList,

    #[error("element {0} is already part of the partial solution")]
    AlreadyPlaced(usize),

    #[error("position {position} out of range for length {len}")]
    OutOfRange { position: usize, len: usize },

    #[error("endpoints of a relinking path must differ")]
    IdenticalEndpoints,

    #[error("operation not supported for this representation: {0}")]
    Unsupported(&'static str),

    #[error("guide set is empty")]
    NoGuides,

    #[error("elite set is empty")]
    EmptyEliteSet,

    #[error("no elite member differs from the reference solution")]
    NoGuideCandidate,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("statistics: {0}")]
    Stats(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("method {method}, instance {instance}, seed {seed}: {source}")]
    Cell {
        method: String,
        instance: String,
        seed: u64,
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
