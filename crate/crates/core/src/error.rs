use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bit string length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("bit index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid character {0:?} in bit string (expected '0' or '1')")]
    InvalidBitChar(char),

    #[error("key length must be at least 1")]
    EmptyKey,

    #[error("round count must be at least 1")]
    NoRounds,

    #[error("query count must be at least 1")]
    NoQueries,

    #[error("noise level must lie in [0, 1/2) for simulation, got {0}")]
    NoiseOutOfRange(f64),

    #[error("noise level must lie in (0, 1/2) for analytic formulas, got {0}")]
    AnalyticNoiseOutOfRange(f64),

    #[error("probability must lie in [0, 1], got {0}")]
    ProbabilityOutOfRange(f64),

    #[error("crossover probability must lie in [0, 1/2], got {0}")]
    CrossoverOutOfRange(f64),

    #[error("distribution entry must be non-negative, got {0}")]
    NegativeProbability(f64),

    #[error("distribution must sum to 1, got {0}")]
    NotNormalized(f64),

    #[error("joint distribution rows must all have the same length")]
    RaggedJoint,

    #[error("axis must contain at least one value")]
    EmptyAxis,

    #[error("tag memory holds {memory} key bits but parameters expect {expected}")]
    KeySizeMismatch { memory: usize, expected: usize },

    #[error("fault reliability must lie in [0, 1], got {0}")]
    ReliabilityOutOfRange(f64),
}
