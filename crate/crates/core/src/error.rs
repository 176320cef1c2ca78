use thiserror::Error;

use crate::model::Point;

/// Everything that can go wrong while building or running a simulation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point not in space: {0:?}")]
    UnknownPoint(Point),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid agent: {0}")]
    InvalidAgent(String),

    #[error("invalid hypothesis class: {0}")]
    InvalidClass(String),

    #[error("invalid mixture: weights sum to {0}, expected 1")]
    MixtureWeights(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("support is not enumerable: use monte_carlo_loss")]
    NotEnumerable,

    #[error("support too large for exact enumeration (n = {0}, max 7)")]
    SupportTooLarge(usize),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("learner {learner} does not support setting {setting}")]
    IncompatibleSetting { learner: String, setting: String },

    #[error("realizability violated at round {round}: {detail}")]
    Realizability { round: usize, detail: String },

    #[error("learner is not deterministic: {0}")]
    NotDeterministic(String),

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },

    #[error("best-response recovery mismatch at round {0}")]
    Recovery(usize),

    #[error("serialization: {0}")]
    Serialization(String),

    #[error("seed {seed}: {inner}")]
    Seed { seed: u64, inner: Box<Error> },
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Attach a round index to a realizability failure raised without one.
    pub fn at_round(self, round: usize) -> Self {
        match self {
            Error::Realizability { detail, .. } => Error::Realizability { round, detail },
            other => other,
        }
    }
}

impl Error {
    pub fn with_seed(self, seed: u64) -> Self {
        Error::Seed { seed, inner: Box::new(self) }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
