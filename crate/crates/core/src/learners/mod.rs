//! Strategic Halving, MWMR, the randomized union learner, sequential
//! elimination, and the longest-survivor and boosting wrappers.

mod boost;
mod halving;
mod mwmr;
mod random_union;
mod registry;
mod seq_elim;
mod survivor;
mod version_space;

pub use boost::{boost, Boost, BoostConfig};
pub use halving::{strategic_halving_choose, StrategicHalving};
pub use mwmr::{mwmr_choose, Mwmr};
pub use random_union::{
    max_exponent, random_union_choose, random_union_finalize, random_union_output_mixture, RandomUnion,
};
pub use registry::{learner_from_name, LearnerParams, BASE_LEARNERS};
pub use seq_elim::{sequential_elimination, FixedPredictor, SequentialElimination};
pub use survivor::{LongestSurvivor, SurvivorConfig};
pub use version_space::VersionSpace;
