//! Feature spaces, hypotheses, manipulation sets, agent best response and
//! the strategic loss.

mod agent;
mod hypothesis;
mod response;
mod space;

pub use agent::{Agent, ManipulationSet, TieBreakPolicy};
pub use hypothesis::{Classifier, Hypothesis, HypothesisClass, Instance, Label, Mixture, UnionPredictor, UnionView};
pub use response::{
    best_response, can_reach_positive, distance_to_hypothesis, population_loss, predict, strategic_loss,
    strategic_loss_randomized, tie_set, FiniteSupport,
};
pub use space::{
    check_metric_axioms, Factor, MatrixSpace, MetricOracle, Permutation, PermutationSphere, Point, ScaledBasisSpace,
    StarSpace, TOL,
};
