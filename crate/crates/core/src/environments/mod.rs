//! Instances, lower-bound families, adversaries and exact loss oracles.

mod adversaries;
mod families;
mod instances;
mod oracle;
mod registry;
mod stream;

pub use adversaries::{ProbeCase, ProbingAdversary, StarAdversary};
pub use families::{star_family, FamilyTag, IidFinite, PermutationFamily, MAX_ENUMERABLE_N, SPOT_CHECK_SAMPLES};
pub use instances::{
    discrete_instance, scaled_basis_instance, sphere_instance, star_instance, DEFAULT_ALPHA, INNER_SCALE,
};
pub use oracle::{brute_force_loss_oracle, parse_rational, Rational, ORACLE_MAX_N};
pub use registry::{environment_from_name, AgentSource, EnvParams, Environment, ENVIRONMENTS};
pub use stream::{random_realizable_stream, RadiusLaw, RealizableStream};
