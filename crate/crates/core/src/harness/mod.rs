//! Experiment configuration, execution, bound checks and reports.

pub mod acceptance;
mod bounds;
mod config;
mod metrics;
mod monte_carlo;
mod runner;

pub use bounds::{
    adversary_floor, default_bounds, evaluate_bound, halving_bound, mwmr_bound, random_union_budget, BoundEntry,
    BoundInputs, BOUND_NAMES,
};
pub use config::{parse_seeds, ExperimentConfig, Mode};
pub use metrics::{emit_report, parse_report, Aggregate, MetricsReport, ReportFormat, SeedRecord, SCHEMA_VERSION};
pub use monte_carlo::monte_carlo_loss;
pub use runner::{
    output_loss, run_experiment, run_experiment_with_threads, run_seed, run_seed_with, sweep, thread_cap, THREADS_VAR,
};
