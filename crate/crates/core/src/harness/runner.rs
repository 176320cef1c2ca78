use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, Mode};
use super::metrics::{MetricsReport, SeedRecord};
use super::monte_carlo::monte_carlo_loss;
use crate::environments::{environment_from_name, Environment};
use crate::error::{Error, Result};
use crate::learners::learner_from_name;
use crate::model::{population_loss, UnionPredictor};
use crate::protocol::{RunOptions, Transcript};

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "STRATGAME_THREADS";

/// Population loss of `f`: exact over an enumerable support, else a
/// Monte Carlo estimate from `samples` draws. Returns `(loss, stderr)`.
pub fn output_loss(env: &Environment, f: &UnionPredictor, samples: usize, seed: u64) -> Result<(f64, f64)> {
    f.check(&env.instance.class)?;
    let view = env.instance.class.view(f);
    let space = env.instance.space.as_ref();
    let dist = env.distribution().ok_or_else(|| Error::parameter("output loss needs an i.i.d. environment"))?;
    if let Some(support) = env.finite_support() {
        match population_loss(space, &view, support, dist.tie_policy()) {
            Ok(l) => return Ok((l, 0.0)),
            Err(Error::NotEnumerable) => {}
            Err(e) => return Err(e),
        }
    }
    monte_carlo_loss(space, &view, dist, samples, seed)
}

/// Run one seed, returning its record and transcript.
pub fn run_seed_with(cfg: &ExperimentConfig, seed: u64, opts: &RunOptions) -> Result<(SeedRecord, Transcript)> {
    let mut env = environment_from_name(&cfg.env, &cfg.resolved_env_params())?;
    let mut learner = learner_from_name(&cfg.learner, &cfg.resolved_learner_params())?;
    let opts = RunOptions { estimation_samples: cfg.estimation_samples, ..opts.clone() };
    match cfg.mode() {
        Mode::Online => {
            let tr = env.run_online(learner.as_mut(), cfg.setting, cfg.rounds, seed, &opts)?;
            let rec = SeedRecord {
                seed,
                rounds: tr.len,
                mistakes: tr.mistakes,
                output: None,
                output_loss: None,
                output_loss_stderr: None,
            };
            Ok((rec, tr))
        }
        Mode::Pac => {
            let out = env.run_pac(learner.as_mut(), cfg.setting, cfg.rounds, seed, &opts)?;
            let (loss, se) = output_loss(&env, &out.output, cfg.loss_samples, seed)?;
            let rec = SeedRecord {
                seed,
                rounds: out.transcript.len,
                mistakes: out.transcript.mistakes,
                output: Some(out.output.canonical()),
                output_loss: Some(loss),
                output_loss_stderr: Some(se),
            };
            Ok((rec, out.transcript))
        }
    }
}

pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<SeedRecord> {
    run_seed_with(cfg, seed, &RunOptions::default()).map(|(r, _)| r).map_err(|e| e.with_seed(seed))
}

/// `STRATGAME_THREADS` when set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse().ok()).filter(|&n: &usize| n > 0)
}

/// Run every seed, in parallel up to `threads` workers (`Some(1)` is serial).
pub fn run_experiment_with_threads(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<MetricsReport> {
    cfg.validate()?;
    let start = Instant::now();
    let records: Vec<SeedRecord> = match threads {
        Some(1) => cfg.seeds.iter().map(|&s| run_seed(cfg, s)).collect::<Result<_>>()?,
        _ => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(t) = threads {
                builder = builder.num_threads(t);
            }
            let pool = builder.build().map_err(|e| Error::parameter(e.to_string()))?;
            pool.install(|| cfg.seeds.par_iter().map(|&s| run_seed(cfg, s)).collect::<Result<_>>())?
        }
    };
    MetricsReport::from_records(cfg.clone(), records, start.elapsed().as_secs_f64())
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<MetricsReport> {
    run_experiment_with_threads(cfg, thread_cap())
}

/// One report per value of `key`.
pub fn sweep(cfg: &ExperimentConfig, key: &str, values: &[String]) -> Result<Vec<MetricsReport>> {
    values
        .iter()
        .map(|v| {
            let mut c = cfg.clone();
            c.set(key, v)?;
            run_experiment(&c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serial_and_parallel_agree() {
        let cfg = ExperimentConfig::from_text(
            "env = appE\nlearner = mwmr\nsetting = x-delta-after\nn = 6\nT = 200\nseeds = 6",
        )
        .unwrap();
        let a = run_experiment_with_threads(&cfg, Some(1)).unwrap();
        let b = run_experiment_with_threads(&cfg, Some(3)).unwrap();
        assert_eq!(a.seeds, b.seeds);
        assert_eq!(a.bounds, b.bounds);
    }

    #[test]
    fn errors_name_the_seed() {
        // star-ex42 needs a deterministic learner
        let cfg = ExperimentConfig::from_text(
            "env = star-ex42\nlearner = mwmr\nsetting = x-delta-after\nn = 4\nT = 3\nseeds = 5..6",
        )
        .unwrap();
        let err = run_experiment(&cfg).unwrap_err();
        assert!(matches!(err, Error::Seed { seed: 5, .. }), "{err}");
    }
}
