use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::VersionSpace;
use crate::error::{Error, Result};
use crate::model::{Instance, Mixture, UnionPredictor};
use crate::protocol::{run_pac, AgentDistribution, Context, Feedback, FeedbackSetting, Learner, RunOptions};

/// Confidence boosting parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// Outer rounds `R`.
    pub rounds: usize,
    /// Validation rounds `m0` per candidate.
    pub m0: usize,
    /// Base-learner rounds per candidate.
    pub t_base: usize,
}

impl BoostConfig {
    /// `R = ceil(ln(2/delta))`, `m0 = ceil(3 ln(4R/delta) / (2 eps))`.
    pub fn new(epsilon: f64, delta: f64, t_base: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) || !(delta > 0.0 && delta < 1.0) {
            return Err(Error::parameter(format!("boost needs 0 < eps <= 1, 0 < delta < 1 (got {epsilon}, {delta})")));
        }
        if t_base == 0 {
            return Err(Error::parameter("boost needs at least one base round"));
        }
        let rounds = (2.0 / delta).ln().ceil().max(1.0) as usize;
        let m0 = (3.0 * (4.0 * rounds as f64 / delta).ln() / (2.0 * epsilon)).ceil() as usize;
        Ok(BoostConfig { epsilon, delta, rounds, m0, t_base })
    }

    /// Accepted when validation mistakes `<= 4 eps m0`.
    pub fn accepts(&self, mistakes: usize) -> bool {
        mistakes as f64 <= 4.0 * self.epsilon * self.m0 as f64
    }

    /// Rounds consumed when no candidate is accepted.
    pub fn total_rounds(&self) -> usize {
        self.rounds * (self.t_base + self.m0)
    }
}

#[derive(Clone, Debug)]
enum Phase {
    Train { r: usize, played: usize },
    Validate { r: usize, h: UnionPredictor, played: usize, mistakes: usize },
    Done(UnionPredictor),
}

/// Runs the base learner `R` times, validates each output on `m0` fresh
/// rounds, and keeps the first one with empirical loss at most `4 eps`.
/// Falls back to hypothesis 0.
pub struct Boost {
    base: Box<dyn Learner>,
    cfg: BoostConfig,
    ctx: Option<(Instance, FeedbackSetting, ChaCha8Rng)>,
    phase: Phase,
    /// `(candidate, validation mistakes)` per finished outer round.
    trials: Vec<(UnionPredictor, usize)>,
}

impl Boost {
    pub fn new(base: Box<dyn Learner>, cfg: BoostConfig) -> Self {
        Boost { base, cfg, ctx: None, phase: Phase::Done(UnionPredictor::single(0)), trials: Vec::new() }
    }

    pub fn config(&self) -> &BoostConfig {
        &self.cfg
    }

    pub fn trials(&self) -> &[(UnionPredictor, usize)] {
        &self.trials
    }

    fn start_base(&mut self) -> Result<()> {
        let (instance, setting, rng) = self.ctx.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        let child = ChaCha8Rng::seed_from_u64(rng.next_u64());
        self.base.reset(instance, *setting, child)
    }

    /// Apply phase transitions due before the next round.
    fn settle(&mut self) -> Result<()> {
        loop {
            match &self.phase {
                Phase::Train { r, played } if *played >= self.cfg.t_base => {
                    let r = *r;
                    let h = self.base.finalize()?;
                    self.phase = Phase::Validate { r, h, played: 0, mistakes: 0 };
                }
                Phase::Validate { r, h, played, mistakes } if *played >= self.cfg.m0 => {
                    let (r, h, mistakes) = (*r, h.clone(), *mistakes);
                    self.trials.push((h.clone(), mistakes));
                    if self.cfg.accepts(mistakes) {
                        self.phase = Phase::Done(h);
                    } else if r + 1 >= self.cfg.rounds {
                        self.phase = Phase::Done(UnionPredictor::single(0));
                    } else {
                        self.start_base()?;
                        self.phase = Phase::Train { r: r + 1, played: 0 };
                    }
                }
                _ => return Ok(()),
            }
        }
    }
}

impl Learner for Boost {
    fn name(&self) -> String {
        format!("boost:{}", self.base.name())
    }

    fn supported_settings(&self) -> Vec<FeedbackSetting> {
        self.base.supported_settings()
    }

    fn is_conservative(&self) -> bool {
        false
    }

    fn is_deterministic(&self) -> bool {
        self.base.is_deterministic()
    }

    fn reset(&mut self, instance: &Instance, setting: FeedbackSetting, rng: ChaCha8Rng) -> Result<()> {
        self.ctx = Some((instance.clone(), setting, rng));
        self.trials.clear();
        self.start_base()?;
        self.phase = Phase::Train { r: 0, played: 0 };
        Ok(())
    }

    fn choose(&mut self, ctx: &Context) -> Result<UnionPredictor> {
        self.settle()?;
        match &mut self.phase {
            Phase::Train { played, .. } => {
                *played += 1;
                self.base.choose(ctx)
            }
            Phase::Validate { h, played, .. } => {
                *played += 1;
                Ok(h.clone())
            }
            Phase::Done(h) => Ok(h.clone()),
        }
    }

    fn observe(&mut self, feedback: &Feedback) -> Result<()> {
        match &mut self.phase {
            Phase::Train { .. } => self.base.observe(feedback)?,
            Phase::Validate { mistakes, .. } => *mistakes += usize::from(feedback.mistake()),
            Phase::Done(_) => {}
        }
        self.settle()
    }

    /// The accepted candidate; hypothesis 0 if none was accepted.
    fn finalize(&mut self) -> Result<UnionPredictor> {
        self.settle()?;
        Ok(match &self.phase {
            Phase::Done(h) => h.clone(),
            _ => UnionPredictor::single(0),
        })
    }

    fn predictor_distribution(&self, ctx: &Context) -> Option<Result<Mixture>> {
        match &self.phase {
            Phase::Train { .. } => self.base.predictor_distribution(ctx),
            Phase::Validate { h, .. } | Phase::Done(h) => Some(Ok(Mixture::point_mass(h.clone()))),
        }
    }

    fn sample_predictor(&self, ctx: &Context, rng: &mut dyn RngCore) -> Result<UnionPredictor> {
        match &self.phase {
            Phase::Train { .. } => self.base.sample_predictor(ctx, rng),
            Phase::Validate { h, .. } | Phase::Done(h) => Ok(h.clone()),
        }
    }

    fn version_space(&self) -> Option<&VersionSpace> {
        self.base.version_space()
    }
}

/// Boost `base` on i.i.d. draws from `dist` and return the chosen predictor.
pub fn boost(
    instance: &Instance,
    base: Box<dyn Learner>,
    cfg: BoostConfig,
    dist: &dyn AgentDistribution,
    setting: FeedbackSetting,
    seed: u64,
) -> Result<UnionPredictor> {
    let mut learner = Boost::new(base, cfg);
    Ok(run_pac(instance, dist, &mut learner, setting, cfg.total_rounds(), seed, &RunOptions::default())?.output)
}
