use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::VersionSpace;
use crate::error::{Error, Result};
use crate::model::{Instance, Mixture, UnionPredictor};
use crate::protocol::{Context, Feedback, FeedbackSetting, Learner};

/// Parameters of the longest-survivor conversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivorConfig {
    /// Mistake budget `B`; the class size when unset.
    pub budget: Option<usize>,
    pub epsilon: f64,
    pub delta: f64,
}

impl SurvivorConfig {
    pub fn new(budget: Option<usize>, epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) || !(delta > 0.0 && delta < 1.0) {
            return Err(Error::parameter(format!(
                "survivor needs 0 < eps <= 1, 0 < delta < 1 (got {epsilon}, {delta})"
            )));
        }
        if budget == Some(0) {
            return Err(Error::parameter("survivor budget must be positive"));
        }
        Ok(SurvivorConfig { budget, epsilon, delta })
    }

    pub fn budget_for(&self, class_size: usize) -> usize {
        self.budget.unwrap_or(class_size).max(1)
    }

    /// `ceil((1/eps) ln(B/delta))`, at least 1.
    pub fn threshold(&self, class_size: usize) -> usize {
        let b = self.budget_for(class_size) as f64;
        ((b / self.delta).ln() / self.epsilon).ceil().max(1.0) as usize
    }

    /// `B * threshold`.
    pub fn sample_size(&self, class_size: usize) -> usize {
        self.budget_for(class_size) * self.threshold(class_size)
    }
}

/// Runs a conservative base learner and outputs the first predictor that
/// survives `threshold` consecutive rounds, else the last one played.
///
/// Survival is counted from `choose` calls, so the wrapper needs feedback
/// only on mistake rounds and stays conservative.
pub struct LongestSurvivor {
    base: Box<dyn Learner>,
    cfg: SurvivorConfig,
    threshold: usize,
    current: Option<UnionPredictor>,
    streak: usize,
    pending: bool,
    survivor: Option<UnionPredictor>,
}

impl LongestSurvivor {
    pub fn new(base: Box<dyn Learner>, cfg: SurvivorConfig) -> Result<Self> {
        if !base.is_conservative() {
            return Err(Error::parameter(format!(
                "survivor wrapper needs a conservative base, {} is not",
                base.name()
            )));
        }
        Ok(LongestSurvivor { base, cfg, threshold: 1, current: None, streak: 0, pending: false, survivor: None })
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Credit the previous round as survived.
    fn settle(&mut self) {
        if std::mem::take(&mut self.pending) {
            self.streak += 1;
            if self.survivor.is_none() && self.streak >= self.threshold {
                self.survivor = self.current.clone();
            }
        }
    }
}

impl Learner for LongestSurvivor {
    fn name(&self) -> String {
        format!("survivor:{}", self.base.name())
    }

    fn supported_settings(&self) -> Vec<FeedbackSetting> {
        self.base.supported_settings()
    }

    fn is_conservative(&self) -> bool {
        true
    }

    fn is_deterministic(&self) -> bool {
        self.base.is_deterministic()
    }

    fn reset(&mut self, instance: &Instance, setting: FeedbackSetting, rng: ChaCha8Rng) -> Result<()> {
        self.threshold = self.cfg.threshold(instance.class.len());
        self.current = None;
        self.streak = 0;
        self.pending = false;
        self.survivor = None;
        self.base.reset(instance, setting, rng)
    }

    fn choose(&mut self, ctx: &Context) -> Result<UnionPredictor> {
        self.settle();
        let f = self.base.choose(ctx)?;
        if self.current.as_ref().is_none_or(|c| !c.same_region(&f)) {
            self.current = Some(f.clone());
            self.streak = 0;
        }
        self.pending = true;
        Ok(f)
    }

    fn observe(&mut self, feedback: &Feedback) -> Result<()> {
        if feedback.mistake() {
            self.pending = false;
            self.streak = 0;
        }
        self.base.observe(feedback)
    }

    fn finalize(&mut self) -> Result<UnionPredictor> {
        self.settle();
        match (&self.survivor, &self.current) {
            (Some(f), _) | (None, Some(f)) => Ok(f.clone()),
            (None, None) => self.base.finalize(),
        }
    }

    fn predictor_distribution(&self, ctx: &Context) -> Option<Result<Mixture>> {
        self.base.predictor_distribution(ctx)
    }

    fn sample_predictor(&self, ctx: &Context, rng: &mut dyn RngCore) -> Result<UnionPredictor> {
        self.base.sample_predictor(ctx, rng)
    }

    fn version_space(&self) -> Option<&VersionSpace> {
        self.base.version_space()
    }
}
