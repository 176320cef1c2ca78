use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use super::setting::{Context, Feedback, FeedbackSetting};
use crate::error::{Error, Result};
use crate::learners::VersionSpace;
use crate::model::{Instance, Mixture, UnionPredictor};

/// An online or PAC learner driven by the interaction protocol.
///
/// `choose` draws from the learner's own stream, handed over at `reset`.
/// `sample_predictor` draws the same distribution from a caller stream and
/// leaves the learner untouched; adversaries use it to look ahead.
pub trait Learner: Send {
    fn name(&self) -> String;

    fn supported_settings(&self) -> Vec<FeedbackSetting>;

    /// Predictors depend only on mistake-round feedback.
    fn is_conservative(&self) -> bool;

    fn is_deterministic(&self) -> bool;

    /// Worst-case mistakes on realizable streams, if known.
    fn mistake_budget(&self, _class_size: usize) -> Option<usize> {
        None
    }

    fn reset(&mut self, instance: &Instance, setting: FeedbackSetting, rng: ChaCha8Rng) -> Result<()>;

    fn choose(&mut self, ctx: &Context) -> Result<UnionPredictor>;

    fn observe(&mut self, feedback: &Feedback) -> Result<()>;

    /// PAC output after the last round.
    fn finalize(&mut self) -> Result<UnionPredictor>;

    /// Exact distribution of `finalize`, when cheap.
    fn output_mixture(&self) -> Option<Mixture> {
        None
    }

    /// Exact distribution of the next `choose`, when cheap.
    fn predictor_distribution(&self, _ctx: &Context) -> Option<Result<Mixture>> {
        None
    }

    fn sample_predictor(&self, ctx: &Context, rng: &mut dyn RngCore) -> Result<UnionPredictor>;

    fn version_space(&self) -> Option<&VersionSpace> {
        None
    }
}

/// Check `setting` against a learner's declared settings.
pub fn ensure_supported(learner: &dyn Learner, setting: FeedbackSetting) -> Result<()> {
    if learner.supported_settings().contains(&setting) {
        Ok(())
    } else {
        Err(Error::IncompatibleSetting { learner: learner.name(), setting: setting.to_string() })
    }
}

/// Read-only access to a learner's white-box hooks for adversaries.
pub struct LearnerView<'a> {
    learner: &'a dyn Learner,
    setting: FeedbackSetting,
    samples: usize,
}

impl<'a> LearnerView<'a> {
    pub fn new(learner: &'a dyn Learner, setting: FeedbackSetting, samples: usize) -> Self {
        LearnerView { learner, setting, samples }
    }

    pub fn setting(&self) -> FeedbackSetting {
        self.setting
    }

    pub fn is_deterministic(&self) -> bool {
        self.learner.is_deterministic()
    }

    pub fn version_space(&self) -> Option<&VersionSpace> {
        self.learner.version_space()
    }

    /// Distribution of the next predictor: exact if exposed, else the
    /// empirical law of `samples` draws.
    pub fn distribution(&self, ctx: &Context, rng: &mut dyn RngCore) -> Result<Mixture> {
        if let Some(exact) = self.learner.predictor_distribution(ctx) {
            return exact;
        }
        let n = if self.learner.is_deterministic() { 1 } else { self.samples.max(1) };
        let draws = (0..n).map(|_| self.learner.sample_predictor(ctx, rng)).collect::<Result<Vec<_>>>()?;
        Mixture::empirical(draws)
    }

    /// The next predictor of a deterministic learner.
    pub fn deterministic_choice(&self, ctx: &Context, rng: &mut dyn RngCore) -> Result<UnionPredictor> {
        if !self.learner.is_deterministic() {
            return Err(Error::NotDeterministic(self.learner.name()));
        }
        self.learner.sample_predictor(ctx, rng)
    }
}
