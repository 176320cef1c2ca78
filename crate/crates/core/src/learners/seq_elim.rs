use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use super::VersionSpace;
use crate::error::{Error, Result};
use crate::model::{Instance, Mixture, UnionPredictor};
use crate::protocol::{Context, Feedback, FeedbackSetting, Learner};

/// Try each hypothesis in index order, discarding it once it errs.
#[derive(Debug, Default)]
pub struct SequentialElimination {
    vs: Option<VersionSpace>,
}

/// Lowest-index alive hypothesis.
pub fn sequential_elimination(vs: &VersionSpace) -> Result<UnionPredictor> {
    vs.first().map(UnionPredictor::single).ok_or_else(|| Error::contract("empty version space"))
}

impl SequentialElimination {
    pub fn new() -> Self {
        Self::default()
    }

    fn vs(&self) -> Result<&VersionSpace> {
        self.vs.as_ref().ok_or_else(|| Error::contract("learner used before reset"))
    }
}

impl Learner for SequentialElimination {
    fn name(&self) -> String {
        "seq-elim".into()
    }

    fn supported_settings(&self) -> Vec<FeedbackSetting> {
        FeedbackSetting::ALL.to_vec()
    }

    fn is_conservative(&self) -> bool {
        true
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn mistake_budget(&self, class_size: usize) -> Option<usize> {
        Some(class_size.saturating_sub(1))
    }

    fn reset(&mut self, instance: &Instance, _setting: FeedbackSetting, _rng: ChaCha8Rng) -> Result<()> {
        self.vs = Some(VersionSpace::full(instance.class.len()));
        Ok(())
    }

    fn choose(&mut self, _ctx: &Context) -> Result<UnionPredictor> {
        sequential_elimination(self.vs()?)
    }

    fn observe(&mut self, feedback: &Feedback) -> Result<()> {
        let vs = self.vs.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        if feedback.mistake() {
            let current = vs.first().expect("non-empty");
            vs.eliminate(|h| Ok(h == current))?;
        }
        Ok(())
    }

    fn finalize(&mut self) -> Result<UnionPredictor> {
        sequential_elimination(self.vs()?)
    }

    fn output_mixture(&self) -> Option<Mixture> {
        self.vs().and_then(sequential_elimination).ok().map(Mixture::point_mass)
    }

    fn predictor_distribution(&self, _ctx: &Context) -> Option<Result<Mixture>> {
        Some(self.vs().and_then(sequential_elimination).map(Mixture::point_mass))
    }

    fn sample_predictor(&self, _ctx: &Context, _rng: &mut dyn RngCore) -> Result<UnionPredictor> {
        sequential_elimination(self.vs()?)
    }

    fn version_space(&self) -> Option<&VersionSpace> {
        self.vs.as_ref()
    }
}

/// Plays one fixed predictor forever.
#[derive(Clone, Debug)]
pub struct FixedPredictor {
    pub predictor: UnionPredictor,
}

impl FixedPredictor {
    pub fn new(predictor: UnionPredictor) -> Self {
        FixedPredictor { predictor }
    }
}

impl Learner for FixedPredictor {
    fn name(&self) -> String {
        format!("fixed{:?}", self.predictor.parts())
    }

    fn supported_settings(&self) -> Vec<FeedbackSetting> {
        FeedbackSetting::ALL.to_vec()
    }

    fn is_conservative(&self) -> bool {
        true
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn reset(&mut self, instance: &Instance, _setting: FeedbackSetting, _rng: ChaCha8Rng) -> Result<()> {
        self.predictor.check(&instance.class)
    }

    fn choose(&mut self, _ctx: &Context) -> Result<UnionPredictor> {
        Ok(self.predictor.clone())
    }

    fn observe(&mut self, _feedback: &Feedback) -> Result<()> {
        Ok(())
    }

    fn finalize(&mut self) -> Result<UnionPredictor> {
        Ok(self.predictor.clone())
    }

    fn output_mixture(&self) -> Option<Mixture> {
        Some(Mixture::point_mass(self.predictor.clone()))
    }

    fn predictor_distribution(&self, _ctx: &Context) -> Option<Result<Mixture>> {
        Some(Ok(Mixture::point_mass(self.predictor.clone())))
    }

    fn sample_predictor(&self, _ctx: &Context, _rng: &mut dyn RngCore) -> Result<UnionPredictor> {
        Ok(self.predictor.clone())
    }
}
