use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;

use super::VersionSpace;
use crate::error::{Error, Result};
use crate::model::{Instance, Mixture, UnionPredictor};
use crate::protocol::{Context, Feedback, FeedbackSetting, Learner};

/// MWMR: play a uniform member of the version space, eliminate by
/// distance on mistakes.
#[derive(Debug, Default)]
pub struct Mwmr {
    state: Option<State>,
}

#[derive(Debug)]
struct State {
    instance: Instance,
    vs: VersionSpace,
    rng: ChaCha8Rng,
    last: Option<UnionPredictor>,
}

/// Uniform draw from the version space.
pub fn mwmr_choose(vs: &VersionSpace, rng: &mut dyn RngCore) -> UnionPredictor {
    UnionPredictor::single(vs.alive()[rng.gen_range(0..vs.len())])
}

impl Mwmr {
    pub fn new() -> Self {
        Self::default()
    }

    fn state(&self) -> Result<&State> {
        self.state.as_ref().ok_or_else(|| Error::contract("learner used before reset"))
    }
}

impl Learner for Mwmr {
    fn name(&self) -> String {
        "mwmr".into()
    }

    fn supported_settings(&self) -> Vec<FeedbackSetting> {
        vec![FeedbackSetting::XBeforeDeltaAfter, FeedbackSetting::NothingXDeltaAfter]
    }

    fn is_conservative(&self) -> bool {
        true
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn mistake_budget(&self, class_size: usize) -> Option<usize> {
        Some(class_size.saturating_sub(1))
    }

    fn reset(&mut self, instance: &Instance, _setting: FeedbackSetting, rng: ChaCha8Rng) -> Result<()> {
        self.state =
            Some(State { instance: instance.clone(), vs: VersionSpace::full(instance.class.len()), rng, last: None });
        Ok(())
    }

    fn choose(&mut self, _ctx: &Context) -> Result<UnionPredictor> {
        let st = self.state.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        let f = mwmr_choose(&st.vs, &mut st.rng);
        st.last = Some(f.clone());
        Ok(f)
    }

    fn observe(&mut self, feedback: &Feedback) -> Result<()> {
        let st = self.state.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        let f = st.last.take().ok_or_else(|| Error::contract("observe without choose"))?;
        if feedback.mistake() {
            st.vs.distance_update(&st.instance, feedback.x()?, &f, feedback.y)?;
        }
        Ok(())
    }

    fn finalize(&mut self) -> Result<UnionPredictor> {
        let st = self.state.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        Ok(mwmr_choose(&st.vs, &mut st.rng))
    }

    fn output_mixture(&self) -> Option<Mixture> {
        self.state().ok().map(|st| uniform(&st.vs))
    }

    fn predictor_distribution(&self, _ctx: &Context) -> Option<Result<Mixture>> {
        Some(self.state().map(|st| uniform(&st.vs)))
    }

    fn sample_predictor(&self, _ctx: &Context, rng: &mut dyn RngCore) -> Result<UnionPredictor> {
        Ok(mwmr_choose(&self.state()?.vs, rng))
    }

    fn version_space(&self) -> Option<&VersionSpace> {
        self.state.as_ref().map(|s| &s.vs)
    }
}

fn uniform(vs: &VersionSpace) -> Mixture {
    Mixture::uniform(vs.alive().iter().map(|&h| UnionPredictor::single(h))).expect("non-empty version space")
}
