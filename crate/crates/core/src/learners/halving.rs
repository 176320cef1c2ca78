use std::cmp::Ordering;

use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use super::VersionSpace;
use crate::error::{Error, Result};
use crate::model::{distance_to_hypothesis, Instance, Mixture, Point, UnionPredictor};
use crate::protocol::{Context, Feedback, FeedbackSetting, Learner};

/// Strategic Halving: play the median-distance hypothesis of the version
/// space, halve it on every mistake. Needs x before the round.
#[derive(Debug, Default)]
pub struct StrategicHalving {
    state: Option<State>,
}

#[derive(Debug)]
struct State {
    instance: Instance,
    vs: VersionSpace,
    last: Option<(Point, UnionPredictor)>,
}

/// Member of `vs` at 1-based rank `ceil(|vs|/2)` in `(d(x,h), h)` order.
pub fn strategic_halving_choose(instance: &Instance, vs: &VersionSpace, x: &Point) -> Result<usize> {
    if vs.is_empty() {
        return Err(Error::contract("empty version space"));
    }
    let space = instance.space.as_ref();
    let mut keyed = vs
        .alive()
        .iter()
        .map(|&h| Ok((distance_to_hypothesis(space, x, instance.class.get(h))?, h)))
        .collect::<Result<Vec<(f64, usize)>>>()?;
    let rank = keyed.len().div_ceil(2) - 1;
    let (_, &mut (_, h), _) =
        keyed.select_nth_unstable_by(rank, |a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1)));
    Ok(h)
}

impl StrategicHalving {
    pub fn new() -> Self {
        Self::default()
    }

    fn state(&self) -> Result<&State> {
        self.state.as_ref().ok_or_else(|| Error::contract("learner used before reset"))
    }

    fn pick(&self, ctx: &Context) -> Result<UnionPredictor> {
        let st = self.state()?;
        let x = ctx.x().ok_or_else(|| Error::contract("strategic halving needs x before the round"))?;
        Ok(UnionPredictor::single(strategic_halving_choose(&st.instance, &st.vs, x)?))
    }
}

impl Learner for StrategicHalving {
    fn name(&self) -> String {
        "halving".into()
    }

    fn supported_settings(&self) -> Vec<FeedbackSetting> {
        vec![FeedbackSetting::XBeforeDeltaAfter]
    }

    fn is_conservative(&self) -> bool {
        true
    }

    fn is_deterministic(&self) -> bool {
        true
    }

    fn mistake_budget(&self, class_size: usize) -> Option<usize> {
        Some(class_size.next_power_of_two().trailing_zeros() as usize)
    }

    fn reset(&mut self, instance: &Instance, _setting: FeedbackSetting, _rng: ChaCha8Rng) -> Result<()> {
        self.state =
            Some(State { instance: instance.clone(), vs: VersionSpace::full(instance.class.len()), last: None });
        Ok(())
    }

    fn choose(&mut self, ctx: &Context) -> Result<UnionPredictor> {
        let f = self.pick(ctx)?;
        let x = ctx.x().cloned().expect("checked in pick");
        self.state.as_mut().expect("checked in pick").last = Some((x, f.clone()));
        Ok(f)
    }

    fn observe(&mut self, feedback: &Feedback) -> Result<()> {
        let st = self.state.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        let (x, f) = st.last.take().ok_or_else(|| Error::contract("observe without choose"))?;
        if feedback.mistake() {
            if feedback.x()? != &x {
                return Err(Error::contract("feedback x differs from the context"));
            }
            st.vs.distance_update(&st.instance, &x, &f, feedback.y)?;
        }
        Ok(())
    }

    fn finalize(&mut self) -> Result<UnionPredictor> {
        let st = self.state()?;
        Ok(UnionPredictor::single(st.vs.first().expect("non-empty")))
    }

    fn predictor_distribution(&self, ctx: &Context) -> Option<Result<Mixture>> {
        Some(self.pick(ctx).map(Mixture::point_mass))
    }

    fn sample_predictor(&self, ctx: &Context, _rng: &mut dyn RngCore) -> Result<UnionPredictor> {
        self.pick(ctx)
    }

    fn version_space(&self) -> Option<&VersionSpace> {
        self.state.as_ref().map(|s| &s.vs)
    }
}
