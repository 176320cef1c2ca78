use std::collections::BTreeMap;

use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;

use super::VersionSpace;
use crate::error::{Error, Result};
use crate::model::{Instance, Mixture, UnionPredictor};
use crate::protocol::{Context, Feedback, FeedbackSetting, Learner};

/// Largest version space whose exact output law is materialized.
const EXACT_MIXTURE_LIMIT: usize = 256;

/// Randomized union learner: plays the union of `k_t` uniform draws from
/// the version space, `k_t` a uniform power of two below `n_t / 2`, and
/// outputs `h1 ∨ h2` drawn from a uniformly chosen past version space.
#[derive(Debug, Default)]
pub struct RandomUnion {
    state: Option<State>,
}

#[derive(Debug)]
struct State {
    instance: Instance,
    vs: VersionSpace,
    rng: ChaCha8Rng,
    last: Option<UnionPredictor>,
    /// Rounds chosen so far.
    rounds: usize,
    /// `(first round, alive set)` change points of `VS_{t-1}`.
    history: Vec<(usize, VersionSpace)>,
}

/// Exponent range of `k_t`: `0..=max(floor(log2 n_t) - 1, 0)`.
pub fn max_exponent(n_t: usize) -> u32 {
    n_t.max(1).ilog2().saturating_sub(1)
}

/// Draw `k_t`, then `k_t` members with replacement.
pub fn random_union_choose(vs: &VersionSpace, rng: &mut dyn RngCore) -> UnionPredictor {
    let k = 1usize << rng.gen_range(0..=max_exponent(vs.len()));
    UnionPredictor::new((0..k).map(|_| vs.alive()[rng.gen_range(0..vs.len())]).collect())
}

/// `h1 ∨ h2` from `VS_{τ-1}`, `τ` uniform on `[T]`.
pub fn random_union_finalize(
    history: &[(usize, VersionSpace)],
    rounds: usize,
    rng: &mut dyn RngCore,
) -> Result<UnionPredictor> {
    if rounds == 0 {
        return Err(Error::parameter("finalize needs at least one round"));
    }
    let tau = rng.gen_range(1..=rounds);
    let idx = history.partition_point(|(start, _)| *start <= tau) - 1;
    let vs = &history[idx].1;
    let h1 = vs.alive()[rng.gen_range(0..vs.len())];
    let h2 = vs.alive()[rng.gen_range(0..vs.len())];
    Ok(UnionPredictor::new(vec![h1, h2]))
}

/// Exact law of [`random_union_finalize`], merged by positive region.
pub fn random_union_output_mixture(history: &[(usize, VersionSpace)], rounds: usize) -> Result<Mixture> {
    if rounds == 0 {
        return Err(Error::parameter("finalize needs at least one round"));
    }
    let mut atoms: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (i, (start, vs)) in history.iter().enumerate() {
        let end = history.get(i + 1).map_or(rounds + 1, |(s, _)| *s).min(rounds + 1);
        if end <= *start {
            continue;
        }
        let w_tau = (end - start) as f64 / rounds as f64;
        let m = vs.len() as f64;
        for &a in vs.alive() {
            for &b in vs.alive() {
                let key = if a <= b { vec![a, b] } else { vec![b, a] };
                let key = UnionPredictor::new(key).canonical();
                *atoms.entry(key).or_default() += w_tau / (m * m);
            }
        }
    }
    let total: f64 = atoms.values().sum();
    Mixture::new(atoms.into_iter().map(|(p, w)| (UnionPredictor::new(p), w / total)).collect())
}

impl RandomUnion {
    pub fn new() -> Self {
        Self::default()
    }

    fn state(&self) -> Result<&State> {
        self.state.as_ref().ok_or_else(|| Error::contract("learner used before reset"))
    }

    /// Version-space change points and rounds played.
    pub fn history(&self) -> Option<(&[(usize, VersionSpace)], usize)> {
        self.state.as_ref().map(|s| (s.history.as_slice(), s.rounds))
    }
}

impl Learner for RandomUnion {
    fn name(&self) -> String {
        "random-union".into()
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
        let vs = VersionSpace::full(instance.class.len());
        self.state =
            Some(State { instance: instance.clone(), history: vec![(1, vs.clone())], vs, rng, last: None, rounds: 0 });
        Ok(())
    }

    fn choose(&mut self, _ctx: &Context) -> Result<UnionPredictor> {
        let st = self.state.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        let f = random_union_choose(&st.vs, &mut st.rng);
        st.rounds += 1;
        st.last = Some(f.clone());
        Ok(f)
    }

    fn observe(&mut self, feedback: &Feedback) -> Result<()> {
        let st = self.state.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        let f = st.last.take().ok_or_else(|| Error::contract("observe without choose"))?;
        if feedback.mistake() && st.vs.distance_update(&st.instance, feedback.x()?, &f, feedback.y)? > 0 {
            st.history.push((st.rounds + 1, st.vs.clone()));
        }
        Ok(())
    }

    fn finalize(&mut self) -> Result<UnionPredictor> {
        let st = self.state.as_mut().ok_or_else(|| Error::contract("learner used before reset"))?;
        random_union_finalize(&st.history, st.rounds, &mut st.rng)
    }

    fn output_mixture(&self) -> Option<Mixture> {
        let st = self.state().ok()?;
        if st.history.first()?.1.len() > EXACT_MIXTURE_LIMIT {
            return None;
        }
        random_union_output_mixture(&st.history, st.rounds).ok()
    }

    fn sample_predictor(&self, _ctx: &Context, rng: &mut dyn RngCore) -> Result<UnionPredictor> {
        Ok(random_union_choose(&self.state()?.vs, rng))
    }

    fn version_space(&self) -> Option<&VersionSpace> {
        self.state.as_ref().map(|s| &s.vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_ranges() {
        assert_eq!(max_exponent(1), 0);
        assert_eq!(max_exponent(2), 0);
        assert_eq!(max_exponent(3), 0);
        assert_eq!(max_exponent(4), 1);
        assert_eq!(max_exponent(8), 2);
        assert_eq!(max_exponent(1024), 9);
    }

    #[test]
    fn output_mixture_weights_segments() {
        let history = vec![(1, VersionSpace::full(2)), (3, VersionSpace::from_alive(vec![1]))];
        let m = random_union_output_mixture(&history, 4).unwrap();
        // half the rounds see {0,1}: [0] 1/8, [0,1] 1/4, [1] 1/8; the rest see {1}
        let p = |parts: &[usize]| m.prob(|f| f.canonical() == parts);
        assert!((p(&[0]) - 0.125).abs() < 1e-12);
        assert!((p(&[0, 1]) - 0.25).abs() < 1e-12);
        assert!((p(&[1]) - 0.625).abs() < 1e-12);
    }
}
