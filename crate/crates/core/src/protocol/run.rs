use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::learner::{ensure_supported, Learner, LearnerView};
use super::setting::{Feedback, FeedbackSetting};
use super::transcript::{RoundRecord, Transcript};
use crate::error::{Error, Result};
use crate::model::{
    best_response, distance_to_hypothesis, predict, strategic_loss, Agent, Classifier, Instance, Label,
    ManipulationSet, Mixture, TieBreakPolicy, UnionPredictor, TOL,
};

/// Independent randomness sources of one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Learner = 1,
    Agents = 2,
    Ties = 3,
    Estimation = 4,
}

/// The named stream of a run seed.
pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

/// Randomness handed to an agent source each round.
pub struct SourceRngs {
    pub agents: ChaCha8Rng,
    pub estimation: ChaCha8Rng,
}

/// An adaptive (or fixed) sequence of agents.
pub trait Adversary: Send {
    fn name(&self) -> String;

    /// Declared realizing hypothesis, if any.
    fn target(&self) -> Option<usize>;

    fn tie_policy(&self) -> TieBreakPolicy {
        TieBreakPolicy::FixedLowestIndex
    }

    fn reset(&mut self, _instance: &Instance, _setting: FeedbackSetting) -> Result<()> {
        Ok(())
    }

    /// Emit the agent of round `t` (1-based).
    fn next_agent(&mut self, t: usize, learner: &LearnerView<'_>, rng: &mut SourceRngs) -> Result<Agent>;

    /// Realized outcome of the round just played.
    fn observe(&mut self, _record: &RoundRecord) -> Result<()> {
        Ok(())
    }
}

/// An i.i.d. agent distribution.
pub trait AgentDistribution: Send + Sync {
    fn name(&self) -> String;

    fn target(&self) -> Option<usize>;

    fn tie_policy(&self) -> TieBreakPolicy;

    fn sample(&self, rng: &mut dyn RngCore) -> Agent;
}

/// Oblivious adversary drawing i.i.d. from a distribution.
pub struct IidStream<'a>(pub &'a dyn AgentDistribution);

impl Adversary for IidStream<'_> {
    fn name(&self) -> String {
        self.0.name()
    }

    fn target(&self) -> Option<usize> {
        self.0.target()
    }

    fn tie_policy(&self) -> TieBreakPolicy {
        self.0.tie_policy()
    }

    fn next_agent(&mut self, _t: usize, _learner: &LearnerView<'_>, rng: &mut SourceRngs) -> Result<Agent> {
        Ok(self.0.sample(&mut rng.agents))
    }
}

/// A pre-generated agent sequence.
#[derive(Clone, Debug)]
pub struct FixedSequence {
    pub agents: Vec<Agent>,
    pub target: Option<usize>,
    pub tie: TieBreakPolicy,
}

impl Adversary for FixedSequence {
    fn name(&self) -> String {
        "sequence".into()
    }

    fn target(&self) -> Option<usize> {
        self.target
    }

    fn tie_policy(&self) -> TieBreakPolicy {
        self.tie
    }

    fn next_agent(&mut self, t: usize, _learner: &LearnerView<'_>, _rng: &mut SourceRngs) -> Result<Agent> {
        self.agents
            .get(t - 1)
            .cloned()
            .ok_or_else(|| Error::parameter(format!("sequence has {} agents, round {t} requested", self.agents.len())))
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub keep_rounds: bool,
    /// Skip `observe` on correct rounds (conservative replay).
    pub withhold_correct_feedback: bool,
    /// Draws used to estimate a learner's predictor law when it exposes none.
    pub estimation_samples: usize,
    pub check_realizability: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            keep_rounds: false,
            withhold_correct_feedback: false,
            estimation_samples: 1000,
            check_realizability: true,
        }
    }
}

impl RunOptions {
    pub fn keep() -> Self {
        RunOptions { keep_rounds: true, ..Default::default() }
    }
}

/// One round of the protocol: context, choice, best response, feedback.
#[allow(clippy::too_many_arguments)]
pub fn run_round(
    instance: &Instance,
    agent: &Agent,
    learner: &mut dyn Learner,
    setting: FeedbackSetting,
    tie: TieBreakPolicy,
    t: usize,
    ties: &mut dyn RngCore,
    opts: &RunOptions,
) -> Result<RoundRecord> {
    let space = instance.space.as_ref();
    let context = setting.context(&agent.x);
    let f = learner.choose(&context)?;
    f.check(&instance.class)?;
    let view = instance.class.view(&f);
    let delta = best_response(space, agent, &view, tie, ties)?;
    let y_hat = predict(space, &view, &delta)?;
    let mistake = y_hat != agent.y;

    let loss = strategic_loss(space, &view, agent, tie)?;
    if (loss == 1.0) != mistake {
        return Err(Error::contract(format!("round {t}: loss {loss} disagrees with mistake flag {mistake}")));
    }
    if setting.reveals_x() && matches!(agent.u, ManipulationSet::Ball { .. }) {
        let recovered = match y_hat {
            Label::Negative => delta == agent.x,
            Label::Positive => {
                view.is_positive(&delta)
                    && space.dist(&agent.x, &delta)? <= distance_to_hypothesis(space, &agent.x, &view)? + TOL
            }
        };
        if !recovered {
            return Err(Error::Recovery(t));
        }
    }

    if !(opts.withhold_correct_feedback && !mistake) {
        learner.observe(&Feedback::new(setting, &agent.x, &delta, agent.y, y_hat))?;
    }
    Ok(RoundRecord { t, context, predictor: f, x: agent.x.clone(), delta, y_hat, y: agent.y, mistake })
}

/// Tracks whether some class member has zero loss on every agent so far.
struct Realizability<'a> {
    instance: &'a Instance,
    tie: TieBreakPolicy,
    target: Option<usize>,
    consistent: Option<Vec<usize>>,
    history: Vec<Agent>,
}

impl<'a> Realizability<'a> {
    fn new(instance: &'a Instance, target: Option<usize>, tie: TieBreakPolicy) -> Result<Self> {
        if let Some(i) = target {
            if i >= instance.class.len() {
                return Err(Error::parameter(format!("target {i} outside class of size {}", instance.class.len())));
            }
        }
        let consistent = target.is_none().then(|| (0..instance.class.len()).collect());
        Ok(Realizability { instance, tie, target, consistent, history: Vec::new() })
    }

    fn fits(&self, h: usize, agent: &Agent) -> Result<bool> {
        Ok(strategic_loss(self.instance.space.as_ref(), self.instance.class.get(h), agent, self.tie)? == 0.0)
    }

    fn push(&mut self, t: usize, agent: &Agent) -> Result<()> {
        if let Some(h) = self.target {
            if self.fits(h, agent)? {
                self.history.push(agent.clone());
                return Ok(());
            }
            // declared target broken: fall back to a full scan
            self.target = None;
            let mut alive = Vec::new();
            for h in 0..self.instance.class.len() {
                let mut ok = true;
                for a in &self.history {
                    if !self.fits(h, a)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    alive.push(h);
                }
            }
            self.consistent = Some(alive);
            self.history.clear();
        }
        let alive = self.consistent.take().unwrap_or_default();
        let mut kept = Vec::with_capacity(alive.len());
        for h in alive {
            if self.fits(h, agent)? {
                kept.push(h);
            }
        }
        if kept.is_empty() {
            return Err(Error::Realizability {
                round: t,
                detail: format!("no hypothesis is consistent with agent {agent:?}"),
            });
        }
        self.consistent = Some(kept);
        Ok(())
    }
}

/// Run `rounds` rounds against an agent source.
pub fn run_online(
    instance: &Instance,
    source: &mut dyn Adversary,
    learner: &mut dyn Learner,
    setting: FeedbackSetting,
    rounds: usize,
    seed: u64,
    opts: &RunOptions,
) -> Result<Transcript> {
    ensure_supported(learner, setting)?;
    learner.reset(instance, setting, stream(seed, Stream::Learner))?;
    source.reset(instance, setting)?;
    let tie = source.tie_policy();
    let mut rngs = SourceRngs { agents: stream(seed, Stream::Agents), estimation: stream(seed, Stream::Estimation) };
    let mut ties = stream(seed, Stream::Ties);
    let mut tracker = Realizability::new(instance, source.target(), tie)?;
    let mut transcript = Transcript::new(setting, seed);

    for t in 1..=rounds {
        let agent = {
            let view = LearnerView::new(&*learner, setting, opts.estimation_samples);
            source.next_agent(t, &view, &mut rngs)?
        };
        agent.validate(instance.space.as_ref())?;
        if opts.check_realizability {
            tracker.push(t, &agent)?;
        }
        let record =
            run_round(instance, &agent, learner, setting, tie, t, &mut ties, opts).map_err(|e| e.at_round(t))?;
        source.observe(&record)?;
        transcript.push(record, opts.keep_rounds);
    }
    Ok(transcript)
}

/// Result of a PAC run.
#[derive(Clone, Debug)]
pub struct PacOutcome {
    pub output: UnionPredictor,
    /// Exact law of `output` when the learner exposes it.
    pub mixture: Option<Mixture>,
    pub transcript: Transcript,
}

/// `rounds` i.i.d. rounds followed by `finalize`.
pub fn run_pac(
    instance: &Instance,
    dist: &dyn AgentDistribution,
    learner: &mut dyn Learner,
    setting: FeedbackSetting,
    rounds: usize,
    seed: u64,
    opts: &RunOptions,
) -> Result<PacOutcome> {
    let transcript = run_online(instance, &mut IidStream(dist), learner, setting, rounds, seed, opts)?;
    let mixture = learner.output_mixture();
    let output = learner.finalize()?;
    output.check(&instance.class)?;
    Ok(PacOutcome { output, mixture, transcript })
}
