use serde::{Deserialize, Serialize};

use super::instances::INNER_SCALE;
use crate::error::{Error, Result};
use crate::model::{Agent, Classifier, Factor, Instance, Label, Mixture, Point, UnionPredictor};
use crate::protocol::{Adversary, Context, FeedbackSetting, LearnerView, RoundRecord, SourceRngs};

fn no_context(setting: FeedbackSetting) -> Result<()> {
    if setting.reveals_x_before() {
        return Err(Error::contract("adaptive adversaries run only in settings without context"));
    }
    Ok(())
}

/// Star-space adversary against deterministic learners: every predictor
/// is made to err while all but one spoke singleton stay consistent.
///
/// * all-negative `f_t`: `(0, 1, +)`
/// * `f_t(0) = +`: `(0, 0, -)`
/// * `f_t` positive on spokes: `(i, 0, -)` for the lowest such spoke whose
///   singleton is not the last consistent one, else `(0, 1, +)`.
#[derive(Clone, Debug)]
pub struct StarAdversary {
    n: usize,
    /// Spoke singletons still consistent with the emitted agents.
    alive: Vec<bool>,
    instance: Option<Instance>,
}

impl StarAdversary {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("star adversary needs n >= 1"));
        }
        Ok(StarAdversary { n, alive: vec![true; n], instance: None })
    }

    pub fn consistent(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.alive[j]).collect()
    }

    fn respond(&mut self, f: &UnionPredictor) -> Result<Agent> {
        let instance = self.instance.as_ref().ok_or_else(|| Error::contract("adversary used before reset"))?;
        let view = instance.class.view(f);
        if view.is_positive(&Point::Index(0)) {
            return Agent::ball(Point::Index(0), 0.0, Label::Negative);
        }
        let last = self.alive.iter().filter(|&&a| a).count() == 1;
        let spoke =
            (1..=self.n).filter(|&i| view.is_positive(&Point::Index(i))).find(|&i| !(last && self.alive[i - 1]));
        match spoke {
            Some(i) => {
                self.alive[i - 1] = false;
                Agent::ball(Point::Index(i), 0.0, Label::Negative)
            }
            None => Agent::ball(Point::Index(0), 1.0, Label::Positive),
        }
    }
}

impl Adversary for StarAdversary {
    fn name(&self) -> String {
        "star-ex42".into()
    }

    fn target(&self) -> Option<usize> {
        None
    }

    fn reset(&mut self, instance: &Instance, setting: FeedbackSetting) -> Result<()> {
        no_context(setting)?;
        if instance.class.len() != self.n {
            return Err(Error::parameter("star adversary needs the star instance of the same n"));
        }
        self.alive = vec![true; self.n];
        self.instance = Some(instance.clone());
        Ok(())
    }

    fn next_agent(&mut self, _t: usize, learner: &LearnerView<'_>, rng: &mut SourceRngs) -> Result<Agent> {
        let f = learner.deterministic_choice(&Context::None, &mut rng.estimation)?;
        self.respond(&f)
    }
}

/// Which rule produced an agent of [`ProbingAdversary`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeCase {
    /// Some `x ∈ {0, 0.9 e_i}` is predicted positive with probability `>= c`.
    Probe(Point),
    /// The all-negative predictor has probability `>= c`.
    AllNegative,
    /// Target the most likely basis point `i_t`.
    Basis { i_t: usize, on_target: bool },
}

/// Scaled-basis adversary against randomized learners, driven by the
/// learner's predictor distribution for the coming round.
#[derive(Clone, Debug)]
pub struct ProbingAdversary {
    pub n: usize,
    pub c: f64,
    pub target: usize,
    trace: Vec<ProbeCase>,
    instance: Option<Instance>,
}

impl ProbingAdversary {
    /// `c` defaults to `1 / (2 (n + 2))`.
    pub fn new(n: usize, c: Option<f64>, target: usize) -> Result<Self> {
        if n == 0 || target >= n {
            return Err(Error::parameter(format!("scaled-basis adversary with n={n}, target={target}")));
        }
        let c = c.unwrap_or(1.0 / (2.0 * (n as f64 + 2.0)));
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::parameter(format!("probing threshold c = {c}")));
        }
        Ok(ProbingAdversary { n, c, target, trace: Vec::new(), instance: None })
    }

    pub fn trace(&self) -> &[ProbeCase] {
        &self.trace
    }

    /// Pick the case and agent for a predictor law over unions.
    pub fn decide(&self, instance: &Instance, law: &Mixture) -> Result<(ProbeCase, Agent)> {
        let class = instance.class.as_ref();
        // probe slots: 0 is the origin, i + 1 is 0.9 e_i
        let mut probe = vec![0.0; self.n + 1];
        let mut all_negative = 0.0;
        let mut basis = vec![0.0; self.n];
        for (f, w) in law.atoms() {
            let view = class.view(f);
            let mut pos: Vec<&Point> = view.positive_points().collect();
            pos.sort();
            pos.dedup();
            let mut probed = false;
            for p in &pos {
                match p {
                    Point::Origin => probe[0] += w,
                    Point::ScaledBasis(i, _) => probe[i + 1] += w,
                    _ => continue,
                }
                probed = true;
            }
            if pos.is_empty() {
                all_negative += w;
            } else if !probed {
                for p in &pos {
                    if let Point::Basis(i) = p {
                        basis[*i] += w;
                    }
                }
            }
        }
        if let Some(slot) = probe.iter().position(|&m| m >= self.c) {
            let x = if slot == 0 { Point::Origin } else { scaled(slot - 1) };
            return Ok((ProbeCase::Probe(x.clone()), Agent::ball(x, 0.0, Label::Negative)?));
        }
        if all_negative >= self.c {
            return Ok((ProbeCase::AllNegative, Agent::ball(Point::Origin, 1.0, Label::Positive)?));
        }
        // argmax over F_* mass, lowest index on ties
        let mut i_t = 0;
        for i in 1..self.n {
            if basis[i] > basis[i_t] {
                i_t = i;
            }
        }
        let on_target = i_t == self.target;
        let r = if on_target { 0.0 } else { 1.0 - INNER_SCALE };
        Ok((ProbeCase::Basis { i_t, on_target }, Agent::ball(scaled(i_t), r, Label::Negative)?))
    }
}

fn scaled(i: usize) -> Point {
    Point::ScaledBasis(i, Factor(INNER_SCALE))
}

impl Adversary for ProbingAdversary {
    fn name(&self) -> String {
        "appE".into()
    }

    fn target(&self) -> Option<usize> {
        Some(self.target)
    }

    fn reset(&mut self, instance: &Instance, setting: FeedbackSetting) -> Result<()> {
        no_context(setting)?;
        if instance.class.len() != self.n {
            return Err(Error::parameter("scaled-basis adversary needs the scaled-basis instance of the same n"));
        }
        self.trace.clear();
        self.instance = Some(instance.clone());
        Ok(())
    }

    fn next_agent(&mut self, _t: usize, learner: &LearnerView<'_>, rng: &mut SourceRngs) -> Result<Agent> {
        let instance = self.instance.clone().ok_or_else(|| Error::contract("adversary used before reset"))?;
        let law = learner.distribution(&Context::None, &mut rng.estimation)?;
        let (case, agent) = self.decide(&instance, &law)?;
        self.trace.push(case);
        Ok(agent)
    }

    fn observe(&mut self, _record: &RoundRecord) -> Result<()> {
        Ok(())
    }
}
