use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{can_reach_positive, Agent, Instance, Label, ManipulationSet, Point, TieBreakPolicy};
use crate::protocol::{AgentDistribution, FixedSequence};

/// Distribution of ball radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusLaw {
    Uniform { lo: f64, hi: f64 },
    Choice(Vec<f64>),
}

impl Default for RadiusLaw {
    fn default() -> Self {
        RadiusLaw::Uniform { lo: 0.0, hi: 2.5 }
    }
}

impl RadiusLaw {
    fn check(&self) -> Result<()> {
        let ok = match self {
            RadiusLaw::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && 0.0 <= *lo && lo <= hi,
            RadiusLaw::Choice(v) => !v.is_empty() && v.iter().all(|r| r.is_finite() && *r >= 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::parameter(format!("radius law {self:?} must be bounded and non-negative")))
        }
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        match self {
            RadiusLaw::Uniform { lo, hi } if lo == hi => *lo,
            RadiusLaw::Uniform { lo, hi } => rng.gen_range(*lo..=*hi),
            RadiusLaw::Choice(v) => v[rng.gen_range(0..v.len())],
        }
    }
}

/// Uniform features, random radii, labels `y = h*(Δ(x, h*, r))`.
#[derive(Clone, Debug)]
pub struct RealizableStream {
    instance: Instance,
    points: Option<Vec<Point>>,
    target: usize,
    law: RadiusLaw,
}

impl RealizableStream {
    pub fn new(instance: &Instance, target: usize, law: RadiusLaw) -> Result<Self> {
        if target >= instance.class.len() {
            return Err(Error::parameter(format!("target {target} outside class of size {}", instance.class.len())));
        }
        law.check()?;
        Ok(RealizableStream { points: instance.space.points(), instance: instance.clone(), target, law })
    }
}

impl AgentDistribution for RealizableStream {
    fn name(&self) -> String {
        "random-realizable".into()
    }

    fn target(&self) -> Option<usize> {
        Some(self.target)
    }

    fn tie_policy(&self) -> TieBreakPolicy {
        TieBreakPolicy::FixedLowestIndex
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Agent {
        let x = match &self.points {
            Some(pts) => pts[rng.gen_range(0..pts.len())].clone(),
            None => self.instance.space.sample_point(rng),
        };
        let r = self.law.sample(rng);
        let h = self.instance.class.get(self.target);
        let mut agent = Agent { x, u: ManipulationSet::ball(r), y: Label::Negative };
        let positive = crate::model::Classifier::is_positive(h, &agent.x)
            || can_reach_positive(self.instance.space.as_ref(), &agent, h).expect("sampled point lies in the space");
        agent.y = Label::from_bool(positive);
        agent
    }
}

/// A materialized realizable stream of `rounds` agents.
pub fn random_realizable_stream(
    instance: &Instance,
    target: usize,
    rounds: usize,
    seed: u64,
    law: RadiusLaw,
) -> Result<FixedSequence> {
    let source = RealizableStream::new(instance, target, law)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(FixedSequence {
        agents: (0..rounds).map(|_| source.sample(&mut rng)).collect(),
        target: Some(target),
        tie: TieBreakPolicy::FixedLowestIndex,
    })
}
