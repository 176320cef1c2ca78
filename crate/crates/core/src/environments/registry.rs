use serde::{Deserialize, Serialize};

use super::adversaries::{ProbingAdversary, StarAdversary};
use super::families::{star_family, FamilyTag, IidFinite, PermutationFamily};
use super::instances::{discrete_instance, scaled_basis_instance, sphere_instance, star_instance, DEFAULT_ALPHA};
use super::stream::{RadiusLaw, RealizableStream};
use crate::error::{Error, Result};
use crate::model::{Agent, FiniteSupport, Instance};
use crate::protocol::{
    run_online, run_pac, Adversary, AgentDistribution, FeedbackSetting, IidStream, Learner, PacOutcome, RunOptions,
    Transcript,
};

pub const ENVIRONMENTS: [&str; 7] = ["star-ex42", "appE", "appG", "appI", "appJ", "appK", "random-realizable"];

/// Knobs shared by the environment builders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvParams {
    pub n: usize,
    /// Family noise parameter.
    pub epsilon: f64,
    pub alpha: f64,
    /// Realizing hypothesis; defaults to `n - 1`.
    pub target: Option<usize>,
    /// Probing threshold of the scaled-basis adversary.
    pub c: Option<f64>,
    pub radius: RadiusLaw,
}

impl Default for EnvParams {
    fn default() -> Self {
        EnvParams { n: 8, epsilon: 0.01, alpha: DEFAULT_ALPHA, target: None, c: None, radius: RadiusLaw::default() }
    }
}

impl EnvParams {
    pub fn target(&self) -> usize {
        self.target.unwrap_or(self.n.saturating_sub(1))
    }
}

pub enum AgentSource {
    Finite(IidFinite),
    Permutation(PermutationFamily),
    Stream(RealizableStream),
    Adaptive(Box<dyn Adversary>),
}

/// An instance together with the agents it is played against.
pub struct Environment {
    pub name: String,
    pub instance: Instance,
    pub source: AgentSource,
}

impl Environment {
    /// The i.i.d. law, when the source has one.
    pub fn distribution(&self) -> Option<&dyn AgentDistribution> {
        match &self.source {
            AgentSource::Finite(d) => Some(d),
            AgentSource::Permutation(d) => Some(d),
            AgentSource::Stream(d) => Some(d),
            AgentSource::Adaptive(_) => None,
        }
    }

    /// Enumerated atoms of the i.i.d. law.
    pub fn support(&self) -> Result<Vec<(Agent, f64)>> {
        match &self.source {
            AgentSource::Finite(d) => d.support(),
            AgentSource::Permutation(d) => d.support(),
            _ => Err(Error::NotEnumerable),
        }
    }

    pub fn finite_support(&self) -> Option<&dyn FiniteSupport> {
        match &self.source {
            AgentSource::Finite(d) => Some(d),
            AgentSource::Permutation(d) => Some(d),
            _ => None,
        }
    }

    pub fn target(&self) -> Option<usize> {
        match &self.source {
            AgentSource::Adaptive(a) => a.target(),
            _ => self.distribution().and_then(|d| d.target()),
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self.source, AgentSource::Adaptive(_))
    }

    pub fn run_online(
        &mut self,
        learner: &mut dyn Learner,
        setting: FeedbackSetting,
        rounds: usize,
        seed: u64,
        opts: &RunOptions,
    ) -> Result<Transcript> {
        let instance = &self.instance;
        match &mut self.source {
            AgentSource::Adaptive(a) => run_online(instance, a.as_mut(), learner, setting, rounds, seed, opts),
            AgentSource::Finite(d) => run_online(instance, &mut IidStream(d), learner, setting, rounds, seed, opts),
            AgentSource::Permutation(d) => {
                run_online(instance, &mut IidStream(d), learner, setting, rounds, seed, opts)
            }
            AgentSource::Stream(d) => run_online(instance, &mut IidStream(d), learner, setting, rounds, seed, opts),
        }
    }

    pub fn run_pac(
        &self,
        learner: &mut dyn Learner,
        setting: FeedbackSetting,
        rounds: usize,
        seed: u64,
        opts: &RunOptions,
    ) -> Result<PacOutcome> {
        let dist = self
            .distribution()
            .ok_or_else(|| Error::parameter(format!("{} is adaptive and has no PAC distribution", self.name)))?;
        run_pac(&self.instance, dist, learner, setting, rounds, seed, opts)
    }
}

/// Build an environment by name. `random-realizable` takes an optional
/// space suffix: `:basis` (default), `:star`, `:sphere`, `:discrete`.
pub fn environment_from_name(name: &str, p: &EnvParams) -> Result<Environment> {
    let env = |instance, source| Ok(Environment { name: name.to_string(), instance, source });
    if let Some(rest) = name.strip_prefix("random-realizable") {
        let instance = match rest {
            "" | ":basis" => scaled_basis_instance(p.n)?,
            ":star" => star_instance(p.n)?,
            ":sphere" => sphere_instance(p.n, p.alpha, true)?.0,
            ":discrete" => discrete_instance(p.n)?,
            _ => return Err(Error::Unknown { kind: "environment", name: name.to_string() }),
        };
        let stream = RealizableStream::new(&instance, p.target(), p.radius.clone())?;
        return env(instance, AgentSource::Stream(stream));
    }
    match name {
        "star-ex42" => env(star_instance(p.n)?, AgentSource::Adaptive(Box::new(StarAdversary::new(p.n)?))),
        "appE" => {
            let adv = ProbingAdversary::new(p.n, p.c, p.target())?;
            env(scaled_basis_instance(p.n)?, AgentSource::Adaptive(Box::new(adv)))
        }
        "appJ" => {
            let (instance, d) = star_family(p.n, p.epsilon, p.target())?;
            env(instance, AgentSource::Finite(d))
        }
        _ => {
            let tag: FamilyTag =
                name.parse().map_err(|_| Error::Unknown { kind: "environment", name: name.to_string() })?;
            let (instance, fam) = PermutationFamily::new(tag, p.n, p.epsilon, p.alpha, p.target())?;
            env(instance, AgentSource::Permutation(fam))
        }
    }
}
