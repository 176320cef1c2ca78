use serde::{Deserialize, Serialize};

use super::{
    Boost, BoostConfig, LongestSurvivor, Mwmr, RandomUnion, SequentialElimination, StrategicHalving, SurvivorConfig,
};
use crate::error::{Error, Result};
use crate::protocol::Learner;

pub const BASE_LEARNERS: [&str; 4] = ["halving", "mwmr", "random-union", "seq-elim"];

/// Parameters shared by the wrapper learners.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LearnerParams {
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    /// Survivor mistake budget `B`.
    pub budget: Option<usize>,
    /// Boost base rounds; derived from `rounds` when unset.
    pub t_base: Option<usize>,
    /// Total protocol rounds available.
    pub rounds: usize,
}

impl LearnerParams {
    fn eps_delta(&self) -> (f64, f64) {
        (self.epsilon.unwrap_or(0.1), self.delta.unwrap_or(0.1))
    }

    /// Boost configuration fitting `rounds` when `t_base` is unset.
    pub fn boost_config(&self) -> Result<BoostConfig> {
        let (eps, delta) = self.eps_delta();
        let probe = BoostConfig::new(eps, delta, 1)?;
        let t_base = match self.t_base {
            Some(t) => t,
            None => (self.rounds / probe.rounds).checked_sub(probe.m0).filter(|&t| t > 0).ok_or_else(|| {
                Error::parameter(format!(
                    "{} rounds cannot fit {} boosting rounds of {} validation samples",
                    self.rounds, probe.rounds, probe.m0
                ))
            })?,
        };
        BoostConfig::new(eps, delta, t_base)
    }
}

/// Build a learner from its registry name: `halving`, `mwmr`,
/// `random-union`, `seq-elim`, `survivor:<base>`, `boost:<base>`.
pub fn learner_from_name(name: &str, params: &LearnerParams) -> Result<Box<dyn Learner>> {
    if let Some(base) = name.strip_prefix("survivor:") {
        let (eps, delta) = params.eps_delta();
        let cfg = SurvivorConfig::new(params.budget, eps, delta)?;
        return Ok(Box::new(LongestSurvivor::new(learner_from_name(base, params)?, cfg)?));
    }
    if let Some(base) = name.strip_prefix("boost:") {
        let cfg = params.boost_config()?;
        let inner = LearnerParams { rounds: cfg.t_base, t_base: None, ..params.clone() };
        return Ok(Box::new(Boost::new(learner_from_name(base, &inner)?, cfg)));
    }
    Ok(match name {
        "halving" => Box::new(StrategicHalving::new()),
        "mwmr" => Box::new(Mwmr::new()),
        "random-union" => Box::new(RandomUnion::new()),
        "seq-elim" => Box::new(SequentialElimination::new()),
        _ => return Err(Error::Unknown { kind: "learner", name: name.to_string() }),
    })
}
