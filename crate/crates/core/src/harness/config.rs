use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::environments::{environment_from_name, EnvParams, RadiusLaw};
use crate::error::{Error, Result};
use crate::learners::{learner_from_name, LearnerParams};
use crate::protocol::{ensure_supported, FeedbackSetting};

/// Online: mistakes over `T` rounds. Pac: `T` i.i.d. rounds, then the
/// output's population loss.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Online,
    Pac,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "online" => Ok(Mode::Online),
            "pac" => Ok(Mode::Pac),
            _ => Err(Error::Unknown { kind: "mode", name: s.to_string() }),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Online => "online",
            Mode::Pac => "pac",
        })
    }
}

/// One experiment: environment, learner, setting, horizon and seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub env: String,
    pub env_params: EnvParams,
    pub learner: String,
    pub learner_params: LearnerParams,
    pub setting: FeedbackSetting,
    pub rounds: usize,
    pub seeds: Vec<u64>,
    /// Defaults to `pac` for the wrapper learners, else `online`.
    pub mode: Option<Mode>,
    /// Monte Carlo draws per output loss when the support is not enumerable.
    pub loss_samples: usize,
    /// Draws used to estimate a learner's predictor law.
    pub estimation_samples: usize,
    /// Bound names to evaluate; `None` picks the learner's default.
    pub bounds: Option<Vec<String>>,
    /// Family noise; falls back to the learner's `epsilon`.
    pub family_epsilon: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            env: "random-realizable".into(),
            env_params: EnvParams::default(),
            learner: "halving".into(),
            learner_params: LearnerParams::default(),
            setting: FeedbackSetting::XBeforeDeltaAfter,
            rounds: 1000,
            seeds: (0..10).collect(),
            mode: None,
            loss_samples: 100_000,
            estimation_samples: 1000,
            bounds: None,
            family_epsilon: None,
        }
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::parameter(format!("{key}: cannot parse {value:?}")))
}

/// `"200"` is a count, `"3..7"` a range, `"1,5,9"` a list.
pub fn parse_seeds(value: &str) -> Result<Vec<u64>> {
    let value = value.trim();
    if let Some((lo, hi)) = value.split_once("..") {
        let (lo, hi): (u64, u64) = (num("seeds", lo)?, num("seeds", hi)?);
        return Ok((lo..hi).collect());
    }
    if value.contains(',') {
        return value.split(',').filter(|s| !s.trim().is_empty()).map(|s| num("seeds", s)).collect();
    }
    Ok((0..num::<u64>("seeds", value)?).collect())
}

/// `"0..2.5"` is uniform, `"0,1,2"` a uniform choice.
fn parse_radius(value: &str) -> Result<RadiusLaw> {
    if let Some((lo, hi)) = value.split_once("..") {
        return Ok(RadiusLaw::Uniform { lo: num("radius", lo)?, hi: num("radius", hi)? });
    }
    Ok(RadiusLaw::Choice(value.split(',').map(|s| num("radius", s)).collect::<Result<_>>()?))
}

impl ExperimentConfig {
    /// Apply one `key = value` setting. Keys mirror the CLI flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        fn opt(s: &str) -> Option<&str> {
            if s == "none" || s.is_empty() {
                None
            } else {
                Some(s)
            }
        }
        match key.trim().trim_start_matches("--") {
            "env" => self.env = v.to_string(),
            "learner" => self.learner = v.to_string(),
            "setting" => self.setting = v.parse()?,
            "n" => self.env_params.n = num(key, v)?,
            "T" | "rounds" => self.rounds = num(key, v)?,
            "eps" | "epsilon" => self.learner_params.epsilon = Some(num(key, v)?),
            "delta" => self.learner_params.delta = Some(num(key, v)?),
            "budget" => self.learner_params.budget = opt(v).map(|s| num(key, s)).transpose()?,
            "t-base" => self.learner_params.t_base = opt(v).map(|s| num(key, s)).transpose()?,
            "family-eps" => self.family_epsilon = opt(v).map(|s| num(key, s)).transpose()?,
            "alpha" => self.env_params.alpha = num(key, v)?,
            "target" => self.env_params.target = opt(v).map(|s| num(key, s)).transpose()?,
            "c" => self.env_params.c = opt(v).map(|s| num(key, s)).transpose()?,
            "radius" => self.env_params.radius = parse_radius(v)?,
            "seeds" => self.seeds = parse_seeds(v)?,
            "mode" => self.mode = opt(v).map(str::parse).transpose()?,
            "loss-samples" => self.loss_samples = num(key, v)?,
            "estimation-samples" => self.estimation_samples = num(key, v)?,
            "bounds" => {
                self.bounds = match v {
                    "default" => None,
                    "none" | "" => Some(Vec::new()),
                    _ => Some(v.split(',').map(|s| s.trim().to_string()).collect()),
                }
            }
            other => return Err(Error::Unknown { kind: "config key", name: other.to_string() }),
        }
        Ok(())
    }

    /// Flat `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parameter(format!("line {}: expected key = value, got {line:?}", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or(if self.learner.contains(':') { Mode::Pac } else { Mode::Online })
    }

    /// Environment parameters with the family noise resolved.
    pub fn resolved_env_params(&self) -> EnvParams {
        let mut p = self.env_params.clone();
        if let Some(e) = self.family_epsilon.or(self.learner_params.epsilon) {
            p.epsilon = e;
        }
        p
    }

    pub fn resolved_learner_params(&self) -> LearnerParams {
        LearnerParams { rounds: self.rounds, ..self.learner_params.clone() }
    }

    /// Builds the environment and learner once and checks they fit together.
    pub fn validate(&self) -> Result<()> {
        if self.loss_samples == 0 {
            return Err(Error::parameter("loss-samples must be >= 1"));
        }
        let env = environment_from_name(&self.env, &self.resolved_env_params())?;
        let learner = learner_from_name(&self.learner, &self.resolved_learner_params())?;
        ensure_supported(learner.as_ref(), self.setting)?;
        if self.mode() == Mode::Pac && env.distribution().is_none() {
            return Err(Error::parameter(format!("{} is adaptive; PAC runs need an i.i.d. environment", self.env)));
        }
        Ok(())
    }
}
