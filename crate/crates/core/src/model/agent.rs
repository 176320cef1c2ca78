use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hypothesis::Label;
use super::space::{MetricOracle, Point};
use crate::error::{Error, Result};

/// The set of features an agent can move to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManipulationSet {
    /// Closed ball `B(x; radius)` around the agent's own feature.
    Ball { radius: f64 },
    /// Explicit member list, sorted and de-duplicated.
    Explicit { members: Arc<[Point]> },
}

impl ManipulationSet {
    pub fn ball(radius: f64) -> Self {
        ManipulationSet::Ball { radius }
    }

    pub fn explicit(members: impl IntoIterator<Item = Point>) -> Self {
        let mut v: Vec<Point> = members.into_iter().collect();
        v.sort();
        v.dedup();
        ManipulationSet::Explicit { members: v.into() }
    }

    pub fn is_ball(&self) -> bool {
        matches!(self, ManipulationSet::Ball { .. })
    }
}

/// A strategic example `(x, u, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub x: Point,
    pub u: ManipulationSet,
    pub y: Label,
}

impl Agent {
    pub fn new(x: Point, u: ManipulationSet, y: Label) -> Result<Self> {
        match &u {
            ManipulationSet::Ball { radius } if radius.is_nan() || *radius < 0.0 => {
                return Err(Error::InvalidAgent(format!("radius {radius}")));
            }
            ManipulationSet::Explicit { members } if members.binary_search(&x).is_err() => {
                return Err(Error::InvalidAgent(format!("{x:?} missing from its manipulation set")));
            }
            _ => {}
        }
        Ok(Agent { x, u, y })
    }

    /// Ball agent `(x, r, y)`.
    pub fn ball(x: Point, radius: f64, y: Label) -> Result<Self> {
        Agent::new(x, ManipulationSet::ball(radius), y)
    }

    /// Check every point the agent mentions against a space.
    pub fn validate(&self, space: &dyn MetricOracle) -> Result<()> {
        space.check(&self.x)?;
        if let ManipulationSet::Explicit { members } = &self.u {
            for p in members.iter() {
                space.check(p)?;
            }
        }
        Ok(())
    }
}

/// How an agent picks among equally good manipulations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreakPolicy {
    /// Smallest point in the fixed point order.
    #[default]
    FixedLowestIndex,
    /// Uniform over the tie set, drawn from the tie-breaking stream.
    UniformRandom,
}
