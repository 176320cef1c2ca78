use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{distance_to_hypothesis, Instance, Label, Point, UnionPredictor, TOL};

/// Alive hypothesis indices, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionSpace {
    alive: Vec<usize>,
}

impl VersionSpace {
    pub fn full(n: usize) -> Self {
        VersionSpace { alive: (0..n).collect() }
    }

    pub fn from_alive(mut alive: Vec<usize>) -> Self {
        alive.sort_unstable();
        alive.dedup();
        VersionSpace { alive }
    }

    pub fn alive(&self) -> &[usize] {
        &self.alive
    }

    pub fn len(&self) -> usize {
        self.alive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    pub fn contains(&self, h: usize) -> bool {
        self.alive.binary_search(&h).is_ok()
    }

    /// Lowest alive index.
    pub fn first(&self) -> Option<usize> {
        self.alive.first().copied()
    }

    /// Drop every `h` with `remove(h)`. Returns the number removed; emptying
    /// the space is a realizability violation and leaves it unchanged.
    pub fn eliminate(&mut self, mut remove: impl FnMut(usize) -> Result<bool>) -> Result<usize> {
        let mut kept = Vec::with_capacity(self.alive.len());
        for &h in &self.alive {
            if !remove(h)? {
                kept.push(h);
            }
        }
        if kept.is_empty() {
            return Err(Error::Realizability { round: 0, detail: "version space emptied".into() });
        }
        let removed = self.alive.len() - kept.len();
        self.alive = kept;
        Ok(removed)
    }

    /// Distance-based elimination after a mistake on `x` under `f`:
    /// `y = +1` drops `d(x,h) >= d(x,f)`, `y = -1` drops `d(x,h) <= d(x,f)`.
    pub fn distance_update(&mut self, instance: &Instance, x: &Point, f: &UnionPredictor, y: Label) -> Result<usize> {
        let space = instance.space.as_ref();
        let class = instance.class.as_ref();
        let d_f = distance_to_hypothesis(space, x, &class.view(f))?;
        self.eliminate(|h| {
            let d = distance_to_hypothesis(space, x, class.get(h))?;
            Ok(match y {
                Label::Positive => d >= d_f - TOL,
                Label::Negative => d <= d_f + TOL,
            })
        })
    }
}
