//! Agent best response and the strategic loss.

use rand::{Rng, RngCore};

use super::agent::{Agent, ManipulationSet, TieBreakPolicy};
use super::hypothesis::{Classifier, HypothesisClass, Label, Mixture};
use super::space::{MetricOracle, Point, TOL};
use crate::error::{Error, Result};

/// `f(x)`.
pub fn predict<C: Classifier + ?Sized>(space: &dyn MetricOracle, f: &C, x: &Point) -> Result<Label> {
    space.check(x)?;
    Ok(Label::from_bool(f.is_positive(x)))
}

/// `d(x, f) = min { d(x, x') : f(x') = +1 }`, or `+inf` when `f` is
/// all-negative. For unions this is the minimum over the parts.
pub fn distance_to_hypothesis<C: Classifier + ?Sized>(space: &dyn MetricOracle, x: &Point, f: &C) -> Result<f64> {
    space.check(x)?;
    let mut best = f64::INFINITY;
    for p in f.positive_points() {
        let d = space.dist(x, p)?;
        if d < best {
            best = d;
        }
    }
    Ok(best)
}

/// The points of `u ∩ X_{f,+}` an agent is willing to move to: the nearest
/// ones for balls, all of them for explicit sets. Sorted, de-duplicated.
pub fn tie_set<C: Classifier + ?Sized>(space: &dyn MetricOracle, agent: &Agent, f: &C) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    match &agent.u {
        ManipulationSet::Ball { radius } => {
            let mut best = f64::INFINITY;
            let mut cands: Vec<(f64, &Point)> = Vec::new();
            for p in f.positive_points() {
                let d = space.dist(&agent.x, p)?;
                if d <= radius + TOL {
                    best = best.min(d);
                    cands.push((d, p));
                }
            }
            out.extend(cands.into_iter().filter(|(d, _)| *d <= best + TOL).map(|(_, p)| p.clone()));
        }
        ManipulationSet::Explicit { members } => {
            out.extend(members.iter().filter(|p| f.is_positive(p)).cloned());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `Δ(x, f, u)`: the agent's manipulated feature under `f`.
pub fn best_response<C: Classifier + ?Sized>(
    space: &dyn MetricOracle,
    agent: &Agent,
    f: &C,
    tie: TieBreakPolicy,
    rng: &mut dyn RngCore,
) -> Result<Point> {
    space.check(&agent.x)?;
    if f.is_positive(&agent.x) {
        return Ok(agent.x.clone());
    }
    let mut ties = tie_set(space, agent, f)?;
    Ok(match (ties.len(), tie) {
        (0, _) => agent.x.clone(),
        (1, _) | (_, TieBreakPolicy::FixedLowestIndex) => ties.swap_remove(0),
        (k, TieBreakPolicy::UniformRandom) => ties.swap_remove(rng.gen_range(0..k)),
    })
}

/// Whether `u ∩ X_{f,+}` is non-empty.
pub fn can_reach_positive<C: Classifier + ?Sized>(space: &dyn MetricOracle, agent: &Agent, f: &C) -> Result<bool> {
    Ok(match &agent.u {
        ManipulationSet::Ball { radius } => distance_to_hypothesis(space, &agent.x, f)? <= radius + TOL,
        ManipulationSet::Explicit { members } => members.iter().any(|p| f.is_positive(p)),
    })
}

/// Strategic 0/1 loss of a deterministic predictor, by the four-case rule.
///
/// Under [`TieBreakPolicy::UniformRandom`] the expectation over the tie set
/// is computed as well and must agree with the case rule.
pub fn strategic_loss<C: Classifier + ?Sized>(
    space: &dyn MetricOracle,
    f: &C,
    agent: &Agent,
    tie: TieBreakPolicy,
) -> Result<f64> {
    space.check(&agent.x)?;
    let at_x = f.is_positive(&agent.x);
    let loss = match (agent.y, at_x) {
        (Label::Negative, true) => 1.0,
        (Label::Positive, true) => 0.0,
        (Label::Negative, false) => indicator(can_reach_positive(space, agent, f)?),
        (Label::Positive, false) => indicator(!can_reach_positive(space, agent, f)?),
    };
    if tie == TieBreakPolicy::UniformRandom && !at_x {
        let ties = tie_set(space, agent, f)?;
        let expected = if ties.is_empty() {
            indicator(agent.y == Label::Positive)
        } else {
            ties.iter().map(|d| indicator(Label::from_bool(f.is_positive(d)) != agent.y)).sum::<f64>()
                / ties.len() as f64
        };
        if expected != loss {
            return Err(Error::contract(format!("tie-set loss {expected} differs from case rule {loss}")));
        }
    }
    Ok(loss)
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// `E_{f ~ mixture}[loss(f, agent)]`.
pub fn strategic_loss_randomized(
    space: &dyn MetricOracle,
    class: &HypothesisClass,
    mixture: &Mixture,
    agent: &Agent,
) -> Result<f64> {
    let total: f64 = mixture.atoms().iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::MixtureWeights(total));
    }
    let mut acc = 0.0;
    for (f, w) in mixture.atoms() {
        f.check(class)?;
        acc += w * strategic_loss(space, &class.view(f), agent, TieBreakPolicy::FixedLowestIndex)?;
    }
    Ok(acc)
}

/// A distribution over agents whose support can be listed.
pub trait FiniteSupport {
    /// `(agent, probability)` atoms, or [`Error::NotEnumerable`].
    fn support(&self) -> Result<Vec<(Agent, f64)>>;
}

/// Exact population strategic loss over an enumerable support.
pub fn population_loss<C: Classifier + ?Sized>(
    space: &dyn MetricOracle,
    f: &C,
    dist: &dyn FiniteSupport,
    tie: TieBreakPolicy,
) -> Result<f64> {
    let mut acc = 0.0;
    for (agent, p) in dist.support()? {
        if p > 0.0 {
            acc += p * strategic_loss(space, f, &agent, tie)?;
        }
    }
    Ok(acc)
}
