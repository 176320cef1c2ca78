use crate::error::{Error, Result};
use crate::model::{strategic_loss, Classifier, MetricOracle};
use crate::protocol::{stream, AgentDistribution, Stream};

/// Mean strategic loss over `samples` i.i.d. agents, with its binomial
/// standard error `sqrt(p (1 - p) / N)`.
pub fn monte_carlo_loss<C: Classifier + ?Sized>(
    space: &dyn MetricOracle,
    f: &C,
    source: &dyn AgentDistribution,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::parameter("monte_carlo_loss needs N >= 1"));
    }
    let mut rng = stream(seed, Stream::Estimation);
    let tie = source.tie_policy();
    let mut total = 0.0;
    for _ in 0..samples {
        total += strategic_loss(space, f, &source.sample(&mut rng), tie)?;
    }
    let p = total / samples as f64;
    Ok((p, (p * (1.0 - p) / samples as f64).sqrt()))
}
