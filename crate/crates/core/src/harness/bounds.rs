use serde::{Deserialize, Serialize};

use super::metrics::{Aggregate, SeedRecord};
use crate::error::{Error, Result};

/// Names accepted by [`evaluate_bound`].
pub const BOUND_NAMES: [&str; 8] =
    ["halving", "mwmr", "adversary-floor", "elimination", "random-union", "random-union-budget", "survivor", "boost"];

/// One evaluated bound: `pass` follows from `value` and `observed` alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub formula: String,
    pub value: f64,
    pub observed: f64,
    pub pass: bool,
}

/// Inputs of the bound formulas.
#[derive(Clone, Copy, Debug)]
pub struct BoundInputs {
    pub n: usize,
    pub rounds: usize,
    pub epsilon: f64,
    pub delta: f64,
}

pub fn halving_bound(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

pub fn mwmr_bound(n: usize, rounds: usize) -> f64 {
    (4.0 * (n as f64).ln() * rounds as f64).sqrt().min(n as f64 - 1.0)
}

pub fn adversary_floor(n: usize, rounds: usize, delta: f64) -> f64 {
    let n_f = n as f64;
    (rounds as f64 / (5.0 * n_f * (n_f / delta).ln())).min(n_f - 1.0)
}

pub fn random_union_budget(n: usize, epsilon: f64) -> f64 {
    320.0 * (n as f64).log2() * (n as f64).ln() / epsilon
}

fn fraction(seeds: &[SeedRecord], pred: impl Fn(&SeedRecord) -> bool) -> f64 {
    if seeds.is_empty() {
        return 0.0;
    }
    seeds.iter().filter(|s| pred(s)).count() as f64 / seeds.len() as f64
}

fn losses(seeds: &[SeedRecord]) -> Result<Aggregate> {
    let v = seeds
        .iter()
        .map(|s| s.output_loss.ok_or_else(|| Error::parameter("loss bounds need PAC runs")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Aggregate::of(&v))
}

/// Evaluate a named bound on per-seed records.
///
/// Worst-case bounds compare exactly, expectation bounds use
/// `mean + 3 stderr`, high-probability bounds the seed fraction.
pub fn evaluate_bound(name: &str, inp: &BoundInputs, seeds: &[SeedRecord]) -> Result<BoundEntry> {
    let mistakes = Aggregate::of(&seeds.iter().map(|s| s.mistakes as f64).collect::<Vec<_>>());
    let (formula, value, observed, pass) = match name {
        "halving" => {
            let v = halving_bound(inp.n) as f64;
            ("max mistakes <= ceil(log2 n)", v, mistakes.max, mistakes.max <= v)
        }
        "elimination" => {
            let v = inp.n as f64 - 1.0;
            ("max mistakes <= n - 1", v, mistakes.max, mistakes.max <= v)
        }
        "mwmr" => {
            let v = mwmr_bound(inp.n, inp.rounds);
            let o = mistakes.mean + 3.0 * mistakes.stderr;
            ("mean + 3 se of mistakes <= min(sqrt(4 ln(n) T), n - 1)", v, o, o <= v)
        }
        "adversary-floor" => {
            let v = adversary_floor(inp.n, inp.rounds, inp.delta);
            let o = fraction(seeds, |s| s.mistakes as f64 >= v);
            let se = (o * (1.0 - o) / seeds.len().max(1) as f64).sqrt();
            (
                "Pr[mistakes >= min(T / (5 n ln(n/delta)), n - 1)] + 3 se >= 1 - delta",
                v,
                o,
                o + 3.0 * se >= 1.0 - inp.delta,
            )
        }
        "random-union" => {
            let l = losses(seeds)?;
            let o = l.mean + 3.0 * l.stderr;
            ("mean + 3 se of output loss <= eps", inp.epsilon, o, o <= inp.epsilon)
        }
        "random-union-budget" => {
            let v = random_union_budget(inp.n, inp.epsilon);
            ("T >= 320 log2(n) ln(n) / eps", v, inp.rounds as f64, inp.rounds as f64 >= v)
        }
        "survivor" | "boost" => {
            losses(seeds)?;
            let (cut, formula) = if name == "survivor" {
                (inp.epsilon, "Pr[output loss <= eps] >= 1 - delta")
            } else {
                (8.0 * inp.epsilon, "Pr[output loss <= 8 eps] >= 1 - delta")
            };
            let o = fraction(seeds, |s| s.output_loss.is_some_and(|l| l <= cut));
            (formula, 1.0 - inp.delta, o, o >= 1.0 - inp.delta)
        }
        _ => return Err(Error::Unknown { kind: "bound", name: name.to_string() }),
    };
    Ok(BoundEntry { name: name.to_string(), formula: formula.to_string(), value, observed, pass })
}

/// Bounds evaluated when a config names none.
pub fn default_bounds(learner: &str, pac: bool) -> Vec<String> {
    let name = match learner.split(':').next().unwrap_or("") {
        "survivor" => "survivor",
        "boost" => "boost",
        "random-union" if pac => "random-union",
        "halving" => "halving",
        "mwmr" => "mwmr",
        "seq-elim" => "elimination",
        _ => return Vec::new(),
    };
    vec![name.to_string()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(seed: u64, mistakes: usize, loss: Option<f64>) -> SeedRecord {
        SeedRecord { seed, rounds: 10, mistakes, output: None, output_loss: loss, output_loss_stderr: None }
    }

    #[test]
    fn formula_values() {
        assert_eq!(halving_bound(1024), 10);
        assert_eq!(halving_bound(1000), 10);
        assert_eq!(halving_bound(8), 3);
        assert_eq!(halving_bound(1), 0);
        assert_eq!(mwmr_bound(64, 4096), 63.0);
        assert!((mwmr_bound(64, 10) - (40.0 * 64f64.ln()).sqrt()).abs() < 1e-12);
        let t = (5.0 * 8.0 * 32f64.ln() * 7.0).ceil() as usize;
        assert_eq!(adversary_floor(8, t, 0.25), 7.0);
        assert!((random_union_budget(16, 0.02) - 177_445.678).abs() < 1e-2);
    }

    #[test]
    fn entries() {
        let inp = BoundInputs { n: 8, rounds: 100, epsilon: 0.1, delta: 0.1 };
        let seeds = [rec(0, 3, Some(0.0)), rec(1, 2, Some(0.2))];
        let h = evaluate_bound("halving", &inp, &seeds).unwrap();
        assert!(h.pass && h.value == 3.0 && h.observed == 3.0);
        let s = evaluate_bound("survivor", &inp, &seeds).unwrap();
        assert!(!s.pass && s.observed == 0.5);
        assert!(evaluate_bound("random-union", &inp, &[rec(0, 1, None)]).is_err());
        assert!(evaluate_bound("vc", &inp, &seeds).is_err());
    }
}
