//! The built-in acceptance suite: one pass/fail line per criterion.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::bounds::{adversary_floor, halving_bound, mwmr_bound, random_union_budget};
use super::config::ExperimentConfig;
use super::metrics::{Aggregate, SeedRecord};
use super::monte_carlo::monte_carlo_loss;
use super::runner::{run_seed, run_seed_with, thread_cap};
use crate::environments::{brute_force_loss_oracle, environment_from_name, EnvParams, FamilyTag, Rational};
use crate::error::{Error, Result};
use crate::learners::{learner_from_name, BoostConfig, LearnerParams, SurvivorConfig};
use crate::model::{
    distance_to_hypothesis, population_loss, predict, strategic_loss, Hypothesis, Point, UnionPredictor, TOL,
};
use crate::protocol::{run_round, stream, IidStream, LearnerView, RunOptions, SourceRngs, Stream};

/// Seed counts: `Full` is the pinned suite, `Quick` a smoke run with a
/// tenth of the seeds and unchanged thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Full,
    Quick,
}

impl Scale {
    fn seeds(self, full: usize) -> usize {
        match self {
            Scale::Full => full,
            Scale::Quick => (full / 10).max(5),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub secs: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}. {}: {} ({:.1}s)", self.id, self.title, self.detail, self.secs)
    }
}

type Check = fn(Scale) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    check: Check,
}

impl Criterion {
    pub fn run(&self, scale: Scale) -> CriterionOutcome {
        let start = Instant::now();
        let (pass, detail) = match (self.check)(scale) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        CriterionOutcome { id: self.id, title: self.title, pass, detail, secs: start.elapsed().as_secs_f64() }
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "Strategic Halving mistake bound", check: halving_criterion },
        Criterion { id: 2, title: "MWMR expected mistakes", check: mwmr_criterion },
        Criterion { id: 3, title: "deterministic lower bound", check: deterministic_lower_bound },
        Criterion { id: 4, title: "randomized lower bound", check: randomized_lower_bound },
        Criterion { id: 5, title: "random-union expected loss", check: random_union_criterion },
        Criterion { id: 6, title: "boosting", check: boost_criterion },
        Criterion { id: 7, title: "longest-survivor conversion", check: survivor_criterion },
        Criterion { id: 8, title: "exact construction losses", check: exact_losses },
        Criterion { id: 9, title: "property suites", check: property_suites },
    ]
}

pub fn run_all(scale: Scale) -> Vec<CriterionOutcome> {
    criteria().iter().map(|c| c.run(scale)).collect()
}

fn par_map<T: Send>(seeds: Vec<u64>, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_cap() {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::parameter(e.to_string()))?;
    pool.install(|| seeds.into_par_iter().map(|s| f(s).map_err(|e| e.with_seed(s))).collect())
}

fn config(lines: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::from_text(lines)
}

fn records(cfg: &ExperimentConfig, count: usize) -> Result<Vec<SeedRecord>> {
    par_map((0..count as u64).collect(), |s| run_seed(cfg, s))
}

fn mistakes(recs: &[SeedRecord]) -> Aggregate {
    Aggregate::of(&recs.iter().map(|r| r.mistakes as f64).collect::<Vec<_>>())
}

fn halving_criterion(scale: Scale) -> Result<(bool, String)> {
    let n = 1024;
    let base = config("env = random-realizable:star\nlearner = halving\nsetting = x-delta\nn = 1024\nT = 5000")?;
    let recs = par_map((0..scale.seeds(200) as u64).collect(), |s| {
        let mut cfg = base.clone();
        cfg.env_params.target = Some((s as usize * 389) % n);
        run_seed(&cfg, s)
    })?;
    let m = mistakes(&recs);
    let bound = halving_bound(n) as f64;
    Ok((m.max <= bound, format!("max mistakes {} <= {bound} over {} streams (mean {:.2})", m.max, m.count, m.mean)))
}

fn mwmr_criterion(scale: Scale) -> Result<(bool, String)> {
    let bound = mwmr_bound(64, 4096);
    let mut pass = true;
    let mut parts = Vec::new();
    for env in ["random-realizable", "appE"] {
        let cfg = config(&format!("env = {env}\nlearner = mwmr\nsetting = x-delta-after\nn = 64\nT = 4096"))?;
        let m = mistakes(&records(&cfg, scale.seeds(1000))?);
        let stat = m.mean + 3.0 * m.stderr;
        pass &= stat <= bound;
        parts.push(format!("{env}: mean {:.2} + 3se = {stat:.2}", m.mean));
    }
    Ok((pass, format!("{} <= {bound}", parts.join("; "))))
}

fn deterministic_lower_bound(scale: Scale) -> Result<(bool, String)> {
    let cfg = config("env = star-ex42\nlearner = seq-elim\nsetting = none\nn = 50\nT = 49")?;
    let recs = records(&cfg, scale.seeds(100))?;
    let all = recs.iter().all(|r| r.mistakes == 49 && r.rounds == 49);
    let m = mistakes(&recs);
    Ok((all, format!("mistakes in [{}, {}] over {} seeds, expected exactly 49 in 49 rounds", m.min, m.max, m.count)))
}

fn randomized_lower_bound(scale: Scale) -> Result<(bool, String)> {
    let (n, delta) = (8usize, 0.25);
    let t = (5.0 * n as f64 * (n as f64 / delta).ln() * 7.0).ceil() as usize;
    let floor = adversary_floor(n, t, delta);
    let cfg = config(&format!("env = appE\nlearner = mwmr\nsetting = x-delta-after\nn = {n}\nT = {t}"))?;
    let recs = records(&cfg, scale.seeds(200))?;
    let hit = recs.iter().filter(|r| r.mistakes as f64 >= floor).count() as f64 / recs.len() as f64;
    Ok((hit >= 0.7, format!("{:.1}% of runs reach >= {floor} mistakes in T = {t} (need 70%)", 100.0 * hit)))
}

fn random_union_criterion(scale: Scale) -> Result<(bool, String)> {
    let eps = 0.02;
    let t = random_union_budget(16, eps).ceil() as usize;
    let cfg = config(&format!(
        "env = appG\nlearner = random-union\nsetting = x-delta-after\nmode = pac\nn = 16\neps = {eps}\nT = {t}\nloss-samples = 100000"
    ))?;
    let recs = records(&cfg, scale.seeds(50))?;
    let l = Aggregate::of(&recs.iter().map(|r| r.output_loss.unwrap_or(1.0)).collect::<Vec<_>>());
    Ok((
        l.mean <= eps + 3.0 * l.stderr,
        format!("mean output loss {:.5} (se {:.5}) <= {eps} + 3se, T = {t}, {} seeds", l.mean, l.stderr, l.count),
    ))
}

fn boost_criterion(scale: Scale) -> Result<(bool, String)> {
    let (eps, delta) = (0.05, 0.1);
    let t_base = random_union_budget(8, eps).ceil() as usize;
    let total = BoostConfig::new(eps, delta, t_base)?.total_rounds();
    // 3 n eps <= 1 forces the family noise below the learner's eps at n = 8
    let cfg = config(&format!(
        "env = appG\nlearner = boost:random-union\nsetting = x-delta-after\nn = 8\neps = {eps}\ndelta = {delta}\n\
         family-eps = 0.04\nt-base = {t_base}\nT = {total}"
    ))?;
    let recs = records(&cfg, scale.seeds(300))?;
    let ok = recs.iter().filter(|r| r.output_loss.is_some_and(|l| l <= 8.0 * eps)).count() as f64 / recs.len() as f64;
    let worst = recs.iter().filter_map(|r| r.output_loss).fold(0.0, f64::max);
    Ok((ok >= 0.9, format!("{:.1}% of outputs have loss <= {} (need 90%), worst {worst:.4}", 100.0 * ok, 8.0 * eps)))
}

/// Fraction of longest-survivor outputs with loss at most `eps`.
pub fn survivor_success(eps: f64, delta: f64, family_eps: f64, seeds: usize) -> Result<(f64, usize)> {
    let threshold = SurvivorConfig::new(Some(16), eps, delta)?.threshold(16);
    let t = 16 * threshold;
    let cfg = config(&format!(
        "env = appJ\nlearner = survivor:seq-elim\nsetting = none\nn = 16\nbudget = 16\neps = {eps}\ndelta = {delta}\n\
         family-eps = {family_eps}\nT = {t}"
    ))?;
    let recs = records(&cfg, seeds)?;
    let ok = recs.iter().filter(|r| r.output_loss.is_some_and(|l| l <= eps)).count();
    Ok((ok as f64 / recs.len() as f64, t))
}

fn survivor_criterion(scale: Scale) -> Result<(bool, String)> {
    let seeds = scale.seeds(400);
    // 3 (n - 1) eps <= 1 forces the family noise below the learner's eps at n = 16
    let (rate, t) = survivor_success(0.1, 0.1, 0.02, seeds)?;
    let (tight, t_tight) = survivor_success(0.05, 0.1, 0.02, seeds)?;
    Ok((
        rate >= 0.9,
        format!(
            "{:.1}% of outputs have loss <= 0.1 at T = {t} (need 90%); at eps = 0.05, T = {t_tight}: {:.1}%",
            100.0 * rate,
            100.0 * tight
        ),
    ))
}

fn union_of(class: &[Hypothesis], parts: &[usize]) -> Hypothesis {
    Hypothesis::new(parts.iter().flat_map(|&j| class[j].positive().iter().cloned()).collect())
}

fn exact_losses(_scale: Scale) -> Result<(bool, String)> {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut expect = |what: String, got: Rational, want: Rational| {
        checked += 1;
        if got != want {
            failures.push(format!("{what}: {got} != {want}"));
        }
    };
    for n in 2..=7usize {
        for (tag, eps) in [
            (FamilyTag::SphereOrigin, Rational::new(1, 3 * n as i128 + 1)),
            (FamilyTag::SphereOrigin, Rational::new(1, 100)),
            (FamilyTag::Star, Rational::new(1, 100)),
            (FamilyTag::Star, Rational::new(1, 3 * n as i128)),
            (FamilyTag::PrefixSets, Rational::new(1, 50)),
            (FamilyTag::PrefixSets, Rational::new(1, 6)),
        ] {
            let env = environment_from_name(tag.name(), &EnvParams { n, epsilon: 0.0, ..Default::default() })?;
            let class = env.instance.class.members();
            let three = eps * 3;
            for target in [0, n - 1] {
                let oracle = |f: &Hypothesis| brute_force_loss_oracle(tag, n, eps, target, f);
                for j in (0..n).filter(|&j| j != target) {
                    expect(format!("{tag} n={n} eps={eps} i={target} wrong {j}"), oracle(&class[j])?, three);
                }
                expect(format!("{tag} n={n} target"), oracle(&class[target])?, Rational::from_integer(0));
                if tag == FamilyTag::SphereOrigin {
                    continue;
                }
                let mass = if tag == FamilyTag::Star { three * (n as i128 - 1) } else { eps * 6 };
                let one = Rational::from_integer(1);
                expect(format!("{tag} n={n} all-negative"), oracle(&Hypothesis::empty())?, one - mass);
                expect(format!("{tag} n={n} positive at 0"), oracle(&Hypothesis::singleton(Point::Index(0)))?, mass);
                let with_target = union_of(class, &[target]);
                let mut at0 = with_target.positive().to_vec();
                at0.push(Point::Index(0));
                expect(format!("{tag} n={n} target and 0"), oracle(&Hypothesis::new(at0))?, mass);
            }
        }
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!("{checked} exact rational losses match (n = 2..7)")
        } else {
            format!("{} of {checked} mismatches, first: {}", failures.len(), failures[0])
        },
    ))
}

struct Suite {
    passed: Vec<String>,
    failed: Vec<String>,
}

impl Suite {
    fn record(&mut self, name: &str, r: Result<(bool, String)>) {
        match r {
            Ok((true, d)) => self.passed.push(format!("{name} ({d})")),
            Ok((false, d)) => self.failed.push(format!("{name}: {d}")),
            Err(e) => self.failed.push(format!("{name}: error {e}")),
        }
    }
}

fn property_suites(scale: Scale) -> Result<(bool, String)> {
    let mut s = Suite { passed: Vec::new(), failed: Vec::new() };
    s.record("h*-survival", target_survival(scale));
    s.record("halving contraction", halving_contraction(scale));
    s.record("union distance", union_distance_identity());
    s.record("loss/mistake agreement", loss_mistake_agreement(scale));
    s.record("conservative replay", conservative_replay(scale));
    s.record("Monte Carlo vs oracle", monte_carlo_vs_oracle(scale));
    s.record("informative-round trend", informative_round_trend(scale));
    let pass = s.failed.is_empty();
    let detail = if pass { s.passed.join("; ") } else { s.failed.join("; ") };
    Ok((pass, detail))
}

/// `(env, n, learner, setting)` combinations exercised by the properties.
const SURVIVAL_GRID: [(&str, usize, &str, &str); 12] = [
    ("random-realizable:star", 12, "halving", "x-delta"),
    ("random-realizable:basis", 12, "halving", "x-delta"),
    ("random-realizable:sphere", 5, "halving", "x-delta"),
    ("random-realizable:star", 12, "mwmr", "x-delta-after"),
    ("random-realizable:sphere", 5, "mwmr", "x-delta-after"),
    ("appE", 8, "mwmr", "x-delta-after"),
    ("random-realizable:basis", 12, "random-union", "x-delta-after"),
    ("appG", 6, "random-union", "x-delta-after"),
    ("appI", 5, "random-union", "x-delta"),
    ("appJ", 8, "seq-elim", "none"),
    ("appK", 6, "seq-elim", "delta-only"),
    ("random-realizable:discrete", 8, "seq-elim", "x-delta-after"),
];

fn grid_config(env: &str, n: usize, learner: &str, setting: &str, t: usize) -> Result<ExperimentConfig> {
    config(&format!(
        "env = {env}\nn = {n}\nlearner = {learner}\nsetting = {setting}\nT = {t}\nfamily-eps = 0.02\nmode = online"
    ))
}

fn target_survival(scale: Scale) -> Result<(bool, String)> {
    let per = scale.seeds(1000).div_ceil(SURVIVAL_GRID.len());
    let mut streams = 0;
    for (env, n, learner, setting) in SURVIVAL_GRID {
        let cfg = grid_config(env, n, learner, setting, 300)?;
        let bad = par_map((0..per as u64).collect(), |seed| {
            let mut e = environment_from_name(&cfg.env, &cfg.resolved_env_params())?;
            let target = e.target().ok_or_else(|| Error::parameter("environment without a target"))?;
            let mut l = learner_from_name(&cfg.learner, &cfg.resolved_learner_params())?;
            e.run_online(l.as_mut(), cfg.setting, cfg.rounds, seed, &RunOptions::default())?;
            Ok(l.version_space().is_some_and(|vs| !vs.contains(target)))
        })?;
        streams += per;
        if let Some(seed) = bad.iter().position(|&b| b) {
            return Ok((false, format!("{learner} on {env} removed the target (seed {seed})")));
        }
    }
    Ok((true, format!("{streams} streams")))
}

fn halving_contraction(scale: Scale) -> Result<(bool, String)> {
    let cfg = grid_config("random-realizable:basis", 64, "halving", "x-delta", 400)?;
    let mut mistakes = 0usize;
    for seed in 0..scale.seeds(50) as u64 {
        let env = environment_from_name(&cfg.env, &cfg.resolved_env_params())?;
        let dist = env.distribution().ok_or_else(|| Error::parameter("needs a stream"))?;
        let mut l = learner_from_name("halving", &LearnerParams::default())?;
        l.reset(&env.instance, cfg.setting, stream(seed, Stream::Learner))?;
        let mut rngs =
            SourceRngs { agents: stream(seed, Stream::Agents), estimation: stream(seed, Stream::Estimation) };
        let mut ties = stream(seed, Stream::Ties);
        let mut source = IidStream(dist);
        for t in 1..=cfg.rounds {
            let agent = {
                let view = LearnerView::new(l.as_ref(), cfg.setting, 1);
                crate::protocol::Adversary::next_agent(&mut source, t, &view, &mut rngs)?
            };
            let before = l.version_space().map_or(0, |v| v.len());
            let rec = run_round(
                &env.instance,
                &agent,
                l.as_mut(),
                cfg.setting,
                dist.tie_policy(),
                t,
                &mut ties,
                &RunOptions::default(),
            )?;
            let after = l.version_space().map_or(0, |v| v.len());
            if rec.mistake {
                mistakes += 1;
                if after > before / 2 {
                    return Ok((false, format!("seed {seed} round {t}: |vs| {before} -> {after}")));
                }
            } else if after != before {
                return Ok((false, format!("seed {seed} round {t}: correct round changed |vs|")));
            }
        }
    }
    Ok((true, format!("{mistakes} mistakes")))
}

fn union_distance_identity() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut triples = 0;
    for name in ["random-realizable:star", "random-realizable:basis", "random-realizable:sphere", "appI"] {
        let env = environment_from_name(name, &EnvParams { n: 6, epsilon: 0.01, ..Default::default() })?;
        let space = env.instance.space.as_ref();
        let class = &env.instance.class;
        for _ in 0..2000 {
            let x = space.sample_point(&mut rng);
            let (a, b) = (rng.gen_range(0..class.len()), rng.gen_range(0..class.len()));
            let fa = UnionPredictor::single(a);
            let fb = UnionPredictor::single(b);
            let fu = UnionPredictor::new(vec![a, b]);
            let da = distance_to_hypothesis(space, &x, &class.view(&fa))?;
            let db = distance_to_hypothesis(space, &x, &class.view(&fb))?;
            let du = distance_to_hypothesis(space, &x, &class.view(&fu))?;
            if (du - da.min(db)).abs() > TOL {
                return Ok((false, format!("{name}: d(x, f v g) = {du} vs min {da}, {db}")));
            }
            triples += 1;
        }
    }
    Ok((true, format!("{triples} triples")))
}

fn loss_mistake_agreement(scale: Scale) -> Result<(bool, String)> {
    let mut rounds = 0;
    for (env, n, learner, setting) in SURVIVAL_GRID {
        let cfg = grid_config(env, n, learner, setting, 200)?;
        for seed in 0..scale.seeds(20) as u64 {
            let e = environment_from_name(&cfg.env, &cfg.resolved_env_params())?;
            let (_, tr) = run_seed_with(&cfg, seed, &RunOptions::keep())?;
            let tie = e.distribution().map_or(Default::default(), |d| d.tie_policy());
            let mut agents = match e.distribution() {
                Some(d) => {
                    let mut rng = stream(seed, Stream::Agents);
                    (0..tr.len).map(|_| Some(d.sample(&mut rng))).collect::<Vec<_>>()
                }
                None => vec![None; tr.len],
            };
            for (r, agent) in tr.rounds.iter().zip(agents.iter_mut()) {
                let view = e.instance.class.view(&r.predictor);
                let y_hat = predict(e.instance.space.as_ref(), &view, &r.delta)?;
                if (y_hat != r.y) != r.mistake || y_hat != r.y_hat {
                    return Ok((false, format!("{learner} on {env}: round {} flags disagree", r.t)));
                }
                if let Some(a) = agent.take() {
                    let loss = strategic_loss(e.instance.space.as_ref(), &view, &a, tie)?;
                    if (loss == 1.0) != r.mistake {
                        return Ok((false, format!("{learner} on {env}: round {} loss {loss}", r.t)));
                    }
                }
                rounds += 1;
            }
        }
    }
    Ok((true, format!("{rounds} rounds")))
}

fn conservative_replay(scale: Scale) -> Result<(bool, String)> {
    let mut runs = 0;
    let grid = [
        ("random-realizable:star", 10, "halving", "x-delta"),
        ("random-realizable:basis", 10, "seq-elim", "none"),
        ("appJ", 8, "survivor:seq-elim", "delta-only"),
        ("random-realizable:basis", 10, "mwmr", "x-delta-after"),
        ("appG", 5, "random-union", "x-delta-after"),
    ];
    for (env, n, learner, setting) in grid {
        let mut cfg = grid_config(env, n, learner, setting, 300)?;
        cfg.learner_params.epsilon = Some(0.2);
        let l = learner_from_name(learner, &cfg.resolved_learner_params())?;
        if !l.is_conservative() {
            return Ok((false, format!("{learner} is not flagged conservative")));
        }
        for seed in 0..scale.seeds(50) as u64 {
            let (_, full) = run_seed_with(&cfg, seed, &RunOptions::keep())?;
            let withheld = RunOptions { withhold_correct_feedback: true, ..RunOptions::keep() };
            let (_, held) = run_seed_with(&cfg, seed, &withheld)?;
            if !full.predictors().eq(held.predictors()) {
                return Ok((false, format!("{learner} on {env}, seed {seed}: predictor sequences differ")));
            }
            runs += 1;
        }
    }
    Ok((true, format!("{runs} replays")))
}

/// Random unions of class members, including the all-negative predictor.
pub fn random_unions(class_size: usize, count: usize, seed: u64) -> Vec<UnionPredictor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(0..=3usize.min(class_size));
            UnionPredictor::new((0..k).map(|_| rng.gen_range(0..class_size)).collect())
        })
        .collect()
}

fn monte_carlo_vs_oracle(scale: Scale) -> Result<(bool, String)> {
    let n = 6;
    let samples = 100_000;
    let per = scale.seeds(50).div_ceil(4).max(2);
    let mut pairs = 0;
    for (tag, eps) in [
        (FamilyTag::SphereOrigin, Rational::new(1, 20)),
        (FamilyTag::SphereLabelNoise, Rational::new(1, 20)),
        (FamilyTag::Star, Rational::new(1, 20)),
        (FamilyTag::PrefixSets, Rational::new(1, 10)),
    ] {
        let eps_f = *eps.numer() as f64 / *eps.denom() as f64;
        let env = environment_from_name(tag.name(), &EnvParams { n, epsilon: eps_f, ..Default::default() })?;
        let dist = env.distribution().ok_or_else(|| Error::parameter("family without a law"))?;
        let target = env.target().unwrap_or(0);
        for (k, f) in random_unions(n, per, 17).into_iter().enumerate() {
            let h = env.instance.class.materialize(&f);
            let exact = brute_force_loss_oracle(tag, n, eps, target, &h)?;
            let exact = *exact.numer() as f64 / *exact.denom() as f64;
            let (est, _) = monte_carlo_loss(env.instance.space.as_ref(), &h, dist, samples, k as u64)?;
            let tol = 4.0 * (exact * (1.0 - exact) / samples as f64).sqrt();
            if (est - exact).abs() > tol + 1e-12 {
                return Ok((false, format!("{tag} f = {:?}: estimate {est} vs exact {exact}", f.canonical())));
            }
            if let Some(support) = env.finite_support() {
                let pl = population_loss(env.instance.space.as_ref(), &h, support, dist.tie_policy())?;
                if (pl - exact).abs() > 1e-9 {
                    return Ok((false, format!("{tag}: float population loss {pl} vs exact {exact}")));
                }
            }
            pairs += 1;
        }
    }
    Ok((true, format!("{pairs} pairs")))
}

/// Mistake rate on rounds that play a wrong singleton of the sphere
/// family, against its exact value `3 eps`. Returns `(rate, rounds, pass)`.
pub fn informative_round_rate(seeds: usize) -> Result<(f64, usize, bool)> {
    let family_eps = 0.02;
    let cfg = config(&format!(
        "env = appG\nn = 6\nlearner = survivor:seq-elim\nsetting = x-delta-after\neps = 0.1\ndelta = 0.1\n\
         family-eps = {family_eps}\nT = 2000\nmode = pac"
    ))?;
    let counts = par_map((0..seeds as u64).collect(), |seed| {
        let (_, tr) = run_seed_with(&cfg, seed, &RunOptions::keep())?;
        let target = cfg.resolved_env_params().target();
        let wrong: Vec<_> = tr.rounds.iter().filter(|r| r.predictor.canonical() != [target]).collect();
        Ok((wrong.len(), wrong.iter().filter(|r| r.mistake).count()))
    })?;
    let rounds: usize = counts.iter().map(|c| c.0).sum();
    let errs: usize = counts.iter().map(|c| c.1).sum();
    let p = 3.0 * family_eps;
    let rate = errs as f64 / rounds.max(1) as f64;
    let se = (p * (1.0 - p) / rounds.max(1) as f64).sqrt();
    Ok((rate, rounds, (rate - p).abs() <= 3.0 * se))
}

fn informative_round_trend(scale: Scale) -> Result<(bool, String)> {
    let (rate, rounds, pass) = informative_round_rate(scale.seeds(200))?;
    Ok((pass, format!("rate {rate:.4} over {rounds} wrong-singleton rounds vs 3 eps = 0.06")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_scale_keeps_a_floor() {
        assert_eq!(Scale::Quick.seeds(1000), 100);
        assert_eq!(Scale::Quick.seeds(20), 5);
        assert_eq!(Scale::Full.seeds(20), 20);
        assert_eq!(criteria().len(), 9);
    }

    #[test]
    fn exact_losses_pass() {
        let (pass, detail) = exact_losses(Scale::Quick).unwrap();
        assert!(pass, "{detail}");
    }
}
