use itertools::Itertools;
use stratgame::environments::{
    brute_force_loss_oracle, environment_from_name, random_realizable_stream, scaled_basis_instance, star_instance,
    EnvParams, FamilyTag, PermutationFamily, ProbeCase, ProbingAdversary, RadiusLaw, Rational, RealizableStream,
    StarAdversary,
};
use stratgame::harness::monte_carlo_loss;
use stratgame::learners::{FixedPredictor, LearnerParams, SequentialElimination};
use stratgame::model::{
    strategic_loss, Agent, Classifier, Factor, Hypothesis, Label, Mixture, Permutation, Point, TieBreakPolicy,
    UnionPredictor,
};
use stratgame::protocol::{run_online, FeedbackSetting, RunOptions};
use stratgame::Error;

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn params(n: usize, eps: f64) -> EnvParams {
    EnvParams { n, epsilon: eps, ..Default::default() }
}

#[test]
fn star_adversary_forces_one_mistake_per_spoke() {
    let mut env = environment_from_name("star-ex42", &params(5, 0.01)).unwrap();
    let tr = env
        .run_online(&mut SequentialElimination::new(), FeedbackSetting::NothingNothing, 4, 0, &RunOptions::default())
        .unwrap();
    assert_eq!((tr.len, tr.mistakes), (4, 4));
}

#[test]
fn star_adversary_learns_nothing_from_an_all_negative_learner() {
    let inst = star_instance(4).unwrap();
    let mut adv = StarAdversary::new(4).unwrap();
    let mut learner = FixedPredictor::new(UnionPredictor::all_negative());
    let tr =
        run_online(&inst, &mut adv, &mut learner, FeedbackSetting::NothingNothing, 20, 0, &RunOptions::keep()).unwrap();
    assert_eq!(tr.mistakes, 20);
    assert_eq!(adv.consistent(), vec![0, 1, 2, 3]);
}

#[test]
fn star_adversary_keeps_some_singleton_consistent() {
    let inst = star_instance(6).unwrap();
    for parts in [vec![0], vec![0, 3], vec![0, 1, 2, 3, 4, 5]] {
        let mut adv = StarAdversary::new(6).unwrap();
        let mut learner = FixedPredictor::new(UnionPredictor::new(parts));
        run_online(&inst, &mut adv, &mut learner, FeedbackSetting::NothingNothing, 10, 0, &RunOptions::default())
            .unwrap();
        assert!(!adv.consistent().is_empty());
    }
}

#[test]
fn star_adversary_needs_a_deterministic_learner() {
    let mut env = environment_from_name("star-ex42", &params(4, 0.01)).unwrap();
    let mut learner = stratgame::learners::learner_from_name("mwmr", &LearnerParams::default()).unwrap();
    assert!(env
        .run_online(learner.as_mut(), FeedbackSetting::NothingXDeltaAfter, 3, 0, &RunOptions::default())
        .is_err());
}

#[test]
fn probing_adversary_targets_the_lowest_alive_member_of_a_uniform_law() {
    let inst = scaled_basis_instance(6).unwrap();
    let adv = ProbingAdversary::new(6, None, 4).unwrap();
    assert!((adv.c - 1.0 / 16.0).abs() < 1e-15);
    let law = Mixture::uniform([2, 4, 5].map(UnionPredictor::single)).unwrap();
    let (case, agent) = adv.decide(&inst, &law).unwrap();
    assert_eq!(case, ProbeCase::Basis { i_t: 2, on_target: false });
    assert_eq!(agent, Agent::ball(Point::ScaledBasis(2, Factor(0.9)), 1.0 - 0.9, Label::Negative).unwrap());

    let law = Mixture::uniform([4].map(UnionPredictor::single)).unwrap();
    let (case, agent) = adv.decide(&inst, &law).unwrap();
    assert_eq!(case, ProbeCase::Basis { i_t: 4, on_target: true });
    assert_eq!(agent.y, Label::Negative);

    let law = Mixture::new(vec![(UnionPredictor::all_negative(), 0.1), (UnionPredictor::single(0), 0.9)]).unwrap();
    assert_eq!(adv.decide(&inst, &law).unwrap().0, ProbeCase::AllNegative);
}

#[test]
fn probing_adversary_stays_realizable_against_mwmr() {
    for seed in 0..20 {
        let mut env = environment_from_name("appE", &params(8, 0.01)).unwrap();
        let mut learner = stratgame::learners::learner_from_name("mwmr", &LearnerParams::default()).unwrap();
        let tr = env
            .run_online(learner.as_mut(), FeedbackSetting::NothingXDeltaAfter, 300, seed, &RunOptions::default())
            .unwrap();
        assert!(tr.mistakes <= 7);
    }
}

#[test]
fn sphere_radii_separate_zero_coordinates() {
    for n in 2..=7 {
        let (_, fam) = PermutationFamily::new(FamilyTag::SphereOrigin, n, 0.01, 0.1, 0).unwrap();
        let s = *fam.sphere().unwrap();
        assert!(s.r_lower() < s.r_upper());
        for ranks in (0..n as u32).permutations(n) {
            let p = Permutation::new(ranks).unwrap();
            for j in 0..n {
                let reach = s.dist_to_basis(&p, j) <= s.r_lower() + 1e-9;
                assert_eq!(reach, p.ranks()[j] != 0, "n={n} {p:?} j={j}");
            }
        }
    }
}

#[test]
fn label_noise_negatives_keep_a_wide_radius() {
    for n in 2..=6 {
        let (_, fam) = PermutationFamily::new(FamilyTag::SphereLabelNoise, n, 0.01, 0.1, n - 1).unwrap();
        for ranks in (0..n as u32).permutations(n) {
            assert!(fam.negative_radius_i(&Permutation::new(ranks).unwrap()) > 0.2);
        }
    }
}

#[test]
fn families_reject_excess_noise_mass() {
    assert!(environment_from_name("appG", &params(10, 0.04)).is_err());
    assert!(environment_from_name("appI", &params(10, 0.2)).is_err());
    assert!(environment_from_name("appJ", &params(10, 0.04)).is_err());
    assert!(environment_from_name("appK", &params(10, 0.17)).is_err());
    assert!(environment_from_name("appK", &params(10, 1.0 / 6.0)).is_ok());
}

#[test]
fn targets_have_zero_loss_beyond_the_oracle_range() {
    for name in ["appG", "appI", "appK"] {
        let env = environment_from_name(name, &params(12, 0.02)).unwrap();
        let dist = env.distribution().unwrap();
        let h = env.instance.class.get(env.target().unwrap());
        let (est, se) = monte_carlo_loss(env.instance.space.as_ref(), h, dist, 20_000, 5).unwrap();
        assert!(est <= 3.0 * se, "{name}: {est}");
    }
}

#[test]
fn oracle_values() {
    let eps = q(1, 100);
    let star = star_instance(4).unwrap();
    let wrong = star.class.get(1);
    assert_eq!(brute_force_loss_oracle(FamilyTag::Star, 4, eps, 3, wrong).unwrap(), q(3, 100));

    let env = environment_from_name("appG", &params(5, 0.01)).unwrap();
    let h = env.instance.class.get(2);
    assert_eq!(brute_force_loss_oracle(FamilyTag::SphereOrigin, 5, eps, 2, h).unwrap(), q(0, 1));

    let env = environment_from_name("appK", &params(5, 0.01)).unwrap();
    let pair = env.instance.class.materialize(&UnionPredictor::new(vec![0, 1]));
    assert_eq!(brute_force_loss_oracle(FamilyTag::PrefixSets, 5, eps, 4, &pair).unwrap(), eps * 6 * q(2, 3));
}

#[test]
fn oracle_refuses_large_supports() {
    let h = Hypothesis::empty();
    let err = brute_force_loss_oracle(FamilyTag::SphereLabelNoise, 8, q(1, 100), 0, &h).unwrap_err();
    assert!(matches!(err, Error::SupportTooLarge(8)));
}

#[test]
fn monte_carlo_tracks_the_oracle() {
    let n = 6;
    let env = environment_from_name("appI", &params(n, 0.02)).unwrap();
    let dist = env.distribution().unwrap();
    let samples = 20_000;
    for (k, parts) in [vec![0], vec![1, 2], vec![0, 3, 4], vec![5], vec![0, 1, 2, 3, 4, 5]].into_iter().enumerate() {
        let h = env.instance.class.materialize(&UnionPredictor::new(parts));
        let exact = brute_force_loss_oracle(FamilyTag::SphereLabelNoise, n, q(2, 100), n - 1, &h).unwrap();
        let exact = *exact.numer() as f64 / *exact.denom() as f64;
        let (est, _) = monte_carlo_loss(env.instance.space.as_ref(), &h, dist, samples, k as u64).unwrap();
        assert!(
            (est - exact).abs() <= 4.0 * (exact * (1.0 - exact) / samples as f64).sqrt() + 1e-12,
            "{est} vs {exact}"
        );
    }
}

#[test]
fn realizable_streams() {
    let inst = star_instance(5).unwrap();
    assert!(RealizableStream::new(&inst, 5, RadiusLaw::default()).is_err());
    let a = random_realizable_stream(&inst, 2, 300, 8, RadiusLaw::default()).unwrap();
    let b = random_realizable_stream(&inst, 2, 300, 8, RadiusLaw::default()).unwrap();
    assert_eq!(a.agents, b.agents);
    let h = inst.class.get(2);
    for agent in &a.agents {
        assert_eq!(strategic_loss(inst.space.as_ref(), h, agent, TieBreakPolicy::FixedLowestIndex).unwrap(), 0.0);
    }
    assert!(a.agents.iter().any(|ag| ag.y == Label::Positive && !h.is_positive(&ag.x)));
}

#[test]
fn registry_sources() {
    let env = environment_from_name("appK", &params(4, 0.01)).unwrap();
    assert_eq!(env.distribution().unwrap().tie_policy(), TieBreakPolicy::UniformRandom);
    let env = environment_from_name("appJ", &params(4, 0.01)).unwrap();
    let total: f64 = env.support().unwrap().iter().map(|(_, p)| p).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(environment_from_name("random-realizable:sphere", &params(6, 0.01)).unwrap().support().is_err());
}
