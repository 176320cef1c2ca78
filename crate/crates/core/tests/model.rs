use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratgame::environments::{environment_from_name, sphere_instance, star_instance, EnvParams};
use stratgame::model::{
    best_response, distance_to_hypothesis, population_loss, predict, strategic_loss, strategic_loss_randomized, Agent,
    Hypothesis, Label, ManipulationSet, MatrixSpace, Mixture, Permutation, Point, StarSpace, TieBreakPolicy,
    UnionPredictor,
};
use stratgame::Error;

const FIXED: TieBreakPolicy = TieBreakPolicy::FixedLowestIndex;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(11)
}

#[test]
fn predict_membership_and_unions() {
    let inst = star_instance(3).unwrap();
    let space = inst.space.as_ref();
    let e2 = Hypothesis::singleton(Point::Index(2));
    assert_eq!(predict(space, &e2, &Point::Index(2)).unwrap(), Label::Positive);
    assert_eq!(predict(space, &e2, &Point::Index(1)).unwrap(), Label::Negative);
    let u = UnionPredictor::new(vec![0, 2]);
    assert_eq!(predict(space, &inst.class.view(&u), &Point::Index(3)).unwrap(), Label::Positive);
    assert!(matches!(predict(space, &e2, &Point::Index(9)), Err(Error::UnknownPoint(_))));
}

#[test]
fn distance_to_singletons_and_empty() {
    let star = StarSpace::new(4).unwrap();
    let f = Hypothesis::singleton(Point::Index(3));
    assert_eq!(distance_to_hypothesis(&star, &Point::Index(0), &f).unwrap(), 1.0);
    assert_eq!(distance_to_hypothesis(&star, &Point::Index(3), &f).unwrap(), 0.0);
    assert_eq!(distance_to_hypothesis(&star, &Point::Index(0), &Hypothesis::empty()).unwrap(), f64::INFINITY);
}

#[test]
fn sphere_distance_at_zero_coordinate() {
    let (inst, _) = sphere_instance(3, 0.1, true).unwrap();
    let x = Point::Perm(Permutation::new(vec![0, 2, 1]).unwrap());
    let d = distance_to_hypothesis(inst.space.as_ref(), &x, inst.class.get(0)).unwrap();
    assert!((d - 1.01f64.sqrt()).abs() < 1e-12);
    assert!((d - 1.004988).abs() < 1e-6);
}

#[test]
fn ball_agent_moves_to_positive_spoke() {
    let star = StarSpace::new(5).unwrap();
    let f = Hypothesis::singleton(Point::Index(2));
    let agent = Agent::ball(Point::Index(0), 1.0, Label::Positive).unwrap();
    assert_eq!(best_response(&star, &agent, &f, FIXED, &mut rng()).unwrap(), Point::Index(2));
    let there = Agent::ball(Point::Index(2), 0.0, Label::Positive).unwrap();
    assert_eq!(best_response(&star, &there, &f, FIXED, &mut rng()).unwrap(), Point::Index(2));
}

#[test]
fn explicit_agent_takes_lowest_member() {
    let space = MatrixSpace::discrete(4);
    let agent =
        Agent::new(Point::Index(0), ManipulationSet::explicit([0, 1, 2].map(Point::Index)), Label::Negative).unwrap();
    let f = Hypothesis::new(vec![Point::Index(1), Point::Index(2)]);
    assert_eq!(best_response(&space, &agent, &f, FIXED, &mut rng()).unwrap(), Point::Index(1));
    for seed in 0..20 {
        let d = best_response(&space, &agent, &f, TieBreakPolicy::UniformRandom, &mut ChaCha8Rng::seed_from_u64(seed))
            .unwrap();
        assert!(d == Point::Index(1) || d == Point::Index(2));
    }
}

#[test]
fn explicit_set_must_contain_x() {
    let u = ManipulationSet::explicit([Point::Index(1)]);
    assert!(Agent::new(Point::Index(0), u, Label::Negative).is_err());
}

#[test]
fn four_case_loss() {
    let star = StarSpace::new(4).unwrap();
    let f = Hypothesis::singleton(Point::Index(1));
    let at = |x, r, y| strategic_loss(&star, &f, &Agent::ball(Point::Index(x), r, y).unwrap(), FIXED).unwrap();
    assert_eq!(at(1, 0.0, Label::Negative), 1.0);
    assert_eq!(at(1, 0.0, Label::Positive), 0.0);
    assert_eq!(at(0, 1.0, Label::Negative), 1.0);
    assert_eq!(at(0, 0.5, Label::Negative), 0.0);
    assert_eq!(at(0, 0.5, Label::Positive), 1.0);
    assert_eq!(at(0, 1.0, Label::Positive), 0.0);
}

#[test]
fn randomized_loss_is_linear() {
    let inst = star_instance(4).unwrap();
    let space = inst.space.as_ref();
    let agent = Agent::ball(Point::Index(0), 1.0, Label::Positive).unwrap();
    let good = UnionPredictor::single(0);
    let point = Mixture::point_mass(good.clone());
    let direct = strategic_loss(space, &inst.class.view(&good), &agent, FIXED).unwrap();
    assert_eq!(strategic_loss_randomized(space, &inst.class, &point, &agent).unwrap(), direct);

    let bad = UnionPredictor::all_negative();
    let half = Mixture::uniform([good, bad]).unwrap();
    assert_eq!(strategic_loss_randomized(space, &inst.class, &half, &agent).unwrap(), 0.5);
}

#[test]
fn randomized_loss_rejects_bad_weights() {
    let inst = star_instance(2).unwrap();
    let agent = Agent::ball(Point::Index(0), 1.0, Label::Positive).unwrap();
    let bad = Mixture::new(vec![(UnionPredictor::single(0), 0.4), (UnionPredictor::single(1), 0.4)]);
    let res = bad.and_then(|m| strategic_loss_randomized(inst.space.as_ref(), &inst.class, &m, &agent));
    assert!(matches!(res, Err(Error::MixtureWeights(_))));
}

#[test]
fn origin_agent_with_zero_radius_never_reaches_a_singleton() {
    let (inst, _) = sphere_instance(5, 0.1, true).unwrap();
    let agent = Agent::ball(Point::Origin, 0.0, Label::Negative).unwrap();
    let all = Mixture::uniform((0..5).map(UnionPredictor::single)).unwrap();
    assert_eq!(strategic_loss_randomized(inst.space.as_ref(), &inst.class, &all, &agent).unwrap(), 0.0);
}

#[test]
fn population_losses_of_small_families() {
    let p = EnvParams { n: 5, epsilon: 0.01, ..Default::default() };
    let env = environment_from_name("appG", &p).unwrap();
    let support = env.finite_support().unwrap();
    let space = env.instance.space.as_ref();
    let target = env.target().unwrap();
    assert_eq!(population_loss(space, env.instance.class.get(target), support, FIXED).unwrap(), 0.0);
    let wrong = population_loss(space, env.instance.class.get(0), support, FIXED).unwrap();
    assert!((wrong - 0.03).abs() < 1e-12, "{wrong}");

    let env = environment_from_name("appK", &p).unwrap();
    let tie = env.distribution().unwrap().tie_policy();
    let none = population_loss(env.instance.space.as_ref(), &Hypothesis::empty(), env.finite_support().unwrap(), tie);
    assert!((none.unwrap() - 0.94).abs() < 1e-12);
}

#[test]
fn large_permutation_supports_are_not_enumerable() {
    let env = environment_from_name("appG", &EnvParams { n: 12, epsilon: 0.01, ..Default::default() }).unwrap();
    let f = env.instance.class.get(0);
    let res = population_loss(env.instance.space.as_ref(), f, env.finite_support().unwrap(), FIXED);
    assert!(matches!(res, Err(Error::NotEnumerable)));
}
