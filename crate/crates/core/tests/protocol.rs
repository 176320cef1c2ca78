use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratgame::environments::{
    random_realizable_stream, scaled_basis_instance, star_instance, IidFinite, RadiusLaw, StarAdversary,
};
use stratgame::learners::{FixedPredictor, SequentialElimination, StrategicHalving};
use stratgame::model::{Agent, Label, Point, TieBreakPolicy, UnionPredictor};
use stratgame::protocol::{
    run_online, run_pac, run_round, Feedback, FeedbackExtra, FeedbackSetting, FixedSequence, Learner, RunOptions,
    Transcript,
};
use stratgame::Error;

const FIXED: TieBreakPolicy = TieBreakPolicy::FixedLowestIndex;

fn reset(learner: &mut dyn Learner, inst: &stratgame::model::Instance, setting: FeedbackSetting) {
    learner.reset(inst, setting, ChaCha8Rng::seed_from_u64(0)).unwrap();
}

#[test]
fn all_negative_predictor_misses_a_positive_hub_agent() {
    let inst = star_instance(4).unwrap();
    let mut learner = FixedPredictor::new(UnionPredictor::all_negative());
    reset(&mut learner, &inst, FeedbackSetting::XBeforeDeltaAfter);
    let agent = Agent::ball(Point::Index(0), 1.0, Label::Positive).unwrap();
    let mut ties = ChaCha8Rng::seed_from_u64(1);
    let rec = run_round(
        &inst,
        &agent,
        &mut learner,
        FeedbackSetting::XBeforeDeltaAfter,
        FIXED,
        1,
        &mut ties,
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!((rec.y_hat, rec.y, rec.mistake), (Label::Negative, Label::Positive, true));
    assert_eq!(rec.delta, Point::Index(0));
}

#[test]
fn no_manipulation_when_already_positive() {
    let inst = star_instance(4).unwrap();
    let mut learner = FixedPredictor::new(UnionPredictor::single(1));
    reset(&mut learner, &inst, FeedbackSetting::NothingNothing);
    let agent = Agent::ball(Point::Index(2), 1.5, Label::Positive).unwrap();
    let mut ties = ChaCha8Rng::seed_from_u64(1);
    let rec = run_round(
        &inst,
        &agent,
        &mut learner,
        FeedbackSetting::NothingNothing,
        FIXED,
        1,
        &mut ties,
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!((rec.delta, rec.y_hat, rec.mistake), (Point::Index(2), Label::Positive, false));
}

#[test]
fn feedback_fields_follow_the_setting() {
    let (x, d) = (Point::Index(0), Point::Index(1));
    let none = Feedback::new(FeedbackSetting::NothingNothing, &x, &d, Label::Positive, Label::Negative);
    assert_eq!(none.extra, FeedbackExtra::None);
    assert_eq!((none.y, none.y_hat), (Label::Positive, Label::Negative));
    assert!(matches!(none.delta(), Err(Error::Contract(_))));
    let delta_only = Feedback::new(FeedbackSetting::NothingDeltaAfter, &x, &d, Label::Positive, Label::Positive);
    assert_eq!(delta_only.delta().unwrap(), &d);
    assert!(matches!(delta_only.x(), Err(Error::Contract(_))));
    let full = Feedback::new(FeedbackSetting::NothingXDeltaAfter, &x, &d, Label::Negative, Label::Positive);
    assert_eq!(full.extra, FeedbackExtra::XAndDelta(x, d));
    assert!(full.mistake());
}

#[test]
fn halving_on_eight_hypotheses_makes_at_most_three_mistakes() {
    for (k, inst) in [star_instance(8).unwrap(), scaled_basis_instance(8).unwrap()].into_iter().enumerate() {
        for seed in 0..50 {
            let mut seq =
                random_realizable_stream(&inst, (seed as usize) % 8, 300, seed + 100 * k as u64, RadiusLaw::default())
                    .unwrap();
            let mut learner = StrategicHalving::new();
            let tr = run_online(
                &inst,
                &mut seq,
                &mut learner,
                FeedbackSetting::XBeforeDeltaAfter,
                300,
                seed,
                &RunOptions::default(),
            )
            .unwrap();
            assert!(tr.mistakes <= 3, "seed {seed}: {} mistakes", tr.mistakes);
        }
    }
}

#[test]
fn zero_rounds_give_an_empty_transcript() {
    let inst = star_instance(3).unwrap();
    let mut seq = FixedSequence { agents: Vec::new(), target: Some(0), tie: FIXED };
    let tr = run_online(
        &inst,
        &mut seq,
        &mut StrategicHalving::new(),
        FeedbackSetting::XBeforeDeltaAfter,
        0,
        4,
        &RunOptions::keep(),
    )
    .unwrap();
    assert_eq!((tr.len, tr.mistakes, tr.rounds.len()), (0, 0, 0));
}

#[test]
fn sequential_elimination_against_star_adversary() {
    let inst = star_instance(5).unwrap();
    let mut adv = StarAdversary::new(5).unwrap();
    let mut learner = SequentialElimination::new();
    let tr = run_online(&inst, &mut adv, &mut learner, FeedbackSetting::NothingNothing, 5, 0, &RunOptions::default())
        .unwrap();
    assert_eq!(tr.mistakes, 4);
}

#[test]
fn point_mass_distribution_is_learned_exactly() {
    let inst = star_instance(4).unwrap();
    let agent = Agent::ball(Point::Index(3), 0.0, Label::Positive).unwrap();
    let dist = IidFinite::new("point", &inst, vec![(agent, 1.0)], Some(2), FIXED).unwrap();
    let mut learner = SequentialElimination::new();
    let out =
        run_pac(&inst, &dist, &mut learner, FeedbackSetting::NothingNothing, 10, 0, &RunOptions::default()).unwrap();
    assert_eq!(out.output.canonical(), vec![2]);
}

#[test]
fn replay_is_bit_exact() {
    let inst = scaled_basis_instance(6).unwrap();
    let run = |seed| {
        let mut seq = random_realizable_stream(&inst, 2, 200, seed, RadiusLaw::default()).unwrap();
        let mut learner = stratgame::learners::Mwmr::new();
        run_online(&inst, &mut seq, &mut learner, FeedbackSetting::NothingXDeltaAfter, 200, seed, &RunOptions::keep())
            .unwrap()
            .to_jsonl()
            .unwrap()
    };
    let a = run(9);
    assert_eq!(a, run(9));
    assert_eq!(Transcript::parse_jsonl(&a).unwrap().len(), 200);
}

#[test]
fn realizability_violation_names_the_round() {
    let inst = star_instance(2).unwrap();
    let agents = vec![
        Agent::ball(Point::Index(1), 0.0, Label::Positive).unwrap(),
        Agent::ball(Point::Index(1), 0.0, Label::Positive).unwrap(),
        Agent::ball(Point::Index(1), 0.0, Label::Negative).unwrap(),
    ];
    let mut seq = FixedSequence { agents, target: None, tie: FIXED };
    let err = run_online(
        &inst,
        &mut seq,
        &mut SequentialElimination::new(),
        FeedbackSetting::NothingNothing,
        3,
        0,
        &RunOptions::default(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::Realizability { round: 3, .. }), "{err}");
}

#[test]
fn incompatible_setting_is_refused() {
    let inst = star_instance(3).unwrap();
    let mut seq = FixedSequence { agents: Vec::new(), target: Some(0), tie: FIXED };
    let err = run_online(
        &inst,
        &mut seq,
        &mut StrategicHalving::new(),
        FeedbackSetting::NothingNothing,
        0,
        0,
        &RunOptions::default(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::IncompatibleSetting { .. }));
}
