use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use stratgame::learners::{
    mwmr_choose, random_union_choose, random_union_finalize, random_union_output_mixture, VersionSpace,
};

const DRAWS: usize = 10_000;

/// Pearson statistic against `expected` probabilities, and the 0.999 quantile.
fn chi_square(counts: &BTreeMap<Vec<usize>, usize>, expected: &BTreeMap<Vec<usize>, f64>) -> (f64, f64) {
    assert!(counts.keys().all(|k| expected.contains_key(k)), "draw outside the support");
    let total: usize = counts.values().sum();
    let stat = expected
        .iter()
        .map(|(k, p)| {
            let e = p * total as f64;
            let o = *counts.get(k).unwrap_or(&0) as f64;
            (o - e) * (o - e) / e
        })
        .sum();
    let critical = ChiSquared::new((expected.len() - 1) as f64).unwrap().inverse_cdf(0.999);
    (stat, critical)
}

#[test]
fn finalize_matches_its_exact_mixture() {
    let history = [
        (1, VersionSpace::full(4)),
        (3, VersionSpace::from_alive(vec![1, 2, 3])),
        (6, VersionSpace::from_alive(vec![3])),
    ];
    let rounds = 8;
    let mixture = random_union_output_mixture(&history, rounds).unwrap();
    let expected: BTreeMap<Vec<usize>, f64> = mixture.atoms().iter().map(|(f, w)| (f.canonical(), *w)).collect();
    assert!((expected.values().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!((expected[&vec![3]] - (3.0 / 8.0 + 3.0 / 8.0 / 9.0 + 2.0 / 8.0 / 16.0)).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts = BTreeMap::new();
    for _ in 0..DRAWS {
        *counts.entry(random_union_finalize(&history, rounds, &mut rng).unwrap().canonical()).or_insert(0) += 1;
    }
    let (stat, critical) = chi_square(&counts, &expected);
    assert!(stat <= critical, "chi-square {stat} > {critical}");
}

#[test]
fn union_sizes_are_uniform_over_powers_of_two() {
    let vs = VersionSpace::full(8);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut by_k = BTreeMap::new();
    for _ in 0..DRAWS {
        *by_k.entry(random_union_choose(&vs, &mut rng).parts().len()).or_insert(0usize) += 1;
    }
    assert_eq!(by_k.keys().copied().collect::<Vec<_>>(), vec![1, 2, 4]);
    for (k, c) in by_k {
        let freq = c as f64 / DRAWS as f64;
        assert!((freq - 1.0 / 3.0).abs() <= 0.02, "k = {k}: {freq}");
    }
}

#[test]
fn mwmr_draws_uniformly() {
    let vs = VersionSpace::from_alive(vec![0, 3, 5, 9]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut counts = BTreeMap::new();
    for _ in 0..DRAWS {
        *counts.entry(mwmr_choose(&vs, &mut rng).canonical()).or_insert(0usize) += 1;
    }
    for (h, c) in &counts {
        let freq = *c as f64 / DRAWS as f64;
        assert!((freq - 0.25).abs() <= 0.02, "{h:?}: {freq}");
    }
    let expected = counts.keys().map(|k| (k.clone(), 0.25)).collect();
    let (stat, critical) = chi_square(&counts, &expected);
    assert!(stat <= critical);
}
