use dynrank_core::generators::{ctr_position, ctr_probability, generate, rng_from_seed, GenConfig, Model, CTR_TENTHS};
use dynrank_core::rational::ratio;
use proptest::prelude::*;

fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn blurred_approval_rates() {
    // Per election: mean own-party and cross-party approvals per voter.
    let mut own = Vec::new();
    let mut cross = Vec::new();
    for seed in 0..300 {
        let g = generate(&GenConfig::new(Model::BlurredParties, 25, seed)).unwrap();
        let (mut o, mut x) = (0usize, 0usize);
        for (i, ballot) in g.profile.ballots().iter().enumerate() {
            for c in ballot {
                if g.candidate_party[c.index()] == g.voter_party[i] {
                    o += 1;
                } else {
                    x += 1;
                }
            }
        }
        own.push(o as f64 / 60.0);
        cross.push(x as f64 / 60.0);
    }
    let (m, se) = mean_and_se(&own);
    assert!((m - 10.0 * 0.95).abs() <= 4.0 * se, "own {m} ± {se}");
    let (m, se) = mean_and_se(&cross);
    assert!((m - 10.0 * 0.05).abs() <= 4.0 * se, "cross {m} ± {se}");
}

#[test]
fn spatial_same_party_approval_rate() {
    // Voter and candidate offsets are independent N(0, σ²) per axis, so
    // their difference has variance 2σ² per axis and the squared distance
    // is exponential: P(d ≤ r) = 1 − exp(−r² / (4σ²)).
    let (sigma, radius) = (0.4_f64, 0.8_f64);
    let expected = 1.0 - (-(radius * radius) / (4.0 * sigma * sigma)).exp();
    let mut rates = Vec::new();
    for seed in 0..400 {
        let g = generate(&GenConfig::new(Model::Spatial, 20, seed)).unwrap();
        let (mut hits, mut pairs) = (0usize, 0usize);
        for (i, &vp) in g.voter_party.iter().enumerate() {
            for c in g.profile.candidates() {
                if g.candidate_party[c.index()] == vp {
                    pairs += 1;
                    hits += usize::from(g.profile.approves(i, c));
                }
            }
        }
        rates.push(hits as f64 / pairs as f64);
    }
    let (m, se) = mean_and_se(&rates);
    assert!((m - expected).abs() <= 4.0 * se, "{m} ± {se} vs {expected}");
}

#[test]
fn spatial_party_sizes() {
    let g = generate(&GenConfig::new(Model::Spatial, 15, 3)).unwrap();
    let count = |v: &[usize], p: usize| v.iter().filter(|&&x| x == p).count();
    assert_eq!([0, 1, 2].map(|p| count(&g.candidate_party, p)), [7, 7, 6]);
    assert_eq!([0, 1, 2].map(|p| count(&g.voter_party, p)), [15, 23, 22]);
}

#[test]
fn ctr_table_and_renormalisation() {
    assert_eq!(CTR_TENTHS.iter().sum::<u32>(), 952);
    assert_eq!(ctr_probability(1, 20), ratio(325, 952));
    assert_eq!(ctr_probability(16, 20), ratio(0, 1));
    assert_eq!(ctr_probability(1, 3), ratio(325, 325 + 176 + 114));
    assert_eq!((1..=15).map(|p| ctr_probability(p, 15)).fold(ratio(0, 1), |a, b| a + b), ratio(1, 1));
}

#[test]
fn ctr_positions_follow_the_table() {
    let draws = 200_000;
    let mut rng = rng_from_seed(5);
    let mut counts = [0u64; 15];
    for _ in 0..draws {
        counts[ctr_position(40, &mut rng).unwrap() - 1] += 1;
    }
    let total = 952.0;
    let chi2: f64 = counts
        .iter()
        .zip(CTR_TENTHS)
        .map(|(&o, w)| {
            let e = draws as f64 * f64::from(w) / total;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    // 14 degrees of freedom, p = 0.001.
    assert!(chi2 < 36.12, "chi2 = {chi2}");
    let first = counts[0] as f64 / draws as f64;
    let se = (325.0 / total * (1.0 - 325.0 / total) / draws as f64).sqrt();
    assert!((first - 325.0 / total).abs() <= 4.0 * se);
}

#[test]
fn ctr_short_rankings() {
    let mut rng = rng_from_seed(1);
    for _ in 0..1000 {
        assert!(ctr_position(2, &mut rng).unwrap() <= 2);
    }
    assert!(ctr_position(0, &mut rng).is_err());
}

proptest! {
    #[test]
    fn generated_profiles_have_the_configured_shape(seed in any::<u64>(), group in 0usize..=60, spatial in any::<bool>()) {
        let model = if spatial { Model::Spatial } else { Model::BlurredParties };
        let g = generate(&GenConfig::new(model, group, seed)).unwrap();
        prop_assert_eq!(g.profile.num_voters(), 60);
        prop_assert_eq!(g.profile.num_candidates(), 20);
        prop_assert_eq!(g.group.members().to_vec(), (0..group).collect::<Vec<_>>());
        prop_assert!(g.voter_party[..group].iter().all(|&p| p == 0));
        prop_assert!(g.voter_party[group..].iter().all(|&p| p != 0));
        let again = generate(&GenConfig::new(model, group, seed)).unwrap();
        prop_assert_eq!(g.profile.ballots(), again.profile.ballots());
    }

    #[test]
    fn oversized_groups_are_rejected(extra in 1usize..10) {
        prop_assert!(generate(&GenConfig::new(Model::Spatial, 60 + extra, 0)).is_err());
    }
}
