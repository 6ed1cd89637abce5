use dynrank_core::{ApprovalProfile, CandidateId, ImplementedSequence};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// A profile and a valid implemented sequence whose candidates all have
/// supporters.
#[derive(Clone, Debug)]
pub struct Instance {
    pub profile: ApprovalProfile,
    pub implemented: ImplementedSequence,
}

impl Instance {
    pub fn from_parts(m: usize, ballots: Vec<Vec<bool>>, picks: Vec<usize>) -> Self {
        let names: Vec<String> = (0..m).map(|c| format!("c{c}")).collect();
        let ballots = ballots
            .into_iter()
            .map(|row| row.iter().enumerate().filter(|(_, &a)| a).map(|(c, _)| CandidateId::new(c)).collect())
            .collect();
        let profile = ApprovalProfile::new(names, ballots).expect("generated ballots are valid");
        let mut supported: Vec<CandidateId> = profile.candidates().filter(|&c| profile.approval_score(c) > 0).collect();
        let mut items = Vec::new();
        for p in picks {
            if supported.is_empty() {
                break;
            }
            items.push(supported.remove(p % supported.len()));
        }
        let implemented = ImplementedSequence::new(&profile, items).expect("distinct known candidates");
        Instance { profile, implemented }
    }

    pub fn name(&self) -> String {
        let x: Vec<&str> = self.implemented.as_slice().iter().map(|&c| self.profile.name(c)).collect();
        let ballots: Vec<String> = self
            .profile
            .ballots()
            .iter()
            .map(|b| b.iter().map(|&c| self.profile.name(c)).collect::<Vec<_>>().join(" "))
            .collect();
        format!("X=({}) voters=[{}]", x.join(","), ballots.join(" | "))
    }
}

/// Up to `max_n` voters, up to `max_m` candidates, `|X| ≤ max_x`. The
/// approval density is itself random so sparse and dense profiles both
/// occur.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, max_m: usize, max_x: usize) -> Instance {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_m);
    let density = [0.2, 0.35, 0.5, 0.7][rng.random_range(0..4)];
    let ballots = (0..n).map(|_| (0..m).map(|_| rng.random_bool(density)).collect()).collect();
    let x_len = rng.random_range(0..=max_x);
    let mut picks: Vec<usize> = (0..x_len).map(|_| rng.random_range(0..64)).collect();
    picks.shuffle(rng);
    Instance::from_parts(m, ballots, picks)
}

/// Proptest strategy with the same shape as [`random_instance`].
pub fn arb_instance(max_n: usize, max_m: usize, max_x: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(move |(n, m)| {
            (
                Just(m),
                prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.4), m), n),
                prop::collection::vec(0usize..64, 0..=max_x),
            )
        })
        .prop_map(|(m, ballots, picks)| Instance::from_parts(m, ballots, picks))
}
