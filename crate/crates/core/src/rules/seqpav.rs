//! Sequential PAV, dynamic and myopic.

use alloc::vec::Vec;

use num_traits::Zero;

use super::remaining;
use crate::rational::{harmonic, ratio, Rational};
use crate::{ApprovalProfile, CandidateId, CandidateSet, ImplementedSequence, Ranking};

/// PAV score `Σ_i H(|A_i ∩ S|)` with `H` the harmonic numbers.
pub fn tsc(profile: &ApprovalProfile, set: &CandidateSet) -> Rational {
    let mut per_count: Vec<usize> = Vec::new();
    for i in 0..profile.num_voters() {
        let k = profile.overlap(i, set);
        if k >= per_count.len() {
            per_count.resize(k + 1, 0);
        }
        per_count[k] += 1;
    }
    per_count
        .iter()
        .enumerate()
        .filter(|&(_, &n)| n > 0)
        .map(|(k, &n)| harmonic(k) * Rational::from_integer(n.into()))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// `tsc(S ∪ {c}) − tsc(S)` where `counts[i] = |A_i ∩ S|` and `c ∉ S`.
pub fn marginal_contribution(profile: &ApprovalProfile, counts: &[usize], c: CandidateId) -> Rational {
    // Σ_{i∈N_c} 1/(counts[i]+1), grouped by denominator.
    let mut by_denominator: Vec<usize> = Vec::new();
    for &i in profile.supporters_of(c) {
        let k = counts[i] + 1;
        if k >= by_denominator.len() {
            by_denominator.resize(k + 1, 0);
        }
        by_denominator[k] += 1;
    }
    let mut sum = Rational::zero();
    for (k, &n) in by_denominator.iter().enumerate() {
        if n > 0 {
            sum += ratio(n as i64, k as i64);
        }
    }
    sum
}

fn implemented_counts(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Vec<usize> {
    (0..profile.num_voters()).map(|i| profile.overlap(i, implemented.as_set())).collect()
}

/// Dynamic seqPAV: greedily append the candidate with the largest marginal
/// contribution to `X ∪ r`. The order of `X` is irrelevant.
pub fn rank_dynamic_seqpav(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Ranking {
    rank_dynamic_seqpav_top(profile, implemented, usize::MAX)
}

/// The first `depth` positions of [`rank_dynamic_seqpav`].
pub fn rank_dynamic_seqpav_top(profile: &ApprovalProfile, implemented: &ImplementedSequence, depth: usize) -> Ranking {
    let mut counts = implemented_counts(profile, implemented);
    let mut open = remaining(profile, implemented);
    let mut cache: Vec<Option<Rational>> = alloc::vec![None; profile.num_candidates()];
    let mut order = Vec::with_capacity(open.len().min(depth));

    while !open.is_empty() && order.len() < depth {
        let mut best: Option<(usize, Rational)> = None;
        for (slot, &c) in open.iter().enumerate() {
            let mc = cache[c.index()].get_or_insert_with(|| marginal_contribution(profile, &counts, c));
            // `open` is in priority order, so only a strict improvement replaces.
            if best.as_ref().is_none_or(|(_, b)| *mc > *b) {
                best = Some((slot, mc.clone()));
            }
        }
        let (slot, _) = best.expect("open is non-empty");
        let chosen = open.remove(slot);
        order.push(chosen);
        for &i in profile.supporters_of(chosen) {
            counts[i] += 1;
            for &d in profile.ballot(i) {
                cache[d.index()] = None;
            }
        }
    }
    Ranking::new(order)
}

/// Myopic seqPAV: sort by `tsc(X ∪ {c}) − tsc(X)`, decreasing.
pub fn rank_myopic_seqpav(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Ranking {
    let counts = implemented_counts(profile, implemented);
    let mut scored: Vec<(Rational, CandidateId)> =
        remaining(profile, implemented).into_iter().map(|c| (marginal_contribution(profile, &counts, c), c)).collect();
    scored.sort_by(|(x, c), (y, d)| y.cmp(x).then(c.cmp(d)));
    Ranking::new(scored.into_iter().map(|(_, c)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(p: &ApprovalProfile, names: &[&str]) -> CandidateSet {
        CandidateSet::from_ids(p.num_candidates(), names.iter().map(|n| p.id(n).unwrap()))
    }

    fn seq(p: &ApprovalProfile, names: &[&str]) -> ImplementedSequence {
        ImplementedSequence::from_names(p, names).unwrap()
    }

    #[test]
    fn tsc_examples() {
        let p = fixtures::five_three_one();
        assert_eq!(tsc(&p, &set(&p, &[])), Rational::zero());
        assert_eq!(tsc(&p, &set(&p, &["a", "b"])), ratio(15, 2));
        assert_eq!(tsc(&p, &set(&p, &["a", "c"])), ratio(8, 1));
    }

    #[test]
    fn marginal_matches_tsc_difference() {
        let p = fixtures::weak_mono_seqpav();
        let s = set(&p, &["a", "d"]);
        let counts: Vec<usize> = (0..p.num_voters()).map(|i| p.overlap(i, &s)).collect();
        for c in ["b", "c", "e"] {
            let id = p.id(c).unwrap();
            let mut with = s.clone();
            with.insert(id);
            assert_eq!(marginal_contribution(&p, &counts, id), tsc(&p, &with) - tsc(&p, &s), "{c}");
        }
    }

    #[test]
    fn dynamic_five_three_one() {
        let p = fixtures::five_three_one();
        assert_eq!(rank_dynamic_seqpav(&p, &seq(&p, &[])).names(&p), ["a", "c", "b", "d", "e"]);
        assert_eq!(rank_dynamic_seqpav(&p, &seq(&p, &["b"])).names(&p), ["c", "a", "d", "e"]);
        assert_eq!(rank_dynamic_seqpav(&p, &seq(&p, &["b", "d"])).names(&p), ["a", "c", "e"]);
    }

    #[test]
    fn myopic_five_three_one() {
        let p = fixtures::five_three_one();
        assert_eq!(rank_myopic_seqpav(&p, &seq(&p, &[])).names(&p), ["a", "b", "c", "d", "e"]);
        assert_eq!(rank_myopic_seqpav(&p, &seq(&p, &["b"])).names(&p), ["c", "d", "a", "e"]);
        assert_eq!(rank_myopic_seqpav(&p, &seq(&p, &["b", "d"])).names(&p), ["a", "c", "e"]);
    }

    #[test]
    fn myopic_one_three_three() {
        let p = fixtures::one_three_three();
        assert_eq!(rank_myopic_seqpav(&p, &seq(&p, &["c"])).names(&p), ["b", "a"]);
    }

    #[test]
    fn dynamic_mono_trap_rankings() {
        let p = fixtures::mono_trap(6);
        assert_eq!(rank_dynamic_seqpav(&p, &seq(&p, &[])).names(&p), ["a", "b", "c", "d", "e"]);
        assert_eq!(rank_dynamic_seqpav(&p, &seq(&p, &["b"])).names(&p), ["c", "d", "e", "a"]);
    }

    #[test]
    fn dynamic_weak_mono_rankings() {
        let p = fixtures::weak_mono_seqpav();
        assert_eq!(rank_dynamic_seqpav(&p, &seq(&p, &[])).names(&p), ["a", "b", "c", "e", "d"]);
        assert_eq!(rank_dynamic_seqpav(&p, &seq(&p, &["b"])).names(&p), ["d", "a", "e", "c"]);
    }

    #[test]
    fn top_is_prefix_of_full() {
        let p = fixtures::weak_mono_seqpav();
        let x = seq(&p, &["a"]);
        let full = rank_dynamic_seqpav(&p, &x);
        assert_eq!(rank_dynamic_seqpav_top(&p, &x, 2).as_slice(), &full.as_slice()[..2]);
    }
}
