//! Worked-example and counterexample profiles.
//!
//! Parameterised families take the free parameter `j` that scales group
//! sizes without changing the rankings; callers must pass values the
//! construction allows (see each function).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{ApprovalProfile, VoterGroup};

/// 5 × {a,b}, 3 × {c,d}, 1 × {e}.
pub fn five_three_one() -> ApprovalProfile {
    ApprovalProfile::from_blocks(&["a", "b", "c", "d", "e"], &[(5, &["a", "b"]), (3, &["c", "d"]), (1, &["e"])])
        .expect("static profile")
}

/// 1 × {a}, 3 × {b}, 3 × {a,c}.
pub fn one_three_three() -> ApprovalProfile {
    ApprovalProfile::from_blocks(&["a", "b", "c"], &[(1, &["a"]), (3, &["b"]), (3, &["a", "c"])])
        .expect("static profile")
}

/// Monotonicity counterexample for the dynamic rules at depth 3.
///
/// `j` must be a multiple of 6. `extra_e` adds copies `e#1, e#2, ...` of
/// `e`, each with its own fresh block of `j/3 + 12` single-approval voters,
/// extending the construction to depth `3 + extra_e`.
pub fn mono_trap_with_clones(j: usize, extra_e: usize) -> ApprovalProfile {
    assert!(j.is_multiple_of(6), "j must be a multiple of 6");
    let e_block = j / 3 + 12;
    build_with_e_copies(
        &[(2, &["a"]), (15, &["a", "b"]), (j / 2 + 6, &["b"]), (10, &["c"]), (10, &["d"]), (j + 6, &["a", "c", "d"])],
        e_block,
        extra_e,
    )
}

pub fn mono_trap(j: usize) -> ApprovalProfile {
    mono_trap_with_clones(j, 0)
}

/// Variant of [`mono_trap`] that defeats the myopic rules: `j/2` and `j/3`
/// become `j`, and `e` gains four extra supporters. Any `j` works.
pub fn mono_trap_myopic_with_clones(j: usize, extra_e: usize) -> ApprovalProfile {
    build_with_e_copies(
        &[(2, &["a"]), (15, &["a", "b"]), (j + 6, &["b"]), (10, &["c"]), (10, &["d"]), (j + 6, &["a", "c", "d"])],
        j + 16,
        extra_e,
    )
}

pub fn mono_trap_myopic(j: usize) -> ApprovalProfile {
    mono_trap_myopic_with_clones(j, 0)
}

fn build_with_e_copies(blocks: &[(usize, &[&str])], e_block: usize, extra_e: usize) -> ApprovalProfile {
    let mut names: Vec<String> = ["a", "b", "c", "d", "e"].iter().map(|s| String::from(*s)).collect();
    for k in 1..=extra_e {
        names.push(format!("e#{k}"));
    }
    let mut voters: Vec<Vec<String>> = Vec::new();
    for &(count, ballot) in blocks {
        for _ in 0..count {
            voters.push(ballot.iter().map(|s| String::from(*s)).collect());
        }
    }
    for e in names[4..].iter() {
        for _ in 0..e_block {
            voters.push(alloc::vec![e.clone()]);
        }
    }
    ApprovalProfile::from_names(&names, &voters).expect("generated profile")
}

/// The voters approving exactly {a} or exactly {a,c,d}.
pub fn mono_trap_group(profile: &ApprovalProfile) -> VoterGroup {
    voters_with_ballots(profile, &[&["a"], &["a", "c", "d"]])
}

/// 177-voter weak-monotonicity counterexample for dynamic seqPAV.
pub fn weak_mono_seqpav() -> ApprovalProfile {
    ApprovalProfile::from_blocks(
        &["a", "b", "c", "d", "e"],
        &[
            (4, &["a"]),
            (27, &["a", "b"]),
            (27, &["b"]),
            (30, &["c"]),
            (9, &["c", "d"]),
            (9, &["d"]),
            (36, &["a", "d"]),
            (35, &["e"]),
        ],
    )
    .expect("static profile")
}

/// Weak-monotonicity counterexample for dynamic Phragmén (two copies of `e`).
pub fn weak_mono_phragmen() -> ApprovalProfile {
    ApprovalProfile::from_blocks(
        &["a", "b", "c", "d", "e1", "e2"],
        &[
            (4, &["a"]),
            (27, &["a", "b"]),
            (27, &["b"]),
            (30, &["c"]),
            (9, &["c", "d"]),
            (9, &["d"]),
            (36, &["a", "d"]),
            (35, &["e1"]),
            (35, &["e2"]),
        ],
    )
    .expect("static profile")
}

/// The supporters of `c` in the weak-monotonicity fixtures.
pub fn weak_mono_group(profile: &ApprovalProfile) -> VoterGroup {
    profile.supporters(profile.id("c").expect("fixture has c")).expect("known candidate")
}

/// Two disjoint parties of `party_size` voters each; party A approves
/// `a1..ak`, party B approves `b1..bk`. Priority is `a1 < ... < ak < b1 < ... < bk`.
pub fn two_parties(party_size: usize, per_party: usize) -> ApprovalProfile {
    let a: Vec<String> = (1..=per_party).map(|i| format!("a{i}")).collect();
    let b: Vec<String> = (1..=per_party).map(|i| format!("b{i}")).collect();
    let names: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
    let mut voters: Vec<Vec<String>> = Vec::new();
    voters.extend(core::iter::repeat_n(a.clone(), party_size));
    voters.extend(core::iter::repeat_n(b.clone(), party_size));
    ApprovalProfile::from_names(&names, &voters).expect("generated profile")
}

/// Voters of party A in [`two_parties`].
pub fn party_a(profile: &ApprovalProfile) -> VoterGroup {
    let a1 = profile.id("a1").expect("fixture has a1");
    profile.supporters(a1).expect("known candidate")
}

/// Construction on which the myopic rules give a group nothing in the top
/// `depth` positions: candidates `x1..x{implemented}` and `v1..v{depth}`
/// approved by the `group_size` voters of V, `g1..g{depth}` approved by the
/// `others` voters of G. The intended implemented sequence is `x1..`.
pub fn group_rep_failure(implemented: usize, depth: usize, group_size: usize, others: usize) -> ApprovalProfile {
    let xs: Vec<String> = (1..=implemented).map(|i| format!("x{i}")).collect();
    let vs: Vec<String> = (1..=depth).map(|i| format!("v{i}")).collect();
    let gs: Vec<String> = (1..=depth).map(|i| format!("g{i}")).collect();
    let names: Vec<String> = xs.iter().chain(vs.iter()).chain(gs.iter()).cloned().collect();
    let v_ballot: Vec<String> = xs.iter().chain(vs.iter()).cloned().collect();
    let mut voters: Vec<Vec<String>> = Vec::new();
    voters.extend(core::iter::repeat_n(v_ballot, group_size));
    voters.extend(core::iter::repeat_n(gs, others));
    ApprovalProfile::from_names(&names, &voters).expect("generated profile")
}

/// All voters whose approval set equals one of `ballots` exactly.
pub fn voters_with_ballots(profile: &ApprovalProfile, ballots: &[&[&str]]) -> VoterGroup {
    let mut wanted: Vec<Vec<_>> = ballots
        .iter()
        .map(|b| {
            let mut ids: Vec<_> = b.iter().map(|n| profile.id(n).expect("fixture candidate")).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    wanted.sort();
    let members = (0..profile.num_voters()).filter(|&i| wanted.iter().any(|w| w.as_slice() == profile.ballot(i)));
    VoterGroup::new(profile, members).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        assert_eq!(five_three_one().num_voters(), 9);
        assert_eq!(one_three_three().num_voters(), 7);
        // 2 + 15 + 9 + 10 + 10 + 12 + 14
        assert_eq!(mono_trap(6).num_voters(), 72);
        assert_eq!(weak_mono_seqpav().num_voters(), 177);
        assert_eq!(weak_mono_phragmen().num_voters(), 212);
        assert_eq!(weak_mono_group(&weak_mono_seqpav()).len(), 39);
    }

    #[test]
    fn mono_trap_clone_blocks() {
        let p = mono_trap_with_clones(0, 2);
        assert_eq!(p.num_candidates(), 7);
        let e1 = p.id("e#1").unwrap();
        assert_eq!(p.approval_score(e1), 12);
        assert_eq!(p.approval_score(p.id("e").unwrap()), 12);
    }

    #[test]
    fn myopic_variant_supporter_counts() {
        let p = mono_trap_myopic(0);
        let score = |n: &str| p.approval_score(p.id(n).unwrap());
        assert_eq!(score("a"), 23);
        assert_eq!(score("b"), 21);
        assert_eq!(score("c"), 16);
        assert_eq!(score("e"), 16);
    }
}
