//! Standard voter-group families for the checkers.
//!
//! The definitions quantify over all `V ⊆ N`; these families cover the
//! groups that matter in practice: supporters of candidate subsets, voters
//! with identical ballots, and unions of such ballot classes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::rational::Rational;
use crate::{ApprovalProfile, CandidateId, VoterGroup};

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `∩_{c∈T} N_c` for every non-empty candidate subset `T` with
/// `|T| ≤ max_size`. Empty groups and duplicates are dropped.
pub fn intersection_groups(profile: &ApprovalProfile, max_size: usize) -> Vec<VoterGroup> {
    fn grow(profile: &ApprovalProfile, from: usize, members: &[usize], left: usize, out: &mut BTreeSet<Vec<usize>>) {
        if left == 0 {
            return;
        }
        for c in from..profile.num_candidates() {
            let next = intersect(members, profile.supporters_of(CandidateId::new(c)));
            if next.is_empty() {
                continue;
            }
            out.insert(next.clone());
            grow(profile, c + 1, &next, left - 1, out);
        }
    }
    let mut out = BTreeSet::new();
    let everyone: Vec<usize> = (0..profile.num_voters()).collect();
    grow(profile, 0, &everyone, max_size, &mut out);
    out.into_iter().map(VoterGroup::from_sorted_unchecked).collect()
}

/// Voters grouped by identical approval sets, in order of first occurrence.
pub fn ballot_classes(profile: &ApprovalProfile) -> Vec<VoterGroup> {
    let mut classes: BTreeMap<&[CandidateId], Vec<usize>> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, ballot) in profile.ballots().iter().enumerate() {
        let entry = classes.entry(ballot.as_slice()).or_default();
        if entry.is_empty() {
            order.push(ballot.as_slice());
        }
        entry.push(i);
    }
    order.into_iter().map(|b| VoterGroup::from_sorted_unchecked(classes[b].clone())).collect()
}

/// Unions of up to `max_classes` ballot classes.
pub fn class_unions(profile: &ApprovalProfile, max_classes: usize) -> Vec<VoterGroup> {
    let classes = ballot_classes(profile);
    let mut out = BTreeSet::new();
    let mut chosen = Vec::new();
    fn walk(classes: &[VoterGroup], from: usize, left: usize, chosen: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        if !chosen.is_empty() {
            let mut members: Vec<usize> = chosen.iter().flat_map(|&k| classes[k].members().iter().copied()).collect();
            members.sort_unstable();
            out.insert(members);
        }
        if left == 0 {
            return;
        }
        for k in from..classes.len() {
            chosen.push(k);
            walk(classes, k + 1, left - 1, chosen, out);
            chosen.pop();
        }
    }
    walk(&classes, 0, max_classes, &mut chosen, &mut out);
    out.into_iter().map(VoterGroup::from_sorted_unchecked).collect()
}

/// Which families [`standard_groups`] enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupFamily {
    /// Largest candidate subset for [`intersection_groups`].
    pub max_intersection: usize,
    /// Largest number of ballot classes for [`class_unions`].
    pub max_union: usize,
}

impl Default for GroupFamily {
    fn default() -> Self {
        GroupFamily { max_intersection: 3, max_union: 2 }
    }
}

/// Intersection groups, ballot-class unions and `extra`, deduplicated.
pub fn standard_groups(profile: &ApprovalProfile, family: GroupFamily, extra: &[VoterGroup]) -> Vec<VoterGroup> {
    let mut all: BTreeSet<VoterGroup> = BTreeSet::new();
    all.extend(intersection_groups(profile, family.max_intersection));
    all.extend(class_unions(profile, family.max_union));
    all.extend(extra.iter().filter(|g| !g.is_empty()).cloned());
    all.into_iter().collect()
}

/// The groups of size at least `alpha · n`.
pub fn at_least(profile: &ApprovalProfile, groups: Vec<VoterGroup>, alpha: &Rational) -> Vec<VoterGroup> {
    let need = super::min_group_size(alpha, profile.num_voters()).max(1);
    groups.into_iter().filter(|g| g.len() >= need).collect()
}
