use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::rational::Rational;
use crate::{Error, Result};

/// A candidate, identified by its position in the profile's priority order.
///
/// Lower ids win ties in every rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(u32);

impl CandidateId {
    pub const fn new(index: usize) -> Self {
        CandidateId(index as u32)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    /// Tie-break priority; identical to the index.
    pub const fn priority(self) -> usize {
        self.0 as usize
    }
}

/// Fixed-capacity bitset over the candidates of one profile.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    words: Vec<u64>,
}

impl CandidateSet {
    pub fn with_capacity(m: usize) -> Self {
        CandidateSet { words: alloc::vec![0; m.div_ceil(64)] }
    }

    pub fn from_ids(m: usize, ids: impl IntoIterator<Item = CandidateId>) -> Self {
        let mut set = Self::with_capacity(m);
        for c in ids {
            set.insert(c);
        }
        set
    }

    pub fn insert(&mut self, c: CandidateId) -> bool {
        let (w, b) = (c.index() / 64, c.index() % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, c: CandidateId) {
        let (w, b) = (c.index() / 64, c.index() % 64);
        if let Some(word) = self.words.get_mut(w) {
            *word &= !(1 << b);
        }
    }

    pub fn contains(&self, c: CandidateId) -> bool {
        let (w, b) = (c.index() / 64, c.index() % 64);
        self.words.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = CandidateId> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word & (1u64 << b) != 0).map(move |b| CandidateId::new(w * 64 + b))
        })
    }

    pub fn is_subset(&self, other: &CandidateSet) -> bool {
        self.words.iter().enumerate().all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }
}

/// Voters' approval sets over a candidate universe.
///
/// Candidate order is the tie-breaking priority order. Voters are identified
/// by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApprovalProfile {
    names: Vec<String>,
    index: BTreeMap<String, CandidateId>,
    ballots: Vec<Vec<CandidateId>>,
    supporters: Vec<Vec<usize>>,
}

impl ApprovalProfile {
    /// Builds a profile from candidate names (in priority order) and ballots
    /// given as candidate ids. Ballots are sorted; duplicates are rejected.
    pub fn new(names: Vec<String>, ballots: Vec<Vec<CandidateId>>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), CandidateId::new(i)).is_some() {
                return Err(Error::DuplicateCandidate(name.clone()));
            }
        }
        let m = names.len();
        let mut supporters = alloc::vec![Vec::new(); m];
        let mut sorted = Vec::with_capacity(ballots.len());
        for (voter, mut ballot) in ballots.into_iter().enumerate() {
            ballot.sort_unstable();
            for pair in ballot.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::DuplicateApproval { voter, candidate: names[pair[0].index()].clone() });
                }
            }
            for &c in &ballot {
                if c.index() >= m {
                    return Err(Error::UnknownCandidate(c.index().to_string()));
                }
                supporters[c.index()].push(voter);
            }
            sorted.push(ballot);
        }
        Ok(ApprovalProfile { names, index, ballots: sorted, supporters })
    }

    /// Builds a profile from names; each ballot lists approved candidate names.
    pub fn from_names<S: AsRef<str>, B: AsRef<[S]>>(candidates: &[S], voters: &[B]) -> Result<Self> {
        let names: Vec<String> = candidates.iter().map(|s| s.as_ref().to_string()).collect();
        let lookup: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut ballots = Vec::with_capacity(voters.len());
        for ballot in voters {
            let mut ids = Vec::new();
            for name in ballot.as_ref() {
                let i = lookup.get(name.as_ref()).ok_or_else(|| Error::UnknownCandidate(name.as_ref().to_string()))?;
                ids.push(CandidateId::new(*i));
            }
            ballots.push(ids);
        }
        Self::new(names, ballots)
    }

    /// Builds a profile from `(multiplicity, ballot)` blocks, e.g. `5 × {a, b}`.
    pub fn from_blocks(candidates: &[&str], blocks: &[(usize, &[&str])]) -> Result<Self> {
        let mut voters: Vec<&[&str]> = Vec::new();
        for &(count, ballot) in blocks {
            voters.extend(core::iter::repeat_n(ballot, count));
        }
        Self::from_names(candidates, &voters)
    }

    pub fn num_voters(&self) -> usize {
        self.ballots.len()
    }

    pub fn num_candidates(&self) -> usize {
        self.names.len()
    }

    pub fn candidates(&self) -> impl Iterator<Item = CandidateId> + '_ {
        (0..self.names.len()).map(CandidateId::new)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: CandidateId) -> &str {
        &self.names[c.index()]
    }

    pub fn id(&self, name: &str) -> Result<CandidateId> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownCandidate(name.to_string()))
    }

    pub fn contains(&self, c: CandidateId) -> bool {
        c.index() < self.names.len()
    }

    pub fn check(&self, c: CandidateId) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::UnknownCandidate(c.index().to_string()))
        }
    }

    pub fn ballots(&self) -> &[Vec<CandidateId>] {
        &self.ballots
    }

    /// Sorted approval set of voter `i`.
    pub fn ballot(&self, i: usize) -> &[CandidateId] {
        &self.ballots[i]
    }

    pub fn approves(&self, voter: usize, c: CandidateId) -> bool {
        self.ballots[voter].binary_search(&c).is_ok()
    }

    /// Indices of the voters approving `c`, ascending. Panics on unknown `c`.
    pub fn supporters_of(&self, c: CandidateId) -> &[usize] {
        &self.supporters[c.index()]
    }

    /// The supporters of `c` as a group; `|result|` is the approval score.
    pub fn supporters(&self, c: CandidateId) -> Result<VoterGroup> {
        self.check(c)?;
        Ok(VoterGroup { members: self.supporters[c.index()].clone() })
    }

    pub fn approval_score(&self, c: CandidateId) -> usize {
        self.supporters[c.index()].len()
    }

    /// `|A_i ∩ S|`.
    pub fn overlap(&self, voter: usize, set: &CandidateSet) -> usize {
        self.ballots[voter].iter().filter(|&&c| set.contains(c)).count()
    }

    pub fn all_voters(&self) -> VoterGroup {
        VoterGroup { members: (0..self.num_voters()).collect() }
    }
}

/// A set of voters, stored as sorted indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VoterGroup {
    members: Vec<usize>,
}

impl VoterGroup {
    pub fn new(profile: &ApprovalProfile, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&last) = members.last() {
            if last >= profile.num_voters() {
                return Err(Error::UnknownVoter(last));
            }
        }
        Ok(VoterGroup { members })
    }

    /// Builds a group without checking indices against a profile.
    pub fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        VoterGroup { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, voter: usize) -> bool {
        self.members.binary_search(&voter).is_ok()
    }

    /// Candidates approved by at least one member.
    pub fn approved_union(&self, profile: &ApprovalProfile) -> CandidateSet {
        let mut set = CandidateSet::with_capacity(profile.num_candidates());
        for &i in &self.members {
            for &c in profile.ballot(i) {
                set.insert(c);
            }
        }
        set
    }

    /// Candidates approved by every member; empty for an empty group.
    pub fn approved_intersection(&self, profile: &ApprovalProfile) -> CandidateSet {
        let m = profile.num_candidates();
        let Some((&first, rest)) = self.members.split_first() else {
            return CandidateSet::with_capacity(m);
        };
        let mut set = CandidateSet::from_ids(m, profile.ballot(first).iter().copied());
        for &i in rest {
            for c in set.clone().iter() {
                if !profile.approves(i, c) {
                    set.remove(c);
                }
            }
        }
        set
    }
}

/// Already implemented candidates, in implementation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplementedSequence {
    items: Vec<CandidateId>,
    set: CandidateSet,
}

impl ImplementedSequence {
    pub fn empty(profile: &ApprovalProfile) -> Self {
        ImplementedSequence { items: Vec::new(), set: CandidateSet::with_capacity(profile.num_candidates()) }
    }

    pub fn new(profile: &ApprovalProfile, items: impl IntoIterator<Item = CandidateId>) -> Result<Self> {
        let mut seq = Self::empty(profile);
        for c in items {
            seq.push(profile, c)?;
        }
        Ok(seq)
    }

    pub fn from_names<S: AsRef<str>>(profile: &ApprovalProfile, names: &[S]) -> Result<Self> {
        let mut seq = Self::empty(profile);
        for name in names {
            seq.push(profile, profile.id(name.as_ref())?)?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, profile: &ApprovalProfile, c: CandidateId) -> Result<()> {
        profile.check(c)?;
        if !self.set.insert(c) {
            return Err(Error::AlreadyImplemented(c));
        }
        self.items.push(c);
        Ok(())
    }

    pub fn as_slice(&self) -> &[CandidateId] {
        &self.items
    }

    pub fn as_set(&self) -> &CandidateSet {
        &self.set
    }

    pub fn contains(&self, c: CandidateId) -> bool {
        self.set.contains(c)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The first `len` implemented candidates.
    pub fn truncated(&self, profile: &ApprovalProfile, len: usize) -> Self {
        let mut seq = Self::empty(profile);
        for &c in &self.items[..len.min(self.items.len())] {
            seq.set.insert(c);
            seq.items.push(c);
        }
        seq
    }
}

/// A strict order over the not-yet-implemented candidates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ranking(Vec<CandidateId>);

impl Ranking {
    pub fn new(order: Vec<CandidateId>) -> Self {
        Ranking(order)
    }

    pub fn as_slice(&self) -> &[CandidateId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<CandidateId> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Option<CandidateId> {
        self.0.first().copied()
    }

    /// 1-based position of `c`.
    pub fn position(&self, c: CandidateId) -> Option<usize> {
        self.0.iter().position(|&x| x == c).map(|p| p + 1)
    }

    pub fn names<'a>(&self, profile: &'a ApprovalProfile) -> Vec<&'a str> {
        self.0.iter().map(|&c| profile.name(c)).collect()
    }
}

/// The set of the first `min(j, |r|)` candidates of `r`.
pub fn prefix(r: &Ranking, j: usize) -> CandidateSet {
    let cap = r.0.iter().map(|c| c.index() + 1).max().unwrap_or(0);
    CandidateSet::from_ids(cap, r.0.iter().take(j).copied())
}

/// `(1/|V|) · Σ_{i∈V} |A_i ∩ S|`.
pub fn avg_satisfaction(profile: &ApprovalProfile, group: &VoterGroup, set: &CandidateSet) -> Result<Rational> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let total: usize = group.members.iter().map(|&i| profile.overlap(i, set)).sum();
    Ok(Rational::new(total.into(), group.len().into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;

    fn ids(profile: &ApprovalProfile, names: &[&str]) -> CandidateSet {
        CandidateSet::from_ids(profile.num_candidates(), names.iter().map(|n| profile.id(n).unwrap()))
    }

    #[test]
    fn supporters_of_five_three_one() {
        let p = fixtures::five_three_one();
        let a = p.supporters(p.id("a").unwrap()).unwrap();
        assert_eq!(a.members(), &[0, 1, 2, 3, 4]);
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn supporters_of_unapproved_candidate_is_empty() {
        let p = ApprovalProfile::from_names(&["a", "z"], &[["a"]]).unwrap();
        assert!(p.supporters(p.id("z").unwrap()).unwrap().is_empty());
    }

    #[test]
    fn supporters_of_one_three_three() {
        let p = fixtures::one_three_three();
        assert_eq!(p.supporters(p.id("a").unwrap()).unwrap().len(), 4);
    }

    #[test]
    fn supporters_of_unknown_candidate_fails() {
        let p = fixtures::five_three_one();
        assert!(matches!(p.supporters(CandidateId::new(99)), Err(Error::UnknownCandidate(_))));
    }

    #[test]
    fn duplicate_approval_rejected() {
        let err = ApprovalProfile::from_names(&["a", "b"], &[["a", "a"]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateApproval { voter: 0, .. }));
    }

    #[test]
    fn avg_satisfaction_examples() {
        let p = fixtures::five_three_one();
        let cd_voters = VoterGroup::new(&p, 5..8).unwrap();
        assert_eq!(avg_satisfaction(&p, &cd_voters, &ids(&p, &["c", "d"])).unwrap(), ratio(2, 1));

        let p = fixtures::mono_trap(6);
        let group = fixtures::mono_trap_group(&p);
        assert_eq!(group.len(), 14);
        assert_eq!(avg_satisfaction(&p, &group, &ids(&p, &["a", "b", "c"])).unwrap(), ratio(26, 14));
        assert_eq!(avg_satisfaction(&p, &group, &ids(&p, &["c", "d", "e"])).unwrap(), ratio(24, 14));
    }

    #[test]
    fn avg_satisfaction_of_empty_group_fails() {
        let p = fixtures::five_three_one();
        let empty = VoterGroup::new(&p, []).unwrap();
        assert_eq!(avg_satisfaction(&p, &empty, &CandidateSet::default()), Err(Error::EmptyGroup));
    }

    #[test]
    fn prefix_examples() {
        let p = fixtures::five_three_one();
        let r = Ranking::new(["a", "c", "b", "d", "e"].iter().map(|n| p.id(n).unwrap()).collect());
        let first_two: Vec<_> = prefix(&r, 2).iter().collect();
        assert_eq!(first_two, [p.id("a").unwrap(), p.id("c").unwrap()]);
        assert!(prefix(&r, 0).is_empty());
        let short = Ranking::new(alloc::vec![CandidateId::new(0), CandidateId::new(1)]);
        assert_eq!(prefix(&short, 5).len(), 2);
    }

    #[test]
    fn implemented_sequence_rejects_duplicates() {
        let p = fixtures::five_three_one();
        let b = p.id("b").unwrap();
        assert_eq!(ImplementedSequence::new(&p, [b, b]), Err(Error::AlreadyImplemented(b)));
    }

    #[test]
    fn group_intersection_and_union() {
        let p = fixtures::five_three_one();
        let g = VoterGroup::new(&p, [0, 5]).unwrap();
        assert!(g.approved_intersection(&p).is_empty());
        assert_eq!(g.approved_union(&p).len(), 4);
        let ab = VoterGroup::new(&p, 0..5).unwrap();
        assert_eq!(ab.approved_intersection(&p).len(), 2);
    }
}
