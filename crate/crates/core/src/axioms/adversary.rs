use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::session::Trajectory;
use crate::{rank_top, ApprovalProfile, CandidateId, Error, ImplementedSequence, Result, RuleId, VoterGroup};

/// Best selection sequence found by [`adversarial_dm_search`].
#[derive(Clone, Debug)]
pub struct AdversaryResult {
    pub trajectory: Trajectory,
    /// `|X^{T+1} ∩ ∪_V A_i|` for the returned trajectory.
    pub satisfaction: usize,
    /// `false` if the node budget ran out before the search finished.
    pub complete: bool,
    /// Rankings computed.
    pub nodes: usize,
}

/// Exhaustive search over decision makers that pick from the top `depth`
/// positions for `horizon` iterations, minimising how many implemented
/// candidates the `target` group approves. Among optimal sequences the
/// lexicographically smallest (by candidate priority) wins. Sequences stop
/// early if the ranking runs empty.
pub fn adversarial_dm_search(
    profile: Arc<ApprovalProfile>,
    rule: RuleId,
    depth: usize,
    horizon: usize,
    target: &VoterGroup,
    node_budget: usize,
) -> Result<AdversaryResult> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let approved = target.approved_union(&profile);
    let mut search = Search {
        profile: &profile,
        rule,
        depth,
        horizon,
        approved: &approved,
        budget: node_budget,
        nodes: 0,
        exhausted: false,
        best: None,
    };
    let mut x = ImplementedSequence::empty(&profile);
    let mut path = Vec::with_capacity(horizon);
    search.walk(&mut x, &mut path, 0)?;
    let Search { best, nodes, exhausted, .. } = search;
    let (satisfaction, xs) = best.ok_or(Error::InvalidParameter("node budget too small for a single trajectory"))?;
    let trajectory = Trajectory::replay(profile, rule, Some(depth), &xs)?;
    Ok(AdversaryResult { trajectory, satisfaction, complete: !exhausted, nodes })
}

struct Search<'a> {
    profile: &'a ApprovalProfile,
    rule: RuleId,
    depth: usize,
    horizon: usize,
    approved: &'a crate::CandidateSet,
    budget: usize,
    nodes: usize,
    exhausted: bool,
    best: Option<(usize, Vec<CandidateId>)>,
}

impl Search<'_> {
    fn walk(&mut self, x: &mut ImplementedSequence, path: &mut Vec<CandidateId>, score: usize) -> Result<()> {
        if self.best.as_ref().is_some_and(|(b, _)| score >= *b) {
            return Ok(());
        }
        if path.len() == self.horizon {
            self.best = Some((score, path.clone()));
            return Ok(());
        }
        if self.nodes >= self.budget {
            self.exhausted = true;
            return Ok(());
        }
        self.nodes += 1;
        let mut top = rank_top(self.rule, self.profile, x, self.depth)?.into_vec();
        if top.is_empty() {
            self.best = Some((score, path.clone()));
            return Ok(());
        }
        top.sort_unstable();
        for c in top {
            let gain = usize::from(self.approved.contains(c));
            let mut next = x.clone();
            next.push(self.profile, c)?;
            path.push(c);
            self.walk(&mut next, path, score + gain)?;
            path.pop();
        }
        Ok(())
    }
}
