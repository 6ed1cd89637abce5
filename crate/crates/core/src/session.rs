//! Sequential selection: a rule, an evolving implemented sequence, an
//! optional depth restriction, and the rankings shown along the way.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::{rank, ApprovalProfile, CandidateId, Error, ImplementedSequence, Ranking, Result, RuleId};

/// One recorded iteration: the ranking shown and the candidate then
/// implemented. Names rather than ids, so the record survives profile
/// updates that renumber candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryEntry {
    pub ranking: Vec<String>,
    pub implemented: String,
}

/// Immutable snapshot of a session. Transitions return new snapshots.
#[derive(Clone, Debug)]
pub struct SessionState {
    profile: Arc<ApprovalProfile>,
    rule: RuleId,
    depth: Option<usize>,
    implemented: ImplementedSequence,
    history: Vec<HistoryEntry>,
    ranking: Ranking,
}

impl SessionState {
    /// Starts with `X = ()`. A depth restriction of zero is rejected.
    pub fn new(profile: impl Into<Arc<ApprovalProfile>>, rule: RuleId, depth: Option<usize>) -> Result<Self> {
        if depth == Some(0) {
            return Err(Error::InvalidDepth);
        }
        let profile = profile.into();
        let implemented = ImplementedSequence::empty(&profile);
        let ranking = rank(rule, &profile, &implemented)?;
        Ok(SessionState { profile, rule, depth, implemented, history: Vec::new(), ranking })
    }

    /// Rebuilds a session by implementing `names` in order.
    pub fn replay<S: AsRef<str>>(
        profile: impl Into<Arc<ApprovalProfile>>,
        rule: RuleId,
        depth: Option<usize>,
        names: &[S],
    ) -> Result<Self> {
        let mut state = Self::new(profile, rule, depth)?;
        for name in names {
            let c = state.profile.id(name.as_ref())?;
            state = state.implement(c)?;
        }
        Ok(state)
    }

    pub fn profile(&self) -> &ApprovalProfile {
        &self.profile
    }

    pub fn shared_profile(&self) -> Arc<ApprovalProfile> {
        Arc::clone(&self.profile)
    }

    pub fn rule(&self) -> RuleId {
        self.rule
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn implemented(&self) -> &ImplementedSequence {
        &self.implemented
    }

    pub fn implemented_names(&self) -> Vec<&str> {
        self.implemented.as_slice().iter().map(|&c| self.profile.name(c)).collect()
    }

    /// The current ranking `r^t`.
    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    /// The current iteration `t`, starting at 1.
    pub fn iteration(&self) -> usize {
        self.implemented.len() + 1
    }

    fn admissible(&self, c: CandidateId) -> Result<()> {
        self.profile.check(c)?;
        if self.implemented.contains(c) {
            return Err(Error::AlreadyImplemented(c));
        }
        if let Some(depth) = self.depth {
            let position = self.ranking.position(c).expect("ranking covers C \\ X");
            if position > depth {
                return Err(Error::DepthViolation { candidate: c, position, depth });
            }
        }
        Ok(())
    }

    /// Implements `c`, which must be ranked and within the depth restriction.
    pub fn implement(&self, c: CandidateId) -> Result<Self> {
        self.admissible(c)?;
        let mut implemented = self.implemented.clone();
        implemented.push(&self.profile, c)?;
        let ranking = rank(self.rule, &self.profile, &implemented)?;
        let mut history = self.history.clone();
        history.push(HistoryEntry {
            ranking: self.ranking.names(&self.profile).into_iter().map(String::from).collect(),
            implemented: self.profile.name(c).to_string(),
        });
        Ok(SessionState {
            profile: Arc::clone(&self.profile),
            rule: self.rule,
            depth: self.depth,
            implemented,
            history,
            ranking,
        })
    }

    /// The ranking [`implement`](Self::implement) would produce, without
    /// changing the session.
    pub fn preview(&self, c: CandidateId) -> Result<Ranking> {
        self.admissible(c)?;
        let mut implemented = self.implemented.clone();
        implemented.push(&self.profile, c)?;
        rank(self.rule, &self.profile, &implemented)
    }

    /// Swaps in a new profile. Implemented candidates are matched by name
    /// and must all still exist; Phragmén debts are recomputed from scratch
    /// against the new profile.
    pub fn update_profile(&self, profile: impl Into<Arc<ApprovalProfile>>) -> Result<Self> {
        let profile = profile.into();
        let implemented = ImplementedSequence::from_names(&profile, &self.implemented_names())?;
        let ranking = rank(self.rule, &profile, &implemented)?;
        Ok(SessionState {
            profile,
            rule: self.rule,
            depth: self.depth,
            implemented,
            history: self.history.clone(),
            ranking,
        })
    }

    /// The session as a trajectory over its current profile.
    pub fn trajectory(&self) -> Result<Trajectory> {
        Trajectory::replay(Arc::clone(&self.profile), self.rule, self.depth, self.implemented.as_slice())
    }
}

/// One iteration of a trajectory: `r^t` and, except for the last, `x_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub ranking: Ranking,
    pub implemented: Option<CandidateId>,
}

/// `(r^1, x_1), …, (r^T, x_T), r^{T+1}` for a fixed profile and rule.
#[derive(Clone, Debug)]
pub struct Trajectory {
    profile: Arc<ApprovalProfile>,
    rule: RuleId,
    depth: Option<usize>,
    steps: Vec<Step>,
}

impl Trajectory {
    /// Recomputes every ranking for the implemented sequence `xs`. The depth
    /// restriction is recorded, not enforced; see [`Trajectory::respects_depth`].
    pub fn replay(
        profile: impl Into<Arc<ApprovalProfile>>,
        rule: RuleId,
        depth: Option<usize>,
        xs: &[CandidateId],
    ) -> Result<Self> {
        let profile = profile.into();
        let mut implemented = ImplementedSequence::empty(&profile);
        let mut steps = Vec::with_capacity(xs.len() + 1);
        for &x in xs {
            let ranking = rank(rule, &profile, &implemented)?;
            implemented.push(&profile, x)?;
            steps.push(Step { ranking, implemented: Some(x) });
        }
        steps.push(Step { ranking: rank(rule, &profile, &implemented)?, implemented: None });
        Ok(Trajectory { profile, rule, depth, steps })
    }

    /// Assembles a trajectory from recorded steps and checks every ranking
    /// against the rule.
    pub fn from_steps(
        profile: impl Into<Arc<ApprovalProfile>>,
        rule: RuleId,
        depth: Option<usize>,
        steps: Vec<Step>,
    ) -> Result<Self> {
        let traj = Trajectory { profile: profile.into(), rule, depth, steps };
        traj.validate()?;
        Ok(traj)
    }

    /// Fails with the first iteration whose ranking differs from the rule's
    /// output, or whose shape is malformed.
    pub fn validate(&self) -> Result<()> {
        let mut implemented = ImplementedSequence::empty(&self.profile);
        for (i, step) in self.steps.iter().enumerate() {
            let t = i + 1;
            let last = t == self.steps.len();
            if step.implemented.is_some() == last {
                return Err(Error::InconsistentTrajectory(t));
            }
            if rank(self.rule, &self.profile, &implemented)? != step.ranking {
                return Err(Error::InconsistentTrajectory(t));
            }
            if let Some(x) = step.implemented {
                implemented.push(&self.profile, x).map_err(|_| Error::InconsistentTrajectory(t))?;
            }
        }
        if self.steps.is_empty() {
            return Err(Error::InconsistentTrajectory(0));
        }
        Ok(())
    }

    pub fn profile(&self) -> &ApprovalProfile {
        &self.profile
    }

    pub fn rule(&self) -> RuleId {
        self.rule
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of implemented candidates `T`.
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `r^t` for `1 ≤ t ≤ T + 1`.
    pub fn ranking(&self, t: usize) -> Result<&Ranking> {
        t.checked_sub(1).and_then(|i| self.steps.get(i)).map(|s| &s.ranking).ok_or(Error::InvalidIteration(t))
    }

    /// `x_t` for `1 ≤ t ≤ T`.
    pub fn selection(&self, t: usize) -> Result<CandidateId> {
        t.checked_sub(1).and_then(|i| self.steps.get(i)).and_then(|s| s.implemented).ok_or(Error::InvalidIteration(t))
    }

    pub fn selections(&self) -> Vec<CandidateId> {
        self.steps.iter().filter_map(|s| s.implemented).collect()
    }

    /// `X^t = (x_1, …, x_{t−1})` for `1 ≤ t ≤ T + 1`.
    pub fn implemented_before(&self, t: usize) -> Result<ImplementedSequence> {
        if t == 0 || t > self.steps.len() {
            return Err(Error::InvalidIteration(t));
        }
        ImplementedSequence::new(&self.profile, self.steps[..t - 1].iter().filter_map(|s| s.implemented))
    }

    /// Whether every `x_t` was within the top `depth` positions of `r^t`.
    pub fn respects_depth(&self) -> bool {
        let Some(depth) = self.depth else { return true };
        self.steps.iter().all(|s| match s.implemented {
            Some(x) => s.ranking.position(x).is_some_and(|p| p <= depth),
            None => true,
        })
    }
}

fn clone_name(profile: &ApprovalProfile, base: &str, k: &mut usize) -> String {
    loop {
        *k += 1;
        let name = format!("{base}#{k}");
        if profile.id(&name).is_err() {
            return name;
        }
    }
}

/// Adds `count` candidates approved by exactly the supporters of `c`, named
/// `<c>#k` and placed right after `c` and its earlier clones in priority.
pub fn clone_candidates(profile: &ApprovalProfile, c: CandidateId, count: usize) -> Result<ApprovalProfile> {
    profile.check(c)?;
    if count == 0 {
        return Ok(profile.clone());
    }
    let base = profile.name(c);
    let clone_prefix = format!("{base}#");
    let mut insert_at = c.index() + 1;
    while insert_at < profile.num_candidates() && profile.names()[insert_at].starts_with(&clone_prefix) {
        insert_at += 1;
    }
    let mut k = 0;
    let mut fresh = Vec::with_capacity(count);
    let mut names: Vec<String> = profile.names().to_vec();
    for _ in 0..count {
        let name = clone_name(profile, base, &mut k);
        fresh.push(name);
    }
    names.splice(insert_at..insert_at, fresh);

    let shift = |d: CandidateId| {
        if d.index() >= insert_at {
            CandidateId::new(d.index() + count)
        } else {
            d
        }
    };
    let ballots = profile
        .ballots()
        .iter()
        .map(|ballot| {
            let mut out: Vec<CandidateId> = ballot.iter().map(|&d| shift(d)).collect();
            if ballot.contains(&c) {
                out.extend((insert_at..insert_at + count).map(CandidateId::new));
            }
            out
        })
        .collect();
    ApprovalProfile::new(names, ballots)
}

/// Gives every candidate of `profile` `depth + horizon − 1` clones, enough
/// for a depth-`depth` decision maker over `horizon` iterations to always
/// find a clone of any candidate it could have picked.
pub fn ensure_clone_supply(profile: &ApprovalProfile, horizon: usize, depth: usize) -> Result<ApprovalProfile> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let count = depth + horizon - 1;
    let bases: Vec<String> = profile.names().to_vec();
    let mut out = profile.clone();
    for base in &bases {
        let c = out.id(base)?;
        out = clone_candidates(&out, c, count)?;
    }
    Ok(out)
}
