//! Invariants checked on single instances. Each returns a description of
//! the first failure.

use std::sync::Arc;

use dynrank_core::axioms::groups::{intersection_groups, standard_groups, GroupFamily};
use dynrank_core::axioms::{
    check_group_representation, check_js, check_pd_dphragmen, check_pd_dseqpav, check_pjs, check_weak_monotonicity,
    kappa_from_degree_inverse, pd_inverse_dphragmen, RepresentationQuery,
};
use dynrank_core::rational::{from_usize, ratio};
use dynrank_core::rules::{compute_debts, dynamic_phragmen_schedule};
use dynrank_core::session::{ensure_clone_supply, SessionState, Trajectory};
use dynrank_core::{rank, ApprovalProfile, CandidateId, ImplementedSequence, Ranking, RuleId};

use crate::oracles;
use crate::Instance;

pub type Outcome = Result<(), String>;

fn fail<T>(what: impl Into<String>) -> Result<T, String> {
    Err(what.into())
}

fn ranked(rule: RuleId, profile: &ApprovalProfile, x: &ImplementedSequence) -> Result<Ranking, String> {
    rank(rule, profile, x).map_err(|e| format!("{rule}: {e}"))
}

/// Every rule returns a permutation of `C \ X`.
pub fn permutation(inst: &Instance) -> Outcome {
    let mut expected: Vec<CandidateId> = inst.profile.candidates().filter(|&c| !inst.implemented.contains(c)).collect();
    expected.sort_unstable();
    for rule in RuleId::ALL {
        let mut got = ranked(rule, &inst.profile, &inst.implemented)?.into_vec();
        got.sort_unstable();
        if got != expected {
            return fail(format!("{rule}: not a permutation of C \\ X"));
        }
    }
    Ok(())
}

/// Debts sum to `|X|` and are non-negative.
pub fn conservation(inst: &Instance) -> Outcome {
    let ledger = compute_debts(&inst.profile, &inst.implemented).map_err(|e| e.to_string())?;
    if ledger.total() != from_usize(inst.implemented.len()) {
        return fail(format!("debts sum to {} for |X| = {}", ledger.total(), inst.implemented.len()));
    }
    if ledger.debts().iter().any(|d| *d < ratio(0, 1)) {
        return fail("negative debt");
    }
    Ok(())
}

/// Implementing the head of a dynamic (or AV) ranking leaves the tail.
pub fn prefix_stability(inst: &Instance) -> Outcome {
    for rule in [RuleId::Av, RuleId::DynSeqPav, RuleId::DynPhragmen] {
        let r = ranked(rule, &inst.profile, &inst.implemented)?;
        let Some(head) = r.top() else { continue };
        if inst.profile.approval_score(head) == 0 {
            continue;
        }
        let mut next = inst.implemented.clone();
        next.push(&inst.profile, head).map_err(|e| e.to_string())?;
        let after = ranked(rule, &inst.profile, &next)?;
        if after.as_slice() != &r.as_slice()[1..] {
            return fail(format!("{rule}: implementing the head reordered the tail"));
        }
    }
    Ok(())
}

/// With `X = ()`: dynamic rules equal their static counterparts (checked
/// against the oracles), and the myopic rules equal AV.
pub fn empty_coincidence(profile: &ApprovalProfile) -> Outcome {
    let none = ImplementedSequence::empty(profile);
    let av = ranked(RuleId::Av, profile, &none)?;
    for rule in [RuleId::MyopicSeqPav, RuleId::MyopicPhragmen] {
        if ranked(rule, profile, &none)? != av {
            return fail(format!("{rule} differs from AV at X = ()"));
        }
    }
    if ranked(RuleId::DynSeqPav, profile, &none)?.as_slice() != oracles::dynamic_seqpav(profile, &[]).as_slice() {
        return fail("dynamic seqPAV differs from greedy PAV at X = ()");
    }
    let seq: Vec<CandidateId> = oracles::dynamic_phragmen(profile, &[]).into_iter().map(|(c, _)| c).collect();
    if ranked(RuleId::DynPhragmen, profile, &none)?.as_slice() != seq.as_slice() {
        return fail("dynamic Phragmén differs from sequential Phragmén at X = ()");
    }
    Ok(())
}

fn permutations(items: &[CandidateId]) -> Vec<Vec<CandidateId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Both seqPAV variants only see `X` as a set.
pub fn order_invariance(inst: &Instance) -> Outcome {
    for rule in [RuleId::DynSeqPav, RuleId::MyopicSeqPav] {
        let reference = ranked(rule, &inst.profile, &inst.implemented)?;
        for order in permutations(inst.implemented.as_slice()) {
            let x = ImplementedSequence::new(&inst.profile, order).map_err(|e| e.to_string())?;
            if ranked(rule, &inst.profile, &x)? != reference {
                return fail(format!("{rule}: depends on the order of X"));
            }
        }
    }
    Ok(())
}

/// All five rules and the debt ledger agree with the brute-force oracles;
/// dynamic Phragmén also agrees on purchase times.
pub fn matches_oracles(inst: &Instance) -> Outcome {
    let expected = oracles::all_rules(&inst.profile, &inst.implemented);
    for (rule, want) in RuleId::ALL.into_iter().zip(expected) {
        let got = ranked(rule, &inst.profile, &inst.implemented)?;
        if got.as_slice() != want.as_slice() {
            return fail(format!(
                "{rule}: {:?} but oracle gives {:?}",
                got.names(&inst.profile),
                names(&inst.profile, &want)
            ));
        }
    }
    let ledger = compute_debts(&inst.profile, &inst.implemented).map_err(|e| e.to_string())?;
    let want = oracles::debts(&inst.profile, inst.implemented.as_slice()).expect("supported X");
    if ledger.debts() != want.as_slice() {
        return fail("debts differ from the exhaustive oracle");
    }
    let schedule =
        dynamic_phragmen_schedule(&inst.profile, &inst.implemented, usize::MAX).map_err(|e| e.to_string())?;
    if schedule != oracles::dynamic_phragmen(&inst.profile, inst.implemented.as_slice()) {
        return fail("dynamic Phragmén purchase times differ from the step simulation");
    }
    Ok(())
}

fn names(profile: &ApprovalProfile, r: &[CandidateId]) -> Vec<String> {
    r.iter().map(|&c| profile.name(c).to_string()).collect()
}

/// Purchase times along the dynamic Phragmén ranking never decrease, and
/// unsupported candidates only appear at the end.
pub fn event_monotonicity(inst: &Instance) -> Outcome {
    let schedule =
        dynamic_phragmen_schedule(&inst.profile, &inst.implemented, usize::MAX).map_err(|e| e.to_string())?;
    let mut last = ratio(0, 1);
    let mut seen_never = false;
    for (_, t) in schedule {
        match t {
            Some(t) if seen_never => return fail(format!("purchase at {t} after an unsupported candidate")),
            Some(t) if t < last => return fail(format!("purchase time {t} after {last}")),
            Some(t) => last = t,
            None => seen_never = true,
        }
    }
    Ok(())
}

/// Adds two clones of the first supported, unimplemented candidate and checks that
/// myopic Phragmén ranks the three copies consecutively.
pub fn clone_consistency(inst: &Instance) -> Outcome {
    let Some(c) =
        inst.profile.candidates().find(|&c| inst.profile.approval_score(c) > 0 && !inst.implemented.contains(c))
    else {
        return Ok(());
    };
    let profile = dynrank_core::session::clone_candidates(&inst.profile, c, 2).map_err(|e| e.to_string())?;
    let names_x: Vec<&str> = inst.implemented.as_slice().iter().map(|&x| inst.profile.name(x)).collect();
    let x = ImplementedSequence::from_names(&profile, &names_x).map_err(|e| e.to_string())?;
    let r = ranked(RuleId::MyopicPhragmen, &profile, &x)?;
    let base = inst.profile.name(c);
    let positions: Vec<usize> = r
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &d)| profile.name(d) == base || profile.name(d).starts_with(&format!("{base}#")))
        .map(|(i, _)| i)
        .collect();
    if positions.len() != 3 || positions[2] - positions[0] != 2 {
        return fail(format!("copies of {base} at positions {positions:?}"));
    }
    Ok(())
}

/// The κ-group-representation bound of `rule` (dynamic Phragmén or dynamic
/// seqPAV) over all intersection groups of up to three candidates and
/// every attainable `λ`, with `α = |V|/n`.
pub fn kappa_bound(inst: &Instance, rule: RuleId) -> Outcome {
    let r = ranked(rule, &inst.profile, &inst.implemented)?;
    for group in intersection_groups(&inst.profile, 3) {
        let base = RepresentationQuery::with_own_share(&inst.profile, &inst.implemented, group.clone(), 0)
            .map_err(|e| e.to_string())?;
        for lambda in 1..=base.cohesion {
            let query = RepresentationQuery { lambda, ..base.clone() };
            let kappa = match rule {
                RuleId::DynPhragmen => query.kappa_dyn_phragmen(),
                RuleId::DynSeqPav => query.kappa_dyn_seqpav(),
                _ => return fail("no κ bound for this rule"),
            }
            .map_err(|e| e.to_string())?;
            let out = check_group_representation(&inst.profile, &r, &query, kappa).map_err(|e| e.to_string())?;
            if !out.holds {
                return fail(format!(
                    "{rule}: group {:?} λ={lambda} κ={kappa} got {:?}",
                    group.members(),
                    out.satisfaction
                ));
            }
        }
    }
    Ok(())
}

/// The tighter κ obtained by inverting the dynamic-Phragmén degree bound.
pub fn kappa_from_degree(inst: &Instance) -> Outcome {
    let r = ranked(RuleId::DynPhragmen, &inst.profile, &inst.implemented)?;
    for group in intersection_groups(&inst.profile, 3) {
        let base = RepresentationQuery::with_own_share(&inst.profile, &inst.implemented, group.clone(), 0)
            .map_err(|e| e.to_string())?;
        for lambda in 1..=base.cohesion {
            let query = RepresentationQuery { lambda, ..base.clone() };
            let inverse = pd_inverse_dphragmen(&from_usize(lambda), query.m, &query.s, group.len());
            let kappa = kappa_from_degree_inverse(&query.alpha, &inverse).map_err(|e| e.to_string())?;
            let out = check_group_representation(&inst.profile, &r, &query, kappa).map_err(|e| e.to_string())?;
            if !out.holds {
                return fail(format!("group {:?} λ={lambda} κ={kappa} got {:?}", group.members(), out.satisfaction));
            }
        }
    }
    Ok(())
}

/// Proportionality-degree bounds of both dynamic rules at every depth.
pub fn degree_bounds(inst: &Instance) -> Outcome {
    let dp = ranked(RuleId::DynPhragmen, &inst.profile, &inst.implemented)?;
    let ds = ranked(RuleId::DynSeqPav, &inst.profile, &inst.implemented)?;
    for group in intersection_groups(&inst.profile, 3) {
        for h in 1..=dp.len() {
            let p = check_pd_dphragmen(&inst.profile, &inst.implemented, &dp, &group, h).map_err(|e| e.to_string())?;
            if !p.holds {
                return fail(format!("dyn-phragmen degree: group {:?} h={h}", group.members()));
            }
            let s = check_pd_dseqpav(&inst.profile, &inst.implemented, &ds, &group, h).map_err(|e| e.to_string())?;
            if !s.holds {
                return fail(format!("dyn-seqpav degree: group {:?} h={h}", group.members()));
            }
        }
    }
    Ok(())
}

/// Runs a session on `profile` in which the decision maker picks entry
/// `picks[t] mod k` among the `k` supported candidates in the top `depth`
/// at iteration `t`. The session ends early when there are none.
pub fn drive(profile: Arc<ApprovalProfile>, rule: RuleId, depth: usize, picks: &[usize]) -> Result<Trajectory, String> {
    let mut state = SessionState::new(Arc::clone(&profile), rule, Some(depth)).map_err(|e| e.to_string())?;
    for &p in picks {
        let options: Vec<CandidateId> =
            state.ranking().as_slice().iter().take(depth).copied().filter(|&c| profile.approval_score(c) > 0).collect();
        if options.is_empty() {
            break;
        }
        let c = options[p % options.len()];
        state = state.implement(c).map_err(|e| e.to_string())?;
    }
    state.trajectory().map_err(|e| e.to_string())
}

/// Myopic Phragmén with enough clones and a top-selecting decision maker:
/// the implemented sequence is one that sequential Phragmén can produce
/// (ties between equal purchase times may be broken differently), and PJS
/// holds at every iteration for every `ℓ`.
pub fn myopic_phragmen_pjs(base: &ApprovalProfile, depth: usize, horizon: usize) -> Outcome {
    let profile = Arc::new(ensure_clone_supply(base, horizon, depth).map_err(|e| e.to_string())?);
    let traj = drive(Arc::clone(&profile), RuleId::MyopicPhragmen, depth, &vec![0; horizon])?;
    let supported = profile.candidates().filter(|&c| profile.approval_score(c) > 0).count();
    if traj.len() != horizon.min(supported) {
        return fail(format!("session stopped after {} of {horizon} iterations", traj.len()));
    }
    if let Err(k) = oracles::is_sequential_phragmen_prefix(&profile, &traj.selections()) {
        return fail(format!(
            "implemented {:?} leaves sequential Phragmén at position {}; it would pick {:?}",
            names(&profile, &traj.selections()),
            k + 1,
            names(&profile, &oracles::sequential_phragmen(&profile, horizon))
        ));
    }
    for t in 1..=traj.len() {
        for ell in 1..=t {
            let out = check_pjs(&traj, t, ell).map_err(|e| e.to_string())?;
            if !out.holds {
                return fail(format!("PJS fails at t={t}, ℓ={ell}: {:?}", out.witness));
            }
        }
    }
    Ok(())
}

/// Myopic seqPAV with enough clones and a decision maker picking anywhere
/// in the top `depth`: JS holds for `t ≤ 5`.
pub fn myopic_seqpav_js(base: &ApprovalProfile, depth: usize, picks: &[usize]) -> Outcome {
    let horizon = picks.len().min(5);
    let profile = Arc::new(ensure_clone_supply(base, horizon, depth).map_err(|e| e.to_string())?);
    let traj = drive(profile, RuleId::MyopicSeqPav, depth, &picks[..horizon])?;
    for t in 1..=traj.len() {
        let out = check_js(&traj, t).map_err(|e| e.to_string())?;
        if !out.holds {
            return fail(format!("JS fails at t={t}: {:?}", out.witness));
        }
    }
    Ok(())
}

/// Weak monotonicity of `rule` along a session with arbitrary picks, over
/// the standard group families and every depth.
pub fn weak_monotonicity(inst: &Instance, rule: RuleId, picks: &[usize]) -> Outcome {
    let profile = Arc::new(inst.profile.clone());
    let m = profile.num_candidates();
    let traj = drive(Arc::clone(&profile), rule, m.max(1), picks)?;
    let groups = standard_groups(&profile, GroupFamily::default(), &[]);
    let alpha = ratio(1, profile.num_voters().max(1) as i64);
    for h in 1..=m {
        let v = check_weak_monotonicity(&traj, h, &alpha, &groups).map_err(|e| e.to_string())?;
        if let Some(first) = v.first() {
            return fail(format!(
                "{rule}: t={} h={h} group {:?} {} -> {}",
                first.iteration,
                first.group.members(),
                first.before,
                first.after
            ));
        }
    }
    Ok(())
}
