use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::session::Trajectory;
use crate::{ApprovalProfile, CandidateId, Error, Result, RuleId, VoterGroup};

/// A group violating PJS: large enough and cohesive enough, yet with fewer
/// than `ℓ` implemented candidates it approves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionWitness {
    pub group: VoterGroup,
    /// `ℓ` commonly approved candidates.
    pub common: Vec<CandidateId>,
    /// `X^{t+1} ∩ ∪_V A_i`.
    pub represented: Vec<CandidateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionCheck {
    pub holds: bool,
    pub witness: Option<SelectionWitness>,
}

/// Whether a rule is known to satisfy JS under depth restriction and
/// sufficient cloning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guarantee {
    Holds,
    Fails,
    Unknown,
}

/// JS under (A1) and (A2): myopic Phragmén always; myopic seqPAV for
/// `t ≤ 5` only, beyond which nothing is known; the dynamic rules can fail
/// from `t = 2` on. AV gets no claim.
pub fn js_guarantee(rule: RuleId, t: usize) -> Guarantee {
    match rule {
        RuleId::MyopicPhragmen => Guarantee::Holds,
        RuleId::MyopicSeqPav if t <= 5 => Guarantee::Holds,
        RuleId::MyopicSeqPav => Guarantee::Unknown,
        RuleId::DynSeqPav | RuleId::DynPhragmen if t >= 2 => Guarantee::Fails,
        _ => Guarantee::Unknown,
    }
}

/// PJS at iteration `t` for `ℓ`: every `V` with `|V| ≥ ℓn/t` and
/// `|∩_V A_i| ≥ ℓ` approves at least `ℓ` candidates of `X^{t+1}`.
///
/// Exact. A violating `V` approves some `U ⊆ X^{t+1}` with `|U| < ℓ` and
/// shares some `ℓ` candidates `T`; then the voters whose implemented
/// approvals lie in `U` and who approve all of `T` also violate. So it
/// suffices to try every `U` of size `min(ℓ − 1, t)` and every `T`, where
/// candidates with equal supporter sets are interchangeable.
pub fn check_pjs(traj: &Trajectory, t: usize, ell: usize) -> Result<SelectionCheck> {
    if t == 0 || ell == 0 {
        return Err(Error::InvalidParameter("t and ell must be positive"));
    }
    if t > traj.len() {
        return Err(Error::InvalidIteration(t));
    }
    let profile = traj.profile();
    let n = profile.num_voters();
    let ok = SelectionCheck { holds: true, witness: None };
    if ell > t || n == 0 {
        return Ok(ok);
    }
    let implemented: Vec<CandidateId> = traj.selections()[..t].to_vec();
    let classes = supporter_classes(profile);
    let u_size = (ell - 1).min(implemented.len());

    let mut found = None;
    for_each_subset(implemented.len(), u_size, &mut |u_idx| {
        let u: Vec<CandidateId> = u_idx.iter().map(|&k| implemented[k]).collect();
        let eligible: Vec<usize> =
            (0..n).filter(|&i| implemented.iter().all(|x| !profile.approves(i, *x) || u.contains(x))).collect();
        if eligible.len() * t < ell * n {
            return false;
        }
        for_each_class_choice(&classes, ell, &eligible, &mut |members, chosen| {
            if members.len() * t < ell * n {
                return false;
            }
            let mut common = Vec::with_capacity(ell);
            for &k in chosen {
                for &c in &classes[k].1 {
                    if common.len() < ell {
                        common.push(c);
                    }
                }
            }
            common.sort_unstable();
            let represented: Vec<CandidateId> =
                u.iter().copied().filter(|&x| members.iter().any(|&i| profile.approves(i, x))).collect();
            found = Some(SelectionWitness {
                group: VoterGroup::from_sorted_unchecked(members.to_vec()),
                common,
                represented,
            });
            true
        })
    });
    Ok(match found {
        Some(w) => SelectionCheck { holds: false, witness: Some(w) },
        None => ok,
    })
}

/// JS is PJS with `ℓ = 1`.
pub fn check_js(traj: &Trajectory, t: usize) -> Result<SelectionCheck> {
    check_pjs(traj, t, 1)
}

/// Candidates grouped by supporter set (non-empty sets only), in priority
/// order of their first member.
fn supporter_classes(profile: &ApprovalProfile) -> Vec<(Vec<usize>, Vec<CandidateId>)> {
    let mut by_set: BTreeMap<&[usize], usize> = BTreeMap::new();
    let mut out: Vec<(Vec<usize>, Vec<CandidateId>)> = Vec::new();
    for c in profile.candidates() {
        let s = profile.supporters_of(c);
        if s.is_empty() {
            continue;
        }
        match by_set.get(s) {
            Some(&k) => out[k].1.push(c),
            None => {
                by_set.insert(s, out.len());
                out.push((s.to_vec(), alloc::vec![c]));
            }
        }
    }
    out
}

/// Calls `f` on every `k`-subset of `0..n` (as sorted indices) until it
/// returns `true`.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(n: usize, k: usize, from: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if acc.len() == k {
            return f(acc);
        }
        for i in from..n {
            acc.push(i);
            if go(n, k, i + 1, acc, f) {
                return true;
            }
            acc.pop();
        }
        false
    }
    go(n, k, 0, &mut Vec::with_capacity(k), f)
}

/// Enumerates sets of supporter classes holding at least `ell` candidates
/// in total, stopping each branch once `ell` is reached, and calls `f` with
/// `base ∩ ∩ N_class` and the chosen class indices.
fn for_each_class_choice(
    classes: &[(Vec<usize>, Vec<CandidateId>)],
    ell: usize,
    base: &[usize],
    f: &mut dyn FnMut(&[usize], &[usize]) -> bool,
) -> bool {
    fn go(
        classes: &[(Vec<usize>, Vec<CandidateId>)],
        ell: usize,
        from: usize,
        members: &[usize],
        covered: usize,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    ) -> bool {
        if covered >= ell {
            return f(members, chosen);
        }
        for k in from..classes.len() {
            let next: Vec<usize> = members.iter().copied().filter(|i| classes[k].0.binary_search(i).is_ok()).collect();
            if next.is_empty() {
                continue;
            }
            chosen.push(k);
            if go(classes, ell, k + 1, &next, covered + classes[k].1.len(), chosen, f) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(classes, ell, 0, base, 0, &mut Vec::new(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::session::SessionState;
    use alloc::sync::Arc;

    fn traj(profile: ApprovalProfile, rule: RuleId, xs: &[&str]) -> Trajectory {
        let ids: Vec<_> = xs.iter().map(|n| profile.id(n).unwrap()).collect();
        Trajectory::replay(Arc::new(profile), rule, Some(4), &ids).unwrap()
    }

    #[test]
    fn two_party_js_fails_at_two() {
        for rule in [RuleId::DynSeqPav, RuleId::DynPhragmen] {
            let p = fixtures::two_parties(2, 6);
            let a_party = fixtures::party_a(&p);
            let t = traj(p, rule, &["b1", "b2", "b3"]);
            assert!(t.respects_depth(), "{rule}");
            assert!(check_js(&t, 1).unwrap().holds);
            let out = check_js(&t, 2).unwrap();
            assert!(!out.holds, "{rule}");
            let w = out.witness.unwrap();
            assert_eq!(w.group, a_party);
            assert!(w.represented.is_empty());
        }
    }

    #[test]
    fn single_voter_single_candidate() {
        let p = ApprovalProfile::from_names(&["a"], &[&["a"][..]]).unwrap();
        let t = traj(p, RuleId::MyopicPhragmen, &["a"]);
        assert!(check_js(&t, 1).unwrap().holds);
        assert!(check_pjs(&t, 1, 2).unwrap().holds);
    }

    #[test]
    fn pjs_needs_ell_candidates() {
        // ℓ = 2 at t = 3 needs |V| ≥ 8/3, more than either party.
        let p = fixtures::two_parties(2, 3);
        let t = traj(p, RuleId::Av, &["a1", "b1", "b2"]);
        assert!(check_pjs(&t, 3, 2).unwrap().holds);
        assert!(check_js(&t, 3).unwrap().holds);
        let p =
            ApprovalProfile::from_names(&["a", "b", "c", "d"], &[&["a", "b"][..], &["a", "b"][..], &["c", "d"][..]])
                .unwrap();
        // t = 3, ℓ = 2: {v0, v1} needs 2·3/3 = 2 voters and 2 common candidates; X = (c, d, a) gives them only a.
        let t = traj(p, RuleId::Av, &["c", "d", "a"]);
        let out = check_pjs(&t, 3, 2).unwrap();
        assert!(!out.holds);
        let w = out.witness.unwrap();
        assert_eq!(w.group.members(), [0, 1]);
        assert_eq!(w.represented.len(), 1);
    }

    #[test]
    fn clones_are_interchangeable() {
        let p = fixtures::two_parties(3, 2);
        let supplied = crate::session::ensure_clone_supply(&p, 2, 2).unwrap();
        let s = SessionState::new(supplied, RuleId::MyopicPhragmen, Some(2)).unwrap();
        let x = s.ranking().top().unwrap();
        let s = s.implement(x).unwrap();
        let x = s.ranking().top().unwrap();
        let s = s.implement(x).unwrap();
        let t = s.trajectory().unwrap();
        for ell in 1..=2 {
            assert!(check_pjs(&t, 2, ell).unwrap().holds);
        }
    }

    #[test]
    fn guarantees() {
        assert_eq!(js_guarantee(RuleId::MyopicSeqPav, 5), Guarantee::Holds);
        assert_eq!(js_guarantee(RuleId::MyopicSeqPav, 6), Guarantee::Unknown);
        assert_eq!(js_guarantee(RuleId::MyopicPhragmen, 60), Guarantee::Holds);
        assert_eq!(js_guarantee(RuleId::DynPhragmen, 2), Guarantee::Fails);
        assert_eq!(js_guarantee(RuleId::DynPhragmen, 1), Guarantee::Unknown);
    }

    #[test]
    fn argument_checks() {
        let t = traj(fixtures::five_three_one(), RuleId::Av, &["a"]);
        assert!(check_pjs(&t, 0, 1).is_err());
        assert!(check_pjs(&t, 1, 0).is_err());
        assert_eq!(check_pjs(&t, 2, 1), Err(Error::InvalidIteration(2)));
    }
}
