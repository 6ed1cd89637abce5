use alloc::vec::Vec;

use super::{check_alpha, min_group_size};
use crate::rational::Rational;
use crate::session::Trajectory;
use crate::{avg_satisfaction, prefix, ApprovalProfile, CandidateId, Error, Result, VoterGroup};

/// An iteration at which a group lost top-`h` satisfaction although the
/// monotonicity precondition held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub iteration: usize,
    pub group: VoterGroup,
    pub depth: usize,
    pub alpha: Rational,
    pub before: Rational,
    pub after: Rational,
}

/// Every iteration `t` and group `V` with `x_t ∉ ∪_V A_i` and
/// `avg_V(r^{t+1}_{≤h}) < avg_V(r^t_{≤h})`.
pub fn check_h_alpha_monotonicity(
    traj: &Trajectory,
    depth: usize,
    alpha: &Rational,
    groups: &[VoterGroup],
) -> Result<Vec<MonotonicityViolation>> {
    scan(traj, depth, alpha, groups, |profile, group, x| !group.approved_union(profile).contains(x))
}

/// As [`check_h_alpha_monotonicity`], but only at iterations where no voter
/// approves both `x_t` and some candidate approved within `V`.
pub fn check_weak_monotonicity(
    traj: &Trajectory,
    depth: usize,
    alpha: &Rational,
    groups: &[VoterGroup],
) -> Result<Vec<MonotonicityViolation>> {
    scan(traj, depth, alpha, groups, |profile, group, x| {
        let union = group.approved_union(profile);
        profile.supporters_of(x).iter().all(|&i| profile.ballot(i).iter().all(|&c| !union.contains(c)))
    })
}

fn scan(
    traj: &Trajectory,
    depth: usize,
    alpha: &Rational,
    groups: &[VoterGroup],
    applies: impl Fn(&ApprovalProfile, &VoterGroup, CandidateId) -> bool,
) -> Result<Vec<MonotonicityViolation>> {
    check_alpha(alpha)?;
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let profile = traj.profile();
    let required = min_group_size(alpha, profile.num_voters());
    for g in groups {
        if g.len() < required || g.is_empty() {
            return Err(Error::GroupTooSmall { size: g.len(), required });
        }
        if let Some(&last) = g.members().last() {
            if last >= profile.num_voters() {
                return Err(Error::UnknownVoter(last));
            }
        }
    }
    let mut out = Vec::new();
    for t in 1..=traj.len() {
        let x = traj.selection(t)?;
        let top_before = prefix(traj.ranking(t)?, depth);
        let top_after = prefix(traj.ranking(t + 1)?, depth);
        for g in groups {
            if !applies(profile, g, x) {
                continue;
            }
            let before = avg_satisfaction(profile, g, &top_before)?;
            let after = avg_satisfaction(profile, g, &top_after)?;
            if after < before {
                out.push(MonotonicityViolation {
                    iteration: t,
                    group: g.clone(),
                    depth,
                    alpha: alpha.clone(),
                    before,
                    after,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::groups::{standard_groups, GroupFamily};
    use crate::fixtures;
    use crate::rational::ratio;
    use crate::RuleId;
    use alloc::sync::Arc;

    fn traj(profile: crate::ApprovalProfile, rule: RuleId, xs: &[&str]) -> Trajectory {
        let ids: Vec<_> = xs.iter().map(|n| profile.id(n).unwrap()).collect();
        Trajectory::replay(Arc::new(profile), rule, None, &ids).unwrap()
    }

    #[test]
    fn mono_trap_dynamic_rules_violate() {
        for rule in [RuleId::DynSeqPav, RuleId::DynPhragmen] {
            let p = fixtures::mono_trap(6);
            let group = fixtures::mono_trap_group(&p);
            let alpha = ratio(group.len() as i64, p.num_voters() as i64);
            let t = traj(p, rule, &["b"]);
            let v = check_h_alpha_monotonicity(&t, 3, &alpha, &[group]).unwrap();
            assert_eq!(v.len(), 1, "{rule}");
            assert_eq!(v[0].before, ratio(26, 14));
            assert_eq!(v[0].after, ratio(24, 14));
        }
    }

    #[test]
    fn one_three_three_single_voter() {
        let p = fixtures::one_three_three();
        let group = fixtures::voters_with_ballots(&p, &[&["a"]]);
        let alpha = ratio(1, 7);
        let t = traj(p, RuleId::DynSeqPav, &["c"]);
        let v = check_h_alpha_monotonicity(&t, 1, &alpha, &[group]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].before.clone(), v[0].after.clone()), (ratio(1, 1), ratio(0, 1)));
    }

    #[test]
    fn av_never_violates() {
        let p = fixtures::mono_trap(6);
        let groups = standard_groups(&p, GroupFamily::default(), &[]);
        let t = traj(p, RuleId::Av, &["b", "c", "e"]);
        for h in 1..=4 {
            assert!(check_h_alpha_monotonicity(&t, h, &ratio(1, 100), &groups).unwrap().is_empty());
        }
    }

    #[test]
    fn weak_monotonicity_fixture() {
        let p = fixtures::weak_mono_seqpav();
        let group = fixtures::weak_mono_group(&p);
        let t = traj(p, RuleId::DynSeqPav, &["b"]);
        let v = check_weak_monotonicity(&t, 3, &ratio(39, 177), &[group]).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].before, ratio(1, 1));
        assert_eq!(v[0].after, ratio(9, 39));
    }

    #[test]
    fn weak_filter_skips_co_approved_iterations() {
        // x_1 = b is co-approved with a by the {a,b} voters, and a is
        // approved inside the trap group, so the weak check is silent.
        let p = fixtures::mono_trap(6);
        let group = fixtures::mono_trap_group(&p);
        let t = traj(p, RuleId::DynSeqPav, &["b"]);
        assert!(check_weak_monotonicity(&t, 3, &ratio(1, 100), &[group]).unwrap().is_empty());
    }

    #[test]
    fn argument_validation() {
        let p = fixtures::five_three_one();
        let t = traj(p, RuleId::Av, &[]);
        let g = VoterGroup::from_sorted_unchecked(alloc::vec![0]);
        assert_eq!(check_h_alpha_monotonicity(&t, 1, &ratio(0, 1), &[]), Err(Error::InvalidAlpha));
        assert_eq!(check_h_alpha_monotonicity(&t, 1, &ratio(3, 2), &[]), Err(Error::InvalidAlpha));
        assert_eq!(check_h_alpha_monotonicity(&t, 0, &ratio(1, 2), &[]), Err(Error::InvalidDepth));
        assert_eq!(
            check_h_alpha_monotonicity(&t, 1, &ratio(1, 2), &[g]),
            Err(Error::GroupTooSmall { size: 1, required: 5 })
        );
    }
}
