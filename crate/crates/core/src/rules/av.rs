use core::cmp::Reverse;

use super::remaining;
use crate::{ApprovalProfile, ImplementedSequence, Ranking};

/// Approval voting: decreasing approval score, ties by priority.
///
/// Removing implemented candidates never reorders the rest.
pub fn rank_av(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Ranking {
    let mut order = remaining(profile, implemented);
    order.sort_by_key(|&c| (Reverse(profile.approval_score(c)), c));
    Ranking::new(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn five_three_one() {
        let p = fixtures::five_three_one();
        let r = rank_av(&p, &ImplementedSequence::empty(&p));
        assert_eq!(r.names(&p), ["a", "b", "c", "d", "e"]);
        let r = rank_av(&p, &ImplementedSequence::from_names(&p, &["b"]).unwrap());
        assert_eq!(r.names(&p), ["a", "c", "d", "e"]);
    }

    #[test]
    fn empty_profile() {
        let p = ApprovalProfile::new(alloc::vec![], alloc::vec![]).unwrap();
        assert!(rank_av(&p, &ImplementedSequence::empty(&p)).is_empty());
    }
}
