//! Phragmén variants and their two subroutines.
//!
//! Candidates cost one credit. Implemented candidates are charged to their
//! supporters by [`compute_debts`]; the dynamic rule then runs sequential
//! Phragmén with those debts as negative starting balances, the myopic rule
//! ranks candidates by the debt vector they would induce next.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::remaining;
use crate::rational::{from_usize, Rational};
use crate::{ApprovalProfile, CandidateId, Error, ImplementedSequence, Ranking, Result, VoterGroup};

/// Per-voter debts; always non-negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DebtLedger {
    debts: Vec<Rational>,
}

impl DebtLedger {
    pub fn zero(voters: usize) -> Self {
        DebtLedger { debts: alloc::vec![Rational::zero(); voters] }
    }

    pub fn debts(&self) -> &[Rational] {
        &self.debts
    }

    pub fn debt(&self, voter: usize) -> &Rational {
        &self.debts[voter]
    }

    pub fn total(&self) -> Rational {
        self.debts.iter().fold(Rational::zero(), |acc, d| acc + d)
    }

    /// Starting balances `−d_i` of the second Phragmén phase.
    pub fn credits(&self) -> Vec<Rational> {
        self.debts.iter().map(|d| -d.clone()).collect()
    }

    /// Debts sorted non-increasingly.
    pub fn sorted_desc(&self) -> Vec<Rational> {
        let mut v = self.debts.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Average debt over `group`.
    pub fn average(&self, group: &VoterGroup) -> Result<Rational> {
        if group.is_empty() {
            return Err(Error::EmptyGroup);
        }
        let sum = group.members().iter().fold(Rational::zero(), |acc, &i| acc + &self.debts[i]);
        Ok(sum / from_usize(group.len()))
    }

    /// `Σ_{i∈V} (d_i − avg_V d)²`.
    pub fn spread(&self, group: &VoterGroup) -> Result<Rational> {
        let avg = self.average(group)?;
        Ok(group.members().iter().fold(Rational::zero(), |acc, &i| {
            let diff = &self.debts[i] - &avg;
            acc + &diff * &diff
        }))
    }

    /// Charges one unit of cost for `c` to its supporters so that the
    /// largest resulting debt among them is as small as possible.
    ///
    /// Supporters are scanned by increasing debt; the cheapest prefix whose
    /// equalised debt does not exceed the next supporter's debt pays.
    pub fn charge(&mut self, profile: &ApprovalProfile, c: CandidateId) -> Result<()> {
        let mut order: Vec<usize> = profile.supporters_of(c).to_vec();
        if order.is_empty() {
            return Err(Error::UnsupportedImplemented(c));
        }
        order.sort_by(|&i, &j| self.debts[i].cmp(&self.debts[j]).then(i.cmp(&j)));
        let mut sum = Rational::one();
        let mut payers = order.len();
        let mut level = Rational::zero();
        for (j, &voter) in order.iter().enumerate() {
            sum += &self.debts[voter];
            let d_new = &sum / from_usize(j + 1);
            let stop = order.get(j + 1).is_none_or(|&next| d_new <= self.debts[next]);
            if stop {
                payers = j + 1;
                level = d_new;
                break;
            }
        }
        for &voter in &order[..payers] {
            self.debts[voter] = level.clone();
        }
        Ok(())
    }
}

/// Runs the debt assignment over `X` in implementation order.
///
/// Fails if an implemented candidate has no supporters.
pub fn compute_debts(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Result<DebtLedger> {
    let mut ledger = DebtLedger::zero(profile.num_voters());
    for &x in implemented.as_slice() {
        ledger.charge(profile, x)?;
    }
    Ok(ledger)
}

/// When, and by whom, a candidate can be bought.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuyingEvent {
    /// Additional time until the payers' joint balance reaches one credit.
    At { time: Rational, payers: VoterGroup },
    /// The candidate has no supporters.
    Never,
}

impl BuyingEvent {
    pub fn time(&self) -> Option<&Rational> {
        match self {
            BuyingEvent::At { time, .. } => Some(time),
            BuyingEvent::Never => None,
        }
    }
}

/// Minimal additional time `t ≥ 0` after which some subset of `c`'s
/// supporters can jointly afford `c` given current `credits`.
///
/// Candidate payer sets are the non-negative supporters plus the `k`
/// least-indebted others, for increasing `k`; ties go to the smaller `k`.
pub fn compute_buying_time(profile: &ApprovalProfile, c: CandidateId, credits: &[Rational]) -> BuyingEvent {
    let supporters = profile.supporters_of(c);
    if supporters.is_empty() {
        return BuyingEvent::Never;
    }
    let (mut solvent, mut indebted): (Vec<usize>, Vec<usize>) =
        supporters.iter().partition(|&&i| !credits[i].is_negative());
    indebted.sort_by(|&i, &j| credits[j].cmp(&credits[i]).then(i.cmp(&j)));

    let mut sum = solvent.iter().fold(Rational::zero(), |acc, &i| acc + &credits[i]);
    let mut best: Option<(Rational, usize)> = None;
    for k in 0..=indebted.len() {
        if k > 0 {
            sum += &credits[indebted[k - 1]];
        }
        let size = solvent.len() + k;
        if size == 0 {
            continue;
        }
        let t = if sum >= Rational::one() { Rational::zero() } else { (Rational::one() - &sum) / from_usize(size) };
        if best.as_ref().is_none_or(|(b, _)| t < *b) {
            best = Some((t, k));
        }
    }
    let (time, k) = best.expect("at least one supporter");
    solvent.extend_from_slice(&indebted[..k]);
    solvent.sort_unstable();
    BuyingEvent::At { time, payers: VoterGroup::from_sorted_unchecked(solvent) }
}

/// Dynamic Phragmén: charge `X` via [`compute_debts`], then run sequential
/// Phragmén from balances `−d_i`. Unsupported candidates come last.
pub fn rank_dynamic_phragmen(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Result<Ranking> {
    rank_dynamic_phragmen_top(profile, implemented, usize::MAX)
}

/// The first `depth` positions of [`rank_dynamic_phragmen`].
pub fn rank_dynamic_phragmen_top(
    profile: &ApprovalProfile,
    implemented: &ImplementedSequence,
    depth: usize,
) -> Result<Ranking> {
    let schedule = dynamic_phragmen_schedule(profile, implemented, depth)?;
    Ok(Ranking::new(schedule.into_iter().map(|(c, _)| c).collect()))
}

/// [`compute_buying_time`] in absolute terms. Voter `i` has credit
/// `clock − base[i]`, so a payer set `P` affords `c` at
/// `max(clock, (1 + Σ_P base) / |P|)`. Returns the time and the number of
/// payers, who are the first entries of the reordered `order`.
///
/// Indebted supporters join in increasing order of `base`. Each one pulls
/// the mean towards its own base, so the first one whose base is not below
/// the current mean ends the search.
fn absolute_buying_time(
    profile: &ApprovalProfile,
    c: CandidateId,
    base: &[Rational],
    clock: &Rational,
    order: &mut Vec<usize>,
) -> Option<(Rational, usize)> {
    order.clear();
    order.extend_from_slice(profile.supporters_of(c));
    if order.is_empty() {
        return None;
    }
    let (mut solvent, mut indebted): (Vec<usize>, Vec<usize>) = order.iter().partition(|&&i| base[i] <= *clock);
    indebted.sort_unstable_by(|&i, &j| base[i].cmp(&base[j]).then(i.cmp(&j)));
    // Voters who paid together share a base, so summing runs of equal
    // values saves most of the big-rational additions.
    solvent.sort_unstable_by(|&i, &j| base[i].cmp(&base[j]));
    let mut sum = Rational::one();
    for run in solvent.chunk_by(|&i, &j| base[i] == base[j]) {
        sum += &base[run[0]] * from_usize(run.len());
    }
    let mut size = solvent.len();
    let mut next = indebted.iter().peekable();
    if size == 0 {
        let &i = next.next().expect("nonempty");
        sum += &base[i];
        size = 1;
    }
    let mut t = &sum / from_usize(size);
    while t > *clock {
        let Some(&&i) = next.peek() else { break };
        if base[i] >= t {
            break;
        }
        next.next();
        sum += &base[i];
        size += 1;
        t = &sum / from_usize(size);
    }
    if t < *clock {
        t = clock.clone();
    }
    order.clear();
    order.append(&mut solvent);
    order.append(&mut indebted);
    Some((t, size))
}

/// The first `depth` positions of the dynamic Phragmén ranking together
/// with the time, measured from the start of the second phase, at which
/// each candidate is bought. Unsupported candidates carry `None`.
pub fn dynamic_phragmen_schedule(
    profile: &ApprovalProfile,
    implemented: &ImplementedSequence,
    depth: usize,
) -> Result<Vec<(CandidateId, Option<Rational>)>> {
    // Credits are kept as `clock − base`, so advancing the clock touches
    // nobody and paying resets only the payers' base.
    let mut base = compute_debts(profile, implemented)?.debts;
    let mut open = remaining(profile, implemented);
    let mut order = Vec::with_capacity(open.len().min(depth));
    let mut clock = Rational::zero();
    let mut scratch = Vec::new();
    // A candidate's purchase time only changes when one of its supporters
    // pays for something else.
    let mut due: Vec<Option<Option<Rational>>> = alloc::vec![None; profile.num_candidates()];

    while order.len() < depth {
        let mut best: Option<(usize, Rational)> = None;
        for (slot, &c) in open.iter().enumerate() {
            let at = due[c.index()]
                .get_or_insert_with(|| absolute_buying_time(profile, c, &base, &clock, &mut scratch).map(|(t, _)| t));
            if let Some(at) = at {
                if best.as_ref().is_none_or(|(_, b)| *at < *b) {
                    best = Some((slot, at.clone()));
                }
            }
        }
        let Some((slot, at)) = best else { break };
        let chosen = open.remove(slot);
        let (_, payers) =
            absolute_buying_time(profile, chosen, &base, &clock, &mut scratch).expect("supported candidate");
        clock = at;
        for &i in &scratch[..payers] {
            base[i] = clock.clone();
            for &d in profile.ballot(i) {
                due[d.index()] = None;
            }
        }
        order.push((chosen, Some(clock.clone())));
    }
    // Only unsupported candidates are left once no purchase is possible.
    order.extend(open.into_iter().take(depth.saturating_sub(order.len())).map(|c| (c, None)));
    Ok(order)
}

/// Myopic Phragmén: for every remaining `c`, charge `c` on top of the
/// ledger for `X` and rank by the resulting debt vector sorted
/// non-increasingly, compared lexicographically. Unsupported candidates come
/// last.
pub fn rank_myopic_phragmen(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Result<Ranking> {
    let ledger = compute_debts(profile, implemented)?;
    let mut supported: Vec<(Vec<Rational>, CandidateId)> = Vec::new();
    let mut unsupported = Vec::new();
    for c in remaining(profile, implemented) {
        let mut next = ledger.clone();
        match next.charge(profile, c) {
            Ok(()) => supported.push((next.sorted_desc(), c)),
            Err(_) => unsupported.push(c),
        }
    }
    supported.sort_by(|(x, c), (y, d)| x.cmp(y).then(c.cmp(d)));
    let mut order: Vec<CandidateId> = supported.into_iter().map(|(_, c)| c).collect();
    order.extend(unsupported);
    Ok(Ranking::new(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    fn seq(p: &ApprovalProfile, names: &[&str]) -> ImplementedSequence {
        ImplementedSequence::from_names(p, names).unwrap()
    }

    #[test]
    fn debts_single_implementation() {
        let p = fixtures::five_three_one();
        let ledger = compute_debts(&p, &seq(&p, &["b"])).unwrap();
        for i in 0..5 {
            assert_eq!(ledger.debt(i), &ratio(1, 5));
        }
        for i in 5..9 {
            assert!(ledger.debt(i).is_zero());
        }
    }

    #[test]
    fn debts_disjoint_supporters() {
        let p = fixtures::five_three_one();
        let ledger = compute_debts(&p, &seq(&p, &["b", "d"])).unwrap();
        assert_eq!(ledger.debt(0), &ratio(1, 5));
        assert_eq!(ledger.debt(6), &ratio(1, 3));
        assert_eq!(ledger.debt(8), &Rational::zero());
        assert_eq!(ledger.total(), int(2));
    }

    #[test]
    fn debts_partial_prefix() {
        // v0: {a}, v1: {a, b}; after a both owe 1/2, b falls on v1 alone.
        let p = ApprovalProfile::from_names(&["a", "b"], &[&["a"][..], &["a", "b"][..]]).unwrap();
        let ledger = compute_debts(&p, &seq(&p, &["a", "b"])).unwrap();
        assert_eq!(ledger.debts(), &[ratio(1, 2), ratio(3, 2)]);
    }

    #[test]
    fn debts_skip_heavily_indebted_supporter() {
        // v0 already owes 2; charging {v0, v1} for c leaves v0 untouched.
        let p = ApprovalProfile::from_names(&["x", "y", "c"], &[&["x", "y", "c"][..], &["c"][..]]).unwrap();
        let ledger = compute_debts(&p, &seq(&p, &["x", "y", "c"])).unwrap();
        assert_eq!(ledger.debts(), &[int(2), int(1)]);
    }

    #[test]
    fn debts_boundary_equal_to_next_supporter() {
        // Non-strict comparison: when the equalised debt equals the next
        // supporter's debt, the prefix stops there. v0 owes 0, v1 owes 1;
        // charging c gives v0 exactly 1 and leaves v1 at 1.
        let p = ApprovalProfile::from_names(&["y", "c"], &[&["c"][..], &["y", "c"][..]]).unwrap();
        let mut ledger = compute_debts(&p, &seq(&p, &["y"])).unwrap();
        assert_eq!(ledger.debts(), &[int(0), int(1)]);
        ledger.charge(&p, p.id("c").unwrap()).unwrap();
        assert_eq!(ledger.debts(), &[int(1), int(1)]);
    }

    #[test]
    fn debts_reject_unsupported_implementation() {
        let p = ApprovalProfile::from_names(&["a", "z"], &[&["a"][..]]).unwrap();
        let z = p.id("z").unwrap();
        assert_eq!(compute_debts(&p, &seq(&p, &["z"])), Err(Error::UnsupportedImplemented(z)));
    }

    #[test]
    fn buying_time_equal_split() {
        let p = ApprovalProfile::from_names(&["c"], &[&["c"][..], &["c"][..]]).unwrap();
        let event = compute_buying_time(&p, CandidateId::new(0), &[int(0), int(0)]);
        assert_eq!(
            event,
            BuyingEvent::At { time: ratio(1, 2), payers: VoterGroup::from_sorted_unchecked(alloc::vec![0, 1]) }
        );
    }

    #[test]
    fn buying_time_prefers_smaller_payer_set_on_tie() {
        // t^0 = 1 with the solvent voter alone, t^1 = (1 - (-1)) / 2 = 1.
        let p = ApprovalProfile::from_names(&["c"], &[&["c"][..], &["c"][..]]).unwrap();
        let event = compute_buying_time(&p, CandidateId::new(0), &[int(0), int(-1)]);
        assert_eq!(event, BuyingEvent::At { time: int(1), payers: VoterGroup::from_sorted_unchecked(alloc::vec![0]) });
    }

    #[test]
    fn buying_time_all_indebted() {
        let p = ApprovalProfile::from_names(&["c"], &[&["c"][..], &["c"][..]]).unwrap();
        let event = compute_buying_time(&p, CandidateId::new(0), &[ratio(-1, 2), int(-3)]);
        assert_eq!(
            event,
            BuyingEvent::At { time: ratio(3, 2), payers: VoterGroup::from_sorted_unchecked(alloc::vec![0]) }
        );
    }

    #[test]
    fn buying_time_already_affordable() {
        let p = ApprovalProfile::from_names(&["c"], &[&["c"][..]]).unwrap();
        let event = compute_buying_time(&p, CandidateId::new(0), &[ratio(3, 2)]);
        assert_eq!(event.time(), Some(&Rational::zero()));
    }

    #[test]
    fn buying_time_unsupported() {
        let p = ApprovalProfile::from_names(&["a", "z"], &[&["a"][..]]).unwrap();
        assert_eq!(compute_buying_time(&p, p.id("z").unwrap(), &[int(0)]), BuyingEvent::Never);
    }

    #[test]
    fn dynamic_five_three_one() {
        let p = fixtures::five_three_one();
        let names = |x: &[&str]| rank_dynamic_phragmen(&p, &seq(&p, x)).unwrap().names(&p).join(",");
        assert_eq!(names(&[]), "a,c,b,d,e");
        assert_eq!(names(&["b"]), "c,a,d,e");
        assert_eq!(names(&["b", "d"]), "a,c,e");
    }

    #[test]
    fn myopic_five_three_one() {
        let p = fixtures::five_three_one();
        let names = |x: &[&str]| rank_myopic_phragmen(&p, &seq(&p, x)).unwrap().names(&p).join(",");
        assert_eq!(names(&[]), "a,b,c,d,e");
        assert_eq!(names(&["b"]), "c,d,a,e");
        assert_eq!(names(&["b", "d"]), "a,c,e");
    }

    #[test]
    fn one_three_three_after_c() {
        let p = fixtures::one_three_three();
        let x = seq(&p, &["c"]);
        assert_eq!(rank_dynamic_phragmen(&p, &x).unwrap().names(&p), ["b", "a"]);
        assert_eq!(rank_myopic_phragmen(&p, &x).unwrap().names(&p), ["b", "a"]);
    }

    #[test]
    fn myopic_ranks_a_below_e_on_modified_fixture() {
        let p = fixtures::mono_trap_myopic(0);
        let x = seq(&p, &["b"]);
        let ledger = compute_debts(&p, &x).unwrap();
        let mut after_a = ledger.clone();
        after_a.charge(&p, p.id("a").unwrap()).unwrap();
        assert_eq!(after_a.sorted_desc()[0], ratio(36, 483));
        let mut after_e = ledger;
        after_e.charge(&p, p.id("e").unwrap()).unwrap();
        assert_eq!(after_e.sorted_desc()[0], ratio(1, 16));
        let r = rank_myopic_phragmen(&p, &x).unwrap();
        assert!(r.position(p.id("a").unwrap()) > r.position(p.id("e").unwrap()));
    }

    #[test]
    fn unsupported_candidates_go_last() {
        let p = ApprovalProfile::from_names(&["z", "a", "y", "b"], &[&["a"][..], &["b"][..], &["a"][..]]).unwrap();
        let none = seq(&p, &[]);
        assert_eq!(rank_dynamic_phragmen(&p, &none).unwrap().names(&p), ["a", "b", "z", "y"]);
        assert_eq!(rank_myopic_phragmen(&p, &none).unwrap().names(&p), ["a", "b", "z", "y"]);
    }

    #[test]
    fn two_parties_interleave() {
        let p = fixtures::two_parties(2, 4);
        let r = rank_dynamic_phragmen(&p, &seq(&p, &[])).unwrap();
        assert_eq!(r.names(&p), ["a1", "b1", "a2", "b2", "a3", "b3", "a4", "b4"]);
    }

    #[test]
    fn weak_mono_phragmen_rankings() {
        let p = fixtures::weak_mono_phragmen();
        assert_eq!(rank_dynamic_phragmen(&p, &seq(&p, &[])).unwrap().names(&p), ["a", "c", "b", "e1", "e2", "d"]);
        assert_eq!(rank_dynamic_phragmen(&p, &seq(&p, &["b"])).unwrap().names(&p), ["d", "e1", "e2", "c", "a"]);
    }

    #[test]
    fn absolute_times_match_relative_times() {
        use crate::generators::rng_from_seed;
        use rand::Rng;
        let mut rng = rng_from_seed(11);
        for _ in 0..300 {
            let n = rng.random_range(1..7);
            let voters: Vec<Vec<&str>> =
                (0..n).map(|_| if rng.random_bool(0.8) { alloc::vec!["c"] } else { alloc::vec![] }).collect();
            let p = ApprovalProfile::from_names(&["c"], &voters).unwrap();
            let c = p.id("c").unwrap();
            let clock = ratio(rng.random_range(0..4), rng.random_range(1..4));
            let base: Vec<Rational> = (0..n).map(|_| ratio(rng.random_range(0..12), rng.random_range(1..5))).collect();
            let credits: Vec<Rational> = base.iter().map(|b| &clock - b).collect();
            let mut order = Vec::new();
            let abs = absolute_buying_time(&p, c, &base, &clock, &mut order);
            match compute_buying_time(&p, c, &credits) {
                BuyingEvent::Never => assert!(abs.is_none()),
                BuyingEvent::At { time, payers } => {
                    let (t, k) = abs.unwrap();
                    assert_eq!(t, &clock + time);
                    let mut got = order[..k].to_vec();
                    got.sort_unstable();
                    assert_eq!(got, payers.members());
                }
            }
        }
    }
}
