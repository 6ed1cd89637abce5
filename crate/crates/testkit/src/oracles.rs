//! Brute-force reference implementations.

use dynrank_core::rational::{from_usize, ratio, Rational};
use dynrank_core::{ApprovalProfile, CandidateId, ImplementedSequence};
use num_traits::{One, Zero};

fn remaining(profile: &ApprovalProfile, x: &[CandidateId]) -> Vec<CandidateId> {
    profile.candidates().filter(|c| !x.contains(c)).collect()
}

fn supporters(profile: &ApprovalProfile, c: CandidateId) -> Vec<usize> {
    (0..profile.num_voters()).filter(|&i| profile.ballot(i).contains(&c)).collect()
}

/// `Σ_i Σ_{j ≤ |A_i ∩ S|} 1/j`, straight from the definition.
pub fn tsc(profile: &ApprovalProfile, set: &[CandidateId]) -> Rational {
    let mut total = Rational::zero();
    for i in 0..profile.num_voters() {
        let k = profile.ballot(i).iter().filter(|c| set.contains(c)).count();
        for j in 1..=k {
            total += ratio(1, j as i64);
        }
    }
    total
}

pub fn av(profile: &ApprovalProfile, x: &[CandidateId]) -> Vec<CandidateId> {
    let mut rest = remaining(profile, x);
    rest.sort_by_key(|&c| (std::cmp::Reverse(supporters(profile, c).len()), c));
    rest
}

/// Greedy PAV continuing from `X`, with every marginal gain recomputed as
/// a difference of full scores.
pub fn dynamic_seqpav(profile: &ApprovalProfile, x: &[CandidateId]) -> Vec<CandidateId> {
    let mut chosen: Vec<CandidateId> = x.to_vec();
    let mut order = Vec::new();
    let mut rest = remaining(profile, x);
    while !rest.is_empty() {
        let base = tsc(profile, &chosen);
        let mut best: Option<(Rational, usize)> = None;
        for (k, &c) in rest.iter().enumerate() {
            let mut with = chosen.clone();
            with.push(c);
            let gain = tsc(profile, &with) - &base;
            if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                best = Some((gain, k));
            }
        }
        let (_, k) = best.unwrap();
        let c = rest.remove(k);
        chosen.push(c);
        order.push(c);
    }
    order
}

pub fn myopic_seqpav(profile: &ApprovalProfile, x: &[CandidateId]) -> Vec<CandidateId> {
    let base = tsc(profile, x);
    let mut scored: Vec<(Rational, CandidateId)> = remaining(profile, x)
        .into_iter()
        .map(|c| {
            let mut with = x.to_vec();
            with.push(c);
            (tsc(profile, &with) - &base, c)
        })
        .collect();
    scored.sort_by(|(a, c), (b, d)| b.cmp(a).then(c.cmp(d)));
    scored.into_iter().map(|(_, c)| c).collect()
}

fn sorted_desc(v: &[Rational]) -> Vec<Rational> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// Charges one unit for `c` by trying every subset of its supporters as
/// the paying set (equalised to a common level no payer is already above)
/// and keeping the outcome whose sorted debt vector is lexicographically
/// smallest. `None` if `c` has no supporters.
pub fn charge(profile: &ApprovalProfile, debts: &[Rational], c: CandidateId) -> Option<Vec<Rational>> {
    let s = supporters(profile, c);
    if s.is_empty() {
        return None;
    }
    let mut best: Option<(Vec<Rational>, Vec<Rational>)> = None;
    for mask in 1u32..(1 << s.len()) {
        let members: Vec<usize> = (0..s.len()).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
        let sum = members.iter().fold(Rational::one(), |acc, &i| acc + &debts[i]);
        let level = sum / from_usize(members.len());
        if members.iter().any(|&i| debts[i] > level) {
            continue;
        }
        let mut next = debts.to_vec();
        for &i in &members {
            next[i] = level.clone();
        }
        let key = sorted_desc(&next);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, next));
        }
    }
    best.map(|(_, next)| next)
}

pub fn debts(profile: &ApprovalProfile, x: &[CandidateId]) -> Option<Vec<Rational>> {
    let mut d = vec![Rational::zero(); profile.num_voters()];
    for &c in x {
        d = charge(profile, &d, c)?;
    }
    Some(d)
}

pub fn myopic_phragmen(profile: &ApprovalProfile, x: &[CandidateId]) -> Vec<CandidateId> {
    let base = debts(profile, x).expect("implemented candidates are supported");
    let mut supported = Vec::new();
    let mut unsupported = Vec::new();
    for c in remaining(profile, x) {
        match charge(profile, &base, c) {
            Some(next) => supported.push((sorted_desc(&next), c)),
            None => unsupported.push(c),
        }
    }
    supported.sort_by(|(a, c), (b, d)| a.cmp(b).then(c.cmp(d)));
    supported.into_iter().map(|(_, c)| c).chain(unsupported).collect()
}

/// `Σ_{i ∈ N_c} max(0, balance_i + s)`.
fn joint(balances: &[Rational], members: &[usize], s: &Rational) -> Rational {
    members.iter().fold(Rational::zero(), |acc, &i| {
        let b = &balances[i] + s;
        if b > Rational::zero() {
            acc + b
        } else {
            acc
        }
    })
}

/// Earliest `s ∈ [0, step]` with `joint(s) ≥ 1`, found by walking the
/// breakpoints of the piecewise-linear joint balance.
fn crossing(balances: &[Rational], members: &[usize], step: &Rational) -> Option<Rational> {
    let one = Rational::one();
    if joint(balances, members, &Rational::zero()) >= one {
        return Some(Rational::zero());
    }
    if joint(balances, members, step) < one {
        return None;
    }
    let mut points: Vec<Rational> =
        members.iter().map(|&i| -balances[i].clone()).filter(|p| *p > Rational::zero() && p < step).collect();
    points.push(step.clone());
    points.sort();
    let mut lo = Rational::zero();
    for hi in points {
        if joint(balances, members, &hi) >= one {
            let at_lo = joint(balances, members, &lo);
            let slope = members.iter().filter(|&&i| &balances[i] + &lo >= Rational::zero()).count();
            return Some(lo + (one - at_lo) / from_usize(slope));
        }
        lo = hi;
    }
    unreachable!("joint balance reaches one by the end of the step")
}

/// Sequential Phragmén from the given starting balances, simulated by
/// advancing the clock in steps of `1/(n·m)` and locating each purchase
/// exactly within its step. Returns candidates with absolute purchase
/// times; unsupported candidates come last with `None`.
pub fn phragmen_from_balances(
    profile: &ApprovalProfile,
    start: &[Rational],
    open: Vec<CandidateId>,
) -> Vec<(CandidateId, Option<Rational>)> {
    simulate(profile, start, open, usize::MAX)
}

/// The simulation behind [`phragmen_from_balances`], stopped after `limit`
/// purchases.
fn simulate(
    profile: &ApprovalProfile,
    start: &[Rational],
    open: Vec<CandidateId>,
    limit: usize,
) -> Vec<(CandidateId, Option<Rational>)> {
    let n = profile.num_voters().max(1);
    let m = profile.num_candidates().max(1);
    let step = ratio(1, (n * m) as i64);
    let mut balances = start.to_vec();
    let mut clock = Rational::zero();
    let (mut open, never): (Vec<_>, Vec<_>) = open.into_iter().partition(|&c| !supporters(profile, c).is_empty());
    let mut out = Vec::new();
    while !open.is_empty() && out.len() < limit {
        let mut best: Option<(Rational, usize)> = None;
        // Clones share a crossing; compute it once per supporter set.
        let mut seen: Vec<(Vec<usize>, Option<Rational>)> = Vec::new();
        for (k, &c) in open.iter().enumerate() {
            let members = supporters(profile, c);
            let found = match seen.iter().find(|(m, _)| *m == members) {
                Some((_, s)) => s.clone(),
                None => {
                    let s = crossing(&balances, &members, &step);
                    seen.push((members, s.clone()));
                    s
                }
            };
            if let Some(s) = found {
                if best.as_ref().is_none_or(|(b, _)| s < *b) {
                    best = Some((s, k));
                }
            }
        }
        match best {
            None => {
                for b in balances.iter_mut() {
                    *b += &step;
                }
                clock += &step;
            }
            Some((s, k)) => {
                for b in balances.iter_mut() {
                    *b += &s;
                }
                clock += &s;
                let c = open.remove(k);
                for i in supporters(profile, c) {
                    if balances[i] > Rational::zero() {
                        balances[i] = Rational::zero();
                    }
                }
                out.push((c, Some(clock.clone())));
            }
        }
    }
    out.extend(never.into_iter().map(|c| (c, None)));
    out
}

/// Dynamic Phragmén via [`debts`] and [`phragmen_from_balances`].
pub fn dynamic_phragmen(profile: &ApprovalProfile, x: &[CandidateId]) -> Vec<(CandidateId, Option<Rational>)> {
    let d = debts(profile, x).expect("implemented candidates are supported");
    let start: Vec<Rational> = d.into_iter().map(|v| -v).collect();
    phragmen_from_balances(profile, &start, remaining(profile, x))
}

/// The first `k` candidates sequential Phragmén selects.
pub fn sequential_phragmen(profile: &ApprovalProfile, k: usize) -> Vec<CandidateId> {
    let zero = vec![Rational::zero(); profile.num_voters()];
    phragmen_from_balances(profile, &zero, profile.candidates().collect()).into_iter().take(k).map(|(c, _)| c).collect()
}

/// Checks that `seq` is a sequential Phragmén outcome under some
/// tie-breaking: each entry is bought at the earliest purchase time of all
/// open candidates. Returns the first index where that fails.
pub fn is_sequential_phragmen_prefix(profile: &ApprovalProfile, seq: &[CandidateId]) -> Result<(), usize> {
    let mut balances = vec![Rational::zero(); profile.num_voters()];
    let mut open: Vec<CandidateId> = profile.candidates().collect();
    for (k, &c) in seq.iter().enumerate() {
        let best = simulate(profile, &balances, open.clone(), 1)[0].1.clone();
        let own = simulate(profile, &balances, vec![c], 1)[0].1.clone();
        let Some(t) = own.filter(|t| Some(t) == best.as_ref()) else { return Err(k) };
        for b in balances.iter_mut() {
            *b += &t;
        }
        for i in supporters(profile, c) {
            if balances[i] > Rational::zero() {
                balances[i] = Rational::zero();
            }
        }
        open.retain(|&d| d != c);
    }
    Ok(())
}

/// Rankings of all five rules from the oracles, in `RuleId::ALL` order.
pub fn all_rules(profile: &ApprovalProfile, x: &ImplementedSequence) -> Vec<Vec<CandidateId>> {
    let xs = x.as_slice();
    vec![
        av(profile, xs),
        dynamic_seqpav(profile, xs),
        myopic_seqpav(profile, xs),
        dynamic_phragmen(profile, xs).into_iter().map(|(c, _)| c).collect(),
        myopic_phragmen(profile, xs),
    ]
}
