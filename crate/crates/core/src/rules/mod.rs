//! The five dynamic ranking rules.
//!
//! Every rule is a pure function `(profile, implemented) -> ranking` over
//! the candidates not yet implemented. Ties are broken by candidate
//! priority (lower id first).

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{ApprovalProfile, CandidateId, Error, ImplementedSequence, Ranking, Result};

mod av;
mod phragmen;
mod seqpav;

pub use av::rank_av;
pub use phragmen::{
    compute_buying_time, compute_debts, dynamic_phragmen_schedule, rank_dynamic_phragmen, rank_dynamic_phragmen_top,
    rank_myopic_phragmen, BuyingEvent, DebtLedger,
};
pub use seqpav::{marginal_contribution, rank_dynamic_seqpav, rank_dynamic_seqpav_top, rank_myopic_seqpav, tsc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Av,
    DynSeqPav,
    MyopicSeqPav,
    DynPhragmen,
    MyopicPhragmen,
}

impl RuleId {
    pub const ALL: [RuleId; 5] =
        [RuleId::Av, RuleId::DynSeqPav, RuleId::MyopicSeqPav, RuleId::DynPhragmen, RuleId::MyopicPhragmen];

    pub const fn as_str(self) -> &'static str {
        match self {
            RuleId::Av => "av",
            RuleId::DynSeqPav => "dyn-seqpav",
            RuleId::MyopicSeqPav => "myopic-seqpav",
            RuleId::DynPhragmen => "dyn-phragmen",
            RuleId::MyopicPhragmen => "myopic-phragmen",
        }
    }

    /// Rules that rebuild the whole ranking greedily on top of the implemented set.
    pub const fn is_dynamic(self) -> bool {
        matches!(self, RuleId::DynSeqPav | RuleId::DynPhragmen)
    }

    pub const fn is_myopic(self) -> bool {
        matches!(self, RuleId::MyopicSeqPav | RuleId::MyopicPhragmen)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter("unknown rule"))
    }
}

/// `rule(profile, implemented)`.
pub fn rank(rule: RuleId, profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Result<Ranking> {
    rank_top(rule, profile, implemented, usize::MAX)
}

/// The first `depth` positions of `rule(profile, implemented)`.
///
/// The greedy rules stop early, so this is cheaper than a full ranking
/// when only the top of the list is needed.
pub fn rank_top(
    rule: RuleId,
    profile: &ApprovalProfile,
    implemented: &ImplementedSequence,
    depth: usize,
) -> Result<Ranking> {
    check_implemented(profile, implemented)?;
    let mut ranking = match rule {
        RuleId::Av => rank_av(profile, implemented),
        RuleId::DynSeqPav => return Ok(rank_dynamic_seqpav_top(profile, implemented, depth)),
        RuleId::MyopicSeqPav => rank_myopic_seqpav(profile, implemented),
        RuleId::DynPhragmen => return rank_dynamic_phragmen_top(profile, implemented, depth),
        RuleId::MyopicPhragmen => rank_myopic_phragmen(profile, implemented)?,
    };
    if ranking.len() > depth {
        let mut order = ranking.into_vec();
        order.truncate(depth);
        ranking = Ranking::new(order);
    }
    Ok(ranking)
}

fn check_implemented(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Result<()> {
    for &c in implemented.as_slice() {
        profile.check(c)?;
    }
    Ok(())
}

/// `C \ X` in priority order.
pub(crate) fn remaining(profile: &ApprovalProfile, implemented: &ImplementedSequence) -> Vec<CandidateId> {
    profile.candidates().filter(|&c| !implemented.contains(c)).collect()
}
