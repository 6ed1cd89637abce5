use alloc::string::{String, ToString};

use num_bigint::{BigInt, BigUint, Sign};

use num_traits::{Signed, Zero};

use super::check_alpha;
use crate::rational::{ceil_u64, from_usize, int, ratio, Rational};
use crate::rules::compute_debts;
use crate::{avg_satisfaction, prefix, ApprovalProfile, Error, ImplementedSequence, Ranking, Result, VoterGroup};

/// Group-dependent quantities of the representation bounds, all derived
/// from the profile and `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationQuery {
    pub group: VoterGroup,
    pub alpha: Rational,
    pub lambda: usize,
    /// `|∪_V A_i ∩ X|`.
    pub m: usize,
    /// `Σ_{i∈V} (d_i − avg_V d)²` for the debts after `X`.
    pub s: Rational,
    /// `|∩_V A_i \ X|`.
    pub cohesion: usize,
    /// `avg_V(X)`.
    pub avg_x: Rational,
}

impl RepresentationQuery {
    /// Fails on an empty group, `alpha ∉ (0, 1]`, or an `X` containing an
    /// unsupported candidate.
    pub fn new(
        profile: &ApprovalProfile,
        implemented: &ImplementedSequence,
        group: VoterGroup,
        alpha: Rational,
        lambda: usize,
    ) -> Result<Self> {
        check_alpha(&alpha)?;
        if group.is_empty() {
            return Err(Error::EmptyGroup);
        }
        let x = implemented.as_set();
        let m = group.approved_union(profile).iter().filter(|&c| x.contains(c)).count();
        let cohesion = group.approved_intersection(profile).iter().filter(|&c| !x.contains(c)).count();
        let s = compute_debts(profile, implemented)?.spread(&group)?;
        let avg_x = avg_satisfaction(profile, &group, x)?;
        Ok(RepresentationQuery { group, alpha, lambda, m, s, cohesion, avg_x })
    }

    /// The group's own share `|V| / n` as `alpha`.
    pub fn with_own_share(
        profile: &ApprovalProfile,
        implemented: &ImplementedSequence,
        group: VoterGroup,
        lambda: usize,
    ) -> Result<Self> {
        let alpha = ratio(group.len() as i64, profile.num_voters().max(1) as i64);
        Self::new(profile, implemented, group, alpha, lambda)
    }

    pub fn kappa_dyn_phragmen(&self) -> Result<u64> {
        kappa_dyn_phragmen(&self.alpha, self.lambda, self.m, &self.s, self.group.len())
    }

    pub fn kappa_dyn_seqpav(&self) -> Result<u64> {
        kappa_dyn_seqpav(&self.alpha, self.lambda, &self.avg_x)
    }
}

/// Outcome of checking one bound on one ranking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub holds: bool,
    /// The precondition failed, so the bound says nothing.
    pub vacuous: bool,
    /// `avg_V` over the inspected prefix, when it was evaluated.
    pub satisfaction: Option<Rational>,
}

impl BoundCheck {
    fn vacuous() -> Self {
        BoundCheck { holds: true, vacuous: true, satisfaction: None }
    }
}

/// `⌈(2(λ + m + 1) + s·|V|) / α⌉`.
pub fn kappa_dyn_phragmen(alpha: &Rational, lambda: usize, m: usize, s: &Rational, group_size: usize) -> Result<u64> {
    check_alpha(alpha)?;
    let num = int(2) * from_usize(lambda + m + 1) + s * from_usize(group_size);
    Ok(ceil_u64(&(num / alpha)))
}

/// `⌈2(λ + 1 + avg_V(X))² / α²⌉`.
pub fn kappa_dyn_seqpav(alpha: &Rational, lambda: usize, avg_x: &Rational) -> Result<u64> {
    check_alpha(alpha)?;
    let base = from_usize(lambda + 1) + avg_x;
    Ok(ceil_u64(&(int(2) * &base * &base / (alpha * alpha))))
}

/// `⌈d⁻¹(λ) / α⌉` for a rule whose proportionality degree has inverse
/// value `inverse` at `λ`.
pub fn kappa_from_degree_inverse(alpha: &Rational, inverse: &Rational) -> Result<u64> {
    check_alpha(alpha)?;
    Ok(ceil_u64(&(inverse / alpha)))
}

/// `(ℓ − 1)/2 − m/2 − s·|V|/4`; negative values are vacuous.
pub fn pd_bound_dphragmen(ell: &Rational, m: usize, s: &Rational, group_size: usize) -> Rational {
    (ell - int(1)) / int(2) - from_usize(m) / int(2) - s * from_usize(group_size) / int(4)
}

/// Inverse of [`pd_bound_dphragmen`] in `ℓ`: `2λ + 1 + m + s·|V|/2`.
pub fn pd_inverse_dphragmen(lambda: &Rational, m: usize, s: &Rational, group_size: usize) -> Rational {
    int(2) * lambda + int(1) + from_usize(m) + s * from_usize(group_size) / int(2)
}

/// `g(ℓ, h) = ℓ·√(1/2h) − avg_V(X) − 1`, kept symbolic because of the
/// square root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqPavDegree {
    pub ell: Rational,
    pub depth: usize,
    pub avg_x: Rational,
}

/// The seqPAV degree bound for `ell ≥ 0` and `depth ≥ 1`.
pub fn pd_bound_dseqpav(ell: Rational, depth: usize, avg_x: Rational) -> Result<SeqPavDegree> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    if ell.is_negative() {
        return Err(Error::InvalidParameter("ell must be non-negative"));
    }
    Ok(SeqPavDegree { ell, depth, avg_x })
}

impl SeqPavDegree {
    /// Exactly decides `value ≥ g`, i.e. `value + avg_X + 1 ≥ ℓ/√(2h)`,
    /// by squaring both non-negative sides.
    pub fn is_at_most(&self, value: &Rational) -> bool {
        let lhs = value + &self.avg_x + int(1);
        if lhs.is_negative() {
            return false;
        }
        &lhs * &lhs * from_usize(2 * self.depth) >= &self.ell * &self.ell
    }

    /// Exactly decides `value ≤ g`.
    pub fn is_at_least(&self, value: &Rational) -> bool {
        let lhs = value + &self.avg_x + int(1);
        if lhs.is_negative() {
            return true;
        }
        &lhs * &lhs * from_usize(2 * self.depth) <= &self.ell * &self.ell
    }

    /// Whether `g ≤ 0`, in which case the guarantee is empty.
    pub fn is_vacuous(&self) -> bool {
        self.is_at_most(&Rational::zero())
    }

    /// `g` truncated towards negative infinity to `digits` decimals.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        // floor(ℓ · 10^d / √(2h)) = floor(√(ℓ² · 10^{2d} / 2h)).
        let radicand = (&self.ell * &self.ell * Rational::from_integer(&scale * &scale)) / from_usize(2 * self.depth);
        let root = radicand.floor().to_integer().to_biguint().unwrap_or_default().sqrt();
        let root = BigInt::from_biguint(Sign::Plus, root);
        let shift = (&self.avg_x + int(1)) * Rational::from_integer(scale.clone());
        let scaled = Rational::from_integer(root) - shift;
        render_scaled(&scaled.floor().to_integer(), digits)
    }

    /// Coefficient `√(1/2h)` of `ℓ`, truncated to `digits` decimals.
    pub fn coefficient(depth: usize, digits: u32) -> String {
        let scale = BigUint::from(10u32).pow(digits);
        let root = (&scale * &scale / BigUint::from(2 * depth)).sqrt();
        render_scaled(&BigInt::from_biguint(Sign::Plus, root), digits)
    }
}

fn render_scaled(value: &BigInt, digits: u32) -> String {
    use core::fmt::Write;
    let scale = BigInt::from(10u32).pow(digits);
    let negative = value.is_negative();
    let magnitude = value.abs();
    let whole = &magnitude / &scale;
    let frac = &magnitude % &scale;
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    let _ = write!(s, "{whole}");
    if digits > 0 {
        let _ = write!(s, ".{:0>width$}", frac.to_string(), width = digits as usize);
    }
    s
}

/// Evaluates the group-representation implication on `ranking`: if
/// `λ^t(V) ≥ λ` then `avg_V(r_{≤κ}) ≥ λ`. Groups below `α·n` and unmet
/// cohesion make the check vacuous.
pub fn check_group_representation(
    profile: &ApprovalProfile,
    ranking: &Ranking,
    query: &RepresentationQuery,
    kappa: u64,
) -> Result<BoundCheck> {
    let required = &query.alpha * from_usize(profile.num_voters());
    if from_usize(query.group.len()) < required || query.cohesion < query.lambda {
        return Ok(BoundCheck::vacuous());
    }
    if query.lambda == 0 {
        return Ok(BoundCheck { holds: true, vacuous: false, satisfaction: None });
    }
    let depth = usize::try_from(kappa).unwrap_or(usize::MAX);
    let satisfaction = avg_satisfaction(profile, &query.group, &prefix(ranking, depth))?;
    Ok(BoundCheck { holds: satisfaction >= from_usize(query.lambda), vacuous: false, satisfaction: Some(satisfaction) })
}

/// `ℓ = |V|·h/n`, the largest `ℓ` for which `V` is `ℓ`-large w.r.t. `h`.
fn largeness(profile: &ApprovalProfile, group: &VoterGroup, depth: usize) -> Rational {
    ratio((group.len() * depth) as i64, profile.num_voters().max(1) as i64)
}

/// Checks the dynamic-Phragmén degree at depth `h` on `ranking`: with
/// `ℓ = |V|h/n` the group must reach `min(d(ℓ), λ^t(V))` in the top `h`.
pub fn check_pd_dphragmen(
    profile: &ApprovalProfile,
    implemented: &ImplementedSequence,
    ranking: &Ranking,
    group: &VoterGroup,
    depth: usize,
) -> Result<BoundCheck> {
    let query = RepresentationQuery::with_own_share(profile, implemented, group.clone(), 0)?;
    let bound = pd_bound_dphragmen(&largeness(profile, group, depth), query.m, &query.s, group.len());
    let target = bound.min(from_usize(query.cohesion));
    if !target.is_positive() {
        return Ok(BoundCheck::vacuous());
    }
    let satisfaction = avg_satisfaction(profile, group, &prefix(ranking, depth))?;
    Ok(BoundCheck { holds: satisfaction >= target, vacuous: false, satisfaction: Some(satisfaction) })
}

/// Checks the dynamic-seqPAV degree at depth `h` on `ranking`, with the
/// same target `min(g(ℓ, h), λ^t(V))`, decided exactly.
pub fn check_pd_dseqpav(
    profile: &ApprovalProfile,
    implemented: &ImplementedSequence,
    ranking: &Ranking,
    group: &VoterGroup,
    depth: usize,
) -> Result<BoundCheck> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let avg_x = avg_satisfaction(profile, group, implemented.as_set())?;
    let g = pd_bound_dseqpav(largeness(profile, group, depth), depth, avg_x)?;
    let cohesion =
        from_usize(group.approved_intersection(profile).iter().filter(|&c| !implemented.contains(c)).count());
    if g.is_vacuous() || cohesion.is_zero() {
        return Ok(BoundCheck::vacuous());
    }
    let satisfaction = avg_satisfaction(profile, group, &prefix(ranking, depth))?;
    let holds = if g.is_at_least(&cohesion) { satisfaction >= cohesion } else { g.is_at_most(&satisfaction) };
    Ok(BoundCheck { holds, vacuous: false, satisfaction: Some(satisfaction) })
}
