//! Executable checkers for the monotonicity and proportionality axioms, the
//! closed-form representation bounds, and an adversarial decision maker.
//!
//! The axioms quantify over every voter group. Monotonicity checkers take
//! an explicit group list (see [`groups`] for standard families), so they
//! under-approximate; the justified-selection checker is exact.

mod adversary;
pub mod groups;
mod monotonicity;
mod representation;
mod selection;

pub use adversary::{adversarial_dm_search, AdversaryResult};
pub use monotonicity::{check_h_alpha_monotonicity, check_weak_monotonicity, MonotonicityViolation};
pub use representation::{
    check_group_representation, check_pd_dphragmen, check_pd_dseqpav, kappa_dyn_phragmen, kappa_dyn_seqpav,
    kappa_from_degree_inverse, pd_bound_dphragmen, pd_bound_dseqpav, pd_inverse_dphragmen, BoundCheck,
    RepresentationQuery, SeqPavDegree,
};
pub use selection::{check_js, check_pjs, js_guarantee, Guarantee, SelectionCheck, SelectionWitness};

use crate::rational::{from_usize, Rational};
use crate::{Error, Result};
use num_traits::{One, Zero};

/// Rejects `alpha` outside `(0, 1]`.
pub fn check_alpha(alpha: &Rational) -> Result<()> {
    if *alpha <= Rational::zero() || *alpha > Rational::one() {
        Err(Error::InvalidAlpha)
    } else {
        Ok(())
    }
}

/// Smallest group size `k` with `k ≥ alpha · n`.
pub fn min_group_size(alpha: &Rational, n: usize) -> usize {
    let need = alpha * from_usize(n);
    crate::rational::ceil_u64(&need) as usize
}
