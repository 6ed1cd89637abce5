//! Dynamic proportional ranking over approval profiles.
//!
//! A dynamic ranking rule maps an approval profile and the sequence of
//! already implemented candidates to a ranking of the remaining ones. This
//! crate contains the rules themselves, the sequential-selection session
//! model, executable axiom checkers, and the random profile generators used
//! by the experiment pipeline. It is `no_std` and only needs `alloc`; IO,
//! file formats and the HTTP service live in the `dynrank` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod axioms;
mod error;
pub mod fixtures;
pub mod generators;
mod profile;
pub mod rational;
pub mod rules;
pub mod session;

pub use error::Error;
pub use profile::{
    avg_satisfaction, prefix, ApprovalProfile, CandidateId, CandidateSet, ImplementedSequence, Ranking, VoterGroup,
};
pub use rational::Rational;
pub use rules::{rank, rank_top, RuleId};
pub use session::{SessionState, Trajectory};

pub type Result<T, E = Error> = core::result::Result<T, E>;
