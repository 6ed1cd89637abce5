use alloc::string::String;
use core::fmt;

use crate::CandidateId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A candidate name or id that the profile does not contain.
    UnknownCandidate(String),
    /// A ballot approves the same candidate twice.
    DuplicateApproval {
        voter: usize,
        candidate: String,
    },
    /// Two candidates share a name.
    DuplicateCandidate(String),
    /// The implemented sequence lists a candidate twice.
    AlreadyImplemented(CandidateId),
    /// An implemented candidate has no supporters, so its cost cannot be charged.
    UnsupportedImplemented(CandidateId),
    /// Selection below the depth restriction.
    DepthViolation {
        candidate: CandidateId,
        position: usize,
        depth: usize,
    },
    /// Averages over an empty voter group are undefined.
    EmptyGroup,
    /// A voter index outside the profile.
    UnknownVoter(usize),
    InvalidDepth,
    /// Relative group size outside (0, 1].
    InvalidAlpha,
    EmptyRanking,
    /// A voter group smaller than the required fraction of the electorate.
    GroupTooSmall {
        size: usize,
        required: usize,
    },
    /// Iteration index outside the recorded trajectory.
    InvalidIteration(usize),
    InvalidParameter(&'static str),
    /// A recorded ranking does not match the rule's output.
    InconsistentTrajectory(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownCandidate(name) => write!(f, "unknown candidate `{name}`"),
            Error::DuplicateApproval { voter, candidate } => {
                write!(f, "voter {voter} approves `{candidate}` more than once")
            }
            Error::DuplicateCandidate(name) => write!(f, "candidate `{name}` listed twice"),
            Error::AlreadyImplemented(c) => write!(f, "candidate {} is already implemented", c.index()),
            Error::UnsupportedImplemented(c) => {
                write!(f, "implemented candidate {} has no supporters", c.index())
            }
            Error::DepthViolation { candidate, position, depth } => write!(
                f,
                "candidate {} is at position {position}, below the depth restriction {depth}",
                candidate.index()
            ),
            Error::EmptyGroup => f.write_str("voter group is empty"),
            Error::UnknownVoter(i) => write!(f, "voter index {i} out of range"),
            Error::InvalidDepth => f.write_str("depth restriction must be at least 1"),
            Error::InvalidAlpha => f.write_str("alpha must lie in (0, 1]"),
            Error::EmptyRanking => f.write_str("ranking is empty"),
            Error::GroupTooSmall { size, required } => {
                write!(f, "group of size {size} is below the required {required}")
            }
            Error::InvalidIteration(t) => write!(f, "iteration {t} is outside the trajectory"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::InconsistentTrajectory(t) => {
                write!(f, "ranking at iteration {t} does not match the rule")
            }
        }
    }
}

impl core::error::Error for Error {}
