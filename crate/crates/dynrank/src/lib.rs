//! File formats, axiom reports, experiments and the moderation service
//! built on `dynrank-core`.

pub mod check;
pub mod experiments;
pub mod format;
pub mod plot;
pub mod service;

pub use dynrank_core as core;
