//! Reference implementations and random instances for the test suites.
//!
//! The oracles here are deliberately naive: brute force over subsets,
//! scores recomputed from scratch, Phragmén simulated by stepping the
//! clock. They share nothing with the rule implementations beyond the
//! profile type.

pub mod instances;
pub mod oracles;
pub mod properties;

pub use instances::{arb_instance, random_instance, Instance};
