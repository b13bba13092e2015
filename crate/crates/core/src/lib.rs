//! Anchor-protected gated verification for iterative code refinement.
//!
//! The library drives a refine-verify-feedback loop over single-file code
//! samples: security-critical elements are mined into *semantic anchors*,
//! every candidate revision passes a four-layer gate (correctness, safety
//! monotonicity, diff budget, anchor integrity), and rejected candidates
//! are assimilated into lessons that steer later generation attempts.

pub mod anchor;
pub mod assimilate;
pub mod config;
pub mod frontend;
pub mod gate;
pub mod generator;
pub mod metrics;
pub mod model;
pub mod orchestrator;
pub mod sast;
