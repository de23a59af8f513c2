//! Exact verification of equilibrium refinements.
//!
//! Probabilities live in the ordered field ℝ(ε) of rational functions in a
//! positive infinitesimal, so trembles like `1 − 2ε` and beliefs conditioned
//! on probability-ε events are computed exactly. Verifiers cover Nash,
//! correlated and rationalizable play in strategic form and perfect,
//! quasi-perfect and sequential equilibrium in extensive form, each by a
//! direct inequality check and, optionally, by checking common knowledge of
//! rationality on an explicit epistemic model.

pub mod cli;
pub mod epistemic;
pub mod error;
pub mod field;
pub mod format;
pub mod game;
pub mod lp;
pub mod response;
pub mod samples;
pub mod strategy;
pub mod valuation;
pub mod verify;

pub use error::Error;
