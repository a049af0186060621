//! Fuzzy limits and fuzzy derivatives.
//!
//! Classical limits and derivatives either exist or they don't. This crate
//! measures *how far* a real sequence is from converging and *how far* a real
//! function is from being differentiable, and returns the answer as closed
//! intervals (r-limit sets, r-derivative sets) plus a fuzzy membership grade.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`interval`] | closed intervals with an explicit empty value |
//! | [`sequence_limits`] | r-limits, measure of convergence, fuzzy fundamentality |
//! | [`derivatives`] | quotient envelopes, strong/weak r-derivatives, classification |
//! | [`reference_oracles`] | literal definition checkers used for differential testing |

pub mod derivatives;
pub mod error;
pub(crate) mod extended;
pub mod interval;
pub mod reference_oracles;
pub mod sequence_limits;

pub use error::{AnalysisError, Result};
pub use interval::Interval;
pub use sequence_limits::{tail_bounds, SequenceWindow, TailBounds, TailConfig};
