//! Fuzzy derivatives of real functions.
//!
//! A strong r-derivative of `f` at `x` is a value `b` that every admissible
//! sequence of difference quotients approaches within `r`; a weak one needs
//! only some sequence to do so. Both are computed from the extreme
//! subsequential limits `D⁻ ≤ D⁺` of the quotients, estimated on a geometric
//! ladder of step sizes.

pub mod gallery;
pub mod ladder;
pub mod oracle;
pub mod profile;
pub mod quotients;
pub mod report;

pub use gallery::{gallery, GalleryFunction};
pub use ladder::{ScaleLadder, Scales};
pub use oracle::{FunctionOracle, Resolution, DEFAULT_EVAL_BUDGET};
pub use profile::{global_profile, ProfilePoint};
pub use quotients::{
    derivative_defect, dini_bounds, quotient_samples, strong_set, weak_set, ApproachMode,
    QuotientBounds, QuotientSample, QuotientSamples, SampleKind, ScaleBand,
};
pub use report::{
    classify, combine_reports, membership_mu, Classification, DerivativeReport, ModeAnalysis,
    PredictedBounds, RadiusUnion, ReportOp,
};
