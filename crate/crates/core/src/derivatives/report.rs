use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ladder::ScaleLadder;
use super::oracle::FunctionOracle;
use super::quotients::{
    bounds_for, collect_samples, continuity_estimate, ApproachMode, QuotientBounds, Wanted,
};
use crate::error::{AnalysisError, Result};
use crate::interval::Interval;
use crate::sequence_limits::{check_radius, RadiusSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ClassicallyDifferentiable,
    FuzzyDifferentiable,
    NotFuzzyDifferentiable,
}

/// Weak r-derivatives at one radius: a union of closed intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusUnion {
    pub r: f64,
    pub components: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeAnalysis {
    pub bounds: QuotientBounds,
    #[serde(with = "crate::extended")]
    pub defect: f64,
    pub strong_sets: Vec<RadiusSet>,
    pub weak_sets: Vec<RadiusUnion>,
}

/// Everything computed about the derivatives of `f` at `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub function: String,
    pub x: f64,
    pub per_mode: BTreeMap<ApproachMode, ModeAnalysis>,
    /// Modes with no admissible approach at `x` (outside the domain on that side).
    pub unavailable_modes: Vec<ApproachMode>,
    /// Centered defect `(D⁺ - D⁻)/2`; `+∞` when the quotients are unbounded.
    #[serde(with = "crate::extended")]
    pub defect: f64,
    pub classification: Classification,
    /// Estimated `limsup |f(y) - f(x)|` as `y -> x`.
    #[serde(with = "crate::extended")]
    pub continuity_defect: f64,
    pub evaluations: usize,
    pub budget_exhausted: bool,
}

impl DerivativeReport {
    pub fn mode(&self, mode: ApproachMode) -> Option<&ModeAnalysis> {
        self.per_mode.get(&mode)
    }

    pub fn bounds(&self, mode: ApproachMode) -> Option<&QuotientBounds> {
        self.per_mode.get(&mode).map(|m| &m.bounds)
    }
}

/// Analyses every approach mode at `x` from one shared set of evaluations,
/// filling strong and weak sets for each radius in `radii`.
pub fn classify(
    f: &FunctionOracle,
    x: f64,
    ladder: &ScaleLadder,
    radii: &[f64],
) -> Result<DerivativeReport> {
    for &r in radii {
        check_radius(r)?;
    }
    let mut radii = radii.to_vec();
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let ps = collect_samples(f, x, ladder, Wanted::all())?;
    let mut per_mode = BTreeMap::new();
    let mut unavailable_modes = Vec::new();
    for mode in ApproachMode::ALL {
        match bounds_for(&ps, mode) {
            Ok(bounds) => {
                per_mode.insert(mode, analyse_mode(bounds, &radii));
            }
            Err(AnalysisError::ModeUnavailable { .. }) => unavailable_modes.push(mode),
            Err(e) => return Err(e),
        }
    }

    let centered = per_mode
        .get(&ApproachMode::Centered)
        .map(|m| &m.bounds)
        .ok_or(AnalysisError::ModeUnavailable {
            mode: ApproachMode::Centered.as_str(),
            x,
        })?;
    let defect = centered.derivative_defect();
    let classification = if !centered.bounded {
        Classification::NotFuzzyDifferentiable
    } else if defect <= classical_tolerance(centered) {
        Classification::ClassicallyDifferentiable
    } else {
        Classification::FuzzyDifferentiable
    };

    Ok(DerivativeReport {
        function: f.label().to_string(),
        x,
        per_mode,
        unavailable_modes,
        defect,
        classification,
        continuity_defect: continuity_estimate(&ps),
        evaluations: ps.evaluations,
        budget_exhausted: ps.budget_exhausted,
    })
}

/// Largest defect still read as zero.
pub fn classical_tolerance(bounds: &QuotientBounds) -> f64 {
    bounds.resolution_tolerance()
}

fn analyse_mode(bounds: QuotientBounds, radii: &[f64]) -> ModeAnalysis {
    ModeAnalysis {
        defect: bounds.derivative_defect(),
        strong_sets: radii
            .iter()
            .map(|&r| RadiusSet {
                r,
                set: bounds.strong_set(r),
            })
            .collect(),
        weak_sets: radii
            .iter()
            .map(|&r| RadiusUnion {
                r,
                components: bounds.weak_set(r),
            })
            .collect(),
        bounds,
    }
}

/// `μ_x(z) = 1/(1 + m(x, z))` in `mode`; zero if the mode is unbounded or unavailable.
pub fn membership_mu(report: &DerivativeReport, mode: ApproachMode, z: f64) -> f64 {
    report.bounds(mode).map_or(0.0, |b| b.membership(z))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReportOp<'a> {
    Add(&'a DerivativeReport),
    Sub(&'a DerivativeReport),
    Scale(f64),
}

/// Envelope predicted for `f ± g` or `k·f` from the operands' envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedBounds {
    pub mode: ApproachMode,
    pub x: f64,
    #[serde(with = "crate::extended::nullable")]
    pub d_lower: f64,
    #[serde(with = "crate::extended::nullable")]
    pub d_upper: f64,
    /// Upper bound on the defect of the combination.
    #[serde(with = "crate::extended")]
    pub defect_bound: f64,
    pub bounded: bool,
}

impl PredictedBounds {
    /// `[D⁺ - r, D⁻ + r]` of the predicted envelope.
    pub fn strong_set(&self, r: f64) -> Interval {
        if !self.bounded {
            return Interval::Empty;
        }
        Interval::new(self.d_upper - r, self.d_lower + r)
    }

    /// Whether the direct envelope of the combined function lies inside the
    /// prediction, i.e. every predicted strong set is contained in the direct one.
    pub fn contains(&self, direct: &QuotientBounds, tol: f64) -> bool {
        !self.bounded
            || (direct.bounded
                && direct.d_lower >= self.d_lower - tol
                && direct.d_upper <= self.d_upper + tol)
    }
}

/// Predicts the envelope of a combination in `mode`. Sums add envelopes
/// (defects add), differences subtract the swapped envelope, and scaling by
/// `k` multiplies both ends (defect times `|k|`).
pub fn combine_reports(
    rf: &DerivativeReport,
    op: ReportOp<'_>,
    mode: ApproachMode,
) -> Result<PredictedBounds> {
    fn mode_of(r: &DerivativeReport, mode: ApproachMode) -> Result<&QuotientBounds> {
        r.bounds(mode).ok_or_else(|| {
            AnalysisError::ModeMismatch(format!(
                "{} analysis missing at x = {}",
                mode.as_str(),
                r.x
            ))
        })
    }
    let f = mode_of(rf, mode)?;
    let (d_lower, d_upper, defect_bound, bounded) = match op {
        ReportOp::Add(rg) | ReportOp::Sub(rg) => {
            if rg.x != rf.x {
                return Err(AnalysisError::ModeMismatch(format!(
                    "reports at different points {} and {}",
                    rf.x, rg.x
                )));
            }
            let g = mode_of(rg, mode)?;
            if f.degraded_to != g.degraded_to {
                return Err(AnalysisError::ModeMismatch(
                    "operands use different one-sided fallbacks".into(),
                ));
            }
            let (lo, hi) = match op {
                ReportOp::Add(_) => (f.d_lower + g.d_lower, f.d_upper + g.d_upper),
                _ => (f.d_lower - g.d_upper, f.d_upper - g.d_lower),
            };
            (
                lo,
                hi,
                f.derivative_defect() + g.derivative_defect(),
                f.bounded && g.bounded,
            )
        }
        ReportOp::Scale(k) => {
            if !k.is_finite() {
                return Err(AnalysisError::BadParameter {
                    name: "k",
                    expected: "finite",
                    value: k,
                });
            }
            let (a, b) = (k * f.d_lower, k * f.d_upper);
            (
                a.min(b),
                a.max(b),
                if f.bounded {
                    k.abs() * f.derivative_defect()
                } else {
                    f64::INFINITY
                },
                f.bounded,
            )
        }
    };
    Ok(PredictedBounds {
        mode,
        x: rf.x,
        d_lower,
        d_upper,
        defect_bound: if bounded { defect_bound } else { f64::INFINITY },
        bounded,
    })
}
