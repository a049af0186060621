//! Fuzzy limits of real sequences given as finite prefixes.
//!
//! A number `a` is an r-limit of a sequence when, for every `k > 0`, almost
//! all terms lie within `r + k` of `a`. For real sequences this reduces to a
//! statement about the upper and lower limits `S = limsup` and `s = liminf`:
//!
//! ```text
//! a is an r-limit  <=>  max(S - a, a - s) <= r
//! L_r              =    [S - r, s + r]      (empty when S - s > 2r)
//! ```
//!
//! Everything here works on a [`SequenceWindow`] (a materialized prefix), so
//! `S` and `s` are estimates. [`tail_bounds`] produces them together with the
//! diagnostics that say how far the estimate can be trusted.

use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, Result};
use crate::interval::Interval;

/// A finite prefix `a_start, a_start+1, ...` of a real sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceWindow {
    values: Vec<f64>,
    start_index: usize,
}

impl SequenceWindow {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_start(values, 1)
    }

    pub fn with_start(values: Vec<f64>, start_index: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(AnalysisError::EmptySequence);
        }
        if start_index < 1 {
            return Err(AnalysisError::BadStartIndex);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(AnalysisError::NonFinite { index, value });
        }
        Ok(SequenceWindow {
            values,
            start_index,
        })
    }

    /// Materializes `a_i = term(i)` for `i = 1..=len`.
    pub fn from_fn(len: usize, term: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((1..=len).map(term).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sequence index of the element at `pos` in the window.
    pub fn index_of(&self, pos: usize) -> usize {
        self.start_index + pos
    }

    /// `h_1, k_1, h_2, k_2, ...`, truncated to the shorter operand.
    pub fn interleave(h: &SequenceWindow, k: &SequenceWindow) -> Result<SequenceWindow> {
        let values = h
            .values
            .iter()
            .zip(&k.values)
            .flat_map(|(a, b)| [*a, *b])
            .collect();
        SequenceWindow::new(values)
    }

    /// The elements at the given window positions, in order.
    pub fn select(&self, positions: &[usize]) -> Result<SequenceWindow> {
        let values = positions
            .iter()
            .map(|&p| {
                self.values.get(p).copied().ok_or_else(|| {
                    AnalysisError::ShapeMismatch(format!("position {p} out of range"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SequenceWindow::new(values)
    }
}

/// Tail estimator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    /// Fraction of the prefix (from the end) used as the tail window.
    pub tail_fraction: f64,
    /// Relative stability tolerance, scaled by `max(1, |S|, |s|)`.
    pub tolerance: f64,
}

impl Default for TailConfig {
    fn default() -> Self {
        TailConfig {
            tail_fraction: 0.25,
            tolerance: 1e-9,
        }
    }
}

impl TailConfig {
    pub fn with_tail_fraction(mut self, tail_fraction: f64) -> Self {
        self.tail_fraction = tail_fraction;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// Estimated upper and lower limits of a sequence, with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBounds {
    /// Estimate of `limsup a_i` (written `S`).
    pub sup_estimate: f64,
    /// Estimate of `liminf a_i` (written `s`).
    pub inf_estimate: f64,
    /// Number of trailing elements in the tail window.
    pub window_size: usize,
    /// The trailing half of the window has the same extremes (within tolerance).
    pub stable: bool,
    /// False when the growth heuristic decided the sequence diverges.
    pub bounded: bool,
    /// Raw maximum over the tail window.
    pub window_max: f64,
    /// Raw minimum over the tail window.
    pub window_min: f64,
    /// `sup_estimate` comes from the power-law tail model rather than `window_max`.
    pub sup_extrapolated: bool,
    /// `inf_estimate` comes from the power-law tail model rather than `window_min`.
    pub inf_extrapolated: bool,
    pub tolerance: f64,
}

/// Minimal radius and centre of the r-limit sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    /// `(S - s) / 2`, or `+∞` for unbounded sequences.
    #[serde(with = "crate::extended")]
    pub measure: f64,
    /// `(S + s) / 2`, the only point that is a `measure`-limit.
    pub best_point: Option<f64>,
}

impl TailBounds {
    /// Absolute slack used in every `<= r` comparison.
    pub fn slack(&self) -> f64 {
        self.tolerance
            * 1f64
                .max(self.sup_estimate.abs())
                .max(self.inf_estimate.abs())
    }

    /// `m(a) = max(S - a, a - s)`, the smallest `r` for which `a` is an r-limit.
    ///
    /// `+∞` when the sequence is unbounded.
    pub fn limit_defect(&self, a: f64) -> f64 {
        if !self.bounded {
            return f64::INFINITY;
        }
        (self.sup_estimate - a).max(a - self.inf_estimate).max(0.0)
    }

    pub fn is_r_limit(&self, a: f64, r: f64) -> bool {
        self.bounded && self.limit_defect(a) <= r + self.slack()
    }

    /// `L_r = [S - r, s + r]`, or empty.
    pub fn r_limit_set(&self, r: f64) -> Interval {
        if !self.bounded {
            return Interval::Empty;
        }
        let lo = self.sup_estimate - r;
        let hi = self.inf_estimate + r;
        if lo <= hi {
            Interval::new(lo, hi)
        } else if lo - hi <= 2.0 * self.slack() {
            Interval::point(lo + (hi - lo) / 2.0)
        } else {
            Interval::Empty
        }
    }

    pub fn measure_of_convergence(&self) -> Convergence {
        if !self.bounded {
            return Convergence {
                measure: f64::INFINITY,
                best_point: None,
            };
        }
        let measure = ((self.sup_estimate - self.inf_estimate) / 2.0).max(0.0);
        let measure = if measure <= self.slack() {
            0.0
        } else {
            measure
        };
        Convergence {
            measure,
            best_point: Some(self.inf_estimate + (self.sup_estimate - self.inf_estimate) / 2.0),
        }
    }

    /// `S - s <= 2r`; equivalent to `r_limit_set(r)` being non-empty.
    pub fn is_r_fundamental(&self, r: f64) -> bool {
        self.bounded && self.sup_estimate - self.inf_estimate <= 2.0 * (r + self.slack())
    }

    /// Some r-limit exists. For real sequences that is just boundedness.
    pub fn fuzzy_converges(&self) -> bool {
        self.bounded
    }

    /// Membership of `a` in the fuzzy limit: `1 / (1 + m(a))`, `0` when unbounded.
    pub fn membership_lim(&self, a: f64) -> f64 {
        let m = self.limit_defect(a);
        if m.is_finite() {
            let m = if m <= self.slack() { 0.0 } else { m };
            1.0 / (1.0 + m)
        } else {
            0.0
        }
    }
}

/// Estimates `S` and `s` from the trailing `⌈tail_fraction·len⌉` elements.
///
/// When the window has not settled and the dyadic block extremes of the
/// whole prefix follow a clean power law `L + C·n^(-p)` (checked on five
/// blocks), the limit `L` of that model replaces the raw window extreme. This is what lets `{1/i}` report
/// `S = s = 0` rather than the last few terms.
pub fn tail_bounds(seq: &SequenceWindow, cfg: &TailConfig) -> Result<TailBounds> {
    if !(cfg.tail_fraction > 0.0 && cfg.tail_fraction <= 1.0) {
        return Err(AnalysisError::BadParameter {
            name: "tail_fraction",
            expected: "in (0, 1]",
            value: cfg.tail_fraction,
        });
    }
    if cfg.tolerance.is_nan() || cfg.tolerance < 0.0 {
        return Err(AnalysisError::BadParameter {
            name: "tolerance",
            expected: "nonnegative",
            value: cfg.tolerance,
        });
    }
    let n = seq.len();
    let window_size = ((cfg.tail_fraction * n as f64).ceil() as usize).min(n);
    if window_size < 2 {
        return Err(AnalysisError::TailTooShort {
            available: window_size,
        });
    }
    let values = seq.values();
    let window = &values[n - window_size..];
    let half = &window[window_size - window_size.div_ceil(2)..];
    let (window_min, window_max) = min_max(window);
    let (half_min, half_max) = min_max(half);

    let scale = 1f64.max(window_max.abs()).max(window_min.abs());
    let stable = (window_max - half_max).abs() <= cfg.tolerance * scale
        && (window_min - half_min).abs() <= cfg.tolerance * scale;

    let bounded = !growth_detected(values, window_max - window_min, cfg.tolerance);

    // a settled window is reported as observed; the model only fills in
    // tails that are still moving
    let model = |side| {
        if stable {
            None
        } else {
            extrapolate_envelope(values, seq.start_index(), side)
        }
    };
    let (upper, lower) = (model(Side::Upper), model(Side::Lower));
    let (mut sup, mut inf) = (upper.unwrap_or(window_max), lower.unwrap_or(window_min));
    let (mut sup_extrapolated, mut inf_extrapolated) = (upper.is_some(), lower.is_some());
    if sup < inf {
        let tie = 2.0 * cfg.tolerance * 1f64.max(sup.abs()).max(inf.abs());
        if inf - sup <= tie {
            let mid = inf + (sup - inf) / 2.0;
            sup = mid;
            inf = mid;
        } else {
            // the two models disagree; fall back to what was observed
            sup = window_max;
            inf = window_min;
            sup_extrapolated = false;
            inf_extrapolated = false;
        }
    }

    Ok(TailBounds {
        sup_estimate: sup,
        inf_estimate: inf,
        window_size,
        stable,
        bounded,
        window_max,
        window_min,
        sup_extrapolated,
        inf_extrapolated,
        tolerance: cfg.tolerance,
    })
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Upper,
    Lower,
}

/// Growth heuristic: the running max (or min) over the nested prefixes of
/// length `N, N/2, N/4, N/8` keeps moving outward, by steps that do not shrink
/// from one doubling to the next, and the latest step is large compared to the
/// spread of the tail window.
fn growth_detected(values: &[f64], window_spread: f64, tolerance: f64) -> bool {
    const MIN_LEN: usize = 16;
    const STEP_RATIO: f64 = 0.9;
    if values.len() < MIN_LEN {
        return false;
    }
    let n = values.len();
    let prefix_extreme = |len: usize, side: Side| -> f64 {
        let (lo, hi) = min_max(&values[..len]);
        match side {
            Side::Upper => hi,
            Side::Lower => -lo,
        }
    };
    [Side::Upper, Side::Lower].into_iter().any(|side| {
        let m: Vec<f64> = (0..4).map(|j| prefix_extreme(n >> j, side)).collect();
        let steps = [m[0] - m[1], m[1] - m[2], m[2] - m[3]];
        let scale = 1f64.max(m[0].abs());
        steps.iter().all(|&d| d > 0.0)
            && steps[0] >= STEP_RATIO * steps[1]
            && steps[1] >= STEP_RATIO * steps[2]
            && steps[0] > tolerance * scale
            && steps[0] >= 0.5 * window_spread
    })
}

/// Fits `E(n) = L + C·n^(-p)` to the extremes of the dyadic blocks
/// `(N/2, N], (N/4, N/2], (N/8, N/4]` and returns `L` when the two older
/// blocks `(N/32, N/8]` agree with the fit.
fn extrapolate_envelope(values: &[f64], start_index: usize, side: Side) -> Option<f64> {
    const BLOCKS: usize = 5;
    const MIN_LEN: usize = 64;
    const FIT_TOLERANCE: f64 = 0.05;
    let n = values.len();
    if n < MIN_LEN {
        return None;
    }
    // (extreme value, sequence index where it is attained), newest block first
    let mut points = Vec::with_capacity(BLOCKS);
    for j in 0..BLOCKS {
        let (from, to) = (n >> (j + 1), n >> j);
        let (pos, value) = values[from..to].iter().enumerate().fold(
            None,
            |best: Option<(usize, f64)>, (p, &v)| match (best, side) {
                (None, _) => Some((p, v)),
                (Some((_, b)), Side::Upper) if v > b => Some((p, v)),
                (Some((_, b)), Side::Lower) if v < b => Some((p, v)),
                (keep, _) => keep,
            },
        )?;
        points.push((value, (start_index + from + pos) as f64));
    }

    let diffs: Vec<f64> = points.windows(2).map(|w| w[0].0 - w[1].0).collect();
    let scale = points.iter().fold(1f64, |m, p| m.max(p.0.abs()));
    let negligible = 64.0 * f64::EPSILON * scale;
    if diffs.iter().any(|d| d.abs() <= negligible) {
        return None;
    }
    if !diffs.iter().all(|d| d.signum() == diffs[0].signum()) {
        return None;
    }
    let target = diffs[0] / diffs[1];
    if !(target > 0.0 && target < 1.0) {
        return None;
    }

    let (n0, n1, n2) = (points[0].1, points[1].1, points[2].1);
    let ratio = |p: f64| (n0.powf(-p) - n1.powf(-p)) / (n1.powf(-p) - n2.powf(-p));
    let (mut lo, mut hi) = (0.05_f64, 8.0_f64);
    let (r_lo, r_hi) = (ratio(lo), ratio(hi));
    // ratio(p) decreases in p
    if !(target <= r_lo && target >= r_hi) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let p = 0.5 * (lo + hi);
    let c = diffs[0] / (n0.powf(-p) - n1.powf(-p));
    let limit = points[0].0 - c * n0.powf(-p);

    let fits = points[3..].iter().all(|&(value, index)| {
        let predicted = limit + c * index.powf(-p);
        (predicted - value).abs() <= FIT_TOLERANCE * (value - limit).abs() + negligible
    });
    if fits && limit.is_finite() {
        Some(limit)
    } else {
        None
    }
}

/// Requested r-limit set for one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusSet {
    pub r: f64,
    pub set: Interval,
}

/// Everything known about the fuzzy limits of one prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub bounds: TailBounds,
    #[serde(with = "crate::extended")]
    pub measure_of_convergence: f64,
    pub best_point: Option<f64>,
    pub requested_sets: Vec<RadiusSet>,
}

pub fn analyze(seq: &SequenceWindow, cfg: &TailConfig, radii: &[f64]) -> Result<LimitReport> {
    for &r in radii {
        check_radius(r)?;
    }
    let bounds = tail_bounds(seq, cfg)?;
    let conv = bounds.measure_of_convergence();
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    Ok(LimitReport {
        bounds,
        measure_of_convergence: conv.measure,
        best_point: conv.best_point,
        requested_sets: sorted
            .into_iter()
            .map(|r| RadiusSet {
                r,
                set: bounds.r_limit_set(r),
            })
            .collect(),
    })
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(AnalysisError::BadParameter {
            name: "r",
            expected: "a finite nonnegative number",
            value: r,
        })
    }
}

/// Element-wise operation for [`combine`].
#[derive(Debug, Clone, Copy)]
pub enum Combination<'a> {
    Add(&'a SequenceWindow),
    Sub(&'a SequenceWindow),
    Scale(f64),
}

/// The combined sequence and the limit set predicted from the operands.
#[derive(Debug, Clone, PartialEq)]
pub struct Combined {
    pub sequence: SequenceWindow,
    /// Radius of the predicted set: `r + q`, or `|k|·r` for scaling.
    pub radius: f64,
    /// Minkowski combination of `L_r(l)` and `L_q(h)` (or `k·L_r(l)`).
    pub predicted: Interval,
}

impl Combined {
    /// The combined sequence's own set at the predicted radius.
    pub fn actual(&self, cfg: &TailConfig) -> Result<Interval> {
        Ok(tail_bounds(&self.sequence, cfg)?.r_limit_set(self.radius))
    }
}

/// Sum, difference or scaling of sequences together with the predicted
/// limit set: if `a` is an r-limit of `l` and `b` a q-limit of `h`, then
/// `a ± b` is an `(r + q)`-limit of `l ± h` and `k·a` a `|k|·r`-limit of `k·l`.
pub fn combine(
    l: &SequenceWindow,
    op: Combination<'_>,
    r: f64,
    q: f64,
    cfg: &TailConfig,
) -> Result<Combined> {
    check_radius(r)?;
    check_radius(q)?;
    let lhs = tail_bounds(l, cfg)?.r_limit_set(r);
    let (values, radius, predicted) = match op {
        Combination::Add(h) | Combination::Sub(h) => {
            if h.len() != l.len() || h.start_index() != l.start_index() {
                return Err(AnalysisError::ShapeMismatch(format!(
                    "lengths {} and {}, start indices {} and {}",
                    l.len(),
                    h.len(),
                    l.start_index(),
                    h.start_index()
                )));
            }
            let rhs = tail_bounds(h, cfg)?.r_limit_set(q);
            let sign = if matches!(op, Combination::Add(_)) {
                1.0
            } else {
                -1.0
            };
            let values = l
                .values()
                .iter()
                .zip(h.values())
                .map(|(a, b)| a + sign * b)
                .collect();
            (values, r + q, lhs + rhs.scale(sign))
        }
        Combination::Scale(k) => {
            if !k.is_finite() {
                return Err(AnalysisError::BadParameter {
                    name: "k",
                    expected: "finite",
                    value: k,
                });
            }
            let values = l.values().iter().map(|a| k * a).collect();
            (values, k.abs() * r, lhs.scale(k))
        }
    };
    Ok(Combined {
        sequence: SequenceWindow::with_start(values, l.start_index())?,
        radius,
        predicted,
    })
}
