//! Difference-quotient sampling and envelope estimation at a point.
//!
//! For each approach mode the quotients are sampled on a [`ScaleLadder`],
//! grouped into bands of consecutive scales, and the extreme subsequential
//! limits `D⁻ = liminf` and `D⁺ = limsup` are read off the finest bands.
//! When the band envelopes settle or shrink linearly with the scale, they
//! are extrapolated to scale zero, which removes the `O(h)` bias of smooth
//! functions without touching genuine kinks.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ladder::{ScaleLadder, Scales};
use super::oracle::{Budgeted, FunctionOracle};
use crate::error::{AnalysisError, Result};
use crate::interval::{merge_intervals, Interval};
use crate::sequence_limits::check_radius;

/// Mixing ratios for straddling pairs: `x - λs < x < x + (1-λ)s`.
pub const MIXING_RATIOS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

/// Relative agreement required between the two finest bands.
pub const STABILITY_TOLERANCE: f64 = 1e-6;

/// Largest `|f(y) - f(x)|` (relative to `max(1, |f(x)|)`) still read as continuity.
pub const CONTINUITY_TOLERANCE: f64 = 1e-6;

/// Which sequences `x_i -> x` a derivative quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproachMode {
    /// Any sequence converging to `x`.
    Centered,
    /// `x_i < x`.
    Left,
    /// `x_i > x`.
    Right,
    /// Straddling pairs `z_i < x < x_i`, quotient taken between the pair.
    TwoSided,
}

impl ApproachMode {
    pub const ALL: [ApproachMode; 4] = [
        ApproachMode::Centered,
        ApproachMode::Left,
        ApproachMode::Right,
        ApproachMode::TwoSided,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ApproachMode::Centered => "centered",
            ApproachMode::Left => "left",
            ApproachMode::Right => "right",
            ApproachMode::TwoSided => "two_sided",
        }
    }
}

impl FromStr for ApproachMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "centered" | "centred" => Ok(ApproachMode::Centered),
            "left" => Ok(ApproachMode::Left),
            "right" => Ok(ApproachMode::Right),
            "two-sided" | "two_sided" | "twosided" => Ok(ApproachMode::TwoSided),
            other => Err(format!(
                "unknown approach mode `{other}` (expected centered, left, right or two-sided)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "side", rename_all = "snake_case")]
pub enum SampleKind {
    Left,
    Right,
    Straddle { lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientSample {
    /// Actual distance between the two abscissae.
    pub scale: f64,
    /// Ladder level the sample belongs to (0 = coarsest).
    pub level: usize,
    pub quotient: f64,
    pub kind: SampleKind,
    /// `f(y) - f(x)` for one-sided samples.
    pub increment: Option<f64>,
}

/// Raw quotient samples for one mode at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSamples {
    pub x: f64,
    pub center_value: f64,
    pub samples: Vec<QuotientSample>,
    pub scales: Scales,
    pub budget_exhausted: bool,
    pub domain_clipped: bool,
    pub evaluations: usize,
}

/// Band envelope of the quotients at one band of scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleBand {
    /// Largest step in the band.
    pub scale: f64,
    pub band_min: f64,
    pub band_max: f64,
}

/// Quotient envelopes for one approach mode at `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientBounds {
    pub mode: ApproachMode,
    pub x: f64,
    /// Estimated `liminf` of the quotients (`D⁻`).
    #[serde(with = "crate::extended::nullable")]
    pub d_lower: f64,
    /// Estimated `limsup` of the quotients (`D⁺`).
    #[serde(with = "crate::extended::nullable")]
    pub d_upper: f64,
    pub left_cluster: Interval,
    pub right_cluster: Interval,
    pub bounded: bool,
    pub stable: bool,
    /// Clusters are reported as `[band liminf, band limsup]`, which is exact
    /// when the one-sided quotient is continuous in the step and an
    /// over-approximation otherwise.
    pub cluster_is_hull: bool,
    /// Envelopes were extrapolated to zero scale.
    pub extrapolated: bool,
    /// Only one side of `x` is in the domain, so this mode fell back to it.
    pub degraded_to: Option<ApproachMode>,
    /// Rounding level of the finest quotients; set comparisons allow this slack.
    pub noise_floor: f64,
    pub scale_diagnostics: Vec<ScaleBand>,
    pub smallest_scale: f64,
    pub mesh_limited: bool,
    pub budget_exhausted: bool,
    pub domain_clipped: bool,
}

impl QuotientBounds {
    /// Strong r-derivatives: `[D⁺ - r, D⁻ + r]`, or empty.
    pub fn strong_set(&self, r: f64) -> Interval {
        if !self.bounded {
            return Interval::Empty;
        }
        let lo = self.d_upper - r;
        let hi = self.d_lower + r;
        if lo <= hi {
            Interval::new(lo, hi)
        } else if lo - hi <= 2.0 * self.noise_floor {
            Interval::point(lo + (hi - lo) / 2.0)
        } else {
            Interval::Empty
        }
    }

    /// Weak r-derivatives as a union of closed intervals: the cluster sets
    /// inflated by `r`, merged where they overlap.
    /// Components closer than the resolution tolerance are joined.
    pub fn weak_set(&self, r: f64) -> Vec<Interval> {
        let parts = match self.mode {
            ApproachMode::TwoSided => {
                let hull = self.left_cluster.hull(&self.right_cluster);
                merge_intervals([hull.inflate(r)])
            }
            _ => merge_intervals([self.left_cluster.inflate(r), self.right_cluster.inflate(r)]),
        };
        let tol = self.resolution_tolerance();
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match (out.last_mut(), p.bounds()) {
                (Some(last), Some((lo, _))) if last.hi().is_some_and(|h| lo - h <= tol) => {
                    *last = last.hull(&p);
                }
                _ => out.push(p),
            }
        }
        out
    }

    /// Differences below this are indistinguishable from zero.
    pub fn resolution_tolerance(&self) -> f64 {
        let center = if self.center().is_finite() {
            self.center()
        } else {
            0.0
        };
        (STABILITY_TOLERANCE * (1.0 + center.abs())).max(self.noise_floor)
    }

    /// `(D⁺ - D⁻) / 2`, the least r with a strong r-derivative; `+∞` when unbounded.
    pub fn derivative_defect(&self) -> f64 {
        if self.bounded {
            ((self.d_upper - self.d_lower) / 2.0).max(0.0)
        } else {
            f64::INFINITY
        }
    }

    /// `m(z) = max(D⁺ - z, z - D⁻)`: least r with `z` a strong r-derivative.
    pub fn min_radius_for(&self, z: f64) -> f64 {
        if !self.bounded {
            return f64::INFINITY;
        }
        let m = (self.d_upper - z).max(z - self.d_lower).max(0.0);
        if m <= self.noise_floor {
            0.0
        } else {
            m
        }
    }

    /// `μ(z) = 1 / (1 + m(z))`; zero when the quotients are unbounded.
    pub fn membership(&self, z: f64) -> f64 {
        let m = self.min_radius_for(z);
        if m.is_finite() {
            1.0 / (1.0 + m)
        } else {
            0.0
        }
    }

    /// Midpoint of the envelope, the classical derivative when the defect is zero.
    pub fn center(&self) -> f64 {
        self.d_lower + (self.d_upper - self.d_lower) / 2.0
    }
}

/// Everything sampled at one point, shared by the four modes.
pub(crate) struct PointSamples {
    pub x: f64,
    pub fx: f64,
    pub scales: Scales,
    pub left: Option<Vec<QuotientSample>>,
    pub right: Option<Vec<QuotientSample>>,
    pub straddle: Option<Vec<QuotientSample>>,
    /// One-sided samples on the unrestricted ladder, taken when the quotient
    /// ladder is mesh-limited; values stay meaningful below the mesh.
    pub continuity: Option<(Scales, Vec<QuotientSample>)>,
    pub budget_exhausted: bool,
    pub domain_clipped: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Wanted {
    pub left: bool,
    pub right: bool,
    pub straddle: bool,
}

impl Wanted {
    pub(crate) fn all() -> Self {
        Wanted {
            left: true,
            right: true,
            straddle: true,
        }
    }

    fn for_mode(mode: ApproachMode) -> Self {
        match mode {
            ApproachMode::Left => Wanted {
                left: true,
                right: false,
                straddle: false,
            },
            ApproachMode::Right => Wanted {
                left: false,
                right: true,
                straddle: false,
            },
            ApproachMode::Centered => Wanted {
                left: true,
                right: true,
                straddle: false,
            },
            ApproachMode::TwoSided => Wanted::all(),
        }
    }
}

pub(crate) fn collect_samples(
    f: &FunctionOracle,
    x: f64,
    ladder: &ScaleLadder,
    wanted: Wanted,
) -> Result<PointSamples> {
    ladder.validate()?;
    let domain = f.domain();
    if !x.is_finite() || !domain.contains(x) {
        return Err(AnalysisError::OutsideDomain {
            x,
            domain: domain.to_string(),
        });
    }
    let ev = Budgeted::new(f);
    let scales = ladder.scales_at(x, f.resolution_at(x));
    let fx = ev.eval(x).ok_or(AnalysisError::BadParameter {
        name: "eval_budget",
        expected: "at least one evaluation",
        value: 0.0,
    })?;
    let finest = scales.finest();
    let has_left = domain.contains(x - finest);
    let has_right = domain.contains(x + finest);

    let left =
        (wanted.left && has_left).then(|| sample_side(&ev, x, fx, &scales, SampleKind::Left));
    let right =
        (wanted.right && has_right).then(|| sample_side(&ev, x, fx, &scales, SampleKind::Right));
    let straddle =
        (wanted.straddle && has_left && has_right).then(|| sample_straddle(&ev, x, &scales));
    let continuity = scales.mesh_limited.then(|| {
        let fine = ladder.scales_at(x, None);
        let mut samples = Vec::new();
        for (kind, present) in [(SampleKind::Left, has_left), (SampleKind::Right, has_right)] {
            if present {
                samples.extend(sample_side(&ev, x, fx, &fine, kind));
            }
        }
        (fine, samples)
    });

    Ok(PointSamples {
        x,
        fx,
        scales,
        left,
        right,
        straddle,
        continuity,
        budget_exhausted: ev.exhausted(),
        domain_clipped: ev.clipped(),
        evaluations: ev.used(),
    })
}

fn sample_side(
    ev: &Budgeted<'_>,
    x: f64,
    fx: f64,
    scales: &Scales,
    kind: SampleKind,
) -> Vec<QuotientSample> {
    let domain = ev.oracle().domain();
    let mut out = Vec::with_capacity(scales.steps.len());
    for (level, &h) in scales.steps.iter().enumerate() {
        let y = match kind {
            SampleKind::Right => x + h,
            _ => x - h,
        };
        if !domain.contains(y) {
            ev.eval(y);
            continue;
        }
        // the representable step, not the nominal one
        let step = y - x;
        if step == 0.0 {
            continue;
        }
        let Some(fy) = ev.eval(y) else { break };
        out.push(QuotientSample {
            scale: step.abs(),
            level,
            quotient: (fy - fx) / step,
            kind,
            increment: Some(fy - fx),
        });
    }
    out
}

fn sample_straddle(ev: &Budgeted<'_>, x: f64, scales: &Scales) -> Vec<QuotientSample> {
    let domain = ev.oracle().domain();
    let mut out = Vec::with_capacity(scales.steps.len() * MIXING_RATIOS.len());
    'scales: for (level, &s) in scales.steps.iter().enumerate() {
        for &lambda in &MIXING_RATIOS {
            let z = x - lambda * s;
            let w = x + (1.0 - lambda) * s;
            if !(z < x && x < w) {
                continue;
            }
            if !domain.contains(z) || !domain.contains(w) {
                ev.eval(if domain.contains(z) { w } else { z });
                continue;
            }
            let (Some(fz), Some(fw)) = (ev.eval(z), ev.eval(w)) else {
                break 'scales;
            };
            out.push(QuotientSample {
                scale: w - z,
                level,
                quotient: (fw - fz) / (w - z),
                kind: SampleKind::Straddle { lambda },
                increment: None,
            });
        }
    }
    out
}

/// Raw samples for one mode: one-sided quotients for Left/Right, both sides
/// for Centered, straddling quotients for TwoSided. At a domain endpoint
/// Centered and TwoSided fall back to the side that exists.
pub fn quotient_samples(
    f: &FunctionOracle,
    x: f64,
    mode: ApproachMode,
    ladder: &ScaleLadder,
) -> Result<QuotientSamples> {
    let ps = collect_samples(f, x, ladder, Wanted::for_mode(mode))?;
    let mut samples = match mode {
        ApproachMode::Left => required(ps.left.clone(), mode, x)?,
        ApproachMode::Right => required(ps.right.clone(), mode, x)?,
        ApproachMode::Centered | ApproachMode::TwoSided => {
            let straddle = if mode == ApproachMode::TwoSided {
                ps.straddle.clone()
            } else {
                None
            };
            match straddle {
                Some(s) => s,
                None => {
                    let mut both = ps.left.clone().unwrap_or_default();
                    both.extend(ps.right.clone().unwrap_or_default());
                    if both.is_empty() {
                        return Err(unavailable(mode, x));
                    }
                    both
                }
            }
        }
    };
    samples.sort_by(|a, b| b.scale.total_cmp(&a.scale));
    Ok(QuotientSamples {
        x,
        center_value: ps.fx,
        samples,
        scales: ps.scales,
        budget_exhausted: ps.budget_exhausted,
        domain_clipped: ps.domain_clipped,
        evaluations: ps.evaluations,
    })
}

fn required(
    v: Option<Vec<QuotientSample>>,
    mode: ApproachMode,
    x: f64,
) -> Result<Vec<QuotientSample>> {
    v.filter(|s| !s.is_empty())
        .ok_or_else(|| unavailable(mode, x))
}

fn unavailable(mode: ApproachMode, x: f64) -> AnalysisError {
    AnalysisError::ModeUnavailable {
        mode: mode.as_str(),
        x,
    }
}

/// Envelope summary of one family of quotients.
#[derive(Debug, Clone)]
struct Summary {
    /// `(band, lo, hi)`, finest band first; bands without samples skipped.
    bands: Vec<(usize, f64, f64)>,
    cluster: Interval,
    bounded: bool,
    stable: bool,
    extrapolated: bool,
}

impl Summary {
    fn empty() -> Self {
        Summary {
            bands: Vec::new(),
            cluster: Interval::Empty,
            bounded: false,
            stable: false,
            extrapolated: false,
        }
    }
}

fn summarize<'a>(
    quotients: impl IntoIterator<Item = (usize, f64)> + 'a,
    scales: &Scales,
    growth_floor: f64,
) -> Summary {
    let mut per_band: Vec<Option<(f64, f64)>> = vec![None; scales.band_count()];
    let mut finite = true;
    for (level, q) in quotients {
        if !q.is_finite() {
            finite = false;
            continue;
        }
        if let Some(b) = scales.band_of(level) {
            per_band[b] = Some(match per_band[b] {
                Some((lo, hi)) => (lo.min(q), hi.max(q)),
                None => (q, q),
            });
        }
    }
    let bands: Vec<(usize, f64, f64)> = per_band
        .iter()
        .enumerate()
        .filter_map(|(b, e)| e.map(|(lo, hi)| (b, lo, hi)))
        .collect();
    if bands.is_empty() {
        return Summary::empty();
    }

    let take = scales.fine_bands.min(bands.len());
    let fine = bands[..take]
        .iter()
        .fold(Interval::Empty, |acc, &(_, lo, hi)| {
            acc.hull(&Interval::new(lo, hi))
        });

    // growth across three band transitions; fewer is too little evidence,
    // and only resolution-limited ladders have fewer than four bands
    let magnitude = |&(_, lo, hi): &(usize, f64, f64)| f64::max(lo.abs(), hi.abs());
    let mags: Vec<f64> = bands.iter().map(magnitude).collect();
    let growing =
        mags.len() >= 4 && mags[0] > growth_floor && (0..3).all(|j| mags[j] >= 2.0 * mags[j + 1]);
    let bounded = finite && !growing;

    let change = |a: &(usize, f64, f64), b: &(usize, f64, f64)| {
        f64::max((a.1 - b.1).abs(), (a.2 - b.2).abs())
    };
    let (mut cluster, mut stable, mut extrapolated) = (fine, bands.len() == 1, false);
    if bands.len() >= 2 {
        let c01 = change(&bands[0], &bands[1]);
        let scale = 1.0 + mags[0];
        let settled = c01 <= STABILITY_TOLERANCE * scale;
        let converging =
            bands.len() >= 3 && c01 > 0.0 && c01 <= 0.25 * change(&bands[1], &bands[2]);
        stable = settled || converging;
        if stable && bounded {
            // linear in the band scale, evaluated at zero
            let (b0, lo0, hi0) = bands[0];
            let (b1, lo1, hi1) = bands[1];
            let (h0, h1) = (scales.band_scale(b0), scales.band_scale(b1));
            let t = h0 / (h1 - h0);
            let mut lo = lo0 - (lo1 - lo0) * t;
            let mut hi = hi0 - (hi1 - hi0) * t;
            if lo > hi {
                let mid = lo + (hi - lo) / 2.0;
                lo = mid;
                hi = mid;
            }
            cluster = Interval::new(lo, hi);
            extrapolated = true;
        }
    }
    Summary {
        bands,
        cluster,
        bounded,
        stable,
        extrapolated,
    }
}

type LevelQuotients = Vec<(usize, f64)>;

fn level_quotients(samples: &[QuotientSample]) -> impl Iterator<Item = (usize, f64)> + '_ {
    samples.iter().map(|s| (s.level, s.quotient))
}

/// Per scale, extrapolates the straddling quotient linearly in `λ` from the
/// two outermost ratios to `λ -> 0` (right-type) and `λ -> 1` (left-type).
fn straddle_endpoints(samples: &[QuotientSample]) -> (LevelQuotients, LevelQuotients) {
    let (lo_ratio, hi_ratio) = (MIXING_RATIOS[0], MIXING_RATIOS[MIXING_RATIOS.len() - 1]);
    let mut right_type = Vec::new();
    let mut left_type = Vec::new();
    let find = |level: usize, lambda: f64| {
        samples.iter().find_map(|s| match s.kind {
            SampleKind::Straddle { lambda: l } if s.level == level && l == lambda => {
                Some(s.quotient)
            }
            _ => None,
        })
    };
    let mut levels: Vec<usize> = samples.iter().map(|s| s.level).collect();
    levels.dedup();
    for level in levels {
        if let (Some(q_lo), Some(q_hi)) = (find(level, lo_ratio), find(level, hi_ratio)) {
            let slope = (q_hi - q_lo) / (hi_ratio - lo_ratio);
            right_type.push((level, q_lo - slope * lo_ratio));
            left_type.push((level, q_hi + slope * (1.0 - hi_ratio)));
        }
    }
    (right_type, left_type)
}

/// Zero-scale estimate of `limsup |f(y) - f(x)|` from the one-sided samples.
pub(crate) fn continuity_estimate(ps: &PointSamples) -> f64 {
    let (scales, samples): (&Scales, Vec<&QuotientSample>) = match &ps.continuity {
        Some((fine, samples)) => (fine, samples.iter().collect()),
        None => (
            &ps.scales,
            ps.left.iter().chain(ps.right.iter()).flatten().collect(),
        ),
    };
    let mut per_band: Vec<Option<f64>> = vec![None; scales.band_count()];
    for s in samples {
        if let (Some(b), Some(inc)) = (scales.band_of(s.level), s.increment) {
            let v = inc.abs();
            per_band[b] = Some(per_band[b].map_or(v, |m: f64| m.max(v)));
        }
    }
    let bands: Vec<(usize, f64)> = per_band
        .iter()
        .enumerate()
        .filter_map(|(b, v)| v.map(|v| (b, v)))
        .collect();
    match bands.as_slice() {
        [] => 0.0,
        [(_, c)] => *c,
        [(b0, c0), (b1, c1), ..] => {
            if !c0.is_finite() || !c1.is_finite() {
                return f64::INFINITY;
            }
            let (h0, h1) = (scales.band_scale(*b0), scales.band_scale(*b1));
            let estimate = c0 - (c1 - c0) * h0 / (h1 - h0);
            estimate.clamp(0.0, *c0)
        }
    }
}

fn diagnostics(summary: &Summary, scales: &Scales) -> Vec<ScaleBand> {
    summary
        .bands
        .iter()
        .map(|&(b, lo, hi)| ScaleBand {
            scale: scales.band_scale(b),
            band_min: lo,
            band_max: hi,
        })
        .collect()
}

fn pooled(a: &Summary, b: &Summary) -> Summary {
    let mut bands = a.bands.clone();
    for &(band, lo, hi) in &b.bands {
        match bands.iter_mut().find(|e| e.0 == band) {
            Some(e) => {
                e.1 = e.1.min(lo);
                e.2 = e.2.max(hi);
            }
            None => bands.push((band, lo, hi)),
        }
    }
    bands.sort_by_key(|e| e.0);
    Summary {
        bands,
        cluster: a.cluster.hull(&b.cluster),
        bounded: a.bounded && b.bounded,
        stable: a.stable && b.stable,
        extrapolated: a.extrapolated || b.extrapolated,
    }
}

/// Derives the envelopes of one mode from shared samples.
pub(crate) fn bounds_for(ps: &PointSamples, mode: ApproachMode) -> Result<QuotientBounds> {
    let scales = &ps.scales;
    let fmag = 1f64.max(ps.fx.abs());
    let finest = scales.finest();
    let noise_floor = 64.0 * f64::EPSILON * fmag / finest;
    let growth_floor = 1e3 * f64::EPSILON * fmag / finest;
    let side = |s: &Option<Vec<QuotientSample>>| {
        s.as_deref()
            .filter(|v| !v.is_empty())
            .map(|v| summarize(level_quotients(v), scales, growth_floor))
    };
    let left = side(&ps.left);
    let right = side(&ps.right);

    let effective = match (mode, left.is_some(), right.is_some()) {
        (ApproachMode::Left, false, _) | (ApproachMode::Right, _, false) => {
            return Err(unavailable(mode, ps.x));
        }
        (ApproachMode::Centered | ApproachMode::TwoSided, false, false) => {
            return Err(unavailable(mode, ps.x));
        }
        (ApproachMode::Centered | ApproachMode::TwoSided, true, false) => ApproachMode::Left,
        (ApproachMode::Centered | ApproachMode::TwoSided, false, true) => ApproachMode::Right,
        (m, _, _) => m,
    };
    let degraded_to = (effective != mode).then_some(effective);

    let clusters = |s: &Summary| {
        if s.bounded {
            s.cluster
        } else {
            Interval::Empty
        }
    };
    let (summary, left_cluster, right_cluster) = match effective {
        ApproachMode::Left => {
            let l = left.expect("left side present");
            let c = clusters(&l);
            (l, c, Interval::Empty)
        }
        ApproachMode::Right => {
            let r = right.expect("right side present");
            let c = clusters(&r);
            (r, Interval::Empty, c)
        }
        ApproachMode::Centered => {
            let (l, r) = (left.expect("left"), right.expect("right"));
            let (lc, rc) = (clusters(&l), clusters(&r));
            (pooled(&l, &r), lc, rc)
        }
        ApproachMode::TwoSided => {
            let (l, r) = (left.expect("left"), right.expect("right"));
            let straddle = ps.straddle.as_deref().unwrap_or(&[]);
            if straddle.is_empty() {
                return Err(unavailable(mode, ps.x));
            }
            let direct = summarize(level_quotients(straddle), scales, growth_floor);
            let continuous = continuity_estimate(ps) <= CONTINUITY_TOLERANCE * fmag;
            if continuous {
                // straddling quotients are convex mixtures of one-sided ones,
                // and pairs with λ -> 0 or 1 reach each side's extremes
                let (lc, rc) = (clusters(&l), clusters(&r));
                let mut sides = pooled(&l, &r);
                sides.bounded &= direct.bounded;
                (sides, lc, rc)
            } else {
                let (right_type, left_type) = straddle_endpoints(straddle);
                let rt = summarize(right_type, scales, growth_floor);
                let lt = summarize(left_type, scales, growth_floor);
                let (lc, rc) = (clusters(&lt), clusters(&rt));
                let mut all = pooled(&pooled(&direct, &lt), &rt);
                all.cluster = direct.cluster.hull(&lt.cluster).hull(&rt.cluster);
                (all, lc, rc)
            }
        }
    };

    let (d_lower, d_upper) = if summary.bounded {
        summary.cluster.bounds().unwrap_or((f64::NAN, f64::NAN))
    } else {
        // measured, not a limit; reported for diagnostics only
        summary.bands[..scales.fine_bands.min(summary.bands.len())]
            .iter()
            .fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), &(_, a, b)| (lo.min(a), hi.max(b)),
            )
    };

    Ok(QuotientBounds {
        mode,
        x: ps.x,
        d_lower,
        d_upper,
        left_cluster,
        right_cluster,
        bounded: summary.bounded,
        stable: summary.stable,
        cluster_is_hull: true,
        extrapolated: summary.extrapolated,
        degraded_to,
        noise_floor,
        scale_diagnostics: diagnostics(&summary, scales),
        smallest_scale: finest,
        mesh_limited: scales.mesh_limited,
        budget_exhausted: ps.budget_exhausted,
        domain_clipped: ps.domain_clipped,
    })
}

/// `D⁻`, `D⁺` and the per-side clusters of the quotients in `mode` at `x`.
pub fn dini_bounds(
    f: &FunctionOracle,
    x: f64,
    mode: ApproachMode,
    ladder: &ScaleLadder,
) -> Result<QuotientBounds> {
    let ps = collect_samples(f, x, ladder, Wanted::for_mode(mode))?;
    bounds_for(&ps, mode)
}

/// `[D⁺ - r, D⁻ + r]` or empty.
pub fn strong_set(bounds: &QuotientBounds, r: f64) -> Result<Interval> {
    check_radius(r)?;
    Ok(bounds.strong_set(r))
}

pub fn weak_set(bounds: &QuotientBounds, r: f64) -> Result<Vec<Interval>> {
    check_radius(r)?;
    Ok(bounds.weak_set(r))
}

pub fn derivative_defect(bounds: &QuotientBounds) -> f64 {
    bounds.derivative_defect()
}
