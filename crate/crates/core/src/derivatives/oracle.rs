use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use crate::error::{AnalysisError, Result};
use crate::interval::Interval;

/// Default number of evaluations one analysis call may spend.
pub const DEFAULT_EVAL_BUDGET: usize = 100_000;

/// Smallest step size at which an oracle still represents the function it
/// stands for.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    /// Any step the ladder asks for is meaningful.
    Exact,
    /// Steps below this size are not meaningful anywhere.
    Floor(f64),
    /// Sampled data: sorted abscissae; the local spacing is the floor.
    Mesh(Arc<[f64]>),
}

type EvalFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A deterministic real function on an interval domain.
///
/// Evaluation must be safe to call concurrently; profiles evaluate many
/// points in parallel.
#[derive(Clone)]
pub struct FunctionOracle {
    label: String,
    eval: Arc<EvalFn>,
    domain: Interval,
    eval_budget: usize,
    resolution: Resolution,
}

impl fmt::Debug for FunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionOracle")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("eval_budget", &self.eval_budget)
            .field("resolution", &self.resolution)
            .finish()
    }
}

impl FunctionOracle {
    pub fn new(
        label: impl Into<String>,
        domain: Interval,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FunctionOracle {
            label: label.into(),
            eval: Arc::new(eval),
            domain,
            eval_budget: DEFAULT_EVAL_BUDGET,
            resolution: Resolution::Exact,
        }
    }

    pub fn with_budget(mut self, eval_budget: usize) -> Self {
        self.eval_budget = eval_budget.max(1);
        self
    }

    pub fn with_resolution(mut self, resolution: Resolution) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn eval_budget(&self) -> usize {
        self.eval_budget
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    /// `f(x)`, or `None` outside the domain.
    pub fn evaluate(&self, x: f64) -> Option<f64> {
        if self.domain.contains(x) {
            Some((self.eval)(x))
        } else {
            None
        }
    }

    /// Smallest meaningful step near `x`, if the oracle has one.
    pub fn resolution_at(&self, x: f64) -> Option<f64> {
        match &self.resolution {
            Resolution::Exact => None,
            Resolution::Floor(h) => Some(*h),
            Resolution::Mesh(xs) => {
                // widest gap among the cells touching x
                let i = xs.partition_point(|&v| v < x);
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(xs.len() - 1);
                let widest = (lo..hi).map(|j| xs[j + 1] - xs[j]).fold(0.0, f64::max);
                (widest > 0.0).then_some(widest)
            }
        }
    }

    /// Piecewise-linear interpolant through `(x, y)` samples sorted by `x`.
    pub fn from_samples(label: impl Into<String>, points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(AnalysisError::BadSamples(
                "need at least two (x, y) samples".into(),
            ));
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(AnalysisError::BadSamples(format!(
                    "non-finite sample at row {}",
                    i + 1
                )));
            }
        }
        if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(AnalysisError::BadSamples(format!(
                "x values must be strictly increasing (row {})",
                i + 2
            )));
        }
        let xs: Arc<[f64]> = points.iter().map(|p| p.0).collect();
        let ys: Arc<[f64]> = points.iter().map(|p| p.1).collect();
        let domain = Interval::new(xs[0], xs[xs.len() - 1]);
        let (gx, gy) = (Arc::clone(&xs), ys);
        let eval = move |x: f64| {
            let i = gx.partition_point(|&v| v < x);
            if i < gx.len() && gx[i] == x {
                return gy[i];
            }
            let (a, b) = (i - 1, i);
            let t = (x - gx[a]) / (gx[b] - gx[a]);
            gy[a] + t * (gy[b] - gy[a])
        };
        Ok(FunctionOracle::new(label, domain, eval).with_resolution(Resolution::Mesh(xs)))
    }

    fn combined_resolution(&self, other: &FunctionOracle) -> Resolution {
        match (&self.resolution, &other.resolution) {
            (Resolution::Exact, r) | (r, Resolution::Exact) => r.clone(),
            (Resolution::Floor(a), Resolution::Floor(b)) => Resolution::Floor(a.max(*b)),
            (Resolution::Mesh(m), _) | (_, Resolution::Mesh(m)) => Resolution::Mesh(Arc::clone(m)),
        }
    }

    /// `f + g` on the common domain.
    pub fn sum(&self, other: &FunctionOracle) -> FunctionOracle {
        self.pointwise(other, "+", |a, b| a + b)
    }

    /// `f - g` on the common domain.
    pub fn difference(&self, other: &FunctionOracle) -> FunctionOracle {
        self.pointwise(other, "-", |a, b| a - b)
    }

    fn pointwise(
        &self,
        other: &FunctionOracle,
        symbol: &str,
        op: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> FunctionOracle {
        let (f, g) = (Arc::clone(&self.eval), Arc::clone(&other.eval));
        FunctionOracle {
            label: format!("({} {symbol} {})", self.label, other.label),
            eval: Arc::new(move |x| op(f(x), g(x))),
            domain: self.domain.intersect(&other.domain),
            eval_budget: self.eval_budget.min(other.eval_budget),
            resolution: self.combined_resolution(other),
        }
    }

    /// `k·f`.
    pub fn scaled(&self, k: f64) -> FunctionOracle {
        let f = Arc::clone(&self.eval);
        FunctionOracle {
            label: format!("{k}*{}", self.label),
            eval: Arc::new(move |x| k * f(x)),
            domain: self.domain,
            eval_budget: self.eval_budget,
            resolution: self.resolution.clone(),
        }
    }
}

/// Evaluation counter for a single analysis call.
pub(crate) struct Budgeted<'a> {
    oracle: &'a FunctionOracle,
    used: Cell<usize>,
    exhausted: Cell<bool>,
    clipped: Cell<bool>,
}

impl<'a> Budgeted<'a> {
    pub(crate) fn new(oracle: &'a FunctionOracle) -> Self {
        Budgeted {
            oracle,
            used: Cell::new(0),
            exhausted: Cell::new(false),
            clipped: Cell::new(false),
        }
    }

    pub(crate) fn oracle(&self) -> &FunctionOracle {
        self.oracle
    }

    pub(crate) fn eval(&self, x: f64) -> Option<f64> {
        if !self.oracle.domain.contains(x) {
            self.clipped.set(true);
            return None;
        }
        if self.used.get() >= self.oracle.eval_budget {
            self.exhausted.set(true);
            return None;
        }
        self.used.set(self.used.get() + 1);
        Some((self.oracle.eval)(x))
    }

    pub(crate) fn used(&self) -> usize {
        self.used.get()
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted.get()
    }

    pub(crate) fn clipped(&self) -> bool {
        self.clipped.get()
    }
}
