//! Built-in test functions, addressed by short spec strings such as
//! `abs`, `skew_tent:0.5,0` or `vdw:8`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::oracle::{FunctionOracle, Resolution};
use crate::error::AnalysisError;
use crate::interval::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum GalleryFunction {
    Abs,
    Square,
    Linear {
        m: f64,
        c: f64,
    },
    /// `b + (1-b)x/a` on `[0, a]`, `(1-x)/(1-a)` on `[a, 1]`.
    SkewTent {
        a: f64,
        b: f64,
    },
    /// Partial sum `Σ_{n=1}^{depth} g(4^(n-1)x) / 4^(n-1)`, `g` = distance to the nearest integer.
    VanDerWaerden {
        depth: u32,
    },
    /// `|x|` except `f(0) = 1`.
    Spike,
}

/// Deepest partial sum accepted; beyond this the terms vanish below `f64` precision.
pub const MAX_VDW_DEPTH: u32 = 26;

impl GalleryFunction {
    /// One entry per function: spec syntax and a short description.
    pub fn catalogue() -> Vec<(&'static str, &'static str, Interval)> {
        vec![
            ("abs", "|x|", Interval::real_line()),
            ("square", "x^2", Interval::real_line()),
            ("linear:m,c", "m*x + c", Interval::real_line()),
            (
                "skew_tent:a,b",
                "b + (1-b)x/a on [0,a], (1-x)/(1-a) on [a,1]; 0 < a < 1",
                Interval::new(0.0, 1.0),
            ),
            (
                "vdw:depth",
                "sum of g(4^(n-1) x)/4^(n-1) for n = 1..depth, g = distance to nearest integer",
                Interval::real_line(),
            ),
            (
                "spike33",
                "|x| for x != 0, 1 at x = 0",
                Interval::real_line(),
            ),
        ]
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        let bad = |reason: String| {
            Err(AnalysisError::BadGalleryParams {
                name: self.base_name().to_string(),
                reason,
            })
        };
        match *self {
            GalleryFunction::Linear { m, c } if !(m.is_finite() && c.is_finite()) => {
                bad("m and c must be finite".into())
            }
            GalleryFunction::SkewTent { a, b } => {
                if !(a > 0.0 && a < 1.0) {
                    bad(format!("a must satisfy 0 < a < 1, got {a}"))
                } else if !b.is_finite() {
                    bad("b must be finite".into())
                } else {
                    Ok(())
                }
            }
            GalleryFunction::VanDerWaerden { depth } if depth == 0 || depth > MAX_VDW_DEPTH => {
                bad(format!("depth must be in 1..={MAX_VDW_DEPTH}, got {depth}"))
            }
            _ => Ok(()),
        }
    }

    fn base_name(&self) -> &'static str {
        match self {
            GalleryFunction::Abs => "abs",
            GalleryFunction::Square => "square",
            GalleryFunction::Linear { .. } => "linear",
            GalleryFunction::SkewTent { .. } => "skew_tent",
            GalleryFunction::VanDerWaerden { .. } => "vdw",
            GalleryFunction::Spike => "spike33",
        }
    }

    pub fn domain(&self) -> Interval {
        match self {
            GalleryFunction::SkewTent { .. } => Interval::new(0.0, 1.0),
            _ => Interval::real_line(),
        }
    }

    /// Builds the oracle. Panics only if the parameters were never validated;
    /// `FromStr` and [`gallery`] validate.
    pub fn oracle(&self) -> FunctionOracle {
        self.validate().expect("gallery parameters validated");
        let label = self.to_string();
        let domain = self.domain();
        match *self {
            GalleryFunction::Abs => FunctionOracle::new(label, domain, f64::abs),
            GalleryFunction::Square => FunctionOracle::new(label, domain, |x| x * x),
            GalleryFunction::Linear { m, c } => {
                FunctionOracle::new(label, domain, move |x| m * x + c)
            }
            GalleryFunction::SkewTent { a, b } => {
                FunctionOracle::new(label, domain, move |x| skew_tent(a, b, x))
            }
            GalleryFunction::VanDerWaerden { depth } => {
                FunctionOracle::new(label, domain, move |x| van_der_waerden(depth, x))
                    .with_resolution(Resolution::Floor(vdw_resolution(depth)))
            }
            GalleryFunction::Spike => {
                FunctionOracle::new(label, domain, |x| if x == 0.0 { 1.0 } else { x.abs() })
            }
        }
    }
}

pub fn skew_tent(a: f64, b: f64, x: f64) -> f64 {
    if x <= a {
        b + (1.0 - b) / a * x
    } else {
        (1.0 - x) / (1.0 - a)
    }
}

fn distance_to_integer(y: f64) -> f64 {
    (y - y.round()).abs()
}

pub fn van_der_waerden(depth: u32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut scale = 1.0;
    for _ in 0..depth {
        sum += distance_to_integer(scale * x) / scale;
        scale *= 4.0;
    }
    sum
}

/// Half the spacing of the finest kinks in the partial sum. Below it the
/// truncated series is piecewise linear and says nothing about the full one.
pub fn vdw_resolution(depth: u32) -> f64 {
    0.5 * 0.25f64.powi(depth as i32 - 1)
}

/// Parses a spec string and returns its oracle.
pub fn gallery(spec: &str) -> Result<FunctionOracle, AnalysisError> {
    Ok(spec.parse::<GalleryFunction>()?.oracle())
}

fn params<const N: usize>(name: &str, raw: Option<&str>) -> Result<[f64; N], AnalysisError> {
    let err = |reason: String| AnalysisError::BadGalleryParams {
        name: name.to_string(),
        reason,
    };
    let raw = raw.ok_or_else(|| err(format!("expected {N} parameter(s) after `:`")))?;
    let values: Vec<f64> = raw
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("`{}` is not a number", p.trim())))
        })
        .collect::<Result<_, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| err(format!("expected {N} parameter(s), got {}", v.len())))
}

impl FromStr for GalleryFunction {
    type Err = AnalysisError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let spec = spec.trim();
        let (name, raw) = match spec.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (spec, None),
        };
        let no_params = |f: GalleryFunction| match raw {
            None => Ok(f),
            Some(_) => Err(AnalysisError::BadGalleryParams {
                name: name.to_string(),
                reason: "takes no parameters".into(),
            }),
        };
        let f = match name {
            "abs" => no_params(GalleryFunction::Abs)?,
            "square" => no_params(GalleryFunction::Square)?,
            "spike33" => no_params(GalleryFunction::Spike)?,
            "linear" => {
                let [m, c] = params(name, raw)?;
                GalleryFunction::Linear { m, c }
            }
            "skew_tent" => {
                let [a, b] = params(name, raw)?;
                GalleryFunction::SkewTent { a, b }
            }
            "vdw" => {
                let [d] = params::<1>(name, raw)?;
                if d.fract() != 0.0 || d < 1.0 || d > MAX_VDW_DEPTH as f64 {
                    return Err(AnalysisError::BadGalleryParams {
                        name: name.to_string(),
                        reason: format!("depth must be an integer in 1..={MAX_VDW_DEPTH}"),
                    });
                }
                GalleryFunction::VanDerWaerden { depth: d as u32 }
            }
            other => return Err(AnalysisError::UnknownGallery(other.to_string())),
        };
        f.validate()?;
        Ok(f)
    }
}

impl fmt::Display for GalleryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GalleryFunction::Linear { m, c } => write!(f, "linear:{m},{c}"),
            GalleryFunction::SkewTent { a, b } => write!(f, "skew_tent:{a},{b}"),
            GalleryFunction::VanDerWaerden { depth } => write!(f, "vdw:{depth}"),
            other => f.write_str(other.base_name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "abs",
            "square",
            "linear:3,1",
            "skew_tent:0.5,0",
            "vdw:8",
            "spike33",
        ] {
            let f: GalleryFunction = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(
            "cosh".parse::<GalleryFunction>(),
            Err(AnalysisError::UnknownGallery(_))
        ));
        for s in [
            "skew_tent:1,0",
            "skew_tent:0,0",
            "skew_tent:0.5",
            "vdw:0",
            "vdw:2.5",
            "linear:a,b",
            "abs:1",
            "linear",
        ] {
            assert!(
                matches!(
                    s.parse::<GalleryFunction>(),
                    Err(AnalysisError::BadGalleryParams { .. })
                ),
                "{s}"
            );
        }
    }

    #[test]
    fn values() {
        let tent = gallery("skew_tent:0.5,0").unwrap();
        assert_eq!(tent.evaluate(0.25), Some(0.5));
        assert_eq!(tent.evaluate(1.0), Some(0.0));
        assert_eq!(tent.evaluate(1.5), None);
        assert_eq!(
            gallery("skew_tent:0.3,0.4").unwrap().evaluate(1.0),
            Some(0.0)
        );
        assert_eq!(gallery("vdw:1").unwrap().evaluate(0.25), Some(0.25));
        assert_eq!(gallery("vdw:2").unwrap().evaluate(0.25), Some(0.25));
        assert_eq!(
            gallery("vdw:2").unwrap().evaluate(0.125),
            Some(0.125 + 0.125)
        );
        let spike = gallery("spike33").unwrap();
        assert_eq!(spike.evaluate(0.0), Some(1.0));
        assert_eq!(spike.evaluate(-0.5), Some(0.5));
        assert_eq!(gallery("linear:3,1").unwrap().evaluate(2.0), Some(7.0));
    }

    #[test]
    fn catalogue_specs_are_listed() {
        assert_eq!(GalleryFunction::catalogue().len(), 6);
    }
}
