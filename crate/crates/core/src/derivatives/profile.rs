use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ladder::ScaleLadder;
use super::oracle::FunctionOracle;
use super::quotients::{dini_bounds, ApproachMode};
use crate::error::Result;
use crate::interval::Interval;
use crate::sequence_limits::check_radius;

/// Membership grade that bounds the reported μ-band.
pub const MU_BAND_LEVEL: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub x: f64,
    /// Centered strong r-derivatives at `x`.
    pub strong_set: Interval,
    #[serde(with = "crate::extended")]
    pub defect: f64,
    /// `{z : μ_x(z) ≥ 0.5}`, which is the strong 1-derivative set.
    pub mu_band: Interval,
    pub mesh_limited: bool,
    pub error: Option<String>,
}

/// Centered strong sets along a grid, in grid order. Points that fail
/// (outside the domain, say) carry the error and empty sets.
pub fn global_profile(
    f: &FunctionOracle,
    grid: &[f64],
    r: f64,
    ladder: &ScaleLadder,
) -> Result<Vec<ProfilePoint>> {
    check_radius(r)?;
    ladder.validate()?;
    let mu_radius = 1.0 / MU_BAND_LEVEL - 1.0;
    Ok(grid
        .par_iter()
        .map(
            |&x| match dini_bounds(f, x, ApproachMode::Centered, ladder) {
                Ok(b) => ProfilePoint {
                    x,
                    strong_set: b.strong_set(r),
                    defect: b.derivative_defect(),
                    mu_band: b.strong_set(mu_radius),
                    mesh_limited: b.mesh_limited,
                    error: None,
                },
                Err(e) => ProfilePoint {
                    x,
                    strong_set: Interval::Empty,
                    defect: f64::INFINITY,
                    mu_band: Interval::Empty,
                    mesh_limited: false,
                    error: Some(e.to_string()),
                },
            },
        )
        .collect())
}
