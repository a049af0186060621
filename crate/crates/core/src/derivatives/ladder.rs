use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, Result};

/// Geometric step sizes `h_j = H·2^(-j)` used to sample difference quotients.
///
/// `H = base_factor·max(1, |x|)` unless `base` overrides it, and steps below
/// `floor_factor·max(1, |x|)` are dropped. Scales are grouped from the fine
/// end into bands of `band_size`; the finest `fine_bands` bands give the
/// envelope estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleLadder {
    pub base: Option<f64>,
    pub base_factor: f64,
    pub levels: usize,
    pub floor_factor: f64,
    pub band_size: usize,
    pub fine_bands: usize,
}

impl Default for ScaleLadder {
    fn default() -> Self {
        ScaleLadder {
            base: None,
            base_factor: 0.1,
            levels: 41,
            floor_factor: 1e-7,
            band_size: 4,
            fine_bands: 2,
        }
    }
}

/// The concrete steps used at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Scales {
    /// Coarse to fine.
    pub steps: Vec<f64>,
    pub band_size: usize,
    pub fine_bands: usize,
    /// The oracle's resolution (mesh or truncation) limited the steps.
    pub mesh_limited: bool,
}

impl Scales {
    pub fn band_count(&self) -> usize {
        self.steps.len() / self.band_size
    }

    /// Band of the step at `level` (0 = finest band); `None` for the
    /// incomplete coarse remainder.
    pub fn band_of(&self, level: usize) -> Option<usize> {
        let from_fine = self.steps.len() - 1 - level;
        let band = from_fine / self.band_size;
        (band < self.band_count()).then_some(band)
    }

    /// Largest step of a band.
    pub fn band_scale(&self, band: usize) -> f64 {
        let level = self.steps.len() - (band + 1) * self.band_size;
        self.steps[level]
    }

    pub fn finest(&self) -> f64 {
        self.steps.last().copied().unwrap_or(f64::NAN)
    }
}

impl ScaleLadder {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, expected, value| {
            Err(AnalysisError::BadParameter {
                name,
                expected,
                value,
            })
        };
        if let Some(b) = self.base {
            if !(b > 0.0 && b.is_finite()) {
                return bad("ladder base", "positive and finite", b);
            }
        }
        if !(self.base_factor > 0.0 && self.base_factor.is_finite()) {
            return bad(
                "ladder base factor",
                "positive and finite",
                self.base_factor,
            );
        }
        if !(self.floor_factor > 0.0 && self.floor_factor.is_finite()) {
            return bad(
                "ladder floor factor",
                "positive and finite",
                self.floor_factor,
            );
        }
        if self.band_size == 0 || self.fine_bands == 0 {
            return bad(
                "band layout",
                "at least one scale per band and one band",
                0.0,
            );
        }
        if self.levels < self.min_steps() {
            return bad(
                "ladder levels",
                "enough levels for the finest bands",
                self.levels as f64,
            );
        }
        Ok(())
    }

    fn min_steps(&self) -> usize {
        self.band_size * self.fine_bands
    }

    /// Steps at `x`, honouring an optional resolution floor from the oracle.
    ///
    /// When the floor leaves fewer steps than the finest bands need, the
    /// steps are spaced geometrically between the floor and the top, or
    /// rebuilt upward from the floor if it lies above the top.
    pub fn scales_at(&self, x: f64, resolution: Option<f64>) -> Scales {
        let magnitude = 1f64.max(x.abs());
        let top = self.base.unwrap_or(self.base_factor * magnitude);
        let precision_floor = self.floor_factor * magnitude;
        let floor = match resolution {
            Some(r) if r > precision_floor => r,
            _ => precision_floor,
        };
        let mesh_limited = floor > precision_floor;
        let mut steps: Vec<f64> = (0..self.levels)
            .map(|j| top * 0.5f64.powi(j as i32))
            .take_while(|&h| h >= floor)
            .collect();
        let n = self.min_steps();
        if steps.len() < n {
            steps = if top > floor {
                // squeeze the steps into [floor, top]
                let ratio = (floor / top).powf(1.0 / (n - 1) as f64);
                (0..n)
                    .map(|j| {
                        if j == n - 1 {
                            floor
                        } else {
                            top * ratio.powi(j as i32)
                        }
                    })
                    .collect()
            } else {
                (0..n).rev().map(|k| floor * 2f64.powi(k as i32)).collect()
            };
        }
        Scales {
            steps,
            band_size: self.band_size,
            fine_bands: self.fine_bands,
            mesh_limited,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_ladder_near_one() {
        let s = ScaleLadder::default().scales_at(0.5, None);
        assert_eq!(s.steps.len(), 20);
        assert_eq!(s.steps[0], 0.1);
        assert!(s.finest() >= 1e-7);
        assert_eq!(s.band_count(), 5);
        assert_eq!(s.band_of(19), Some(0));
        assert_eq!(s.band_of(16), Some(0));
        assert_eq!(s.band_of(15), Some(1));
        assert_eq!(s.band_scale(0), s.steps[16]);
        assert!(!s.mesh_limited);
    }

    #[test]
    fn ladder_scales_with_x() {
        let s = ScaleLadder::default().scales_at(-300.0, None);
        assert_eq!(s.steps[0], 30.0);
        assert!(s.finest() >= 3e-5);
    }

    #[test]
    fn coarse_resolution_squeezes_steps() {
        let s = ScaleLadder::default().scales_at(0.0, Some(0.05));
        assert!(s.mesh_limited);
        assert_eq!(s.steps.len(), 8);
        assert_eq!(s.finest(), 0.05);
        assert_eq!(s.steps[0], 0.1);
        assert!(s.steps.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn resolution_above_top_rebuilds_upward() {
        let s = ScaleLadder::default().scales_at(0.0, Some(0.5));
        assert_eq!(s.steps.len(), 8);
        assert_eq!(s.finest(), 0.5);
        assert_eq!(s.steps[0], 0.5 * 128.0);
    }

    #[test]
    fn validation() {
        assert!(ScaleLadder::default().validate().is_ok());
        let bad = ScaleLadder {
            levels: 3,
            ..ScaleLadder::default()
        };
        assert!(bad.validate().is_err());
        let bad = ScaleLadder {
            base: Some(-1.0),
            ..ScaleLadder::default()
        };
        assert!(bad.validate().is_err());
    }
}
