//! Evaluation grids and profile diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing positions inside `(0, L0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    /// `n` uniform points strictly inside `(0, length)`.
    pub fn uniform(length: f64, n: usize) -> Result<Self> {
        Self::window(length, n, length)
    }

    /// `n` uniform points strictly inside `(length - window, length)`, the
    /// region next to the mobile wall.
    pub fn window(length: f64, n: usize, window: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("grid needs at least one point"));
        }
        if !(window > 0.0 && window <= length) {
            return Err(Error::domain(format!(
                "near-wall window must lie in (0, L0], got {window:e}"
            )));
        }
        let start = length - window;
        let h = window / (n + 1) as f64;
        let points = (1..=n).map(|i| start + h * i as f64).collect();
        Self::from_points(points, length)
    }

    pub fn from_points(points: Vec<f64>, length: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("grid needs at least one point"));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("grid points must be strictly increasing"));
        }
        if !(points[0] > 0.0 && points[points.len() - 1] < length) {
            return Err(Error::domain("grid points must lie in the open interval (0, L0)"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Location and size of the largest-magnitude value of a profile, with its
/// full width at half maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakInfo {
    pub index: usize,
    pub location: f64,
    /// Signed value at the peak.
    pub height: f64,
    /// Width of the contiguous region around the peak where the value stays
    /// at or above half the peak (same sign), with linearly interpolated
    /// crossings. Clipped to the grid extent.
    pub fwhm: f64,
}

pub fn peak_info(xs: &[f64], values: &[f64]) -> Option<PeakInfo> {
    if xs.is_empty() || xs.len() != values.len() {
        return None;
    }
    let mut index = 0;
    for (i, v) in values.iter().enumerate() {
        if v.abs() > values[index].abs() {
            index = i;
        }
    }
    let height = values[index];
    let sign = if height < 0.0 { -1.0 } else { 1.0 };
    let half = 0.5 * height.abs();
    let level = |i: usize| sign * values[i] - half;

    let mut lo = index;
    while lo > 0 && level(lo - 1) >= 0.0 {
        lo -= 1;
    }
    let left = if lo == 0 {
        xs[0]
    } else {
        cross(xs[lo - 1], level(lo - 1), xs[lo], level(lo))
    };
    let mut hi = index;
    while hi + 1 < xs.len() && level(hi + 1) >= 0.0 {
        hi += 1;
    }
    let right = if hi + 1 == xs.len() {
        xs[hi]
    } else {
        cross(xs[hi], level(hi), xs[hi + 1], level(hi + 1))
    };
    Some(PeakInfo {
        index,
        location: xs[index],
        height,
        fwhm: right - left,
    })
}

fn cross(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    if y0 == y1 {
        return x0;
    }
    x0 + (x1 - x0) * y0 / (y0 - y1)
}
