//! Rectangular windows and sampling grids in the plane.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned window `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) && x_min < x_max && y_min < y_max;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "degenerate window [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Window { x_min, x_max, y_min, y_max })
    }

    pub fn square(half: f64) -> Self {
        Window { x_min: -half, x_max: half, y_min: -half, y_max: half }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x_min && z.re <= self.x_max && z.im >= self.y_min && z.im <= self.y_max
    }
}

/// A region sampled on a tensor grid: a rectangle in `(x, y)` or an annular
/// sector in `(r, η)` with `η` measured in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleRegion {
    Rect(Window),
    Sector { r_min: f64, r_max: f64, eta_min: f64, eta_max: f64 },
}

impl SampleRegion {
    /// `{1 <= |z| <= 2, η ∈ [π/2, 3π/2]}`, the left half of the fundamental
    /// annulus of `z -> 2z`.
    pub fn left_band() -> Self {
        SampleRegion::Sector { r_min: 1.0, r_max: 2.0, eta_min: TAU / 4.0, eta_max: 3.0 * TAU / 4.0 }
    }
}

/// `n × n` samples of a region. A closed grid includes both ends of each
/// parameter range (`t = j/(n-1)`), an open one excludes them
/// (`t = (j+1)/(n+1)`). Refining closed `n -> 2n-1` or open `n -> 2n+1`
/// nests the grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    pub region: SampleRegion,
    pub n: usize,
    pub open: bool,
}

impl SampleGrid {
    pub fn closed(region: SampleRegion, n: usize) -> Self {
        SampleGrid { region, n, open: false }
    }

    pub fn open(region: SampleRegion, n: usize) -> Self {
        SampleGrid { region, n, open: true }
    }

    fn params(&self) -> Vec<f64> {
        let n = self.n;
        if self.open {
            (0..n).map(|j| (j + 1) as f64 / (n + 1) as f64).collect()
        } else if n == 1 {
            vec![0.5]
        } else {
            (0..n).map(|j| j as f64 / (n - 1) as f64).collect()
        }
    }

    /// Sample points, row by row.
    pub fn points(&self) -> Vec<Complex64> {
        let t = self.params();
        let lerp = |lo: f64, hi: f64, s: f64| lo + (hi - lo) * s;
        let mut out = Vec::with_capacity(self.n * self.n);
        for &v in &t {
            for &u in &t {
                out.push(match self.region {
                    SampleRegion::Rect(w) => Complex64::new(lerp(w.x_min, w.x_max, u), lerp(w.y_min, w.y_max, v)),
                    SampleRegion::Sector { r_min, r_max, eta_min, eta_max } => {
                        Complex64::from_polar(lerp(r_min, r_max, u), lerp(eta_min, eta_max, v))
                    }
                });
            }
        }
        out
    }
}

/// A uniform cell decomposition of a window with square cells of side `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGrid {
    pub window: Window,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
}

impl CellGrid {
    pub fn new(window: Window, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!("cell size {h}")));
        }
        let nx = (window.width() / h).round() as usize;
        let ny = (window.height() / h).round() as usize;
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter("cell size exceeds window".into()));
        }
        Ok(CellGrid { window, h, nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell `(i, j)` spans `x_min + [i, i+1] h` by `y_min + [j, j+1] h`.
    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        self.offset_point(i, j, 0.5, 0.5)
    }

    pub fn offset_point(&self, i: usize, j: usize, fx: f64, fy: f64) -> Complex64 {
        Complex64::new(
            self.window.x_min + (i as f64 + fx) * self.h,
            self.window.y_min + (j as f64 + fy) * self.h,
        )
    }

    pub fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let fx = (z.re - self.window.x_min) / self.h;
        let fy = (z.im - self.window.y_min) / self.h;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let (i, j) = (fx.floor() as usize, fy.floor() as usize);
        (i < self.nx && j < self.ny).then_some((i, j))
    }
}
