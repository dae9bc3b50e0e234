use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::CellGrid;
use crate::moebius::MoebiusTransform;
use crate::output::GrayImage;
use crate::sphere::SpherePoint;

use super::BeltramiField;

pub const DEFAULT_TAU_OMEGA: f64 = 0.99;

/// Subsample offsets inside a cell, as fractions of the cell side.
const SUBSAMPLES: [f64; 3] = [1.0 / 6.0, 0.5, 5.0 / 6.0];

/// Search radius (in cells) used when measuring invariance defects.
const MAX_SEARCH: usize = 8;

/// Rounding slack on the one-cell-width criterion; dyadic grids put images
/// of cell centres exactly on cell edges.
const GAP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellLabel {
    Omega,
    LambdaCandidate,
}

/// Cells of a grid labelled by whether `|μ|` stays at most `τ_Ω` on the
/// cell and its eight neighbours.
#[derive(Debug, Clone)]
pub struct DiscontinuityPartition {
    pub grid: CellGrid,
    pub tau: f64,
    labels: Vec<CellLabel>,
    cell_sup: Vec<f64>,
}

/// How far the image of the lambda-candidate set under a transformation
/// lands from the lambda-candidate set itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceDefect {
    /// Candidate cells whose image centre falls inside the interior of the window.
    pub checked: usize,
    /// Largest Euclidean distance, in cell widths, from an image centre to
    /// the nearest candidate cell (capped just above the search radius).
    pub max_gap: f64,
    /// Images lying more than one cell width away from every candidate cell.
    pub exceptions: usize,
}

/// Labels every cell of `grid`: omega iff the 3×3-subsampled sup of `|μ|`
/// over the cell and its neighbours is at most `tau`.
pub fn discontinuity_partition(mu: &BeltramiField, grid: CellGrid, tau: f64) -> Result<DiscontinuityPartition> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!("threshold {tau} outside (0, 1)")));
    }
    let cell_sup: Vec<f64> = (0..grid.ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..grid.nx).map(move |i| {
                let mut sup: f64 = 0.0;
                for fy in SUBSAMPLES {
                    for fx in SUBSAMPLES {
                        let z = grid.offset_point(i, j, fx, fy);
                        sup = sup.max(mu.modulus(SpherePoint::Finite(z)));
                    }
                }
                sup
            })
        })
        .collect();

    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let labels = (0..grid.ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            let cell_sup = &cell_sup;
            (0..grid.nx).map(move |i| {
                let mut sup: f64 = 0.0;
                for dj in -1..=1isize {
                    for di in -1..=1isize {
                        let (ii, jj) = (i as isize + di, j as isize + dj);
                        if ii >= 0 && jj >= 0 && ii < nx && jj < ny {
                            sup = sup.max(cell_sup[jj as usize * grid.nx + ii as usize]);
                        }
                    }
                }
                if sup <= tau {
                    CellLabel::Omega
                } else {
                    CellLabel::LambdaCandidate
                }
            })
        })
        .collect();

    Ok(DiscontinuityPartition { grid, tau, labels, cell_sup })
}

impl DiscontinuityPartition {
    pub fn label(&self, i: usize, j: usize) -> CellLabel {
        self.labels[j * self.grid.nx + i]
    }

    /// Sampled sup of `|μ|` on the cell alone.
    pub fn cell_sup(&self, i: usize, j: usize) -> f64 {
        self.cell_sup[j * self.grid.nx + i]
    }

    pub fn lambda_cells(&self) -> Vec<(usize, usize)> {
        (0..self.grid.ny)
            .flat_map(|j| (0..self.grid.nx).map(move |i| (i, j)))
            .filter(|&(i, j)| self.label(i, j) == CellLabel::LambdaCandidate)
            .collect()
    }

    pub fn lambda_centers(&self) -> Vec<Complex64> {
        self.lambda_cells().into_iter().map(|(i, j)| self.grid.center(i, j)).collect()
    }

    pub fn omega_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == CellLabel::Omega).count()
    }

    /// Omega cells white (255), lambda candidates black (0); row 0 is the
    /// top edge of the window.
    pub fn to_image(&self) -> GrayImage {
        let mut img = GrayImage::filled(self.grid.nx, self.grid.ny, 255);
        for (i, j) in self.lambda_cells() {
            img.set(i, self.grid.ny - 1 - j, 0);
        }
        img
    }

    /// Distance from `p` (inside cell `(i, j)`) to the closest candidate
    /// cell, in cell widths.
    fn gap_to_candidates(&self, p: Complex64, i: usize, j: usize) -> f64 {
        let h = self.grid.h;
        let mut best = f64::INFINITY;
        for radius in 0..=MAX_SEARCH {
            // cells at Chebyshev radius r are at least (r - 1) widths away
            if best <= (radius as f64 - 1.0).max(0.0) {
                break;
            }
            let r = radius as isize;
            for dj in -r..=r {
                for di in -r..=r {
                    if di.abs().max(dj.abs()) != r {
                        continue;
                    }
                    let (ii, jj) = (i as isize + di, j as isize + dj);
                    if ii < 0 || jj < 0 || ii as usize >= self.grid.nx || jj as usize >= self.grid.ny {
                        continue;
                    }
                    if self.label(ii as usize, jj as usize) != CellLabel::LambdaCandidate {
                        continue;
                    }
                    let lo = self.grid.offset_point(ii as usize, jj as usize, 0.0, 0.0);
                    let dx = (lo.re - p.re).max(p.re - (lo.re + h)).max(0.0);
                    let dy = (lo.im - p.im).max(p.im - (lo.im + h)).max(0.0);
                    best = best.min(dx.hypot(dy) / h);
                }
            }
        }
        best.min(MAX_SEARCH as f64 + 1.0)
    }

    /// Maps each candidate cell centre by `g` and measures how far the image
    /// lands from the candidate set. Images within `margin` cells of the
    /// window edge are skipped, since labels there depend on cells outside
    /// the window.
    pub fn invariance_defect(&self, g: &MoebiusTransform, margin: usize) -> InvarianceDefect {
        let gaps: Vec<f64> = self
            .lambda_cells()
            .par_iter()
            .filter_map(|&(i, j)| {
                let image = g.apply_finite(self.grid.center(i, j)).finite()?;
                let (ii, jj) = self.grid.cell_of(image)?;
                let inside = ii >= margin && jj >= margin && ii + margin < self.grid.nx && jj + margin < self.grid.ny;
                inside.then(|| self.gap_to_candidates(image, ii, jj))
            })
            .collect();
        InvarianceDefect {
            checked: gaps.len(),
            max_gap: gaps.iter().copied().fold(0.0, f64::max),
            exceptions: gaps.iter().filter(|&&d| d > 1.0 + GAP_SLACK).count(),
        }
    }

    /// Symmetric Hausdorff distance (Euclidean) between the candidate cell
    /// centres and the part of the closed positive real axis inside the
    /// window, the latter sampled at spacing `h/4`.
    pub fn hausdorff_to_positive_axis(&self) -> f64 {
        let centers = self.lambda_centers();
        if centers.is_empty() {
            return f64::INFINITY;
        }
        let to_axis = |z: Complex64| if z.re >= 0.0 { z.im.abs() } else { z.norm() };
        let forward = centers.par_iter().map(|&z| to_axis(z)).reduce(|| 0.0, f64::max);
        let w = self.grid.window;
        if w.y_min > 0.0 || w.y_max < 0.0 || w.x_max < 0.0 {
            return forward;
        }
        let start = w.x_min.max(0.0);
        let steps = ((w.x_max - start) / (self.grid.h / 4.0)).ceil() as usize;
        let backward = (0..=steps)
            .into_par_iter()
            .map(|k| {
                let x = (start + k as f64 * self.grid.h / 4.0).min(w.x_max);
                let p = Complex64::new(x, 0.0);
                centers.iter().map(|c| (c - p).norm()).fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max);
        forward.max(backward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Window;

    #[test]
    fn constant_field_is_all_omega() {
        let grid = CellGrid::new(Window::square(1.0), 1.0 / 16.0).unwrap();
        let half = BeltramiField::constant(Complex64::new(0.5, 0.0)).unwrap();
        let p = discontinuity_partition(&half, grid, DEFAULT_TAU_OMEGA).unwrap();
        assert!(p.lambda_cells().is_empty());
        assert_eq!(p.omega_count(), grid.len());
    }

    #[test]
    fn threshold_must_be_open_unit_interval() {
        let grid = CellGrid::new(Window::square(1.0), 0.25).unwrap();
        for tau in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(discontinuity_partition(&BeltramiField::Example1, grid, tau).is_err());
        }
    }

    #[test]
    fn candidates_hug_the_positive_axis() {
        let grid = CellGrid::new(Window::square(3.0), 1.0 / 32.0).unwrap();
        let p = discontinuity_partition(&BeltramiField::Example1, grid, DEFAULT_TAU_OMEGA).unwrap();
        let cells = p.lambda_cells();
        assert!(!cells.is_empty());
        for (i, j) in cells {
            let z = grid.center(i, j);
            assert!(z.re > -2.0 * grid.h, "{z}");
        }
        // deterministic
        let q = discontinuity_partition(&BeltramiField::Example1, grid, DEFAULT_TAU_OMEGA).unwrap();
        assert_eq!(p.labels, q.labels);
    }

    #[test]
    fn image_layout() {
        let grid = CellGrid::new(Window::square(1.0), 0.25).unwrap();
        let p = discontinuity_partition(&BeltramiField::Example1, grid, 0.5).unwrap();
        let img = p.to_image();
        assert_eq!((img.width, img.height), (8, 8));
        // the positive axis runs through the middle rows on the right
        assert_eq!(img.get(7, 3), 0);
        assert_eq!(img.get(7, 4), 0);
    }

    #[test]
    fn candidates_fill_the_wedge_where_the_modulus_exceeds_tau() {
        let tau = DEFAULT_TAU_OMEGA;
        // |μ| = (ln2 - 2s²)/(ln2 + 2s²) with s = sin(η/2) near the slit
        let s2 = std::f64::consts::LN_2 * (1.0 - tau) / (2.0 * (1.0 + tau));
        let eta_c = 2.0 * s2.sqrt().asin();
        let wedge_distance = |z: Complex64| {
            let a = z.arg().abs();
            if a <= eta_c {
                0.0
            } else if a - eta_c >= std::f64::consts::FRAC_PI_2 {
                z.norm()
            } else {
                z.norm() * (a - eta_c).sin()
            }
        };
        for h in [1.0 / 32.0, 1.0 / 64.0] {
            let grid = CellGrid::new(Window::square(3.0), h).unwrap();
            let p = discontinuity_partition(&BeltramiField::Example1, grid, tau).unwrap();
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let z = grid.center(i, j);
                    let candidate = p.label(i, j) == CellLabel::LambdaCandidate;
                    // the 3x3 neighbourhood reaches at most 1.5 diagonals from the centre
                    if candidate {
                        assert!(wedge_distance(z) <= 1.5 * std::f64::consts::SQRT_2 * h, "{z}");
                    }
                    if z.arg().abs() < eta_c {
                        assert!(candidate, "{z}");
                    }
                }
            }
        }
    }
}
