use std::collections::HashMap;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Window;
use crate::output::{fmt_g12, GrayImage};
use crate::sphere::{chordal_distance, dist3, SpherePoint};

use super::words::{enumerate_words, EnumerationOptions};
use super::GroupSpec;

/// Points closer than this (chordal) are merged.
pub const CLOUD_DEDUP_TOL: f64 = 1e-12;

const HASH_CELL: f64 = 1e-6;

/// A finite set of sphere points, deduplicated in the chordal metric and kept
/// in insertion order.
#[derive(Debug, Clone, Default)]
pub struct PointCloud {
    pub points: Vec<SpherePoint>,
    pub depth: usize,
}

type CellKey = (i64, i64, i64);

fn cell_key(v: [f64; 3]) -> CellKey {
    let k = |x: f64| (x / HASH_CELL).floor() as i64;
    (k(v[0]), k(v[1]), k(v[2]))
}

impl PointCloud {
    pub fn from_points<I: IntoIterator<Item = SpherePoint>>(points: I, depth: usize) -> Self {
        let mut kept: Vec<SpherePoint> = Vec::new();
        let mut embedded: Vec<[f64; 3]> = Vec::new();
        let mut cells: HashMap<CellKey, Vec<usize>> = HashMap::new();
        for p in points {
            let v = p.to_unit_sphere();
            let (x, y, z) = cell_key(v);
            let duplicate = (-1..=1).any(|dx| {
                (-1..=1).any(|dy| {
                    (-1..=1).any(|dz| {
                        cells
                            .get(&(x + dx, y + dy, z + dz))
                            .is_some_and(|ids| ids.iter().any(|&i| dist3(embedded[i], v) <= CLOUD_DEDUP_TOL))
                    })
                })
            });
            if !duplicate {
                cells.entry((x, y, z)).or_default().push(kept.len());
                kept.push(p);
                embedded.push(v);
            }
        }
        PointCloud { points: kept, depth }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest chordal distance from `p` to the cloud.
    pub fn distance_to(&self, p: SpherePoint) -> f64 {
        self.points.iter().map(|&q| chordal_distance(p, q)).fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `re,im`, one row per point, `inf` for infinity.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "re,im")?;
        for p in &self.points {
            match p {
                SpherePoint::Infinity => writeln!(out, "inf")?,
                SpherePoint::Finite(z) => writeln!(out, "{},{}", fmt_g12(z.re), fmt_g12(z.im))?,
            }
        }
        Ok(())
    }

    pub fn rasterize(&self, size: usize, view: RasterView) -> GrayImage {
        let mut img = GrayImage::filled(size, size, 255);
        for p in &self.points {
            if let Some((x, y)) = view.pixel(*p, size) {
                img.set(x, y, 0);
            }
        }
        img
    }
}

/// How a cloud is laid out on a square raster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RasterView {
    /// A window of the complex plane; infinity is not drawn.
    Plane(Window),
    /// The whole sphere as the unit disk: `z` is drawn at radius
    /// `d(0, z) / 2` in direction `arg z`, so infinity fills the rim.
    Sphere,
}

impl RasterView {
    fn pixel(&self, p: SpherePoint, size: usize) -> Option<(usize, usize)> {
        let (u, v) = match (*self, p) {
            (RasterView::Plane(_), SpherePoint::Infinity) => return None,
            (RasterView::Plane(w), SpherePoint::Finite(z)) => {
                if !w.contains(z) {
                    return None;
                }
                ((z.re - w.x_min) / w.width(), (w.y_max - z.im) / w.height())
            }
            (RasterView::Sphere, _) => {
                let r = chordal_distance(SpherePoint::ZERO, p) / 2.0;
                let dir = match p {
                    SpherePoint::Finite(z) if z.norm() > 0.0 => z / z.norm(),
                    _ => Complex64::new(1.0, 0.0),
                };
                let q = dir * r;
                ((q.re + 1.0) / 2.0, (1.0 - q.im) / 2.0)
            }
        };
        let to_px = |t: f64| ((t * size as f64).floor() as usize).min(size - 1);
        Some((to_px(u), to_px(v)))
    }
}

/// Images of `p` under every reduced word of length at most `max_len`.
pub fn orbit(group: &GroupSpec, p: SpherePoint, max_len: usize, opts: &EnumerationOptions) -> Result<PointCloud> {
    let words = enumerate_words(group, max_len, opts)?;
    Ok(PointCloud::from_points(words.iter().map(|w| w.element.apply(p)), max_len))
}

/// Attracting fixed points of all non-identity words of length at most
/// `depth` (the single fixed point for parabolic words; elliptic words
/// contribute nothing).
pub fn limit_set(group: &GroupSpec, depth: usize, opts: &EnumerationOptions) -> Result<PointCloud> {
    if depth == 0 {
        return Err(Error::InvalidParameter("limit set depth must be at least 1".into()));
    }
    let words = enumerate_words(group, depth, opts)?;
    let points: Vec<SpherePoint> = words
        .par_iter()
        .skip(1)
        .filter_map(|w| w.element.attracting_fixed_point())
        .collect();
    Ok(PointCloud::from_points(points, depth))
}

fn directed(a: &PointCloud, b: &PointCloud) -> f64 {
    let bv: Vec<[f64; 3]> = b.points.iter().map(|p| p.to_unit_sphere()).collect();
    a.points
        .par_iter()
        .map(|p| {
            let v = p.to_unit_sphere();
            bv.iter().map(|w| dist3(v, *w)).fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
}

/// Symmetric Hausdorff distance in the chordal metric.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(directed(a, b).max(directed(b, a)))
}
