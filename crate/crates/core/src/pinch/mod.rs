//! The explicit degeneration of `z -> 2z` to `z -> z + 1`: the noded map and
//! its conjugation and Beltrami residuals, the approximating family `A_n`,
//! and the length-shrinking construction with its dilatation schedule.

mod family;
mod section4;

pub use family::{a_family, pinch_trajectory, q_annulus, PinchReport, PinchRow, ShrinkRow};
pub use section4::{
    area_bound, delta_n, delta_n_exact, model_length, model_shrink_table, omega_map, rect_vertices, shrink_bound,
    Rectifier, Section4Construction,
};

use std::f64::consts::{LN_2, PI, TAU};
use std::io::{self, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::beltrami::BeltramiField;
use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::moebius::MoebiusTransform;
use crate::output::fmt_g12;
use crate::sphere::{chordal_distance, SpherePoint};

pub const MIN_CURVE_SAMPLES: usize = 16;

/// `|μ(e^{iη})|` for `count` angles spaced `2π/(count+1)` apart, strictly
/// inside `(0, 2π)` and including `η = π`.
pub fn mu_curve(count: usize) -> Result<Vec<(f64, f64)>> {
    if count < MIN_CURVE_SAMPLES {
        return Err(Error::InvalidParameter(format!("{count} samples, need at least {MIN_CURVE_SAMPLES}")));
    }
    let step = TAU / (count as f64 + 1.0);
    let mid = (count / 2) as f64;
    (0..count)
        .map(|k| {
            let eta = PI + (k as f64 - mid) * step;
            let mu = crate::beltrami::mu_example1(SpherePoint::Finite(Complex64::from_polar(1.0, eta)))?;
            Ok((eta, mu.norm()))
        })
        .collect()
}

pub fn write_mu_curve_csv<W: Write>(rows: &[(f64, f64)], mut out: W) -> io::Result<()> {
    writeln!(out, "eta,abs_mu")?;
    for (eta, m) in rows {
        writeln!(out, "{},{}", fmt_g12(*eta), fmt_g12(*m))?;
    }
    Ok(())
}

/// `count` seeded points off the closed positive axis: radii log-uniform in
/// `[1/8, 8]`, arguments uniform in `[0.01, 2π - 0.01]`.
pub fn off_slit_samples(seed: u64, count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = 2f64.powf(rng.gen_range(-3.0..=3.0));
            let eta = rng.gen_range(0.01..=TAU - 0.01);
            Complex64::from_polar(r, eta)
        })
        .collect()
}

/// A map of the sphere evaluated pointwise.
pub trait PlaneMap: Sync {
    fn eval(&self, z: Complex64) -> SpherePoint;

    fn at_infinity(&self) -> SpherePoint {
        SpherePoint::Infinity
    }

    fn eval_point(&self, p: SpherePoint) -> SpherePoint {
        match p {
            SpherePoint::Finite(z) => self.eval(z),
            SpherePoint::Infinity => self.at_infinity(),
        }
    }
}

impl<F> PlaneMap for F
where
    F: Fn(Complex64) -> SpherePoint + Sync,
{
    fn eval(&self, z: Complex64) -> SpherePoint {
        self(z)
    }
}

pub struct IdentityMap;

impl PlaneMap for IdentityMap {
    fn eval(&self, z: Complex64) -> SpherePoint {
        SpherePoint::Finite(z)
    }
}

/// `w(re^{iη}) = ln(r)/ln 2 - 1/2 + i g(η)` off the closed positive axis and
/// `∞` on it.
///
/// With `literal_sign == false`, `g(η) = -cot(η/2)`: `w` preserves orientation
/// and solves the Beltrami equation for [`crate::beltrami::mu_example1`].
/// With `literal_sign == true`, `g(η) = cot(η/2)`; that map reverses
/// orientation and its Wirtinger quotient is the reciprocal coefficient.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodedMapExample1 {
    pub literal_sign: bool,
}

impl NodedMapExample1 {
    pub fn radial(r: f64) -> f64 {
        r.ln() / LN_2 - 0.5
    }
}

impl PlaneMap for NodedMapExample1 {
    fn eval(&self, z: Complex64) -> SpherePoint {
        let (x, y) = (z.re, z.im);
        if y == 0.0 && x >= 0.0 {
            return SpherePoint::Infinity;
        }
        let r = z.norm();
        // cot(η/2) = (r + x)/y = y/(r - x)
        let cot_half = if x >= 0.0 { (r + x) / y } else { y / (r - x) };
        let g = if self.literal_sign { cot_half } else { -cot_half };
        SpherePoint::from_complex(Complex64::new(Self::radial(r), g))
    }
}

/// `w_example1` with the orientation-preserving sign.
pub fn w_example1(p: SpherePoint) -> SpherePoint {
    NodedMapExample1::default().eval_point(p)
}

/// `max d(w(g(z)), θg(w(z)))` in the chordal metric.
pub fn conjugation_residual(
    w: &dyn PlaneMap,
    g: &MoebiusTransform,
    theta_g: &MoebiusTransform,
    samples: &[Complex64],
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(samples
        .par_iter()
        .map(|&z| {
            let lhs = w.eval_point(g.apply_finite(z));
            let rhs = theta_g.apply(w.eval(z));
            chordal_distance(lhs, rhs)
        })
        .reduce(|| 0.0, f64::max))
}

/// Centered-difference Wirtinger derivatives `(∂f, ∂̄f)` at `z` with step `h`.
pub fn wirtinger_fd<F: Fn(Complex64) -> Option<Complex64>>(f: F, z: Complex64, h: f64) -> Option<(Complex64, Complex64)> {
    let i = Complex64::new(0.0, 1.0);
    let fx = (f(z + h)? - f(z - h)?) / (2.0 * h);
    let fy = (f(z + i * h)? - f(z - i * h)?) / (2.0 * h);
    Some(((fx - i * fy) / 2.0, (fx + i * fy) / 2.0))
}

const WIRTINGER_EPS: f64 = 1e-12;

/// `max |∂̄w - μ ∂w| / (|∂w| + ε)` over the grid, derivatives by centered
/// differences with step `h`.
pub fn wirtinger_residual(w: &dyn PlaneMap, mu: &BeltramiField, grid: &SampleGrid, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step {h}")));
    }
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    points
        .par_iter()
        .map(|&z| {
            let (d, dbar) = wirtinger_fd(|p| w.eval(p).finite(), z, h)
                .ok_or_else(|| Error::Domain(format!("map is infinite near {z}")))?;
            let m = mu
                .eval(SpherePoint::Finite(z))
                .map_err(|_| Error::Domain(format!("{z} lies on the limit set of the coefficient")))?;
            Ok((dbar - m * d).norm() / (d.norm() + WIRTINGER_EPS))
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}
