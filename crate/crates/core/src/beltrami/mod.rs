//! Beltrami coefficients as evaluable fields: the closed-form coefficient
//! of the `2z -> z+1` degeneration, constants and sampled grids; group
//! invariance residuals, sup-norm estimates, discontinuity partitions and
//! the noded-family checker.

mod arcs;
mod partition;

pub use arcs::{noded_family_check, Arc, ArcFamily, NodedCheckOptions, NodedReport, Region, Verdict};
pub use partition::{discontinuity_partition, CellLabel, DiscontinuityPartition, InvarianceDefect, DEFAULT_TAU_OMEGA};

use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{SampleGrid, Window};
use crate::moebius::MoebiusTransform;
use crate::sphere::SpherePoint;

/// Argument in `[0, 2π)`.
pub fn argument(z: Complex64) -> f64 {
    let eta = z.im.atan2(z.re);
    if eta < 0.0 {
        eta + TAU
    } else {
        eta
    }
}

/// Signed real profile `(2 - ln2·csc²(η/2)) / (2 + ln2·csc²(η/2))`; the
/// modulus of the closed-form coefficient on the ray of argument `η`.
pub fn example1_profile(eta: f64) -> f64 {
    let s = (eta / 2.0).sin();
    ratio(s * s)
}

fn ratio(sin_half_sq: f64) -> f64 {
    let t = 2.0 * sin_half_sq;
    (t - LN_2) / (t + LN_2)
}

/// Zero of the profile in `(0, π)`: `2 arcsin(sqrt(ln2 / 2))`.
pub fn example1_zero() -> f64 {
    2.0 * (LN_2 / 2.0).sqrt().asin()
}

/// The closed-form coefficient
/// `μ(z) = (z/z̄)·(2 - ln2·csc²(η/2)) / (2 + ln2·csc²(η/2))`.
///
/// The closed positive axis `[0, ∞]` is its limit set and yields
/// [`Error::OnLimitSet`].
pub fn mu_example1(p: SpherePoint) -> Result<Complex64> {
    let z = p.finite().ok_or(Error::OnLimitSet)?;
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::OnLimitSet);
    }
    let r = z.norm();
    // sin²(η/2) = (1 - cos η)/2, rewritten to avoid cancellation near η = 0
    let sin_half_sq = if z.re > 0.0 {
        z.im * z.im / (2.0 * r * (r + z.re))
    } else {
        (r - z.re) / (2.0 * r)
    };
    let unit = z / r;
    Ok(unit * unit * ratio(sin_half_sq))
}

/// A grid-sampled coefficient, bilinear between nodes and zero outside the
/// window.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    window: Window,
    nx: usize,
    ny: usize,
    values: Vec<Complex64>,
}

impl SampledField {
    /// `values` holds `nx × ny` nodes row by row (x fastest), spanning the
    /// window corners.
    pub fn new(window: Window, nx: usize, ny: usize, values: Vec<Complex64>) -> Result<Self> {
        if nx < 2 || ny < 2 || values.len() != nx * ny {
            return Err(Error::InvalidParameter(format!(
                "{} values for a {nx} x {ny} node grid",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.norm() <= 1.0)) {
            return Err(Error::InvalidParameter(format!("sample {v} has modulus above 1")));
        }
        Ok(SampledField { window, nx, ny, values })
    }

    /// Samples `field` on the nodes of `window`.
    pub fn sample(field: &BeltramiField, window: Window, nx: usize, ny: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let z = Complex64::new(
                    window.x_min + window.width() * i as f64 / (nx - 1) as f64,
                    window.y_min + window.height() * j as f64 / (ny - 1) as f64,
                );
                values.push(field.eval(SpherePoint::Finite(z)).unwrap_or(Complex64::new(0.0, 0.0)));
            }
        }
        Self::new(window, nx, ny, values)
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        if !self.window.contains(z) {
            return Complex64::new(0.0, 0.0);
        }
        let fx = (z.re - self.window.x_min) / self.window.width() * (self.nx - 1) as f64;
        let fy = (z.im - self.window.y_min) / self.window.height() * (self.ny - 1) as f64;
        let i = (fx.floor() as usize).min(self.nx - 2);
        let j = (fy.floor() as usize).min(self.ny - 2);
        let (tx, ty) = (fx - i as f64, fy - j as f64);
        let v = |i: usize, j: usize| self.values[j * self.nx + i];
        v(i, j) * (1.0 - tx) * (1.0 - ty) + v(i + 1, j) * tx * (1.0 - ty) + v(i, j + 1) * (1.0 - tx) * ty + v(i + 1, j + 1) * tx * ty
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BeltramiField {
    /// The coefficient of [`mu_example1`].
    Example1,
    Constant(Complex64),
    Sampled(SampledField),
}

impl BeltramiField {
    pub fn constant(value: Complex64) -> Result<Self> {
        if !(value.norm() <= 1.0) {
            return Err(Error::InvalidParameter(format!("constant {value} has modulus above 1")));
        }
        Ok(BeltramiField::Constant(value))
    }

    pub fn zero() -> Self {
        BeltramiField::Constant(Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, p: SpherePoint) -> Result<Complex64> {
        match self {
            BeltramiField::Example1 => mu_example1(p),
            BeltramiField::Constant(c) => Ok(*c),
            BeltramiField::Sampled(f) => Ok(p.finite().map_or(Complex64::new(0.0, 0.0), |z| f.eval(z))),
        }
    }

    /// `|μ|`, counting points of the limit set as modulus one.
    pub fn modulus(&self, p: SpherePoint) -> f64 {
        match self.eval(p) {
            Ok(v) => v.norm(),
            Err(_) => 1.0,
        }
    }

    pub fn support(&self) -> Region {
        match self {
            BeltramiField::Example1 => Region::Punctured { points: vec![SpherePoint::ZERO, SpherePoint::Infinity] },
            BeltramiField::Constant(_) => Region::Sphere,
            BeltramiField::Sampled(f) => Region::Window(f.window),
        }
    }
}

/// `max |μ(g(z))·conj(g'(z)) - μ(z)·g'(z)|` over the samples.
pub fn invariance_residual(mu: &BeltramiField, g: &MoebiusTransform, samples: &[Complex64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    samples
        .par_iter()
        .map(|&z| {
            let gz = g.apply_finite(z);
            if gz.is_infinite() {
                return Err(Error::Domain(format!("sample {z} is a pole")));
            }
            let dg = g.derivative(z);
            let lhs = mu.eval(gz)? * dg.conj();
            let rhs = mu.eval(SpherePoint::Finite(z))? * dg;
            Ok((lhs - rhs).norm())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Largest sampled `|μ|` on the grid (limit-set samples count as 1).
/// Non-decreasing under nested refinement of the grid.
pub fn sup_norm(mu: &BeltramiField, grid: &SampleGrid) -> f64 {
    grid.points()
        .par_iter()
        .map(|&z| mu.modulus(SpherePoint::Finite(z)))
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SampleRegion;

    fn at(z: Complex64) -> Complex64 {
        mu_example1(SpherePoint::Finite(z)).unwrap()
    }

    #[test]
    fn value_at_minus_one() {
        let v = at(Complex64::new(-1.0, 0.0));
        let expected = (2.0 - LN_2) / (2.0 + LN_2);
        assert!((v.re - expected).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert!((expected - 0.485251).abs() < 1e-6);
    }

    #[test]
    fn zero_of_the_profile() {
        let eta = example1_zero();
        assert!((eta - 1.258912).abs() < 1e-6);
        assert!(at(Complex64::from_polar(1.0, eta)).norm() < 1e-15);
        assert!(at(Complex64::from_polar(3.0, TAU - eta)).norm() < 1e-15);
    }

    #[test]
    fn modulus_tends_to_one_near_the_slit() {
        let mut last = 0.0;
        for k in 1..8 {
            let m = at(Complex64::from_polar(1.0, 10f64.powi(-k))).norm();
            assert!(m > last && m < 1.0);
            last = m;
        }
        assert!(last > 1.0 - 1e-12);
    }

    #[test]
    fn slit_is_limit_set() {
        for p in [SpherePoint::ZERO, SpherePoint::Infinity, SpherePoint::real(5.0)] {
            assert!(matches!(mu_example1(p), Err(Error::OnLimitSet)));
        }
        assert!(mu_example1(SpherePoint::real(-5.0)).is_ok());
    }

    #[test]
    fn profile_agrees_with_field() {
        for k in 1..50 {
            let eta = TAU * k as f64 / 50.0;
            let m = at(Complex64::from_polar(1.7, eta)).norm();
            assert!((m - example1_profile(eta).abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn invariance_under_doubling() {
        let g = MoebiusTransform::from_real(2.0, 0.0, 0.0, 1.0).unwrap();
        let samples = SampleGrid::open(SampleRegion::Rect(Window::square(3.0)), 100).points();
        let r = invariance_residual(&BeltramiField::Example1, &g, &samples).unwrap();
        assert!(r < 1e-12, "{r}");
        let r0 = invariance_residual(&BeltramiField::zero(), &g, &samples).unwrap();
        assert_eq!(r0, 0.0);
    }

    #[test]
    fn translation_breaks_invariance() {
        let g = MoebiusTransform::translation(Complex64::new(1.0, 0.0));
        let samples = SampleGrid::open(SampleRegion::Rect(Window::new(-3.0, 3.0, 0.1, 3.0).unwrap()), 50).points();
        let r = invariance_residual(&BeltramiField::Example1, &g, &samples).unwrap();
        assert!(r > 0.1, "{r}");
        assert!(matches!(invariance_residual(&BeltramiField::Example1, &g, &[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn sup_norm_on_left_band() {
        let s = sup_norm(&BeltramiField::Example1, &SampleGrid::closed(SampleRegion::left_band(), 65));
        assert!((s - (2.0 - LN_2) / (2.0 + LN_2)).abs() < 1e-12);
        let half = BeltramiField::constant(Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(sup_norm(&half, &SampleGrid::closed(SampleRegion::left_band(), 9)), 0.5);
    }

    #[test]
    fn sup_norm_increases_towards_one() {
        let region = SampleRegion::Sector { r_min: 1.0, r_max: 2.0, eta_min: 0.0, eta_max: TAU };
        let mut n = 7;
        let mut last = 0.0;
        for _ in 0..8 {
            let s = sup_norm(&BeltramiField::Example1, &SampleGrid::open(region, n));
            assert!(s >= last && s < 1.0);
            last = s;
            n = 2 * n + 1;
        }
        assert!(last > 0.999, "{last}");
    }

    #[test]
    fn sampled_field_interpolates() {
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let f = SampledField::new(w, 2, 2, vec![0.0.into(), 0.5.into(), 0.0.into(), 0.5.into()]).unwrap();
        let field = BeltramiField::Sampled(f);
        let v = field.eval(SpherePoint::Finite(Complex64::new(0.0, 0.3))).unwrap();
        assert!((v.re - 0.25).abs() < 1e-15);
        assert_eq!(field.eval(SpherePoint::real(2.0)).unwrap(), Complex64::new(0.0, 0.0));
        assert!(SampledField::new(w, 2, 2, vec![2.0.into(); 4]).is_err());
        assert!(BeltramiField::constant(Complex64::new(1.5, 0.0)).is_err());
    }
}
