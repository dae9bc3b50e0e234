use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::family::ShrinkRow;

/// `δ_n = 1 - 1/(n+1)^4`, defined for `n ≥ 1`.
///
/// In `f64` neighbouring values coincide once `n` reaches the low
/// thousands and the value rounds to `1` from `n = 11585`; use
/// [`delta_n_exact`] where strict order matters.
pub fn delta_n(n: i64) -> Result<f64> {
    if n <= 0 {
        return Err(Error::DegenerateIndex(n));
    }
    let m = (n + 1) as f64;
    Ok(1.0 - 1.0 / (m * m * m * m))
}

/// `δ_n` as an exact fraction `(numerator, denominator)`.
pub fn delta_n_exact(n: u64) -> Result<(u128, u128)> {
    if n == 0 {
        return Err(Error::DegenerateIndex(0));
    }
    let den = (n as u128 + 1).pow(4);
    Ok((den - 1, den))
}

/// `ω(Z) = (Z - δ conj Z)/(1 + δ)`: fixes `0`, `i` and `∞`, with constant
/// complex dilatation `-δ`.
pub fn omega_map(delta: f64, z: Complex64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("dilatation {delta} outside [0, 1)")));
    }
    Ok((z - delta * z.conj()) / (1.0 + delta))
}

/// Vertices `-i/2n, i/2n, l + i/2n, l - i/2n` of the stage-`n` rectangle.
pub fn rect_vertices(n: u64, l: f64) -> Result<[Complex64; 4]> {
    if n == 0 || !(l > 0.0) {
        return Err(Error::InvalidParameter(format!("rectangle n={n}, l={l}")));
    }
    let h = 1.0 / (2.0 * n as f64);
    Ok([Complex64::new(0.0, -h), Complex64::new(0.0, h), Complex64::new(l, h), Complex64::new(l, -h)])
}

/// `(1+R)^2 sqrt(π n l / (1 + (1+n)^4))`.
pub fn shrink_bound(r: f64, l: f64, n: u64) -> Result<f64> {
    if !(r > 0.0) || !(l > 0.0) || n == 0 {
        return Err(Error::InvalidParameter(format!("bound R={r}, l={l}, n={n}")));
    }
    let n = n as f64;
    Ok((1.0 + r).powi(2) * (PI * n * l / (1.0 + (1.0 + n).powi(4))).sqrt())
}

/// `π(1+R)^4`.
pub fn area_bound(r: f64) -> f64 {
    PI * (1.0 + r).powi(4)
}

/// Length of `ω([0, l])` for `δ = δ_n`: `l(1-δ)/(1+δ) = l/(2(n+1)^4 - 1)`.
pub fn model_length(l: f64, n: u64) -> f64 {
    l / (2.0 * (n as f64 + 1.0).powi(4) - 1.0)
}

/// Rows `n = 1..=n_max` of model length against the bound.
pub fn model_shrink_table(l: f64, r: f64, n_max: u64) -> Result<Vec<ShrinkRow>> {
    if !(l > 0.0) || n_max == 0 {
        return Err(Error::InvalidParameter(format!("l={l}, n_max={n_max}")));
    }
    if !(r > l) {
        return Err(Error::Normalization(format!("radius {r} does not exceed the arc length {l}")));
    }
    (1..=n_max)
        .map(|n| Ok(ShrinkRow { n, model_length: model_length(l, n), bound: shrink_bound(r, l, n)? }))
        .collect()
}

/// The map straightening an arc before the stage-`n` rectangle is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rectifier {
    /// The arc already is the segment `[0, l]`.
    StraightSegment,
    /// `g(z) = log z / log 2`, turning round annuli into rectangles.
    AnnularLog,
}

impl Rectifier {
    pub fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Rectifier::StraightSegment => z,
            Rectifier::AnnularLog => z.ln() / LN_2,
        }
    }

    /// `θ(z) = arg(conj(g'(z)) / g'(z))`.
    pub fn theta(self, z: Complex64) -> f64 {
        match self {
            Rectifier::StraightSegment => 0.0,
            Rectifier::AnnularLog => {
                let d = 1.0 / (z * LN_2);
                (d.conj() / d).arg()
            }
        }
    }
}

/// One stage of the length-shrinking construction around a single arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section4Construction {
    pub l: f64,
    pub r: f64,
    pub n: u64,
    pub rectifier: Rectifier,
}

impl Section4Construction {
    pub fn new(l: f64, r: f64, n: u64, rectifier: Rectifier) -> Result<Self> {
        if !(l > 0.0) || n == 0 {
            return Err(Error::InvalidParameter(format!("l={l}, n={n}")));
        }
        if !(r > l) {
            return Err(Error::Normalization(format!("radius {r} does not exceed the arc length {l}")));
        }
        Ok(Section4Construction { l, r, n, rectifier })
    }

    pub fn delta(&self) -> f64 {
        let m = (self.n + 1) as f64;
        1.0 - 1.0 / m.powi(4)
    }

    pub fn rect_vertices(&self) -> [Complex64; 4] {
        rect_vertices(self.n, self.l).expect("validated at construction")
    }

    /// Whether the rectified point lies in the closed stage rectangle.
    pub fn contains(&self, z: Complex64) -> bool {
        let w = self.rectifier.apply(z);
        let h = 1.0 / (2.0 * self.n as f64);
        (0.0..=self.l).contains(&w.re) && w.im.abs() <= h
    }

    pub fn theta(&self, z: Complex64) -> f64 {
        self.rectifier.theta(z)
    }

    /// `-δ_n e^{iθ(z)}` inside the rectangle, `0` outside.
    pub fn mu_n(&self, z: Complex64) -> Complex64 {
        if self.contains(z) {
            -self.delta() * Complex64::from_polar(1.0, self.theta(z))
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn omega(&self, z: Complex64) -> Complex64 {
        omega_map(self.delta(), z).expect("δ_n lies in (0, 1)")
    }

    pub fn model_length(&self) -> f64 {
        model_length(self.l, self.n)
    }

    pub fn bound(&self) -> f64 {
        shrink_bound(self.r, self.l, self.n).expect("validated at construction")
    }

    pub fn area_bound(&self) -> f64 {
        area_bound(self.r)
    }
}
