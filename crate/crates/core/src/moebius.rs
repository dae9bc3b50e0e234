//! Möbius transformations `z -> (az + b) / (cz + d)` normalized to unit
//! determinant, with trace classification and fixed points.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sphere::SpherePoint;

/// Default tolerance on `|tr^2 - 4|` and on `Im tr^2` used by [`MoebiusTransform::classify`].
pub const CLASSIFY_TOL: f64 = 1e-9;

/// A Möbius transformation with `ad - bc = 1`.
///
/// The matrix is only determined up to a global sign; equality checks go
/// through [`MoebiusTransform::approx_eq`], which accounts for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusTransform {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformClass {
    Identity,
    Parabolic,
    Elliptic,
    Hyperbolic,
    StrictlyLoxodromic,
}

impl TransformClass {
    /// Hyperbolic or strictly loxodromic.
    pub fn is_loxodromic(self) -> bool {
        matches!(self, TransformClass::Hyperbolic | TransformClass::StrictlyLoxodromic)
    }
}

impl fmt::Display for TransformClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TransformClass::Identity => "identity",
            TransformClass::Parabolic => "parabolic",
            TransformClass::Elliptic => "elliptic",
            TransformClass::Hyperbolic => "hyperbolic",
            TransformClass::StrictlyLoxodromic => "strictly-loxodromic",
        };
        f.write_str(s)
    }
}

/// The determinant square root with nonnegative real part, positive
/// imaginary part on ties.
fn canonical_sqrt(z: Complex64) -> Complex64 {
    let mut r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        r = -r;
    }
    r
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl MoebiusTransform {
    pub const IDENTITY: MoebiusTransform = MoebiusTransform {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    /// Builds the transformation from arbitrary coefficients, scaling them so
    /// that the determinant is one.
    pub fn normalize(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        if ![a, b, c, d].into_iter().all(is_finite) {
            return Err(Error::DegenerateTransform);
        }
        let det = a * d - b * c;
        if det.norm() == 0.0 || !is_finite(det) {
            return Err(Error::DegenerateTransform);
        }
        let s = canonical_sqrt(det);
        Ok(MoebiusTransform { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::normalize(a.into(), b.into(), c.into(), d.into())
    }

    /// `z -> k z`.
    pub fn dilation(k: Complex64) -> Result<Self> {
        Self::normalize(k, 0.0.into(), 0.0.into(), 1.0.into())
    }

    /// `z -> z + t`.
    pub fn translation(t: Complex64) -> Self {
        MoebiusTransform { b: t, ..Self::IDENTITY }
    }

    /// The unique transformation sending `z[k]` to `w[k]` for `k = 0, 1, 2`.
    /// All six points must be finite and each triple pairwise distinct.
    pub fn from_three_points(z: [Complex64; 3], w: [Complex64; 3]) -> Result<Self> {
        // matrix taking (p0, p1, p2) to (0, 1, inf)
        fn cross(p: [Complex64; 3]) -> Result<MoebiusTransform> {
            let [p0, p1, p2] = p;
            MoebiusTransform::normalize(p1 - p2, -p0 * (p1 - p2), p1 - p0, -p2 * (p1 - p0))
        }
        let zm = cross(z)?;
        let wm = cross(w)?;
        Ok(wm.inverse().compose(&zm))
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    pub fn c(&self) -> Complex64 {
        self.c
    }
    pub fn d(&self) -> Complex64 {
        self.d
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.coefficients().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self ∘ other`, renormalized.
    pub fn compose(&self, other: &MoebiusTransform) -> MoebiusTransform {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        // the product of unit-determinant matrices only drifts by rounding
        Self::normalize(a, b, c, d).unwrap_or(MoebiusTransform { a, b, c, d })
    }

    pub fn inverse(&self) -> MoebiusTransform {
        MoebiusTransform { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `s ∘ self ∘ s^-1`.
    pub fn conjugate_by(&self, s: &MoebiusTransform) -> MoebiusTransform {
        s.compose(self).compose(&s.inverse())
    }

    pub fn apply(&self, p: SpherePoint) -> SpherePoint {
        match p {
            SpherePoint::Infinity => {
                if self.c == Complex64::new(0.0, 0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::from_complex(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => self.apply_finite(z),
        }
    }

    pub fn apply_finite(&self, z: Complex64) -> SpherePoint {
        let den = self.c * z + self.d;
        if den == Complex64::new(0.0, 0.0) {
            return SpherePoint::Infinity;
        }
        SpherePoint::from_complex((self.a * z + self.b) / den)
    }

    /// Complex derivative `1 / (cz + d)^2` at a finite non-pole point.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        (den * den).inv()
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn trace_squared(&self) -> Complex64 {
        let t = self.trace();
        t * t
    }

    /// Equality as transformations: coefficientwise within `tol`, up to the
    /// global sign ambiguity of the matrix.
    pub fn approx_eq(&self, other: &MoebiusTransform, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Coefficientwise max-distance, minimized over the sign of `other`.
    pub fn distance(&self, other: &MoebiusTransform) -> f64 {
        let x = self.coefficients();
        let y = other.coefficients();
        let plus = (0..4).map(|k| (x[k] - y[k]).norm()).fold(0.0, f64::max);
        let minus = (0..4).map(|k| (x[k] + y[k]).norm()).fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::IDENTITY, tol)
    }

    pub fn classify(&self) -> TransformClass {
        self.classify_with(CLASSIFY_TOL)
    }

    /// Trace classification with tolerance `tol` on `|tr^2 - 4|` and `|Im tr^2|`.
    pub fn classify_with(&self, tol: f64) -> TransformClass {
        if self.is_identity(tol) {
            return TransformClass::Identity;
        }
        let t2 = self.trace_squared();
        if (t2 - 4.0).norm() <= tol {
            TransformClass::Parabolic
        } else if t2.im.abs() <= tol && t2.re >= 0.0 && t2.re < 4.0 {
            TransformClass::Elliptic
        } else if t2.im.abs() <= tol && t2.re > 4.0 {
            TransformClass::Hyperbolic
        } else {
            TransformClass::StrictlyLoxodromic
        }
    }

    /// Fixed points: one for a parabolic transformation, two otherwise.
    pub fn fixed_points(&self) -> Result<Vec<SpherePoint>> {
        Ok(self.fixed_points_with_multipliers()?.into_iter().map(|(p, _)| p).collect())
    }

    /// Fixed points paired with the modulus of the eigenvalue attached to
    /// them; the multiplier at the point is the inverse square of that
    /// eigenvalue, so the point attracts iff the modulus exceeds one.
    fn fixed_points_with_multipliers(&self) -> Result<Vec<(SpherePoint, f64)>> {
        let class = self.classify();
        if class == TransformClass::Identity {
            return Err(Error::AllPointsFixed);
        }
        let parabolic = class == TransformClass::Parabolic;
        let zero = Complex64::new(0.0, 0.0);
        if self.c == zero {
            // infinity is fixed with eigenvalue a; the other root has eigenvalue d
            if parabolic {
                return Ok(vec![(SpherePoint::Infinity, 1.0)]);
            }
            let other = SpherePoint::from_complex(self.b / (self.d - self.a));
            return Ok(vec![(SpherePoint::Infinity, self.a.norm()), (other, self.d.norm())]);
        }
        let s = self.a - self.d;
        if parabolic {
            return Ok(vec![(SpherePoint::from_complex(s / (2.0 * self.c)), 1.0)]);
        }
        let tr = self.trace();
        let disc = (tr * tr - 4.0).sqrt();
        let (q, lambda) = if (s + disc).norm() >= (s - disc).norm() {
            (s + disc, (tr + disc) / 2.0)
        } else {
            (s - disc, (tr - disc) / 2.0)
        };
        let z1 = SpherePoint::from_complex(q / (2.0 * self.c));
        // product of the roots is -b/c
        let z2 = SpherePoint::from_complex(-2.0 * self.b / q);
        let m1 = lambda.norm();
        Ok(vec![(z1, m1), (z2, 1.0 / m1)])
    }

    /// Attracting fixed point of a loxodromic transformation, or the unique
    /// fixed point of a parabolic one. `None` for elliptic and identity.
    pub fn attracting_fixed_point(&self) -> Option<SpherePoint> {
        match self.classify() {
            TransformClass::Identity | TransformClass::Elliptic => None,
            TransformClass::Parabolic => self.fixed_points().ok().map(|v| v[0]),
            _ => {
                let fps = self.fixed_points_with_multipliers().ok()?;
                fps.into_iter()
                    .max_by(|x, y| x.1.total_cmp(&y.1))
                    .map(|(p, _)| p)
            }
        }
    }
}

impl fmt::Display for MoebiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z -> ({} z + {}) / ({} z + {})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientRepr {
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
}

impl Serialize for MoebiusTransform {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pair = |z: Complex64| [z.re, z.im];
        CoefficientRepr { a: pair(self.a), b: pair(self.b), c: pair(self.c), d: pair(self.d) }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MoebiusTransform {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = CoefficientRepr::deserialize(deserializer)?;
        let z = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        MoebiusTransform::normalize(z(r.a), z(r.b), z(r.c), z(r.d)).map_err(serde::de::Error::custom)
    }
}
