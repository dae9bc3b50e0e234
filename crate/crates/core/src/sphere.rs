//! Points of the Riemann sphere and the chordal metric.

use std::fmt;

use num_complex::Complex64;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A point of the Riemann sphere: a finite complex number or the point at
/// infinity.
///
/// Finite points never carry NaN or infinite components; arithmetic that
/// overflows lands on [`SpherePoint::Infinity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub const ZERO: SpherePoint = SpherePoint::Finite(Complex64::new(0.0, 0.0));

    /// Wraps a complex number, sending non-finite values to infinity.
    pub fn from_complex(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            SpherePoint::Finite(z)
        } else {
            debug_assert!(!z.re.is_nan() && !z.im.is_nan(), "NaN sphere point");
            SpherePoint::Infinity
        }
    }

    pub fn real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// Inverse stereographic projection onto the unit sphere in R^3, with
    /// infinity at the north pole `(0, 0, 1)`.
    pub fn to_unit_sphere(&self) -> [f64; 3] {
        match *self {
            SpherePoint::Infinity => [0.0, 0.0, 1.0],
            SpherePoint::Finite(z) => {
                let r = z.norm();
                if r <= 1.0 {
                    let s = 1.0 + r * r;
                    [2.0 * z.re / s, 2.0 * z.im / s, (r * r - 1.0) / s]
                } else {
                    // work with 1/r to avoid overflow for huge moduli
                    let u = 1.0 / r;
                    let s = 1.0 + u * u;
                    let (cx, cy) = (z.re / r, z.im / r);
                    [2.0 * u * cx / s, 2.0 * u * cy / s, (1.0 - u * u) / s]
                }
            }
        }
    }

    /// Stereographic projection of a unit vector back to the sphere.
    pub fn from_unit_sphere(v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        if z > 0.0 {
            // z = (1 + Z) / (X - iY), stable near the north pole
            let den = Complex64::new(x, -y);
            if den.norm() == 0.0 {
                return SpherePoint::Infinity;
            }
            SpherePoint::from_complex(Complex64::new(1.0 + z, 0.0) / den)
        } else {
            SpherePoint::from_complex(Complex64::new(x, y) / (1.0 - z))
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::from_complex(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => f.write_str("inf"),
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

/// Chordal distance `2|z-w| / sqrt((1+|z|^2)(1+|w|^2))`, with
/// `d(z, inf) = 2 / sqrt(1+|z|^2)`. Values lie in `[0, 2]`.
pub fn chordal_distance(p: SpherePoint, q: SpherePoint) -> f64 {
    let d = match (p, q) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(z), SpherePoint::Infinity)
        | (SpherePoint::Infinity, SpherePoint::Finite(z)) => 2.0 / 1f64.hypot(z.norm()),
        (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
            2.0 * ((z - w).norm() / 1f64.hypot(z.norm())) / 1f64.hypot(w.norm())
        }
    };
    d.clamp(0.0, 2.0)
}

/// Euclidean distance between two points of R^3.
pub(crate) fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            SpherePoint::Infinity => serializer.serialize_str("inf"),
            SpherePoint::Finite(z) => [z.re, z.im].serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([f64; 2]),
            Tag(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Tag(s) if s == "inf" => Ok(SpherePoint::Infinity),
            Repr::Tag(s) => Err(de::Error::custom(format!(
                "expected [re, im] or \"inf\", got {s:?}"
            ))),
            Repr::Pair([re, im]) => {
                if re.is_finite() && im.is_finite() {
                    Ok(SpherePoint::Finite(Complex64::new(re, im)))
                } else {
                    Err(de::Error::custom("non-finite coordinate"))
                }
            }
        }
    }
}
