use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::sphere::SpherePoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn point_at(&self, angle: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, angle)
    }

    /// `n` equally spaced boundary points starting at angle 0.
    pub fn samples(&self, n: usize) -> impl Iterator<Item = Complex64> + '_ {
        (0..n).map(move |k| self.point_at(std::f64::consts::TAU * k as f64 / n as f64))
    }

    /// Signed radial distance `|z - center| - radius`; `+inf` at infinity.
    pub fn radial_offset(&self, p: SpherePoint) -> f64 {
        match p {
            SpherePoint::Infinity => f64::INFINITY,
            SpherePoint::Finite(z) => (z - self.center).norm() - self.radius,
        }
    }
}

/// Which side of its boundary circle a closed disk on the sphere occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interior {
    Bounded,
    Unbounded,
}

/// A closed disk of the Riemann sphere: the bounded side `|z - c| <= r` or
/// the unbounded side `|z - c| >= r` (including infinity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub circle: Circle,
    pub interior: Interior,
}

impl Disk {
    pub fn bounded(center: Complex64, radius: f64) -> Self {
        Disk { circle: Circle::new(center, radius), interior: Interior::Bounded }
    }

    pub fn unbounded(center: Complex64, radius: f64) -> Self {
        Disk { circle: Circle::new(center, radius), interior: Interior::Unbounded }
    }

    /// Signed distance to the boundary, negative inside the disk.
    pub fn signed_distance(&self, p: SpherePoint) -> f64 {
        let off = self.circle.radial_offset(p);
        match self.interior {
            Interior::Bounded => off,
            Interior::Unbounded => -off,
        }
    }

    pub fn contains(&self, p: SpherePoint, tol: f64) -> bool {
        self.signed_distance(p) <= tol
    }

    /// True when the two closed disks have no common point.
    pub fn is_disjoint_from(&self, other: &Disk) -> bool {
        let gap = (self.circle.center - other.circle.center).norm();
        let (r1, r2) = (self.circle.radius, other.circle.radius);
        match (self.interior, other.interior) {
            (Interior::Bounded, Interior::Bounded) => gap > r1 + r2,
            (Interior::Bounded, Interior::Unbounded) => gap + r1 < r2,
            (Interior::Unbounded, Interior::Bounded) => gap + r2 < r1,
            (Interior::Unbounded, Interior::Unbounded) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjointness() {
        let c = |x: f64, y: f64| Complex64::new(x, y);
        assert!(Disk::bounded(c(-3.0, 0.0), 1.0).is_disjoint_from(&Disk::bounded(c(3.0, 0.0), 1.0)));
        assert!(!Disk::bounded(c(0.0, 0.0), 1.0).is_disjoint_from(&Disk::bounded(c(1.5, 0.0), 1.0)));
        assert!(Disk::bounded(c(0.0, 0.0), 1.0).is_disjoint_from(&Disk::unbounded(c(0.0, 0.0), 2.0)));
        assert!(!Disk::bounded(c(0.0, 0.0), 1.0).is_disjoint_from(&Disk::unbounded(c(0.5, 0.0), 1.2)));
        assert!(!Disk::unbounded(c(0.0, 0.0), 5.0).is_disjoint_from(&Disk::unbounded(c(20.0, 0.0), 1.0)));
    }

    #[test]
    fn signed_distance_sides() {
        let d = Disk::unbounded(Complex64::new(0.0, 0.0), 2.0);
        assert!(d.contains(SpherePoint::Infinity, 0.0));
        assert_eq!(d.signed_distance(SpherePoint::real(3.0)), -1.0);
        assert_eq!(Disk::bounded(Complex64::new(0.0, 0.0), 2.0).signed_distance(SpherePoint::real(3.0)), 1.0);
    }
}
