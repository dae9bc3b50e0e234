//! Finitely generated groups of Möbius transformations: generator lists,
//! Schottky circle pairings, reduced-word enumeration and limit sets.

mod cloud;
mod words;

pub use cloud::{hausdorff_distance, limit_set, orbit, PointCloud, RasterView, CLOUD_DEDUP_TOL};
pub use words::{enumerate_words, free_word_count, EnumerationOptions, Letter, WordEntry, DEFAULT_BUDGET};

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{Disk, Interior};
use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;
use crate::sphere::SpherePoint;

/// Boundary samples per generator in [`verify_ping_pong`].
pub const PING_PONG_SAMPLES: usize = 64;
pub const PING_PONG_TOL: f64 = 1e-9;

/// A Schottky pairing: the generator sends the complement of `domain` onto
/// the interior of `partner`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pairing {
    pub domain: Disk,
    pub partner: Disk,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    generators: Vec<MoebiusTransform>,
    pairings: Option<Vec<Pairing>>,
}

impl GroupSpec {
    pub fn new(generators: Vec<MoebiusTransform>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidGenerator("no generators".into()));
        }
        if let Some(k) = generators.iter().position(|g| g.is_identity(1e-12)) {
            return Err(Error::InvalidGenerator(format!("generator {k} is the identity")));
        }
        Ok(GroupSpec { generators, pairings: None })
    }

    pub fn with_pairings(generators: Vec<MoebiusTransform>, pairings: Vec<Pairing>) -> Result<Self> {
        let mut spec = Self::new(generators)?;
        if pairings.len() != spec.generators.len() {
            return Err(Error::InvalidConfiguration(format!(
                "{} pairings for {} generators",
                pairings.len(),
                spec.generators.len()
            )));
        }
        check_disjoint(&pairings)?;
        spec.pairings = Some(pairings);
        Ok(spec)
    }

    pub fn generators(&self) -> &[MoebiusTransform] {
        &self.generators
    }

    pub fn pairings(&self) -> Option<&[Pairing]> {
        self.pairings.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// All `2g` designated disks, domains and partners interleaved.
    pub fn disks(&self) -> Vec<Disk> {
        self.pairings
            .iter()
            .flatten()
            .flat_map(|p| [p.domain, p.partner])
            .collect()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let repr: GroupSpecRepr = serde_json::from_str(s)?;
        repr.into_spec()
    }

    pub fn to_json(&self) -> String {
        let repr = GroupSpecRepr {
            generators: self.generators.clone(),
            pairings: self.pairings.as_ref().map(|ps| ps.iter().map(PairingRepr::from).collect()),
        };
        serde_json::to_string_pretty(&repr).expect("group spec serializes")
    }
}

fn check_disjoint(pairings: &[Pairing]) -> Result<()> {
    let disks: Vec<Disk> = pairings.iter().flat_map(|p| [p.domain, p.partner]).collect();
    for (i, d) in disks.iter().enumerate() {
        if !(d.circle.radius > 0.0 && d.circle.radius.is_finite()) {
            return Err(Error::InvalidConfiguration(format!("disk {i} has radius {}", d.circle.radius)));
        }
        for (j, e) in disks.iter().enumerate().skip(i + 1) {
            if !d.is_disjoint_from(e) {
                return Err(Error::InvalidConfiguration(format!("disks {i} and {j} overlap")));
            }
        }
    }
    Ok(())
}

/// The cyclic group generated by `t`.
pub fn cyclic_group(t: MoebiusTransform) -> Result<GroupSpec> {
    GroupSpec::new(vec![t])
}

/// The Möbius map sending the complement of `pairing.domain` onto the
/// interior of `pairing.partner`, fixed by matching the boundary points at
/// angles 0, 2π/3 and 4π/3.
pub fn pairing_map(pairing: &Pairing) -> Result<MoebiusTransform> {
    let angles = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
    let src = angles.map(|t| pairing.domain.circle.point_at(t));
    // Traverse the partner circle so that the complement of the domain lands
    // on the partner's interior side.
    let sign = if pairing.domain.interior == pairing.partner.interior { -1.0 } else { 1.0 };
    let dst = angles.map(|t| pairing.partner.circle.point_at(sign * t));
    MoebiusTransform::from_three_points(src, dst)
}

/// Builds a Schottky group from `g` circle pairings.
pub fn schottky_group(pairings: Vec<Pairing>) -> Result<GroupSpec> {
    check_disjoint(&pairings)?;
    let generators = pairings.iter().map(pairing_map).collect::<Result<Vec<_>>>()?;
    GroupSpec::with_pairings(generators, pairings)
}

/// The genus-2 configuration used throughout the tests: unit disks at `±3`
/// paired by a real loxodromic, and unit disks at `±3i` paired likewise.
pub fn desk_schottky() -> GroupSpec {
    let c = |x: f64, y: f64| Complex64::new(x, y);
    schottky_group(vec![
        Pairing { domain: Disk::bounded(c(-3.0, 0.0), 1.0), partner: Disk::bounded(c(3.0, 0.0), 1.0) },
        Pairing { domain: Disk::bounded(c(0.0, -3.0), 1.0), partner: Disk::bounded(c(0.0, 3.0), 1.0) },
    ])
    .expect("desk configuration is a valid Schottky group")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PingPongReport {
    pub pass: bool,
    /// Worst signed distance of a boundary image to the partner circle
    /// (positive outside the partner disk).
    pub max_violation: f64,
    pub per_generator: Vec<f64>,
    /// Whether each generator sends an exterior point into the partner disk.
    pub orientation_ok: Vec<bool>,
}

/// Checks that each generator carries `∂D_i` onto `∂D'_i` (64 samples,
/// tolerance 1e-9) and the outside of `D_i` into `D'_i`.
pub fn verify_ping_pong(group: &GroupSpec) -> Result<PingPongReport> {
    let pairings = group.pairings().filter(|p| !p.is_empty()).ok_or(Error::MissingPairings)?;
    let mut per_generator = Vec::with_capacity(pairings.len());
    let mut orientation_ok = Vec::with_capacity(pairings.len());
    for (g, pairing) in group.generators().iter().zip(pairings) {
        let worst = pairing
            .domain
            .circle
            .samples(PING_PONG_SAMPLES)
            .map(|z| pairing.partner.signed_distance(g.apply_finite(z)))
            .fold(0.0_f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
        per_generator.push(worst);
        let outside = match pairing.domain.interior {
            Interior::Bounded => SpherePoint::Infinity,
            Interior::Unbounded => SpherePoint::Finite(pairing.domain.circle.center),
        };
        orientation_ok.push(pairing.partner.signed_distance(g.apply(outside)) < 0.0);
    }
    let max_violation = per_generator
        .iter()
        .copied()
        .fold(0.0_f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
    let pass = max_violation.abs() <= PING_PONG_TOL && orientation_ok.iter().all(|&ok| ok);
    Ok(PingPongReport { pass, max_violation, per_generator, orientation_ok })
}

#[derive(Serialize, Deserialize)]
struct DiskRepr {
    center: [f64; 2],
    radius: f64,
    interior: Interior,
}

#[derive(Serialize, Deserialize)]
struct PairingRepr {
    center: [f64; 2],
    radius: f64,
    interior: Interior,
    partner: DiskRepr,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecRepr {
    #[serde(default)]
    generators: Vec<MoebiusTransform>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairings: Option<Vec<PairingRepr>>,
}

impl DiskRepr {
    fn to_disk(&self) -> Disk {
        Disk {
            circle: crate::circle::Circle::new(Complex64::new(self.center[0], self.center[1]), self.radius),
            interior: self.interior,
        }
    }
}

impl From<&Pairing> for PairingRepr {
    fn from(p: &Pairing) -> Self {
        let c = |z: Complex64| [z.re, z.im];
        PairingRepr {
            center: c(p.domain.circle.center),
            radius: p.domain.circle.radius,
            interior: p.domain.interior,
            partner: DiskRepr {
                center: c(p.partner.circle.center),
                radius: p.partner.circle.radius,
                interior: p.partner.interior,
            },
        }
    }
}

impl GroupSpecRepr {
    fn into_spec(self) -> Result<GroupSpec> {
        let pairings = self.pairings.map(|ps| {
            ps.iter()
                .map(|p| Pairing {
                    domain: DiskRepr { center: p.center, radius: p.radius, interior: p.interior }.to_disk(),
                    partner: p.partner.to_disk(),
                })
                .collect::<Vec<_>>()
        });
        match (self.generators.is_empty(), pairings) {
            (true, Some(ps)) => schottky_group(ps),
            (false, Some(ps)) => GroupSpec::with_pairings(self.generators, ps),
            (_, None) => GroupSpec::new(self.generators),
        }
    }
}
