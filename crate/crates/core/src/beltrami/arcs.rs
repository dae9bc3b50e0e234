//! Finite families of arcs on the sphere and a checker for the conditions
//! of a noded family: arcs inside the region, shrinking diameters,
//! endpoints at the fixed points of a loxodromic stabilizer, and
//! invariance of each arc under its stabilizer.
//!
//! Arcs are spherical polylines: consecutive vertices are joined by the
//! shorter great-circle arc between their images on the unit sphere, so
//! infinity is an ordinary vertex.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Window;
use crate::group::{enumerate_words, EnumerationOptions, GroupSpec};
use crate::moebius::MoebiusTransform;
use crate::sphere::{chordal_distance, dist3, SpherePoint};

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn unit(a: Vec3) -> Vec3 {
    scale(a, 1.0 / norm(a))
}

/// Point at parameter `t` on the great-circle arc from `a` to `b`.
fn slerp(a: Vec3, b: Vec3, t: f64) -> Vec3 {
    let omega = dot(a, b).clamp(-1.0, 1.0).acos();
    if omega < 1e-15 {
        return a;
    }
    let s = omega.sin();
    let (wa, wb) = (((1.0 - t) * omega).sin() / s, (t * omega).sin() / s);
    unit([wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]])
}

/// Whether unit vector `p` on the great circle through `a`, `b` lies between them.
fn between(p: Vec3, a: Vec3, b: Vec3, n: Vec3) -> bool {
    const EPS: f64 = 1e-13;
    dot(cross(a, p), n) >= -EPS && dot(cross(p, b), n) >= -EPS
}

/// Chordal distance from `p` to the great-circle arc `a`–`b`.
fn point_arc_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let endpoints = dist3(p, a).min(dist3(p, b));
    let n = cross(a, b);
    if norm(n) < 1e-15 {
        return endpoints;
    }
    let n = unit(n);
    let q = [p[0] - dot(p, n) * n[0], p[1] - dot(p, n) * n[1], p[2] - dot(p, n) * n[2]];
    if norm(q) < 1e-15 {
        return endpoints;
    }
    let q = unit(q);
    if between(q, a, b, n) {
        dist3(p, q)
    } else {
        endpoints
    }
}

fn arcs_intersect(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> bool {
    let n1 = cross(a, b);
    let n2 = cross(c, d);
    let t = cross(n1, n2);
    if norm(t) < 1e-14 {
        // same great circle: overlapping iff an endpoint lies on the other arc
        return point_arc_distance(c, a, b) < 1e-12
            || point_arc_distance(d, a, b) < 1e-12
            || point_arc_distance(a, c, d) < 1e-12
            || point_arc_distance(b, c, d) < 1e-12;
    }
    let x = unit(t);
    [x, scale(x, -1.0)]
        .into_iter()
        .any(|s| between(s, a, b, n1) && between(s, c, d, n2))
}

/// The region `Δ` the arc interiors must lie in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    Sphere,
    /// The sphere minus finitely many points.
    Punctured { points: Vec<SpherePoint> },
    Window(Window),
}

impl Region {
    pub fn contains(&self, p: SpherePoint, tol: f64) -> bool {
        match self {
            Region::Sphere => true,
            Region::Punctured { points: holes } => holes.iter().all(|&h| chordal_distance(p, h) > tol),
            Region::Window(w) => p.finite().is_some_and(|z| w.contains(z)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcRepr", into = "ArcRepr")]
pub struct Arc {
    vertices: Vec<SpherePoint>,
    stabilizer: Option<MoebiusTransform>,
}

#[derive(Clone, Serialize, Deserialize)]
struct ArcRepr {
    vertices: Vec<SpherePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stabilizer: Option<MoebiusTransform>,
}

impl TryFrom<ArcRepr> for Arc {
    type Error = Error;
    fn try_from(r: ArcRepr) -> Result<Self> {
        Arc::new(r.vertices, r.stabilizer)
    }
}

impl From<Arc> for ArcRepr {
    fn from(a: Arc) -> Self {
        ArcRepr { vertices: a.vertices, stabilizer: a.stabilizer }
    }
}

impl Arc {
    /// A simple spherical polyline with distinct endpoints.
    pub fn new(vertices: Vec<SpherePoint>, stabilizer: Option<MoebiusTransform>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArc("an arc needs at least two vertices".into()));
        }
        let first = vertices[0];
        let last = vertices[vertices.len() - 1];
        if chordal_distance(first, last) <= 1e-12 {
            return Err(Error::InvalidArc("endpoints coincide".into()));
        }
        let v: Vec<Vec3> = vertices.iter().map(|p| p.to_unit_sphere()).collect();
        for (k, w) in v.windows(2).enumerate() {
            let d = dist3(w[0], w[1]);
            if d <= 1e-12 {
                return Err(Error::InvalidArc(format!("repeated vertex at segment {k}")));
            }
            if d >= 2.0 - 1e-9 {
                return Err(Error::InvalidArc(format!("segment {k} joins antipodal points")));
            }
        }
        let segments = v.len() - 1;
        for i in 0..segments {
            for j in i + 1..segments {
                let (a, b, c, d) = (v[i], v[i + 1], v[j], v[j + 1]);
                let crossing = if j == i + 1 {
                    // adjacent segments may only share their common vertex
                    point_arc_distance(d, a, b) < 1e-12 || point_arc_distance(a, c, d) < 1e-12
                } else {
                    arcs_intersect(a, b, c, d)
                };
                if crossing {
                    return Err(Error::InvalidArc(format!("segments {i} and {j} meet")));
                }
            }
        }
        Ok(Arc { vertices, stabilizer })
    }

    pub fn vertices(&self) -> &[SpherePoint] {
        &self.vertices
    }

    pub fn stabilizer(&self) -> Option<&MoebiusTransform> {
        self.stabilizer.as_ref()
    }

    pub fn endpoints(&self) -> (SpherePoint, SpherePoint) {
        (self.vertices[0], self.vertices[self.vertices.len() - 1])
    }

    fn unit_vertices(&self) -> Vec<Vec3> {
        self.vertices.iter().map(|p| p.to_unit_sphere()).collect()
    }

    /// Points along the arc, `per_segment` per segment plus the final vertex.
    pub fn samples(&self, per_segment: usize) -> Vec<SpherePoint> {
        let v = self.unit_vertices();
        let mut out = Vec::with_capacity((v.len() - 1) * per_segment + 1);
        for w in v.windows(2) {
            for k in 0..per_segment {
                out.push(SpherePoint::from_unit_sphere(slerp(w[0], w[1], k as f64 / per_segment as f64)));
            }
        }
        out.push(self.vertices[self.vertices.len() - 1]);
        out
    }

    /// Chordal distance from `p` to the arc.
    pub fn distance_to(&self, p: SpherePoint) -> f64 {
        let q = p.to_unit_sphere();
        self.unit_vertices()
            .windows(2)
            .map(|w| point_arc_distance(q, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn intersects(&self, other: &Arc) -> bool {
        let (u, v) = (self.unit_vertices(), other.unit_vertices());
        u.windows(2)
            .any(|s| v.windows(2).any(|t| arcs_intersect(s[0], s[1], t[0], t[1])))
    }

    /// Spherical (chordal) diameter, estimated from samples.
    pub fn diameter(&self, per_segment: usize) -> f64 {
        let pts: Vec<Vec3> = self.samples(per_segment).iter().map(|p| p.to_unit_sphere()).collect();
        let mut best: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                best = best.max(dist3(*a, *b));
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcFamily {
    #[serde(default = "default_region")]
    pub region: Region,
    pub arcs: Vec<Arc>,
}

fn default_region() -> Region {
    Region::Sphere
}

impl ArcFamily {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
    NotApplicable(String),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail(why) => write!(f, "FAIL ({why})"),
            Verdict::NotApplicable(why) => write!(f, "n/a ({why})"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NodedCheckOptions {
    /// Largest diameter allowed for the last arc of a finite family.
    pub eps_tail: f64,
    pub tol: f64,
    /// Every arc must carry a stabilizer.
    pub require_stabilizers: bool,
    /// Word length searched when looking for each stabilizer in the group.
    pub membership_depth: usize,
    pub samples_per_segment: usize,
}

impl Default for NodedCheckOptions {
    fn default() -> Self {
        NodedCheckOptions {
            eps_tail: 1e-2,
            tol: 1e-9,
            require_stabilizers: false,
            membership_depth: 4,
            samples_per_segment: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodedReport {
    /// Arc interiors lie in the region.
    pub interiors_in_region: Verdict,
    /// Diameters non-increasing with the last one below the tail bound.
    pub diameters_shrink: Verdict,
    /// Endpoints are the fixed points of a loxodromic stabilizer.
    pub endpoints_fixed: Verdict,
    /// Each arc is carried into itself by its stabilizer.
    pub stabilizer_invariance: Verdict,
    /// Each stabilizer is a word in the generators.
    pub stabilizers_in_group: Verdict,
    pub pairwise_disjoint: Verdict,
    pub diameters: Vec<f64>,
}

impl NodedReport {
    pub fn pass(&self) -> bool {
        self.checks().iter().all(|(_, v)| !v.is_fail())
    }

    pub fn checks(&self) -> [(&'static str, &Verdict); 6] {
        [
            ("interiors-in-region", &self.interiors_in_region),
            ("diameters-shrink", &self.diameters_shrink),
            ("endpoints-fixed-by-loxodromic", &self.endpoints_fixed),
            ("stabilizer-invariance", &self.stabilizer_invariance),
            ("stabilizers-in-group", &self.stabilizers_in_group),
            ("pairwise-disjoint", &self.pairwise_disjoint),
        ]
    }
}

fn first_failure<I: IntoIterator<Item = Option<String>>>(it: I) -> Verdict {
    it.into_iter().flatten().next().map_or(Verdict::Pass, Verdict::Fail)
}

/// Checks a finite family of arcs against the noded-family conditions.
///
/// A finite family cannot have diameters tending to zero; the shrinking
/// condition is read as "non-increasing with the last diameter at most
/// `eps_tail`" and is not applicable to a single arc.
pub fn noded_family_check(family: &ArcFamily, group: &GroupSpec, opts: &NodedCheckOptions) -> Result<NodedReport> {
    if opts.require_stabilizers {
        if let Some(k) = family.arcs.iter().position(|a| a.stabilizer.is_none()) {
            return Err(Error::MissingStabilizer(k));
        }
    }
    let n = opts.samples_per_segment.max(2);

    let interiors_in_region = first_failure(family.arcs.iter().enumerate().map(|(k, arc)| {
        let samples = arc.samples(n);
        samples[1..samples.len() - 1]
            .iter()
            .find(|p| !family.region.contains(**p, opts.tol))
            .map(|p| format!("arc {k} leaves the region at {p}"))
    }));

    let diameters: Vec<f64> = family.arcs.iter().map(|a| a.diameter(n)).collect();
    let diameters_shrink = if diameters.len() < 2 {
        Verdict::NotApplicable("fewer than two arcs".into())
    } else if let Some(k) = diameters.windows(2).position(|w| w[1] > w[0] + opts.tol) {
        Verdict::Fail(format!("diameter grows from arc {k} to arc {}", k + 1))
    } else if diameters[diameters.len() - 1] > opts.eps_tail {
        Verdict::Fail(format!("last diameter {:.6} exceeds {}", diameters[diameters.len() - 1], opts.eps_tail))
    } else {
        Verdict::Pass
    };

    let with_stab: Vec<(usize, &Arc, &MoebiusTransform)> = family
        .arcs
        .iter()
        .enumerate()
        .filter_map(|(k, a)| a.stabilizer.as_ref().map(|s| (k, a, s)))
        .collect();
    let no_stabilizers = || Verdict::NotApplicable("no stabilizers given".into());

    let endpoints_fixed = if with_stab.is_empty() {
        no_stabilizers()
    } else {
        first_failure(with_stab.iter().map(|&(k, arc, s)| {
            let class = s.classify();
            if !class.is_loxodromic() {
                return Some(format!("stabilizer of arc {k} is {class}"));
            }
            let fps = s.fixed_points().ok()?;
            let (e0, e1) = arc.endpoints();
            let close = |p: SpherePoint, q: SpherePoint| chordal_distance(p, q) <= opts.tol;
            let matched = fps.len() == 2
                && ((close(e0, fps[0]) && close(e1, fps[1])) || (close(e0, fps[1]) && close(e1, fps[0])));
            (!matched).then(|| format!("endpoints of arc {k} are not the fixed points of its stabilizer"))
        }))
    };

    let stabilizer_invariance = if with_stab.is_empty() {
        no_stabilizers()
    } else {
        first_failure(with_stab.iter().map(|&(k, arc, s)| {
            let worst = arc
                .samples(n)
                .into_iter()
                .map(|p| arc.distance_to(s.apply(p)))
                .fold(0.0, f64::max);
            (worst > opts.tol).then(|| format!("image of arc {k} strays {worst:.3e} from it"))
        }))
    };

    let stabilizers_in_group = if with_stab.is_empty() {
        no_stabilizers()
    } else {
        let words = enumerate_words(group, opts.membership_depth, &EnumerationOptions::default())?;
        first_failure(with_stab.iter().map(|&(k, _, s)| {
            let found = words.iter().any(|w| w.element.approx_eq(s, opts.tol));
            (!found).then(|| format!("stabilizer of arc {k} is not a word of length <= {}", opts.membership_depth))
        }))
    };

    let mut clash = None;
    'outer: for (i, a) in family.arcs.iter().enumerate() {
        for (j, b) in family.arcs.iter().enumerate().skip(i + 1) {
            if a.intersects(b) {
                clash = Some(format!("arcs {i} and {j} meet"));
                break 'outer;
            }
        }
    }
    let pairwise_disjoint = first_failure([clash]);

    Ok(NodedReport {
        interiors_in_region,
        diameters_shrink,
        endpoints_fixed,
        stabilizer_invariance,
        stabilizers_in_group,
        pairwise_disjoint,
        diameters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cyclic_group;
    use num_complex::Complex64;

    fn double() -> MoebiusTransform {
        MoebiusTransform::from_real(2.0, 0.0, 0.0, 1.0).unwrap()
    }

    fn positive_axis(stab: Option<MoebiusTransform>) -> Arc {
        let mut v = vec![SpherePoint::ZERO];
        v.extend([0.25, 0.5, 1.0, 2.0, 4.0, 8.0].map(SpherePoint::real));
        v.push(SpherePoint::Infinity);
        Arc::new(v, stab).unwrap()
    }

    #[test]
    fn positive_axis_is_a_noded_arc() {
        let family = ArcFamily {
            region: Region::Punctured { points: vec![SpherePoint::ZERO, SpherePoint::Infinity] },
            arcs: vec![positive_axis(Some(double()))],
        };
        let g = cyclic_group(double()).unwrap();
        let report = noded_family_check(&family, &g, &NodedCheckOptions::default()).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.endpoints_fixed, Verdict::Pass);
        assert_eq!(report.stabilizer_invariance, Verdict::Pass);
        assert_eq!(report.stabilizers_in_group, Verdict::Pass);
        assert!(matches!(report.diameters_shrink, Verdict::NotApplicable(_)));
        assert!((report.diameters[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wrong_endpoints_fail() {
        let arc = Arc::new(vec![SpherePoint::real(1.0), SpherePoint::real(2.0)], Some(double())).unwrap();
        let family = ArcFamily { region: Region::Sphere, arcs: vec![arc] };
        let g = cyclic_group(double()).unwrap();
        let report = noded_family_check(&family, &g, &NodedCheckOptions::default()).unwrap();
        assert!(report.endpoints_fixed.is_fail());
        assert!(!report.pass());
    }

    #[test]
    fn constant_diameters_fail() {
        // radial segments related by rotation, so their chordal diameters agree
        let arcs = (0..4)
            .map(|k| {
                let angle = std::f64::consts::TAU * k as f64 / 4.0;
                let a = Complex64::from_polar(1.0, angle);
                let b = Complex64::from_polar(2.0, angle);
                Arc::new(vec![SpherePoint::Finite(a), SpherePoint::Finite(b)], None).unwrap()
            })
            .collect();
        let family = ArcFamily { region: Region::Sphere, arcs };
        let g = cyclic_group(double()).unwrap();
        let report = noded_family_check(&family, &g, &NodedCheckOptions::default()).unwrap();
        assert!(report.diameters_shrink.is_fail(), "{report:?}");
        assert_eq!(report.pairwise_disjoint, Verdict::Pass);
    }

    #[test]
    fn missing_stabilizer_when_required() {
        let family = ArcFamily { region: Region::Sphere, arcs: vec![positive_axis(None)] };
        let g = cyclic_group(double()).unwrap();
        let opts = NodedCheckOptions { require_stabilizers: true, ..Default::default() };
        assert!(matches!(noded_family_check(&family, &g, &opts), Err(Error::MissingStabilizer(0))));
    }

    #[test]
    fn non_member_stabilizer_flagged() {
        let triple = MoebiusTransform::from_real(3.0, 0.0, 0.0, 1.0).unwrap();
        let family = ArcFamily { region: Region::Sphere, arcs: vec![positive_axis(Some(triple))] };
        let g = cyclic_group(double()).unwrap();
        let report = noded_family_check(&family, &g, &NodedCheckOptions::default()).unwrap();
        assert_eq!(report.endpoints_fixed, Verdict::Pass);
        assert!(report.stabilizers_in_group.is_fail());
    }

    #[test]
    fn invalid_arcs_rejected() {
        let r = SpherePoint::real;
        assert!(Arc::new(vec![r(1.0)], None).is_err());
        assert!(Arc::new(vec![r(1.0), r(1.0)], None).is_err());
        // antipodal segment is ambiguous
        assert!(Arc::new(vec![SpherePoint::ZERO, SpherePoint::Infinity], None).is_err());
        // folds back on itself
        assert!(Arc::new(vec![r(0.0), r(2.0), r(1.0)], None).is_err());
        // crossing square
        let c = |x: f64, y: f64| SpherePoint::Finite(Complex64::new(x, y));
        assert!(Arc::new(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)], None).is_err());
        assert!(Arc::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)], None).is_ok());
    }

    #[test]
    fn region_containment() {
        let family = ArcFamily {
            region: Region::Window(Window::square(1.0)),
            arcs: vec![positive_axis(Some(double()))],
        };
        let g = cyclic_group(double()).unwrap();
        let report = noded_family_check(&family, &g, &NodedCheckOptions::default()).unwrap();
        assert!(report.interiors_in_region.is_fail());
    }

    #[test]
    fn json_family() {
        let s = r#"{"region":{"kind":"punctured","points":[[0,0],"inf"]},
                    "arcs":[{"vertices":[[0,0],[1,0],[2,0],"inf"],
                             "stabilizer":{"a":[2,0],"b":[0,0],"c":[0,0],"d":[1,0]}}]}"#;
        let family = ArcFamily::from_json(s).unwrap();
        assert_eq!(family.arcs[0].vertices().len(), 4);
        let g = cyclic_group(double()).unwrap();
        assert!(noded_family_check(&family, &g, &NodedCheckOptions::default()).unwrap().pass());
        let bad = r#"{"arcs":[{"vertices":[[0,0]]}]}"#;
        assert!(ArcFamily::from_json(bad).is_err());
    }
}
