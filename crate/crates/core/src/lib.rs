//! Möbius transformations on the Riemann sphere, Kleinian group limit sets,
//! Beltrami coefficients with their discontinuity partitions, and the
//! explicit pinching degeneration of a loxodromic cyclic group to a
//! parabolic one.
//!
//! Points of the sphere are [`SpherePoint`]s and distances are chordal
//! throughout.

pub mod beltrami;
pub mod circle;
pub mod error;
pub mod grid;
pub mod group;
pub mod moebius;
pub mod output;
pub mod pinch;
pub mod sphere;

pub use beltrami::{mu_example1, BeltramiField};
pub use circle::{Circle, Disk, Interior};
pub use error::{Error, Result};
pub use grid::{CellGrid, SampleGrid, SampleRegion, Window};
pub use group::{GroupSpec, Pairing, PointCloud};
pub use moebius::{MoebiusTransform, TransformClass};
pub use num_complex::Complex64;
pub use pinch::{w_example1, NodedMapExample1, PinchReport, Section4Construction};
pub use sphere::{chordal_distance, SpherePoint};
