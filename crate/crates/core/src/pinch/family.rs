use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle::Circle;
use crate::error::{Error, Result};
use crate::moebius::{MoebiusTransform, TransformClass};
use crate::output::fmt_g12;
use crate::sphere::chordal_distance;

use super::section4::{delta_n, delta_n_exact, model_shrink_table};

fn check_index(n: i64) -> Result<()> {
    if n <= 1 {
        Err(Error::DegenerateIndex(n))
    } else {
        Ok(())
    }
}

/// `A_n(z) = ((n-1)/(n+1)) z + 1`, hyperbolic with fixed points `(n+1)/2`
/// and `∞`, converging to `z + 1`.
pub fn a_family(n: i64) -> Result<MoebiusTransform> {
    check_index(n)?;
    let n = n as f64;
    MoebiusTransform::from_real((n - 1.0) / (n + 1.0), 1.0, 0.0, 1.0)
}

/// Inner and outer boundary circles of the fundamental annulus of `A_n`:
/// centre `(n+1)/2`, radii `(n-1)/2` and `(n+1)/2`.
pub fn q_annulus(n: i64) -> Result<(Circle, Circle)> {
    check_index(n)?;
    let center = Complex64::new((n as f64 + 1.0) / 2.0, 0.0);
    Ok((Circle::new(center, (n as f64 - 1.0) / 2.0), Circle::new(center, (n as f64 + 1.0) / 2.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinchRow {
    pub n: u64,
    pub tr2: f64,
    /// Chordal distance between the two fixed points of `A_n`.
    pub gap: f64,
    pub delta_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkRow {
    pub n: u64,
    pub model_length: f64,
    pub bound: f64,
}

fn pinch_row(n: u64) -> Result<PinchRow> {
    let a = a_family(n as i64)?;
    let fixed = a.fixed_points()?;
    let gap = match fixed.as_slice() {
        [p, q] => chordal_distance(*p, *q),
        _ => 0.0,
    };
    Ok(PinchRow { n, tr2: a.trace_squared().re, gap, delta_n: delta_n(n as i64)? })
}

fn exact_increase(m: u64, n: u64) -> bool {
    match (delta_n_exact(m), delta_n_exact(n)) {
        (Ok((a, b)), Ok((c, d))) => a.checked_mul(d).zip(c.checked_mul(b)).is_some_and(|(l, r)| l < r),
        _ => false,
    }
}

/// One row per `n = 2..=n_max`, in order.
pub fn pinch_trajectory(n_max: u64) -> Result<Vec<PinchRow>> {
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max}, need at least 2")));
    }
    (2..=n_max).into_par_iter().map(pinch_row).collect()
}

/// Both tables of the degeneration: the `A_n` trajectory and the shrinkage
/// of the straight-segment model against its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PinchReport {
    pub pinch: Vec<PinchRow>,
    pub shrink: Vec<ShrinkRow>,
    pub length: f64,
    pub radius: f64,
}

impl PinchReport {
    pub fn generate(n_max: u64, length: f64, radius: f64) -> Result<Self> {
        Ok(PinchReport {
            pinch: pinch_trajectory(n_max)?,
            shrink: model_shrink_table(length, radius, n_max)?,
            length,
            radius,
        })
    }

    /// Every broken invariant, described; empty when the tables are sound.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for row in &self.pinch {
            let n = row.n as f64;
            let expected = 4.0 + 4.0 / (n * n - 1.0);
            if (row.tr2 - expected).abs() > 1e-12 {
                out.push(format!("n={}: tr2 {} differs from {}", row.n, row.tr2, expected));
            }
            if let Ok(a) = a_family(row.n as i64) {
                if a.classify() != TransformClass::Hyperbolic {
                    out.push(format!("n={}: A_n is {}", row.n, a.classify()));
                }
            }
            let m = (n + 1.0) / 2.0;
            let gap = 2.0 / (1.0 + m * m).sqrt();
            if (row.gap - gap).abs() > 1e-12 {
                out.push(format!("n={}: gap {} differs from {}", row.n, row.gap, gap));
            }
            if delta_n(row.n as i64).ok() != Some(row.delta_n) {
                out.push(format!("n={}: delta_n {} does not match the schedule", row.n, row.delta_n));
            }
        }
        for w in self.pinch.windows(2) {
            if !(w[1].tr2 < w[0].tr2) {
                out.push(format!("tr2 not decreasing at n={}", w[1].n));
            }
            if !(w[1].gap < w[0].gap) {
                out.push(format!("gap not decreasing at n={}", w[1].n));
            }
            // adjacent δ_n agree in f64 once n is in the thousands; compare exactly
            if !(w[1].delta_n >= w[0].delta_n && exact_increase(w[0].n, w[1].n)) {
                out.push(format!("delta_n not increasing at n={}", w[1].n));
            }
        }
        for row in &self.shrink {
            if !(row.model_length <= row.bound) {
                out.push(format!("n={}: model length {} exceeds bound {}", row.n, row.model_length, row.bound));
            }
        }
        for w in self.shrink.windows(2) {
            if !(w[1].bound < w[0].bound) {
                out.push(format!("bound not decreasing at n={}", w[1].n));
            }
        }
        out
    }

    pub fn write_pinch_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,tr2,gap,delta_n")?;
        for r in &self.pinch {
            writeln!(out, "{},{},{},{}", r.n, fmt_g12(r.tr2), fmt_g12(r.gap), fmt_g12(r.delta_n))?;
        }
        Ok(())
    }

    pub fn write_shrink_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,model_length,bound")?;
        for r in &self.shrink {
            writeln!(out, "{},{},{}", r.n, fmt_g12(r.model_length), fmt_g12(r.bound))?;
        }
        Ok(())
    }
}
