use std::path::PathBuf;

use kleinpinch::group::{EnumerationOptions, DEFAULT_BUDGET};
use kleinpinch::{Complex64, SpherePoint, Window};

use crate::Failure;

pub const BUDGET_ENV: &str = "KLEINPINCH_BUDGET";

/// Everything a subcommand needs, validated once up front. Identical
/// configurations produce identical output files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub inputs: Vec<PathBuf>,
    pub out: PathBuf,
    pub window: Window,
    pub res: usize,
    pub depth: usize,
    pub n_max: u64,
    pub tau_cls: f64,
    pub tau_omega: f64,
    pub eps_tail: f64,
    pub seed: u64,
    pub budget: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        if self.res < 8 {
            return Err(Failure::input(format!("resolution {} is below 8", self.res)));
        }
        for (name, v) in [("tau-cls", self.tau_cls), ("tau-omega", self.tau_omega), ("eps-tail", self.eps_tail)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Failure::input(format!("--{name} {v} must lie in (0, 1)")));
            }
        }
        if self.budget == 0 {
            return Err(Failure::input("enumeration budget must be positive"));
        }
        Ok(())
    }

    pub fn enumeration(&self) -> EnumerationOptions {
        EnumerationOptions { budget: self.budget, ..EnumerationOptions::default() }
    }
}

pub fn budget_from_env() -> Result<usize, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("{BUDGET_ENV}={v:?} is not a word count"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

pub fn parse_window(s: &str) -> Result<Window, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[a, b, c, d] => Window::new(a, b, c, d).map_err(|e| e.to_string()),
        _ => Err(format!("expected x_min,x_max,y_min,y_max, got {} numbers", v.len())),
    }
}

pub fn parse_point(s: &str) -> Result<SpherePoint, String> {
    if s.trim().eq_ignore_ascii_case("inf") {
        return Ok(SpherePoint::Infinity);
    }
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[x, y] if x.is_finite() && y.is_finite() => Ok(SpherePoint::Finite(Complex64::new(x, y))),
        _ => Err("expected x,y or inf".into()),
    }
}
