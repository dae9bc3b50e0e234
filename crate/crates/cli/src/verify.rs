use std::f64::consts::{LN_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kleinpinch::beltrami::{
    discontinuity_partition, example1_zero, invariance_residual, noded_family_check, Arc, ArcFamily,
    NodedCheckOptions, Region,
};
use kleinpinch::group::{desk_schottky, enumerate_words, free_word_count, limit_set, verify_ping_pong};
use kleinpinch::output::fmt_g;
use kleinpinch::pinch::{
    a_family, conjugation_residual, delta_n_exact, model_length, off_slit_samples, omega_map, pinch_trajectory,
    q_annulus, shrink_bound, wirtinger_fd, wirtinger_residual,
};
use kleinpinch::{
    mu_example1, BeltramiField, CellGrid, Complex64, MoebiusTransform, NodedMapExample1, SampleGrid, SampleRegion,
    SpherePoint, TransformClass, Window,
};

use crate::config::RunConfig;
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone)]
struct Check {
    name: &'static str,
    measured: f64,
    threshold: f64,
    bound: Bound,
}

impl Check {
    fn at_most(name: &'static str, measured: f64, threshold: f64) -> Self {
        Check { name, measured, threshold, bound: Bound::AtMost }
    }

    fn at_least(name: &'static str, measured: f64, threshold: f64) -> Self {
        Check { name, measured, threshold, bound: Bound::AtLeast }
    }

    fn count(name: &'static str, failures: usize) -> Self {
        Check::at_most(name, failures as f64, 0.0)
    }

    fn pass(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.measured <= self.threshold,
            Bound::AtLeast => self.measured >= self.threshold,
        }
    }
}

fn finite(p: SpherePoint) -> Complex64 {
    p.finite().expect("finite point")
}

fn checks(config: &RunConfig, literal_sign: bool, scale: f64) -> Result<Vec<Check>, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::new();
    let s = |t: f64| t * scale;

    let mu = |z: Complex64| mu_example1(SpherePoint::Finite(z));
    let at_pi = mu(Complex64::new(-1.0, 0.0))?.norm();
    out.push(Check::at_most("mu-at-pi", (at_pi - (2.0 - LN_2) / (2.0 + LN_2)).abs(), s(1e-12)));

    let eta = example1_zero();
    let zeros = mu(Complex64::from_polar(1.0, eta))?.norm().max(mu(Complex64::from_polar(1.0, TAU - eta))?.norm());
    out.push(Check::at_most("mu-zeros", zeros, s(1e-12)));

    let samples = off_slit_samples(config.seed, 10_000);
    let mut ray = 0.0f64;
    for &z in samples.iter().take(1000) {
        ray = ray.max((mu(z)?.norm() - mu(z / z.norm())?.norm()).abs());
    }
    out.push(Check::at_most("mu-constant-on-rays", ray, s(1e-12)));

    let double = MoebiusTransform::dilation(Complex64::new(2.0, 0.0))?;
    let inv = invariance_residual(&BeltramiField::Example1, &double, &samples)?;
    out.push(Check::at_most("mu-invariance-2z", inv, s(1e-12)));

    let w = NodedMapExample1 { literal_sign };
    let one = MoebiusTransform::translation(Complex64::new(1.0, 0.0));
    let two = MoebiusTransform::translation(Complex64::new(2.0, 0.0));
    out.push(Check::at_most("conjugation-residual", conjugation_residual(&w, &double, &one, &samples)?, s(1e-9)));
    out.push(Check::at_least("conjugation-wrong-target", conjugation_residual(&w, &double, &two, &samples)?, 0.1));

    let band = SampleGrid::closed(SampleRegion::left_band(), 64);
    let wirt = wirtinger_residual(&w, &BeltramiField::Example1, &band, 1e-4)?;
    out.push(Check::at_most("wirtinger-residual", wirt, s(1e-3)));

    let mut omega = 0.0f64;
    for _ in 0..100 {
        let delta = rng.gen_range(0.0..0.999);
        let z = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let (d, dbar) = wirtinger_fd(|p| omega_map(delta, p).ok(), z, 1e-3).expect("affine map is finite");
        omega = omega.max((dbar / d + delta).norm());
    }
    out.push(Check::at_most("omega-dilatation", omega, s(1e-8)));

    let schedule = (1..=20u64)
        .filter(|&n| {
            let (num, den) = delta_n_exact(n).expect("n >= 1");
            den != (n as u128 + 1).pow(4) || den - num != 1
        })
        .count();
    out.push(Check::count("delta-schedule-exact", schedule));

    let rows = pinch_trajectory(1000)?;
    let tr = rows.iter().map(|r| (r.tr2 - (4.0 + 4.0 / ((r.n * r.n - 1) as f64))).abs()).fold(0.0, f64::max);
    out.push(Check::at_most("trace-formula", tr, s(1e-12)));

    let mut classes = 0;
    for r in &rows {
        if a_family(r.n as i64)?.classify_with(config.tau_cls) != TransformClass::Hyperbolic {
            classes += 1;
        }
    }
    if one.classify_with(config.tau_cls) != TransformClass::Parabolic {
        classes += 1;
    }
    out.push(Check::count("family-classification", classes));

    let not_decreasing = rows.windows(2).filter(|p| !(p[1].gap < p[0].gap)).count();
    out.push(Check::count("gap-strictly-decreasing", not_decreasing));
    let gap100 = rows.iter().find(|r| r.n == 100).map(|r| r.gap).unwrap_or(f64::NAN);
    out.push(Check::at_most("gap-at-100", gap100, s(0.04)));

    let mut annulus = 0.0f64;
    for n in [2, 3, 10, 100, 1000] {
        let a = a_family(n)?;
        let (inner, outer) = q_annulus(n)?;
        for z in outer.samples(256) {
            annulus = annulus.max(inner.radial_offset(a.apply_finite(z)).abs());
        }
    }
    out.push(Check::at_most("annulus-pairing", annulus, s(1e-10)));

    let mut ratio = 0.0f64;
    for l in [0.5, 1.0, 2.0] {
        for n in 1..=100 {
            ratio = ratio.max(model_length(l, n) / shrink_bound(2.0 * l, l, n)?);
        }
    }
    out.push(Check::at_most("shrink-domination", ratio, s(1.0)));

    let desk = desk_schottky();
    let ping = verify_ping_pong(&desk)?;
    let orientation = if ping.orientation_ok.iter().all(|&ok| ok) { 0.0 } else { f64::INFINITY };
    out.push(Check::at_most("ping-pong", ping.max_violation.abs() + orientation, s(1e-9)));

    let opts = config.enumeration();
    let words = enumerate_words(&desk, 6, &opts)?;
    let expected = free_word_count(desk.rank(), 6);
    out.push(Check::count("word-count", words.len().abs_diff(expected as usize)));

    let cloud = limit_set(&desk, 6, &opts)?;
    let disks = desk.disks();
    let outside = cloud.points.iter().filter(|p| !disks.iter().any(|d| d.contains(**p, 1e-9))).count();
    out.push(Check::count("limit-set-in-disks", outside));

    let grid = CellGrid::new(Window::square(3.0), 1.0 / 64.0)?;
    let partition = discontinuity_partition(&BeltramiField::Example1, grid, config.tau_omega)?;
    let defect = partition.invariance_defect(&double, 1);
    out.push(Check::count("partition-invariance", defect.exceptions));

    let axis = Arc::new(
        vec![SpherePoint::ZERO, SpherePoint::real(1.0), SpherePoint::real(2.0), SpherePoint::Infinity],
        Some(double),
    )?;
    let family = ArcFamily { region: Region::Punctured { points: vec![SpherePoint::ZERO, SpherePoint::Infinity] }, arcs: vec![axis] };
    let cyclic = kleinpinch::group::cyclic_group(double)?;
    let noded = noded_family_check(&family, &cyclic, &NodedCheckOptions { eps_tail: config.eps_tail, ..Default::default() })?;
    out.push(Check::count("noded-family-axis", noded.checks().iter().filter(|(_, v)| v.is_fail()).count()));

    let a3 = finite(a_family(3)?.apply(SpherePoint::ZERO));
    out.push(Check::at_most("a3-maps-0-to-1", (a3 - 1.0).norm(), s(1e-15)));

    Ok(out)
}

pub fn run(config: &RunConfig, literal_sign: bool, scale: f64) -> Result<(), Failure> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Failure::input(format!("threshold scale {scale} must be a finite non-negative number")));
    }
    let results = checks(config, literal_sign, scale)?;
    println!("seed {}", config.seed);
    if literal_sign {
        println!("noded map sign: literal (cot)");
    }
    for c in &results {
        let op = match c.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        let verdict = if c.pass() { "PASS" } else { "FAIL" };
        println!("{:26} {:>14} {op} {:<10} {verdict}", c.name, fmt_g(c.measured, 6), fmt_g(c.threshold, 6));
    }
    let failed = results.iter().filter(|c| !c.pass()).count();
    println!("{} checks, {} failed", results.len(), failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::invariant(format!("{failed} checks failed")))
    }
}
