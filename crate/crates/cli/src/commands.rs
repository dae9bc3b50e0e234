use std::fs;
use std::path::Path;

use kleinpinch::beltrami::{discontinuity_partition, noded_family_check, ArcFamily, NodedCheckOptions};
use kleinpinch::group::{limit_set, orbit as group_orbit, PointCloud, RasterView};
use kleinpinch::output::fmt_g12;
use kleinpinch::pinch::{delta_n, mu_curve as sample_mu_curve, write_mu_curve_csv, PinchReport, Section4Construction};
use kleinpinch::pinch::Rectifier;
use kleinpinch::{BeltramiField, CellGrid, GroupSpec, SpherePoint};

use crate::config::RunConfig;
use crate::Failure;

fn write_file(config: &RunConfig, name: &str, bytes: &[u8]) -> Result<(), Failure> {
    fs::create_dir_all(&config.out).map_err(|e| Failure::io(format!("{}: {e}", config.out.display())))?;
    let path = config.out.join(name);
    fs::write(&path, bytes).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path) -> Result<GroupSpec, Failure> {
    GroupSpec::from_json(&read_input(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn mu_curve(config: &RunConfig, samples: usize) -> Result<(), Failure> {
    let rows = sample_mu_curve(samples)?;
    let mut csv = Vec::new();
    write_mu_curve_csv(&rows, &mut csv).expect("writing to memory");
    write_file(config, "mu_curve.csv", &csv)?;

    let h = config.window.width().max(config.window.height()) / config.res as f64;
    let grid = CellGrid::new(config.window, h)?;
    let partition = discontinuity_partition(&BeltramiField::Example1, grid, config.tau_omega)?;
    let mut pgm = Vec::new();
    partition.to_image().write_pgm(&mut pgm).expect("writing to memory");
    write_file(config, "partition.pgm", &pgm)
}

fn write_cloud(config: &RunConfig, stem: &str, cloud: &PointCloud, stereo: bool) -> Result<(), Failure> {
    let mut csv = Vec::new();
    cloud.write_csv(&mut csv).expect("writing to memory");
    write_file(config, &format!("{stem}.csv"), &csv)?;
    let view = if stereo { RasterView::Sphere } else { RasterView::Plane(config.window) };
    let mut pgm = Vec::new();
    cloud.rasterize(config.res, view).write_pgm(&mut pgm).expect("writing to memory");
    write_file(config, &format!("{stem}.pgm"), &pgm)?;
    println!("{} points at depth {}", cloud.len(), cloud.depth);
    Ok(())
}

pub fn limitset(config: &RunConfig, group: &Path, stereo: bool) -> Result<(), Failure> {
    let group = load_group(group)?;
    let cloud = limit_set(&group, config.depth, &config.enumeration())?;
    write_cloud(config, "limitset", &cloud, stereo)
}

pub fn orbit(config: &RunConfig, group: &Path, point: SpherePoint, stereo: bool) -> Result<(), Failure> {
    let group = load_group(group)?;
    let cloud = group_orbit(&group, point, config.depth, &config.enumeration())?;
    write_cloud(config, "orbit", &cloud, stereo)
}

pub fn pinch(config: &RunConfig, length: f64, radius: f64) -> Result<(), Failure> {
    let report = PinchReport::generate(config.n_max, length, radius)?;
    let violations = report.violations();
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        return Err(Failure::invariant(format!("{} invariant violations, nothing written", violations.len())));
    }
    let mut pinch = Vec::new();
    report.write_pinch_csv(&mut pinch).expect("writing to memory");
    write_file(config, "pinch.csv", &pinch)?;
    let mut shrink = Vec::new();
    report.write_shrink_csv(&mut shrink).expect("writing to memory");
    write_file(config, "shrink.csv", &shrink)
}

pub fn section4(config: &RunConfig, length: f64, radius: f64) -> Result<(), Failure> {
    let mut csv = String::from("n,delta_n,half_height,model_length,bound,ratio,area_bound\n");
    for n in 1..=config.n_max {
        let stage = Section4Construction::new(length, radius, n, Rectifier::StraightSegment)?;
        let (model, bound) = (stage.model_length(), stage.bound());
        if !(model <= bound) {
            return Err(Failure::invariant(format!("n={n}: model length {model} exceeds bound {bound}")));
        }
        let half_height = stage.rect_vertices()[1].im;
        csv.push_str(&format!(
            "{n},{},{},{},{},{},{}\n",
            fmt_g12(delta_n(n as i64)?),
            fmt_g12(half_height),
            fmt_g12(model),
            fmt_g12(bound),
            fmt_g12(model / bound),
            fmt_g12(stage.area_bound()),
        ));
    }
    write_file(config, "section4.csv", csv.as_bytes())
}

pub fn noded_check(config: &RunConfig, family: &Path, group: &Path) -> Result<(), Failure> {
    let family = ArcFamily::from_json(&read_input(family)?)
        .map_err(|e| Failure::input(format!("{}: {e}", family.display())))?;
    let group = load_group(group)?;
    let opts = NodedCheckOptions { eps_tail: config.eps_tail, ..NodedCheckOptions::default() };
    let report = noded_family_check(&family, &group, &opts)?;
    for (name, verdict) in report.checks() {
        println!("{name:32} {verdict}");
    }
    let diameters: Vec<String> = report.diameters.iter().map(|d| fmt_g12(*d)).collect();
    println!("{:32} {}", "diameters", diameters.join(" "));
    if report.pass() {
        println!("noded family: pass");
        Ok(())
    } else {
        Err(Failure::invariant("noded family conditions fail"))
    }
}
