use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinpinch"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("KLEINPINCH_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_owned).collect()
}

#[test]
fn mu_curve_rows_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["mu-curve", "--samples", "16", "--res", "64"], a.path())), 0);
    assert_eq!(code(&run(&["mu-curve", "--samples", "16", "--res", "64"], b.path())), 0);
    let rows = lines(&a.path().join("mu_curve.csv"));
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0], "eta,abs_mu");
    for name in ["mu_curve.csv", "partition.pgm"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    assert_eq!(code(&run(&["mu-curve", "--samples", "15"], a.path())), 2);
}

#[test]
fn pinch_tables() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["pinch", "--nmax", "100"], dir.path())), 0);
    let pinch = lines(&dir.path().join("pinch.csv"));
    assert_eq!(pinch.len(), 100);
    assert_eq!(pinch[0], "n,tr2,gap,delta_n");
    let last: Vec<&str> = pinch[99].split(',').collect();
    assert_eq!(last[0], "100");
    assert!((last[1].parse::<f64>().unwrap() - (4.0 + 4.0 / 9999.0)).abs() < 1e-11);

    for row in lines(&dir.path().join("shrink.csv")).iter().skip(1) {
        let v: Vec<f64> = row.split(',').map(|t| t.parse().unwrap()).collect();
        assert!(v[1] <= v[2], "{row}");
    }

    assert_eq!(code(&run(&["pinch", "--nmax", "2"], dir.path())), 0);
    assert_eq!(lines(&dir.path().join("pinch.csv")).len(), 2);
    assert_eq!(code(&run(&["pinch", "--nmax", "1"], dir.path())), 2);
    // the normalization radius must exceed the arc length
    assert_eq!(code(&run(&["pinch", "--length", "2", "--radius", "1"], dir.path())), 2);
}

#[test]
fn limitset_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cyclic = data("cyclic_2z.json");
    let o = run(&["limitset", "--group", cyclic.to_str().unwrap(), "--depth", "5"], dir.path());
    assert_eq!(code(&o), 0);
    let mut rows = lines(&dir.path().join("limitset.csv"));
    assert_eq!(rows.remove(0), "re,im");
    rows.sort();
    assert_eq!(rows, ["0,0", "inf"]);
    let pgm = fs::read(dir.path().join("limitset.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n512 512\n255\n"));

    let desk = data("desk_genus2.json");
    let first = tempfile::tempdir().unwrap();
    let args = ["limitset", "--group", desk.to_str().unwrap(), "--depth", "6", "--stereo", "--res", "128"];
    assert_eq!(code(&run(&args, first.path())), 0);
    assert_eq!(code(&run(&args, dir.path())), 0);
    for name in ["limitset.csv", "limitset.pgm"] {
        assert_eq!(fs::read(first.path().join(name)).unwrap(), fs::read(dir.path().join(name)).unwrap());
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let o = run(&["limitset", "--group", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
    assert_eq!(code(&run(&["limitset", "--group", "/nonexistent/group.json"], dir.path())), 2);
    assert_eq!(code(&run(&["pinch", "--res", "4"], dir.path())), 2);
    assert_eq!(code(&run(&["pinch", "--window", "1,1,0,1"], dir.path())), 2);
    assert_eq!(code(&run(&["verify", "--tau-omega", "0"], dir.path())), 2);
    assert_eq!(code(&run(&["no-such-command"], dir.path())), 2);

    let desk = data("desk_genus2.json");
    let o = Command::new(env!("CARGO_BIN_EXE_kleinpinch"))
        .args(["limitset", "--group", desk.to_str().unwrap(), "--out"])
        .arg(dir.path())
        .env("KLEINPINCH_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);

    let blocked = dir.path().join("file");
    fs::write(&blocked, "").unwrap();
    assert_eq!(code(&run(&["pinch", "--nmax", "3"], &blocked.join("sub"))), 1);
}

#[test]
fn verify_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["verify", "--seed", "7"], dir.path());
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    assert!(text.starts_with("seed 7\n"));
    let checks = text.lines().filter(|l| l.ends_with("PASS") || l.ends_with("FAIL")).count();
    assert!(checks >= 12, "{text}");
    let b = run(&["verify", "--seed", "7"], dir.path());
    assert_eq!(a.stdout, b.stdout);

    assert_eq!(code(&run(&["verify", "--threshold-scale", "0"], dir.path())), 4);
    // the literal sign of the noded map fails the Beltrami equation
    assert_eq!(code(&run(&["verify", "--paper-sign"], dir.path())), 4);
}

#[test]
fn noded_check_and_section4() {
    let dir = tempfile::tempdir().unwrap();
    let family = data("positive_axis.json");
    let cyclic = data("cyclic_2z.json");
    let o = run(&["noded-check", "--family", family.to_str().unwrap(), "--group", cyclic.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    let off = dir.path().join("off.json");
    fs::write(
        &off,
        r#"{"arcs":[{"vertices":[[1,0],[2,0]],"stabilizer":{"a":[2,0],"b":[0,0],"c":[0,0],"d":[1,0]}}]}"#,
    )
    .unwrap();
    let o = run(&["noded-check", "--family", off.to_str().unwrap(), "--group", cyclic.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 4);

    assert_eq!(code(&run(&["section4", "--nmax", "5"], dir.path())), 0);
    let rows = lines(&dir.path().join("section4.csv"));
    assert_eq!(rows.len(), 6);
    assert!(rows[1].starts_with("1,0.9375,0.5,"));
}

#[test]
fn orbit_of_a_point() {
    let dir = tempfile::tempdir().unwrap();
    let cyclic = data("cyclic_2z.json");
    let o = run(&["orbit", "--group", cyclic.to_str().unwrap(), "--point", "1,0", "--depth", "2"], dir.path());
    assert_eq!(code(&o), 0);
    let mut rows = lines(&dir.path().join("orbit.csv"));
    rows.remove(0);
    rows.sort();
    assert_eq!(rows, ["0.25,0", "0.5,0", "1,0", "2,0", "4,0"]);
}
