use std::path::Path;
use std::process::{Command, Output};

fn lenscale(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lenscale")).args(args).current_dir(cwd).output().unwrap()
}

const SMALL: &[&str] = &[
    "run",
    "--problem",
    "mbb2d",
    "--nx",
    "48",
    "--ny",
    "16",
    "--rmin",
    "1.5",
    "--rmax",
    "3",
    "--set",
    "iterations_per_stage=8",
    "-q",
];

fn run_small(cwd: &Path, out: &str, extra: &[&str]) -> Output {
    let mut args = SMALL.to_vec();
    args.extend(["--out", out]);
    args.extend(extra);
    lenscale(&args, cwd)
}

#[test]
fn run_writes_outputs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_small(dir.path(), "a", &["--snapshot-every", "20"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run_small(dir.path(), "b", &[]);
    assert_eq!(b.status.code(), Some(0));
    for f in ["history.csv", "summary.json", "ero.pgm", "int.pgm", "dil.pgm"] {
        assert!(dir.path().join("a").join(f).is_file(), "{f} missing");
    }
    assert!(dir.path().join("a/snapshots/int_00020.pgm").is_file());
    let ha = std::fs::read(dir.path().join("a/history.csv")).unwrap();
    let hb = std::fs::read(dir.path().join("b/history.csv")).unwrap();
    assert_eq!(ha, hb);
    assert_eq!(
        std::fs::read(dir.path().join("a/int.pgm")).unwrap(),
        std::fs::read(dir.path().join("b/int.pgm")).unwrap()
    );

    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("a/summary.json")).unwrap()).unwrap();
    let gray = summary["verification"]["gray_level"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&gray));
    assert_eq!(summary["dims"], serde_json::json!([48, 16, 1]));
    assert!(summary["final_objective"]["ero"].as_f64().unwrap() > 0.0);

    // Raster dimensions equal the grid dimensions.
    let bytes = std::fs::read(dir.path().join("a/int.pgm")).unwrap();
    assert!(bytes.starts_with(b"P5\n48 16\n65535\n"));

    // The written design passes verification against its own targets.
    let v = lenscale(&["verify", "a/int.pgm", "--problem", "mbb2d", "--rmin", "1.5"], dir.path());
    let text = String::from_utf8_lossy(&v.stdout);
    assert!(text.contains("gray_level:"), "{text}");
    assert!(matches!(v.status.code(), Some(0) | Some(5)));
}

#[test]
fn verify_flags_violations_with_exit_five() {
    let dir = tempfile::tempdir().unwrap();
    // A one-element-wide bar cannot hold a disk of radius 3.
    let (nx, ny) = (20usize, 10usize);
    let vals: Vec<f64> = (0..nx * ny).map(|e| if e / nx == 5 { 1.0 } else { 0.0 }).collect();
    let f = lenscale::io::Field::new([nx, ny, 1], vals).unwrap();
    lenscale::io::pgm::write(&dir.path().join("bar.pgm"), &f).unwrap();
    let out = lenscale(&["verify", "bar.pgm", "--rmin", "3"], dir.path());
    assert_eq!(out.status.code(), Some(5));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("min_solid: radius 3.000, removed 1.000000"), "{text}");
    assert!(text.contains("result: fail"));
}

#[test]
fn strict_mode_rejects_incompatible_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let out = lenscale(
        &["run", "--nx", "30", "--ny", "10", "--rmin", "3", "--void-ratio", "3", "--rmax", "4", "--strict", "-q"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "problem = mbb2d\nvolfrac = lots\n").unwrap();
    let out = lenscale(&["run", "--config", "bad.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.cfg:2"));
    assert_eq!(lenscale(&["run", "--problem", "bridge"], dir.path()).status.code(), Some(2));
    assert_eq!(lenscale(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(lenscale(&["verify", "missing.pgm", "--rmin", "2"], dir.path()).status.code(), Some(2));
    assert_eq!(lenscale(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# small beam\nproblem = mbb2d\nnx = 40\nny = 12\nrmin = 1.5\niterations_per_stage = 3\nout = from_file\n",
    )
    .unwrap();
    let out = lenscale(&["run", "--config", "run.cfg", "--out", "from_flag", "-q"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("from_flag/summary.json").is_file());
    assert!(!dir.path().join("from_file").exists());
}

#[test]
fn calibrate_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = lenscale(
        &["calibrate", "--sweep", "symmetric", "--from", "0.1", "--to", "0.3", "--steps", "3", "--rfil", "8"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("param,r_fil,"));
    let out = lenscale(&["calibrate", "--thresholds", "0.75,0.5,0.25", "--rfil", "6", "--out", "c.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(dir.path().join("c.csv")).unwrap().lines().count(), 2);
}
