use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_birdstrike"));
    c.env_remove("BIRDSTRIKE_CONFIG").env_remove("RUST_LOG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn birdstrike")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
        .parse()
        .unwrap()
}

const UNIT: [&str; 14] = [
    "--mass",
    "1",
    "--length",
    "1",
    "--bird-density",
    "1000",
    "--aircraft-density",
    "1000",
    "--bird-speed",
    "0",
    "--aircraft-speed",
    "10",
    "--angle",
    "90",
];

#[test]
fn force_example() {
    let o = run(&[&["force"], &UNIT[..]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value(&out, "force_n"), 50.0);
    assert_eq!(value(&out, "penetration_depth_m"), 1.0);
    assert_eq!(value(&out, "total_speed_m_s"), 10.0);
    assert_eq!(value(&out, "kinetic_energy_j"), 50.0);
}

#[test]
fn force_at_zero_angle() {
    let mut args = [&["force"], &UNIT[..]].concat();
    *args.last_mut().unwrap() = "0";
    let o = run(&args);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "force_n"), 0.0);
}

#[test]
fn zero_aircraft_speed_needs_stationary() {
    let mut args = [&["force"], &UNIT[..]].concat();
    args[12] = "0";
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("singular"), "{}", stderr(&o));

    args[10] = "10";
    args.push("--stationary");
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "force_n"), 50.0);
}

#[test]
fn force_stationary_angle() {
    let o = run(&[
        "force-stationary",
        "--mass",
        "1",
        "--length",
        "1",
        "--bird-density",
        "1000",
        "--aircraft-density",
        "1000",
        "--bird-speed",
        "10",
        "--angle",
        "30",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((value(&stdout(&o), "force_n") - 6.25).abs() < 1e-12);
}

#[test]
fn force_json_and_species_defaults() {
    let o = run(&["force", "--species", "starling", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["total_speed_m_s"].as_f64().unwrap() - 112.35).abs() < 1e-9);
    assert_eq!(v["model"], "moving");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["force", "--bogus"][..],
        &["plan", "--species", "Dodo"],
        &["force", "--mass", "1"],
        &["force", "--species", "Starling", "--angle", "120"],
        &["sweep", "--parameter", "wing_span", "--values", "1"],
        &["plan", "--all", "--scale-factor", "0.5"],
        &["check-cert", "--force", "-1"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "force",
        "force-stationary",
        "plan",
        "drop-velocity",
        "design",
        "matrix",
        "analyze",
        "check-cert",
        "sweep",
    ] {
        let o = run(&[sub, "--help"]);
        assert!(o.status.success(), "{sub}");
        assert!(stdout(&o).contains("Usage"), "{sub}");
    }
}

#[test]
fn plan_starling_paper_gravity() {
    let o = run(&["plan", "--species", "Starling", "--gravity", "paper"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let row = r.records().next().unwrap().unwrap();
    let f = |i: usize| row[i].parse::<f64>().unwrap();
    assert!((f(1) - 112.35).abs() < 1e-9);
    assert!((f(2) - 631.0).abs() <= 1.0);
    assert!((f(4) - 7.49).abs() <= 0.01);
    assert!((f(5) - 2.8).abs() <= 0.1);
}

#[test]
fn plan_all_json() {
    let o = run(&["plan", "--all", "--gravity", "paper", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 11);
    let flagged: Vec<&str> = rows
        .iter()
        .filter(|r| !r["note"].as_str().unwrap().is_empty())
        .map(|r| r["species"].as_str().unwrap())
        .collect();
    assert_eq!(flagged, ["Turkey Vulture"]);
    assert!(stderr(&o).contains("warning: Turkey Vulture"));
}

#[test]
fn drop_velocity_modes() {
    let o = run(&["drop-velocity", "--height", "2.8", "--gravity", "paper"]);
    assert!((value(&stdout(&o), "impact_velocity_m_s") - 56f64.sqrt()).abs() < 1e-12);

    let o = run(&[
        "drop-velocity",
        "--height",
        "2.8",
        "--gravity",
        "paper",
        "--cd",
        "0.82",
        "--projectile",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let v = value(&out, "impact_velocity_m_s");
    assert!(v > 7.0 && v < 7.49, "{v}");
    let t = value(&out, "fall_time_s");

    // Timing the same drop gives the same velocity back.
    let ts = t.to_string();
    let o = run(&[
        "drop-velocity",
        "--fall-time",
        &ts,
        "--gravity",
        "paper",
        "--cd",
        "0.82",
        "--projectile",
        "1",
    ]);
    let out = stdout(&o);
    assert!((value(&out, "impact_velocity_m_s") - v).abs() < 1e-9);
    assert!((value(&out, "height_m") - 2.8).abs() < 1e-9);

    let o = run(&["drop-velocity", "--height", "2.8", "--cd", "0.82"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn design_writes_five_descriptors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "design",
        "--species",
        "Starling",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for n in 1..=5 {
        let spec =
            birdstrike_core::projectile::import_geometry(dir.path().join(format!("sn{n}.json")))
                .unwrap();
        assert_eq!(spec.serial, n);
    }
    let text = std::fs::read_to_string(dir.path().join("sn1.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["shape"], "cylinder");
    assert_eq!(v["dims_m"]["radius"], 0.01);

    let o = run(&["design"]);
    let set: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(set.len(), 5);
    assert_eq!(set[4]["shape"], "ellipsoid");
}

#[test]
fn design_table() {
    let o = run(&["design", "--table"]);
    assert_eq!(stdout(&o).lines().count(), 12);
}

#[test]
fn matrix_and_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let o = run(&["matrix", "--out", m.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("scenario 2.1"));
    let matrix = birdstrike_core::harness::TestMatrix::load(&m).unwrap();
    assert_eq!(matrix.scenarios.len(), 9);
    assert_eq!(matrix.total_iterations(), 135);

    let fx = fixture("measurements_135.csv");
    let o = run(&[
        "analyze",
        "--measurements",
        fx.to_str().unwrap(),
        "--matrix",
        m.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "scenario_id,theoretical_n,experimental_mean_n,experimental_std_n,percent_error,percent_conformance"
    );
    let rows = birdstrike_core::harness::read_report_csv(text.as_bytes(), "out").unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[9].scenario_id, "OVERALL");

    let o = run(&[
        "analyze",
        "--measurements",
        fx.to_str().unwrap(),
        "--format",
        "json",
        "--velocity-split",
        "all-aircraft",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scenarios"].as_array().unwrap().len(), 9);
}

#[test]
fn analyze_strict_mode() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.csv");
    std::fs::write(
        &short,
        "scenario_id,iteration,force_n\nbaseline,1,20\nghost,1,3\n",
    )
    .unwrap();
    let o = run(&[
        "analyze",
        "--measurements",
        short.to_str().unwrap(),
        "--strict",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["analyze", "--measurements", short.to_str().unwrap()]);
    // Non-strict: warnings, then missing data for the other scenarios.
    assert!(
        stderr(&o).contains("warning: unknown scenario id `ghost`"),
        "{}",
        stderr(&o)
    );
    assert_eq!(o.status.code(), Some(1));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "scenario_id,iteration,force_n\nbaseline,1,-2\n").unwrap();
    let o = run(&["analyze", "--measurements", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("force_n"));
}

#[test]
fn check_cert_boundaries() {
    let o = run(&["check-cert", "--force", "2255"]);
    let out = stdout(&o);
    assert!(out.contains("verdict pass"));
    assert_eq!(value(&out, "margin_n"), 0.0);
    let o = run(&["check-cert", "--force", "4820", "--case", "flock"]);
    let out = stdout(&o);
    assert!(out.contains("verdict fail"));
    assert_eq!(value(&out, "margin_n"), -1.0);
}

#[test]
fn sweep_reports_percent_change() {
    let o = run(&["sweep", "--parameter", "impact_angle", "--values", "90,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines().skip(1);
    assert!(lines.next().unwrap().ends_with(",0"));
    assert!(lines.next().unwrap().ends_with(",-100"));
    assert!(stderr(&o).contains("warning: angle claim"));
}

#[test]
fn config_file_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "gravity = \"paper\"\nformat = \"json\"\n").unwrap();
    let o = bin()
        .env("BIRDSTRIKE_CONFIG", &cfg)
        .args(["plan", "--species", "Starling"])
        .output()
        .unwrap();
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows[0]["gravity_m_s2"], 10.0);

    // Flags win over the file.
    let o = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "plan",
        "--species",
        "Starling",
        "--gravity",
        "standard",
        "--format",
        "csv",
    ]);
    assert!(stdout(&o).contains(",9.80665,"));

    std::fs::write(&cfg, "scale_factor = 0.1\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "plan", "--all"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn custom_species_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("birds.csv");
    std::fs::write(
        &p,
        "name,mass_kg,length_m,density_kg_m3,flight_speed_m_s\nTest Bird,1,0.5,1000,10\n",
    )
    .unwrap();
    let o = run(&["--species-file", p.to_str().unwrap(), "plan", "--all"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);

    let o = run(&["--species-file", "/nonexistent/birds.csv", "plan", "--all"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let fx = fixture("measurements_135.csv");
    let runs: Vec<Vec<&str>> = vec![
        vec!["plan", "--all", "--gravity", "paper"],
        vec!["design"],
        vec!["matrix"],
        vec!["analyze", "--measurements", fx.to_str().unwrap()],
        vec!["sweep", "--parameter", "bird_mass", "--values", "0.1,0.2"],
        vec!["force", "--species", "Rock Dove"],
    ];
    for args in runs {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let m1 = dir.path().join("a.json");
    let m2 = dir.path().join("b.json");
    run(&["matrix", "--out", m1.to_str().unwrap()]);
    run(&["matrix", "--out", m2.to_str().unwrap()]);
    assert_eq!(std::fs::read(m1).unwrap(), std::fs::read(m2).unwrap());
}
