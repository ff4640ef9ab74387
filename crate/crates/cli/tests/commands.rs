use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairfield")).args(args).current_dir(dir).output().unwrap()
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn single_profile_reaches_the_coulomb_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["profile", "--mode", "single", "--r-min", "0.1", "--r-max", "10", "--points", "100"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r,phi,phi_coulomb_reference,A_x,A_y,A_z\n"));
    assert!(!text.contains('\r'));
    let data = rows(&text);
    assert_eq!(data.len(), 100);
    let last = data.last().unwrap();
    assert!((last[1] - last[2]).abs() < 1e-6);
}

#[test]
fn pair_profiles_coincide_at_large_separation() {
    let dir = tempfile::tempdir().unwrap();
    for (sym, file) in [("symmetric", "s.csv"), ("antisymmetric", "a.csv")] {
        let out = run(
            &["profile", "--mode", "pair", "--r0", "0,0,10", "--r-min", "0", "--r-max", "25", "--symmetry", sym, "--out", file],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let s = rows(&std::fs::read_to_string(dir.path().join("s.csv")).unwrap());
    let a = rows(&std::fs::read_to_string(dir.path().join("a.csv")).unwrap());
    for (x, y) in s.iter().zip(&a) {
        assert!((x[1] - y[1]).abs() < 1e-8);
    }
    // Well outside both clouds the pair acts as two point charges at z = +-10.
    let point = 1.0 / 15.0 + 1.0 / 35.0;
    assert!((s.last().unwrap()[1] - point).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["profile", "--r-min", "-1"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["profile", "--points", "many"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["surface", "--preset", "fig9"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));

    std::fs::write(dir.path().join("bad.cfg"), "sigma = 1\n# note\nwidth = 2\n").unwrap();
    let out = run(&["moments", "--config", "bad.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("bad.cfg:3: unknown key 'width'"), "{stderr}");
}

#[test]
fn domain_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["moments", "--symmetry", "antisymmetric", "--r0", "0,0,0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("degenerate pair"));

    let out = run(&["recover", "--dxx", "0.5", "--dzz", "-1", "--target", "r0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("dzz must be positive"));
}

#[test]
fn moments_report_and_recover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["moments", "--r0", "0,0,10", "--out", "m.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    let q = &report["quadrupole"];
    assert!((q["dzz"].as_f64().unwrap() - 400.0).abs() < 1e-6);
    assert!(q["trace"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(report["magnetic_moment"], serde_json::json!([0.0, 0.0, 0.0]));
    assert!(report["frame_rotation"].as_array().unwrap().len() == 3);

    let out = run(&["recover", "--input", "m.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((rec["r0"].as_f64().unwrap() - 10.0).abs() < 0.1);
    assert_eq!(rec["regime"]["weak_overlap"], serde_json::Value::Bool(true));
}

#[test]
fn parallel_momentum_has_no_magnetic_moment() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["moments", "--r0", "0,0,0.5", "--p0", "0,0,0.7"], dir.path());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for c in report["magnetic_moment"].as_array().unwrap() {
        assert_eq!(c.as_f64().unwrap(), 0.0);
    }
}

#[test]
fn strong_overlap_recovery_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    run(&["moments", "--r0", "0,0,0.1", "--p0", "0.08,0,0.05", "--out", "m.json"], dir.path());
    let out = run(&["recover", "--input", "m.json", "--target", "p0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let p = &rec["p0"];
    assert!((p["p0x"].as_f64().unwrap() - 0.08).abs() < 0.01 * 0.08);
    assert!((p["p0z"].as_f64().unwrap() - 0.05).abs() < 0.01 * 0.08);
    assert_eq!(rec["regime"]["strong_overlap"], serde_json::Value::Bool(true));
}

#[test]
fn surface_presets() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["surface", "--preset", "fig5", "--n-theta", "9", "--n-phi", "16"], dir.path());
    let data = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(data.len(), 9 * 16);
    for ring in data.chunks(16) {
        assert!(ring.iter().all(|r| r[0] == ring[0][0] && r[2] == ring[0][2]));
    }

    let out = run(&["surface", "--preset", "fig6", "--n-theta", "5", "--n-phi", "16"], dir.path());
    let data = rows(&String::from_utf8(out.stdout).unwrap());
    // Row block 1 is theta = pi/4.
    let ring = &data[16..32];
    assert!((ring[0][0] - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    let spread = ring.iter().map(|r| r[2]).fold(f64::NEG_INFINITY, f64::max)
        - ring.iter().map(|r| r[2]).fold(f64::INFINITY, f64::min);
    assert!(spread > 1e-3);

    let out = run(&["surface", "--preset", "fig4", "--format", "obj", "--n-theta", "7", "--n-phi", "10"], dir.path());
    let obj = String::from_utf8(out.stdout).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 70);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 54);
}

#[test]
fn evolve_reports_minimum_uncertainty_at_culmination() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["evolve", "--t0", "2", "--t-min", "0", "--t-max", "4", "--points", "5", "--units", "hbar=2"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,sigma_t,uncertainty_product\n"));
    let data = rows(&text);
    assert_eq!(data[2], vec![2.0, 1.0, 1.0]);
    assert!(data.iter().all(|r| r[2] >= 1.0));
}

#[test]
fn validate_fails_under_fault_injection_and_impossible_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["validate", "--inject-fault"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.lines().any(|l| l.starts_with("FAIL") && l.contains("quadrupole")));
    assert_eq!(run(&["validate", "--tolerance", "1e-15"], dir.path()).status.code(), Some(3));
}
