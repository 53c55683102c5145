use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use wforge_core::geom::SurfacePatch;
use wforge_core::verify::check_straight_lines;
use wforge_core::Complex64;

fn wforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wforge")).args(args).output().unwrap()
}

fn wforge_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wforge")).env("WFORGE_THREADS", threads).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn catalog_lists_every_family_with_domains() {
    let o = wforge(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() >= 11);
    assert!(text.lines().any(|l| l.starts_with("tP ") && l.contains("lambda > 2")));
    assert!(text.lines().any(|l| l.starts_with("rPD ") && l.contains("a > 0")));
    let json: serde_json::Value = serde_json::from_str(&stdout(&wforge(&["catalog", "--format", "json"]))).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 13);
}

#[test]
fn scherk_export_is_a_valid_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let obj = path(dir.path(), "scherk.obj");
    let o = wforge(&["export", "--family", "scherk-doubly", "--theta", "0", "--out", &obj]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&obj).unwrap();
    let vertices: Vec<&str> = text.lines().filter(|l| l.starts_with("v ")).collect();
    let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
    assert!(!vertices.is_empty() && !faces.is_empty());
    for v in &vertices {
        assert!(v.split_whitespace().skip(1).all(|x| x.parse::<f64>().unwrap().is_finite()));
    }
    for f in &faces {
        for corner in f.split_whitespace().skip(1) {
            let k: usize = corner.split('/').next().unwrap().parse().unwrap();
            assert!(k >= 1 && k <= vertices.len());
        }
    }
    let csv = std::fs::read_to_string(path(dir.path(), "scherk.csv")).unwrap();
    assert_eq!(csv.lines().count(), vertices.len() + 1);
    assert!(csv.lines().next().unwrap().ends_with("n_v1,n_v2"));
}

#[test]
fn ply_export_header_matches_body() {
    let dir = tempfile::tempdir().unwrap();
    let ply = path(dir.path(), "enneper.ply");
    assert_eq!(wforge(&["export", "--family", "enneper", "--grid", "0.1,0.8,6,12", "--out", &ply]).status.code(), Some(0));
    let text = std::fs::read_to_string(&ply).unwrap();
    let count = |key: &str| -> usize {
        text.lines().find(|l| l.starts_with(key)).unwrap().rsplit(' ').next().unwrap().parse().unwrap()
    };
    let (nv, nf) = (count("element vertex"), count("element face"));
    let body: Vec<&str> = text.lines().skip_while(|l| *l != "end_header").skip(1).collect();
    assert_eq!(body.len(), nv + nf);
}

/// Radial lines of the exported catenoid at angle π/2 are straight.
#[test]
#[allow(clippy::approx_constant)]
fn catenoid_at_right_angle_exports_a_helicoid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "heli.csv");
    let o = wforge(&["export", "--family", "catenoid", "--theta", "1.5707963", "--grid", "0.3,3,12,16", "--out", &csv]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut positions = Vec::new();
    for (k, row) in text.lines().skip(1).enumerate() {
        let f: Vec<&str> = row.split(',').collect();
        lines.entry(f[1].parse().unwrap()).or_default().push(k);
        positions.push([f[4], f[5], f[6]].map(|x| x.parse::<f64>().unwrap()));
    }
    let n = positions.len();
    let patch = SurfacePatch {
        grid: vec![Complex64::new(0.0, 0.0); n],
        positions,
        basepoint: Complex64::new(1.0, 0.0),
        assoc_angle: 1.5707963,
        metric: vec![1.0; n],
        curvature: vec![-1.0; n],
        normals: vec![wforge_core::sphere::UnitVector::E3; n],
        faces: vec![],
    };
    let groups: Vec<Vec<usize>> = lines.into_values().collect();
    let r = check_straight_lines(&patch, &groups, 1e-5).unwrap();
    assert!(r.pass, "{:e}", r.max_abs_deviation);
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(wforge(&["export", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(wforge(&["export", "--family", "tP", "--param", "lambda=1"]).status.code(), Some(2));
    assert_eq!(wforge(&["verify", "--family", "catenoid", "--check", "bogus"]).status.code(), Some(2));
    assert_eq!(wforge(&["export", "--grid", "1,2"]).status.code(), Some(2));
    assert_eq!(wforge(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_3() {
    // the grid contains G = 0, where the Enneper metric degenerates
    let dir = tempfile::tempdir().unwrap();
    let o = wforge(&["export", "--family", "enneper", "--grid", "0,1,4,4", "--exclude-radius", "0", "--out", &path(dir.path(), "x.obj")]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn scherk_suite_passes() {
    let o = wforge(&["verify", "--suite", "scherk"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn tclp_constancy_reports_minus_eight_ln_four() {
    let o = wforge(&["verify", "--family", "tCLP", "--param", "theta=0.3926991", "--check", "constancy", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mean = json["reports"][0]["mean"].as_f64().unwrap();
    assert!((mean + 11.090355).abs() < 1e-6, "{}", mean);
}

#[test]
fn mismatched_spec_is_a_negative_control() {
    let o = wforge(&["verify", "--family", "catenoid", "--spec", "scherk", "--check", "constancy", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &json["reports"][0];
    assert_eq!(r["negative_control"], true);
    assert_eq!(r["pass"], false);
    assert!(r["max_abs_deviation"].as_f64().unwrap() > 0.1);
}

#[test]
fn failing_check_exits_1() {
    let o = wforge(&["verify", "--family", "catenoid", "--check", "straight-lines", "--theta", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "run.json");
    std::fs::write(&cfg, "{\"family\": \"tCLP\", \"params\": {\"theta\": 0.3}, \"checks\": [\"constancy\"]}").unwrap();
    let o = wforge(&["verify", "--config", &cfg, "--print-config", "--param", "theta=0.2"]);
    let printed = stdout(&o);
    assert!(printed.contains("\"theta\": 0.2"));
    // the echoed config reparses and echoes identically
    let again = path(dir.path(), "again.json");
    std::fs::write(&again, &printed).unwrap();
    assert_eq!(stdout(&wforge(&["verify", "--config", &again, "--print-config"])), printed);
    assert_eq!(wforge(&["verify", "--config", &cfg]).status.code(), Some(0));
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let csv = path(dir.path(), &format!("t{}.csv", threads));
        let json = path(dir.path(), &format!("t{}.json", threads));
        let args = ["export", "--family", "tCLP", "--param", "lambda=0.5", "--out", &csv];
        assert_eq!(wforge_threads(threads, &args).status.code(), Some(0));
        assert_eq!(wforge_threads(threads, &["verify", "--suite", "harmonicity", "--out", &json]).status.code(), Some(0));
        (std::fs::read(&csv).unwrap(), std::fs::read(&json).unwrap())
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn periods_and_deform() {
    let o = wforge(&["periods", "--family", "scherk-singly"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    let dir = tempfile::tempdir().unwrap();
    let base = path(dir.path(), "cat.obj");
    let o = wforge(&["deform", "--family", "catenoid", "--steps", "2", "--grid", "0.5,2,4,8", "--out", &base]);
    assert_eq!(o.status.code(), Some(0));
    for k in 0..=2 {
        assert!(dir.path().join(format!("cat_{:03}.obj", k)).exists());
    }
}
