use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pentapod_core::exactpoly::rat_int;
use pentapod_core::geometry::*;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pentapod"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write_design(dir: &TempDir, name: &str, d: &PentapodDesign) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(&DesignJson::from_design(d)).unwrap()).unwrap();
    p
}

fn base() -> [PlanarPoint; 5] {
    canonical_base(&BaseParams::ints(0, 1, 2, 3).unwrap()).unwrap().points
}

fn worked(dir: &TempDir) -> PathBuf {
    write_design(dir, "worked.json", &worked_design())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_worked_is_rec2() {
    let dir = TempDir::new().unwrap();
    let o = run(&["classify", s(&worked(&dir))]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "duporcq-rec2");
}

#[test]
fn classify_verdicts() {
    let dir = TempDir::new().unwrap();
    let b = base();
    let r: [_; 5] = std::array::from_fn(|_| rat_int(1));
    let same = write_design(&dir, "same.json", &PentapodDesign::planar(&b, &b, r.clone()));
    assert_eq!(json(&run(&["classify", s(&same)]))["verdict"], "planar-affine");
    let p3 = build_platform(&b, Kappa::K3, &AffineMap2::identity()).unwrap();
    let rec3 = write_design(&dir, "rec3.json", &PentapodDesign::planar(&b, &p3, r.clone()));
    assert_eq!(json(&run(&["classify", s(&rec3)]))["verdict"], "duporcq-rec3");
    let c = reconstruct_candidates(&b).into_iter().find(|c| c.tag == "2bii").unwrap();
    let bad = write_design(&dir, "2bii.json", &PentapodDesign::planar(&b, &c.platform.unwrap(), r));
    assert_eq!(json(&run(&["classify", s(&bad)]))["verdict"], "invalid-case-2bii");
}

#[test]
fn malformed_json_exits_2() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"base\": [").unwrap();
    assert_eq!(code(&run(&["classify", s(&p)])), 2);
    std::fs::write(&p, r#"{"base": [], "platform": [], "radii2": []}"#).unwrap();
    assert_eq!(code(&run(&["classify", s(&p)])), 2);
}

#[test]
fn degenerate_base_exits_3() {
    let dir = TempDir::new().unwrap();
    let pts = [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)].map(|(x, y)| PlanarPoint::int(x, y));
    let p = write_design(&dir, "line.json", &PentapodDesign::planar(&pts, &pts, std::array::from_fn(|_| rat_int(1))));
    assert_eq!(code(&run(&["classify", s(&p)])), 3);
}

#[test]
fn motion_worked_100() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("t.csv");
    let o = run(&["motion", s(&worked(&dir)), "--r1", "1", "--r2", "18", "--samples", "100", "--out", s(&csv)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["max_leg_residual"].as_f64().unwrap() <= 1e-9);
    assert!(v["max_f0"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["tangent_rank"], 2);
    let mut rd = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(rd.headers().unwrap().len(), 17);
    assert_eq!(rd.records().count(), 100);
}

#[test]
fn motion_single_sample() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("one.csv");
    let o = run(&["motion", s(&worked(&dir)), "--samples", "1", "--out", s(&csv)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("t1,t2,e1,e2,e3"));
}

#[test]
fn motion_error_codes() {
    let dir = TempDir::new().unwrap();
    let mut d = worked_design();
    d.radii2[1] = rat_int(19);
    d.radii2[4] = rat_int(19);
    let p = write_design(&dir, "pert.json", &d);
    assert_eq!(code(&run(&["motion", s(&p), "--samples", "5"])), 5);
    let w = worked(&dir);
    assert_eq!(code(&run(&["motion", s(&w), "--r1", "0", "--r2", "17"])), 4);
    d.radii2[4] = rat_int(18);
    let p = write_design(&dir, "asym.json", &d);
    assert_eq!(code(&run(&["motion", s(&p), "--samples", "5"])), 4);
}

#[test]
fn motion_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let w = worked(&dir);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let oa = run(&["motion", s(&w), "--samples", "30", "--seed", "4", "--out", s(&a)]);
    let ob = run(&["motion", s(&w), "--samples", "30", "--seed", "4", "--out", s(&b)]);
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn pipeline_identity_and_generic() {
    let dir = TempDir::new().unwrap();
    let id = dir.path().join("id.json");
    std::fs::write(&id, r#"{"A4":"0","B4":"1","A5":"2","B5":"3","mu":["1","0","1"]}"#).unwrap();
    let v = json(&run(&["pipeline", s(&id)]));
    assert_eq!(v["F1F2"]["f2_identically_zero"], true);
    assert!(v["conclusion"].as_str().unwrap().contains("self-motion exists"));
    let generic = dir.path().join("gen.json");
    std::fs::write(&generic, r#"{"A4":"0","B4":"1","A5":"2","B5":"3","mu":["2","1","3"]}"#).unwrap();
    let v = json(&run(&["pipeline", s(&generic)]));
    assert_eq!(v["conclusion"], "no 2-dimensional self-motion");
    // a design file goes through the same path
    let v = json(&run(&["pipeline", s(&worked(&dir))]));
    assert_eq!(v["F1F2"]["f2_identically_zero"], true);
}

#[test]
fn pipeline_degenerate_exits_3() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("p.json");
    std::fs::write(&p, r#"{"A4":"0","B4":"0","A5":"2","B5":"3"}"#).unwrap();
    assert_eq!(code(&run(&["pipeline", s(&p)])), 3);
    std::fs::write(&p, r#"{"A4":"0","B4":"1","A5":"2","B5":"3","mu":["0","1","1"]}"#).unwrap();
    assert_eq!(code(&run(&["pipeline", s(&p)])), 3);
    std::fs::write(&p, r#"{"A4":"0","B4":"1"}"#).unwrap();
    assert_eq!(code(&run(&["pipeline", s(&p)])), 2);
}

#[test]
fn hexapod_check_worked() {
    let dir = TempDir::new().unwrap();
    let o = run(&["hexapod-check", s(&worked(&dir)), "--samples", "40"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["m6_base"], serde_json::json!(["2/5", "3/5", "0"]));
    assert!(v["max_sixth_residual"].as_f64().unwrap() <= 1e-9);
    assert!(v["plucker_rel_sigma_min"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn profile_reports_memberships() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("p.csv");
    let o = run(&["profile", s(&worked(&dir)), "--samples", "5", "--out", s(&csv)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["membership"][0]["direction"], "metallic");
    assert_eq!(v["membership"][0]["lines"], serde_json::json!(["L45"]));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 6);
}

#[test]
fn svg_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let w = worked(&dir);
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    assert_eq!(code(&run(&["svg", s(&w), "--seed", "3", "--out", s(&a)])), 0);
    assert_eq!(code(&run(&["svg", s(&w), "--seed", "3", "--out", s(&b)])), 0);
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    for name in ["metallic", "blue", "green", "orange", "yellow", "pink"] {
        assert!(text.contains(name));
    }
}

#[test]
fn nonpositive_tolerance_is_rejected() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(&["motion", s(&worked(&dir)), "--tol-leg", "0"])), 2);
}
