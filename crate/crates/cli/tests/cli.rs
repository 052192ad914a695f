use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn hyperlay(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlay"))
        .args(args)
        .current_dir(dir)
        .env_remove("HYPERLAY_SEED")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = hyperlay(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    hyperlay(dir, args).status.code().unwrap()
}

fn field(report: &str, name: &str) -> f64 {
    let key = format!("{name}=");
    let start = report.find(&key).unwrap() + key.len();
    report[start..].split_whitespace().next().unwrap().trim_end_matches('s').parse().unwrap()
}

const POSITIONED: &str = r#"graph g {
  a [pos="0,0", cluster=1];
  b [pos="3,1", cluster=1];
  c [pos="-2,4"];
  d [pos="1,-5"];
  a -- b; b -- c; c -- d; d -- a;
}
"#;

#[test]
fn gen_writes_the_requested_family() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["gen", "cycle", "50", "-o", "c.el"]);
    let text = fs::read_to_string(tmp.path().join("c.el")).unwrap();
    let edges: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(edges.len(), 50);
    assert!(edges.contains(&"0 49") || edges.contains(&"49 0"));
    assert_eq!(ok(tmp.path(), &["gen", "cycle", "50"]), text);
    assert_eq!(code(tmp.path(), &["gen", "grid", "3"]), 2);
}

#[test]
fn hmds_layout_has_the_default_trace_and_round_trips() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "tree", "4", "-o", "tree.el"]);
    let report = ok(dir, &["layout", "tree.el", "--method", "hmds", "--geometry", "hyperbolic", "--seed", "1", "-o", "t.json"]);
    assert_eq!(field(&report, "iterations"), 20.0);
    let text = fs::read_to_string(dir.join("t.json")).unwrap();
    let file = hyperlay::layout_file::LayoutFile::from_json(&text).unwrap();
    assert_eq!(file.method, "hmds");
    assert_eq!(file.trace.as_ref().unwrap().len(), 20);
    assert_eq!(file.to_json(), text);

    let again = ok(dir, &["layout", "tree.el", "--seed", "1", "-o", "t2.json"]);
    assert_eq!(fs::read(dir.join("t.json")).unwrap(), fs::read(dir.join("t2.json")).unwrap());
    assert_eq!(field(&report, "stress"), field(&again, "stress"));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "tree", "3", "-o", "tree.el"]);
    let out = Command::new(env!("CARGO_BIN_EXE_hyperlay"))
        .args(["layout", "tree.el", "-o", "env.json"])
        .current_dir(dir)
        .env("HYPERLAY_SEED", "9")
        .output()
        .unwrap();
    assert!(out.status.success());
    ok(dir, &["layout", "tree.el", "--seed", "9", "-o", "flag.json"]);
    assert_eq!(fs::read(dir.join("env.json")).unwrap(), fs::read(dir.join("flag.json")).unwrap());
}

#[test]
fn spherical_search_on_the_cube_lands_near_a_third_of_pi() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["gen", "cube", "-o", "cube.el"]);
    let report = ok(tmp.path(), &["layout", "cube.el", "--method", "hmds", "--geometry", "spherical", "--alpha-search", "-o", "c.json"]);
    assert!((field(&report, "alpha") - std::f64::consts::FRAC_PI_3).abs() < 0.25, "{report}");
}

#[test]
fn incompatible_requests_exit_with_four() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "path", "4", "-o", "p.el"]);
    assert_eq!(code(dir, &["layout", "p.el", "--method", "project", "-o", "x.json"]), 4);
    assert_eq!(code(dir, &["layout", "p.el", "--method", "force", "--geometry", "euclidean", "-o", "x.json"]), 4);
    assert_eq!(code(dir, &["layout", "p.el", "--geometry", "spherical", "--init", "smart", "-o", "x.json"]), 4);
    assert_eq!(code(dir, &["layout", "p.el", "--geometry", "euclidean", "--alpha-search", "-o", "x.json"]), 4);
    assert!(!dir.join("x.json").exists());
}

#[test]
fn bad_flags_exit_with_two_and_bad_files_with_three() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "path", "4", "-o", "p.el"]);
    assert_eq!(code(dir, &["layout", "p.el", "--bogus", "-o", "x.json"]), 2);
    assert_eq!(code(dir, &["layout", "p.el", "--alpha", "1", "--alpha-search", "-o", "x.json"]), 2);
    assert_eq!(code(dir, &["layout", "p.el", "--method", "sideways", "-o", "x.json"]), 2);

    fs::write(dir.join("broken.el"), "0 1\n1 x\n").unwrap();
    assert_eq!(code(dir, &["layout", "broken.el", "-o", "x.json"]), 3);
    fs::write(dir.join("bad.json"), "{\"version\": 1").unwrap();
    assert_eq!(code(dir, &["render", "bad.json", "-o", "x.svg"]), 3);
    assert_eq!(code(dir, &["metrics", "bad.json"]), 3);
    fs::write(dir.join("arity.json"), r#"{"version":1,"graph":{"nodes":[{"id":0,"label":"0"},{"id":1,"label":"1"}],"edges":[[0,1]]},"geometry":"hyperbolic","method":"hmds","alpha":1.0,"coords":[[0,0,0],[1,0,0]]}"#).unwrap();
    assert_eq!(code(dir, &["metrics", "arity.json"]), 3);
    assert!(!dir.join("x.json").exists() && !dir.join("x.svg").exists());
}

#[test]
fn project_and_force_write_hyperbolic_layouts() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("g.dot"), POSITIONED).unwrap();
    ok(dir, &["layout", "g.dot", "--method", "project", "-o", "p.json"]);
    let p = hyperlay::layout_file::LayoutFile::from_json(&fs::read_to_string(dir.join("p.json")).unwrap()).unwrap();
    assert_eq!((p.method.as_str(), p.geometry.as_str()), ("project", "hyperbolic"));
    assert!(p.source.is_some());

    ok(dir, &["layout", "g.dot", "--method", "force", "--seed", "2", "-o", "f.json", "--trace-out", "f.tsv"]);
    let tsv = fs::read_to_string(dir.join("f.tsv")).unwrap();
    assert!(tsv.starts_with("iteration\tstress\tmax_displacement\n"));
    assert!(tsv.lines().count() > 1);
}

#[test]
fn render_passes_style_through() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen", "tree", "3", "-o", "tree.el"]);
    ok(dir, &["layout", "tree.el", "-o", "t.json"]);
    ok(dir, &["render", "t.json", "-o", "a.svg"]);
    let svg = fs::read_to_string(dir.join("a.svg")).unwrap();
    assert_eq!(svg.matches("stroke-opacity=\"1\"").count(), 14);
    // 15 px at the center, smaller farther out.
    let sizes: Vec<f64> = svg.split("font-size=\"").skip(1).map(|s| s[..s.find('"').unwrap()].parse().unwrap()).collect();
    assert_eq!(sizes.len(), 15);
    assert!(sizes.iter().all(|&s| s > 0.0 && s <= 15.0));
    ok(dir, &["render", "t.json", "-o", "b.svg"]);
    assert_eq!(svg, fs::read_to_string(dir.join("b.svg")).unwrap());

    ok(dir, &["render", "t.json", "--edge-opacity", "0.2", "--label-size", "0", "-o", "c.svg"]);
    let svg = fs::read_to_string(dir.join("c.svg")).unwrap();
    assert_eq!(svg.matches("stroke-opacity=\"0.2\"").count(), 14);
    assert!(!svg.contains("<text"));
    assert_eq!(code(dir, &["render", "t.json", "--zoom", "3", "-o", "d.svg"]), 2);
}

#[test]
fn metrics_of_a_perfect_layout_are_zero() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let exact = r#"{"version":1,"graph":{"nodes":[{"id":0,"label":"a"},{"id":1,"label":"b"}],"edges":[[0,1]]},"geometry":"hyperbolic","method":"hmds","alpha":1.0,"coords":[[0.0,0.0],[1.0,0.0]]}"#;
    fs::write(dir.join("p2.json"), exact).unwrap();
    let report = ok(dir, &["metrics", "p2.json"]);
    assert_eq!(field(&report, "stress"), 0.0);
    assert_eq!(field(&report, "distortion"), 0.0);
}

#[test]
fn compare_picks_hyperbolic_for_a_tree() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["gen", "tree", "5", "-o", "tree.el"]);
    let table = ok(tmp.path(), &["compare", "tree.el"]);
    assert!(table.starts_with("geometry\tmean_distortion"));
    assert!(table.trim_end().ends_with("best\thyperbolic"), "{table}");
    assert!(table.lines().filter(|l| l.ends_with("\t10")).count() == 3);
}
