use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use discoord::scenario;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_discoord"))
}

fn workdir(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn discoord")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_grid_writes_a_loadable_scenario() {
    let d = workdir("gen-grid");
    let f = d.join("g.txt");
    let out = run(&["generate", "grid", "--m", "20", "--seed", "1", "-o", p(&f)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = scenario::load(&f).unwrap();
    assert_eq!(s.m(), 20);
    s.validate().unwrap();
}

#[test]
fn generate_tunnel_two_has_242_vertices() {
    let out = run(&["generate", "tunnel", "--version", "II", "--m", "20"]);
    assert!(out.status.success());
    let s = scenario::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(s.vertex_count(), 242);
}

#[test]
fn plan_then_validate_grid() {
    let d = workdir("plan-grid");
    let (sc, tr) = (d.join("g.txt"), d.join("g.traj"));
    assert!(run(&["generate", "grid", "--m", "4", "--seed", "1", "-o", p(&sc)]).status.success());
    let out = run(&["plan", p(&sc), "-o", p(&tr)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert_eq!(summary.lines().filter(|l| l.starts_with("robot ")).count(), 4);
    let trajs = discoord::coordinate::trajectory::load(&tr).unwrap();
    assert_eq!(trajs.len(), 4);
    let v = run(&["validate", p(&sc), p(&tr)]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8(v.stdout).unwrap().contains("ok=true"));
}

#[test]
fn heuristic_plan_on_tunnel_two_keeps_lengths() {
    let d = workdir("plan-tunnel");
    let sc = d.join("t.txt");
    assert!(run(&["generate", "tunnel", "--version", "II", "--m", "20", "-o", p(&sc)]).status.success());
    let out = run(&["plan", p(&sc), "--order", "heuristic", "-o", p(&d.join("t.traj"))]);
    assert!(out.status.success());
    let summary = String::from_utf8(out.stdout).unwrap();
    let ratio: f64 = summary
        .split_whitespace()
        .find_map(|w| w.strip_prefix("dist_ratio="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((ratio - 1.0).abs() < 1e-9, "{ratio}");
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let d = workdir("determinism");
    let sc = d.join("t.txt");
    assert!(run(&["generate", "triangles", "--m", "10", "--triangles", "5", "--seed", "2", "-o", p(&sc)]).status.success());
    let mut files = Vec::new();
    for w in ["1", "4"] {
        let tr = d.join(format!("w{w}.traj"));
        let out = run(&["--workers", w, "plan", p(&sc), "--order", "heuristic", "--seed", "7", "-o", p(&tr)]);
        assert!(out.status.success());
        files.push(fs::read(&tr).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn boxed_start_exits_with_assumption_code() {
    let d = workdir("boxed");
    let sc = d.join("b.txt");
    fs::write(
        &sc,
        "scenario 1\nname boxed\n\
         polygon 4\n-3 -3\n3 -3\n3 -1.2\n-3 -1.2\n\
         polygon 4\n-3 1.2\n3 1.2\n3 3\n-3 3\n\
         start 0 0\ntarget 10 0\n",
    )
    .unwrap();
    let out = run(&["plan", p(&sc)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("s0"));
}

#[test]
fn validate_flags_a_tampered_file() {
    let d = workdir("tampered");
    let sc = d.join("s.txt");
    fs::write(&sc, "scenario 1\nname pair\nstart 0 0\nstart 0 10\ntarget 10 0\ntarget 10 10\n").unwrap();
    let tr = d.join("s.traj");
    assert!(run(&["plan", p(&sc), "-o", p(&tr)]).status.success());
    // Robot 1 is teleported next to robot 0 for its whole timeline.
    let text = fs::read_to_string(&tr).unwrap();
    let bad: String = text
        .lines()
        .map(|l| {
            if l.contains("dwell") && l.contains("1.0000000000000000e1") && !l.contains("seg") {
                l.replace("1.0000000000000000e1", "1.0000000000000000e0")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let bad_path = d.join("bad.traj");
    fs::write(&bad_path, bad).unwrap();
    assert_eq!(run(&["validate", p(&sc), p(&bad_path)]).status.code(), Some(4));
}

#[test]
fn render_draws_three_circles_per_position() {
    let d = workdir("render");
    let sc = d.join("g.txt");
    assert!(run(&["generate", "grid", "--m", "4", "--seed", "1", "-o", p(&sc)]).status.success());
    let svg = d.join("g.svg");
    assert!(run(&["render", p(&sc), "-o", p(&svg)]).status.success());
    let text = fs::read_to_string(&svg).unwrap();
    // Three area circles for each of the 8 positions, plus the 8 position discs.
    assert_eq!(text.matches("<circle").count(), 32);

    let tr = d.join("g.traj");
    assert!(run(&["plan", p(&sc), "-o", p(&tr)]).status.success());
    let frames = d.join("f.svg");
    let out = run(&["render", p(&sc), p(&tr), "-o", p(&frames), "--mode", "frames", "--frames", "5"]);
    assert!(out.status.success());
    for k in 0..5 {
        assert!(d.join(format!("f-{k:04}.svg")).exists());
    }
}

#[test]
fn scenario_without_robots_is_refused() {
    let d = workdir("render-empty");
    let sc = d.join("e.txt");
    fs::write(&sc, "scenario 1\nname empty\n").unwrap();
    let out = run(&["render", p(&sc), "-o", p(&d.join("e.svg"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no robots"));
}

#[test]
fn unknown_order_is_rejected() {
    let out = run(&["plan", "nowhere.txt", "--order", "best"]);
    assert!(!out.status.success());
}
