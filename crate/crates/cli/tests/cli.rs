use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const HEXAGON: &str = r#"{"vertices": [[1,0],[0.5,0.8660254037844386],[-0.5,0.8660254037844386],[-1,0],[-0.5,-0.8660254037844386],[0.5,-0.8660254037844386]]}"#;
const TRIANGLE: &str = r#"{"vertices": [[0,0],[1,0],[0.2,0.9]]}"#;

fn mahler(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mahler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn volprod_of_the_hexagon() {
    let path = scratch("hexagon.json");
    std::fs::write(&path, HEXAGON).unwrap();
    let out = mahler(&["volprod", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["product"].as_f64().unwrap() - 9.0).abs() < 1e-12);
}

#[test]
fn santalo_point_of_a_triangle_from_stdin() {
    let out = mahler(&["santalo"], Some(TRIANGLE));
    assert_eq!(out.status.code(), Some(0));
    let p = &json(&out)["point"];
    assert!((p[0].as_f64().unwrap() - 0.4).abs() < 1e-7);
    assert!((p[1].as_f64().unwrap() - 0.3).abs() < 1e-7);
}

#[test]
fn disk_area_sum() {
    let out = mahler(&["theorem-b", "--body", "disk", "--n", "4096"], None);
    assert_eq!(out.status.code(), Some(0));
    let sum = json(&out)["sum"].as_f64().unwrap();
    assert!((sum - 2.0 * std::f64::consts::PI).abs() < 1e-4);
}

#[test]
fn polar_writes_file_and_svg() {
    let out_path = scratch("polar.json");
    let svg = scratch("polar.svg");
    let out = mahler(
        &["polar", "-", "--out", out_path.to_str().unwrap(), "--svg", svg.to_str().unwrap()],
        Some(HEXAGON),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let polar: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(polar["vertices"].as_array().unwrap().len(), 6);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn extremal_ellipses() {
    let out = mahler(&["loewner"], Some(HEXAGON));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["contacts"]["pattern"], "hexagon");
    assert!((v["area"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-9);

    let out = mahler(&["john"], Some(TRIANGLE));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_input_exits_one() {
    let out = mahler(&["volprod"], Some(r#"{"vertices": [[0,0],[1,0]]}"#));
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let out = mahler(&["volprod"], Some("not json"));
    assert_eq!(out.status.code(), Some(1));
    let out = mahler(&["no-such-command"], None);
    assert_eq!(out.status.code(), Some(1));
    let out = mahler(&["volprod", "/nonexistent/k.json"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failed_verification_exits_two() {
    // one sweep cannot reach the regular hexagon
    let out = mahler(&["optimize", "--n", "6", "--max-iters", "1", "--tolerance", "1e-12"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification failed"));
}

#[test]
fn optimize_reaches_the_hexagon() {
    let out = mahler(&["optimize", "--n", "6", "--seed", "3"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let trace = v["product_trace"].as_array().unwrap();
    assert!((trace.last().unwrap().as_f64().unwrap() - 9.0).abs() < 1e-6);
}

#[test]
fn csv_outputs_replay() {
    let run = || mahler(&["theorem-d", "--family", "square-intersection", "--eps", "0.01,0.003,0.001,0.0003", "--seed", "4"], None);
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("eps,vol_k,vol_kstar,product,bm_upper,n_discretization\n"));
    assert_eq!(text.lines().count(), 5);

    let out = mahler(&["theorem-e", "--trials", "4", "--eps", "0.001"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("eps,trial,lhs,rhs,violation\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",false")));
}

#[test]
fn sector_and_steiner_and_constants() {
    let out = mahler(&["sector", "--alpha", "0.7", "--area", "0.6", "--competitors", "20"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["spec"]["case_tag"], "i");
    assert_eq!(v["dual"]["case_tag"], "iii");
    assert!(v["best_competitor"].as_f64().unwrap() < v["polar_area"].as_f64().unwrap());

    let out = mahler(&["steiner", "--axis", "0.3"], Some(HEXAGON));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["polar_area_after"].as_f64().unwrap() >= v["polar_area_before"].as_f64().unwrap() - 1e-9);

    let out = mahler(&["constants"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn help_lists_every_subcommand() {
    let out = mahler(&["--help"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in [
        "polar", "volprod", "santalo", "john", "loewner", "steiner", "sector", "optimize",
        "theorem-b", "theorem-d", "theorem-e", "constants",
    ] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
