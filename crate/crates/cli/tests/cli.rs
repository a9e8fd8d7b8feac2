use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn run(args: &[&str], stdin: Option<&str>) -> Run {
    run_env(args, stdin, &[])
}

fn run_env(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_anglestruct"));
    cmd.args(args).env_remove("ANGLESTRUCT_CAP").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    let input = stdin.unwrap_or("").to_owned();
    let mut pipe = child.stdin.take().unwrap();
    let writer = std::thread::spawn(move || pipe.write_all(input.as_bytes()));
    let out = child.wait_with_output().unwrap();
    let _ = writer.join();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

const FACES: &str = "[[0,1,2],[0,3,4],[1,3,5],[2,4,5]]";

fn tetra(d: &str) -> String {
    let map: serde_json::Map<String, Value> = (0..6).map(|e| (e.to_string(), json!(d))).collect();
    json!({ "faces": serde_json::from_str::<Value>(FACES).unwrap(), "D": map }).to_string()
}

fn tetra_structure(values: &[&str; 12]) -> String {
    let corners: Vec<Value> =
        (0..12).map(|i| json!([format!("{}/{}", i / 3, i % 3), values[i]])).collect();
    json!({ "faces": serde_json::from_str::<Value>(FACES).unwrap(), "structure": { "corners": corners } })
        .to_string()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_tetrahedron_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "tetra.json", &tetra("7/10"));
    let path = path.to_str().unwrap();
    let r = run(&["check", path, "--geometry", "spherical", "--invariant", "edge"], None);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json()["verdict"], "feasible");
    let r = run(&["check", path, "--geometry", "hyperbolic"], None);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["certificate"], json!([]));
    assert_eq!(r.json()["slack"], "-1/5");
}

#[test]
fn malformed_values_exit_2() {
    for (value, kind) in [("1/0", "zero-denominator"), ("0.7", "malformed-number"), ("pi", "malformed-number")] {
        let r = run(&["check", "-", "--geometry", "spherical"], Some(&tetra(value)));
        assert_eq!(r.code, 2, "{value}");
        assert_eq!(r.json()["error"], kind);
    }
    let r = run(&["check", "-", "--geometry", "spherical"], Some("{\"faces\": [[0,1,2]]}"));
    assert_eq!((r.code, r.json()["error"].clone()), (2, json!("invalid-surface")));
    let r = run(&["check", "/nonexistent/file.json", "--geometry", "spherical"], None);
    assert_eq!((r.code, r.json()["error"].clone()), (2, json!("io")));
}

#[test]
fn out_of_range_and_missing_invariants_exit_2() {
    let r = run(&["check", "-", "--geometry", "spherical"], Some(&tetra("3/2")));
    assert_eq!((r.code, r.json()["error"].clone()), (2, json!("range-violation")));
    let r = run(&["check", "-", "--geometry", "spherical", "--invariant", "delaunay"], Some(&tetra("1/2")));
    assert_eq!((r.code, r.json()["error"].clone()), (2, json!("missing-field")));
}

#[test]
fn methods_agree_and_report_themselves() {
    for d in ["7/10", "3/5", "2/3"] {
        for g in ["spherical", "hyperbolic"] {
            let e = run(&["check", "-", "--geometry", g, "--method", "enumerate"], Some(&tetra(d)));
            let l = run(&["check", "-", "--geometry", g, "--method", "lp"], Some(&tetra(d)));
            assert_eq!(e.code, l.code, "{d} {g}");
            assert_eq!(e.json()["method"], "enumerate");
            assert_eq!(l.json()["method"], "lp");
            let x = run(&["check", "-", "--geometry", g, "--cross-check"], Some(&tetra(d)));
            assert_eq!(x.code, e.code);
        }
    }
}

#[test]
fn closure_flag() {
    let r = run(&["check", "-", "--closure"], Some(&tetra("2/3")));
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["verdict"], "closure-only");
    let r = run(&["check", "-", "--closure", "--method", "lp"], Some(&tetra("7/10")));
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["certificate"], json!([]));
}

#[test]
fn cap_flag_and_env() {
    let r = run(&["check", "-", "--geometry", "spherical", "--method", "enumerate", "--cap", "2"], Some(&tetra("7/10")));
    assert_eq!((r.code, r.json()["error"].clone()), (2, json!("too-large")));
    let r = run_env(
        &["check", "-", "--geometry", "spherical", "--method", "enumerate"],
        Some(&tetra("7/10")),
        &[("ANGLESTRUCT_CAP", "2")],
    );
    assert_eq!(r.code, 2);
}

#[test]
fn dump_lp_goes_to_stderr() {
    let r = run(&["check", "-", "--geometry", "hyperbolic", "--method", "lp", "--dump-lp"], Some(&tetra("3/5")));
    assert_eq!(r.code, 0);
    assert!(r.stderr.starts_with("# 10 rows x 17 cols"), "{}", r.stderr);
    assert!(!r.stdout.contains("rows"));
}

#[test]
fn construct_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&["construct", "-", "--geometry", "hyperbolic"], Some(&tetra("3/5")));
    assert_eq!(r.code, 0);
    let out = r.json();
    assert_eq!(out["class"], "hyperbolic");
    assert!(out["D"].as_object().unwrap().values().all(|v| v == "3/5"));
    assert!(out["structure"]["corners"].as_array().unwrap().iter().all(|c| c[1] == "3/10"));
    let path = write_temp(&dir, "witness.json", &r.stdout);
    assert_eq!(run(&["verify", path.to_str().unwrap()], None).code, 0);

    let r = run(&["construct", "-", "--geometry", "spherical"], Some(&tetra("7/10")));
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["class"], "spherical");
    assert_eq!(run(&["verify", "-"], Some(&r.stdout)).code, 0);

    let r = run(&["construct", "-", "--geometry", "hyperbolic"], Some(&tetra("7/10")));
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["certificate"], json!([]));
    assert_eq!(r.json()["verdict"], "infeasible");
}

#[test]
fn construct_delaunay() {
    let text = tetra("4/5").replace("\"D\"", "\"Dd\"");
    let r = run(&["construct", "-", "--geometry", "spherical", "--invariant", "delaunay"], Some(&text));
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(run(&["verify", "-"], Some(&r.stdout)).code, 0);
    let r = run(&["construct", "-", "--geometry", "hyperbolic", "--invariant", "delaunay"], Some(&text));
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["certificate"], json!([0, 1, 2, 3]));
}

#[test]
fn invariants_examples() {
    let r = run(&["invariants", "-"], Some(&tetra_structure(&["1/3"; 12])));
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["class"], "euclidean");
    assert!(v["D"].as_object().unwrap().values().all(|x| x == "2/3"));
    assert!(v["Dd"].as_object().unwrap().values().all(|x| x == "2/3"));
    assert_eq!(v["euclidean_relation"], true);

    let v = run(&["invariants", "-"], Some(&tetra_structure(&["7/20"; 12]))).json();
    assert_eq!(v["class"], "spherical");
    assert!(v["D"].as_object().unwrap().values().all(|x| x == "7/10"));
    assert_eq!(v["euclidean_relation"], false);

    let mut mixed = ["1/3"; 12];
    mixed[3..6].copy_from_slice(&["1/4"; 3]);
    let v = run(&["invariants", "-"], Some(&tetra_structure(&mixed))).json();
    assert_eq!(v["class"], "not-geometric");
    assert_eq!(v["D"]["0"], "7/12");
}

#[test]
fn verify_detects_problems() {
    let good = run(&["invariants", "-"], Some(&tetra_structure(&["7/20"; 12]))).stdout;
    assert_eq!(run(&["verify", "-"], Some(&good)).code, 0);

    let perturbed = good.replacen("\"7/20\"", "\"351/1000\"", 1);
    let r = run(&["verify", "-"], Some(&perturbed));
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["valid"], false);
    assert!(r.stdout.contains("D on edge 0"), "{}", r.stdout);

    let mut v: Value = serde_json::from_str(&good).unwrap();
    v["structure"]["corners"].as_array_mut().unwrap().pop();
    let r = run(&["verify", "-"], Some(&v.to_string()));
    assert_eq!((r.code, r.json()["error"].clone()), (2, json!("invalid-angles")));

    let mut v: Value = serde_json::from_str(&good).unwrap();
    v["structure"]["corners"][0][1] = json!("3/2");
    assert_eq!(run(&["verify", "-"], Some(&v.to_string())).code, 1);

    let mut v: Value = serde_json::from_str(&good).unwrap();
    v["class"] = json!("hyperbolic");
    assert_eq!(run(&["verify", "-"], Some(&v.to_string())).code, 1);
}

#[test]
fn gen_examples() {
    let r = run(&["gen", "--faces", "4", "--seed", "1"], None);
    assert_eq!(r.code, 0);
    let faces = r.json()["faces"].as_array().unwrap().clone();
    assert_eq!(faces.len(), 4);
    let edges: std::collections::BTreeSet<u64> =
        faces.iter().flat_map(|f| f.as_array().unwrap().iter().map(|e| e.as_u64().unwrap())).collect();
    assert_eq!(edges.len(), 6);

    let r = run(&["gen", "--faces", "2", "--seed", "7"], None);
    let faces = r.json()["faces"].clone();
    let edges: std::collections::BTreeSet<u64> = faces
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|f| f.as_array().unwrap().iter().map(|e| e.as_u64().unwrap()))
        .collect();
    assert_eq!(edges.len(), 3);

    let r = run(&["gen", "--faces", "3"], None);
    assert_eq!((r.code, r.json()["error"].clone()), (2, json!("odd-face-count")));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["gen", "--faces", "10", "--seed", "42", "--geometry", "spherical"],
        vec!["construct", "-", "--geometry", "spherical"],
        vec!["check", "-", "--geometry", "hyperbolic", "--method", "lp"],
    ] {
        let a = run(&args, Some(&tetra("7/10")));
        let b = run(&args, Some(&tetra("7/10")));
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

/// gen → invariants → check accepts the generated geometry on every seed.
/// Invariants outside a theorem's range are rejected as input errors.
#[test]
fn pipeline_closure() {
    for seed in 0..12u64 {
        for class in ["hyperbolic", "spherical"] {
            let faces = (2 + 2 * (seed % 4)).to_string();
            let generated = run(&["gen", "--faces", &faces, "--seed", &seed.to_string(), "--geometry", class], None);
            assert_eq!(generated.code, 0);
            let inst = run(&["invariants", "-"], Some(&generated.stdout));
            assert_eq!(inst.json()["class"], class);
            let mut accepted = 0;
            for kind in ["edge", "delaunay"] {
                let r = run(&["check", "-", "--geometry", class, "--invariant", kind, "--cross-check"], Some(&inst.stdout));
                match r.code {
                    0 => accepted += 1,
                    2 => assert_eq!(r.json()["error"], "range-violation", "{}", r.stdout),
                    _ => panic!("seed {seed} {class} {kind}: {}", r.stdout),
                }
            }
            assert!(accepted >= 1, "seed {seed} {class}");
        }
    }
}
