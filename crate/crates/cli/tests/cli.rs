//! End-to-end runs of the `gravity-ss` binary.

use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravity-ss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn cube(x: &str, y: &str, r: &str) -> String {
    format!(r#"{{"axes":[{{"center":"{x}","radius":"{r}"}},{{"center":"{y}","radius":"{r}"}}]}}"#)
}

fn config(cubes: &[String]) -> String {
    format!(r#"{{"n":2,"cubes":[{}]}}"#, cubes.join(","))
}

#[test]
fn geometry_single_cube() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "one.json", &config(&[cube("0", "0", "1/2")]));
    let out = run(&["geometry", "--input", &input]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["gravity_degree"], 1);
    assert_eq!(report["skewer_degree"], 1);
    assert_eq!(report["u"]["1"], "1");
}

#[test]
fn geometry_pile_and_singleton() {
    let dir = TempDir::new().unwrap();
    let cubes = [
        cube("-1/2", "-1/2", "1/5"),
        cube("-1/2", "1/2", "1/5"),
        cube("1/2", "0", "1/5"),
    ];
    let input = write(&dir, "three.json", &config(&cubes));
    let output = dir.path().join("report.json");
    let out = run(&["geometry", "--input", &input, "--output", output.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(report["j"], 3);
    assert_eq!(report["gravity_degree"], 2);
    assert_eq!(report["decomposable"]["2"], true);
}

#[test]
fn geometry_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let malformed = write(&dir, "bad.json", &config(&[cube("0", "0", "1/5x")]));
    let out = run(&["geometry", "--input", &malformed]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/5x"));

    let overlapping = write(
        &dir,
        "overlap.json",
        &config(&[cube("0", "0", "1/2"), cube("1/4", "0", "1/2")]),
    );
    assert_eq!(code(&run(&["geometry", "--input", &overlapping])), 2);
    assert_eq!(code(&run(&["geometry", "--input", "/nonexistent/config.json"])), 2);
}

#[test]
fn page_compare_holds() {
    let out = run(&[
        "page",
        "--x",
        "1",
        "--p",
        "2",
        "--max-s",
        "3",
        "--max-degree",
        "8",
        "--max-weight",
        "3",
        "--mode",
        "compare",
    ]);
    assert_eq!(code(&out), 0);
    let page = json(&out);
    assert_eq!(page["comparison"]["holds"], true);
    assert_eq!(page["pages"]["E1"]["0,0"], 1);
    assert_eq!(page["pages"]["E1"]["-1,2"], 1);
}

#[test]
fn page_e2_csv() {
    let dir = TempDir::new().unwrap();
    let request = write(
        &dir,
        "req.json",
        r#"{"X":[1,2],"p":3,"maxS":3,"maxDegree":10,"maxWeight":4,"mode":"e2"}"#,
    );
    let csv = dir.path().join("dims.csv");
    let matrices = dir.path().join("d1.json");
    let out = run(&[
        "page",
        "--input",
        &request,
        "--output",
        csv.to_str().unwrap(),
        "--matrices",
        matrices.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3, "weight 4 exceeds maxS");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("weight,s,t,total,e1,e2"));
    assert!(lines.any(|l| l == "0,0,0,0,1,1"));
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(matrices).unwrap()).unwrap();
    assert!(parsed.as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn page_rejects_bad_requests() {
    let dir = TempDir::new().unwrap();
    let empty = write(
        &dir,
        "empty.json",
        r#"{"X":[],"p":2,"maxS":2,"maxDegree":4,"maxWeight":2,"mode":"e2"}"#,
    );
    assert_eq!(code(&run(&["page", "--input", &empty])), 2);
    let composite = [
        "page",
        "--x",
        "1",
        "--p",
        "4",
        "--max-s",
        "2",
        "--max-degree",
        "4",
        "--max-weight",
        "2",
    ];
    assert_eq!(code(&run(&composite)), 2);
    assert_eq!(code(&run(&["page", "--x", "1", "--p", "2"])), 2);
}

#[test]
fn cotor_reports_truncation() {
    let dir = TempDir::new().unwrap();
    let coalgebra = write(
        &dir,
        "c.json",
        r#"{"p":2,"basis":[{"name":"x","deg":2},{"name":"y","deg":4}],"coproduct":{"y":[["x","x",1]]}}"#,
    );
    let out = run(&["cotor", "--input", &coalgebra, "--max-s", "3", "--max-degree", "8"]);
    assert_eq!(code(&out), 3);
    let table = json(&out);
    assert_eq!(table["pages"]["E2"]["0,0"], 1);
    assert_eq!(table["pages"]["E2"]["-1,2"], 1);
    assert_eq!(table["truncated"], true);

    let bad = write(
        &dir,
        "bad.json",
        r#"{"p":2,"basis":[{"name":"x","deg":2}],"coproduct":{"x":[["z","x",1]]}}"#,
    );
    assert_eq!(code(&run(&["cotor", "--input", &bad])), 2);
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--n", "2", "--j", "5", "--seed", "42"]);
    let b = run(&["gen", "--n", "2", "--j", "5", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["cubes"].as_array().unwrap().len(), 5);

    let c = run(&["gen", "--kind", "coalgebra", "--p", "3", "--seed", "7"]);
    assert_eq!(code(&c), 0);
    assert_eq!(
        c.stdout,
        run(&["gen", "--kind", "coalgebra", "--p", "3", "--seed", "7"]).stdout
    );
}

#[test]
fn generated_inputs_round_trip_through_commands() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--j",
            "4",
            "--seed",
            "3",
            "--output",
            cfg.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(code(&run(&["geometry", "--input", cfg.to_str().unwrap()])), 0);

    let c = dir.path().join("c.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--kind",
            "coalgebra",
            "--p",
            "5",
            "--seed",
            "1",
            "--output",
            c.to_str().unwrap()
        ])),
        0
    );
    let out = run(&["verify", "--input", c.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["d_squared_cobar"]["holds"], true);
}

#[test]
fn verify_page_request() {
    let out = run(&[
        "verify",
        "--x",
        "1,2",
        "--p",
        "3",
        "--max-s",
        "3",
        "--max-degree",
        "9",
        "--max-weight",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    for key in ["d_squared_shuffle", "d_squared_cobar", "comparison"] {
        assert_eq!(report[key]["holds"], true, "{key}");
    }
}

#[test]
fn thread_count_is_validated() {
    let ok = Command::new(env!("CARGO_BIN_EXE_gravity-ss"))
        .env("GRAVITY_SS_THREADS", "2")
        .args([
            "page",
            "--x",
            "1",
            "--p",
            "2",
            "--max-s",
            "2",
            "--max-degree",
            "4",
            "--max-weight",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&ok), 0);
    let bad = Command::new(env!("CARGO_BIN_EXE_gravity-ss"))
        .env("GRAVITY_SS_THREADS", "zero")
        .args(["gen"])
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn help_lists_subcommands() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["geometry", "page", "cotor", "verify", "gen"] {
        assert!(text.contains(sub));
    }
}
