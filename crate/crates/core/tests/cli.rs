use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bertini(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bertini"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("spawn bertini")
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_on_the_plane_and_on_a_conic() {
    let v = json(&bertini(&[
        "classify", "--dim", "2", "--section", "X^2+5*Y^2-Z^2", "--p", "5", "--point", "[0:1:0]",
    ]));
    assert_eq!(v["results"]["classification"], "RegularPoint");
    assert_eq!(v["results"]["fiber"], "SingularPoint");
    assert_eq!(v["results"]["rescued_by_p2_value"], true);

    // 3X + 4Y is the tangent line to the conic at [3:4:0] mod 5
    let v = json(&bertini(&[
        "classify", "--scheme", "schemes/conic.json", "--section", "3*X+4*Y", "--p", "5", "--point", "[3:4:0]",
    ]));
    assert_eq!(v["results"]["fiber"], "SingularPoint");
    assert_ne!(v["results"]["classification"], "NotOnDivisor");
}

#[test]
fn results_payload_is_byte_identical_across_runs_and_threads() {
    let args = ["fiber-density", "--p", "2", "--d", "6", "--r", "2", "--mode", "mc", "--samples", "20000", "--seed", "5"];
    let a = json(&bertini(&args));
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "1"]);
    let b = json(&bertini(&threaded));
    assert_eq!(a["results"].to_string(), b["results"].to_string());
    assert_eq!(a["config"]["command"], b["config"]["command"]);
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bsw.csv");
    let status = bertini(&[
        "bsw", "--d", "2", "--R", "20", "--T", "30", "--samples", "400", "--seed", "1", "--format", "csv",
        "--output", out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("mean"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn exit_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 2, "m": 5, "defining_forms": []}"#).unwrap();
    let code = |args: &[&str]| bertini(args).status.code().unwrap();

    assert_eq!(code(&["zeta", "--scheme", bad.to_str().unwrap(), "--p", "2", "--s", "3", "--r", "1"]), 2);
    assert_eq!(code(&["zeta", "--scheme", "schemes/missing.json", "--p", "2", "--s", "3", "--r", "1"]), 2);
    assert_eq!(code(&["classify", "--dim", "2", "--section", "X^2", "--p", "4", "--point", "[1:0:0]"]), 2);
    assert_eq!(code(&["fiber-density", "--p", "7", "--d", "9"]), 3);
    assert_eq!(code(&["equidist", "--h", "3", "--B", "8", "--N", "5"]), 0);
    assert_eq!(code(&["--help"]), 0);
}
