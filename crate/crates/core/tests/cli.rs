use std::process::{Command, Output};

use serde_json::Value;

fn maclane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maclane"))
        .args(args)
        .env_remove("MACLANE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const HML_F2: &[&str] = &[
    "hml",
    "--ring",
    "Z/2",
    "--coefficients",
    "self",
    "--max-degree",
    "2",
    "--format",
    "json",
];

#[test]
fn hml_golden() {
    let out = maclane(HML_F2);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["HML"], serde_json::json!(["Z/2", "0", "Z/2"]));
    assert_eq!(v["groups"], v["HML"]);
    assert_eq!(v["degrees"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["command"], "hml");
    assert_eq!(v["input"]["ring"], "Z/2");
}

#[test]
fn output_is_deterministic() {
    let a = maclane(HML_F2);
    let b = maclane(HML_F2);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timings_are_opt_in() {
    let mut args = HML_F2.to_vec();
    args.push("--timings");
    let v = json(&maclane(&args));
    assert!(v["timings_ms"].is_array());
    assert!(json(&maclane(HML_F2)).get("timings_ms").is_none());
}

#[test]
fn q_homology_golden() {
    let out = maclane(&[
        "q-homology",
        "--group",
        "Z/2",
        "--max-degree",
        "1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["groups"], serde_json::json!(["Z/2", "0"]));
    let text =
        String::from_utf8(maclane(&["q-homology", "--group", "Z/2", "--max-degree", "1"]).stdout)
            .unwrap();
    assert_eq!(text, "H_0(Q(Z/2)) = Z/2\nH_1(Q(Z/2)) = 0\n");
}

#[test]
fn additivity_verdicts() {
    let out = maclane(&[
        "additivity",
        "--left",
        "Z/2",
        "--right",
        "Z/3",
        "--max-degree",
        "1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["isomorphisms"], serde_json::json!([true, true]));
}

#[test]
fn cold_and_warm_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let dir_arg = dir.path().to_str().unwrap();
    let mut args = HML_F2.to_vec();
    args.extend(["--cache-dir", dir_arg]);
    let cold = maclane(&args);
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(entries > 0, "cold run populates the cache");
    let warm = maclane(&args);
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, maclane(HML_F2).stdout);

    // a corrupt entry is rebuilt
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), b"garbage").unwrap();
    }
    let rebuilt = maclane(&args);
    assert!(rebuilt.status.success());
    assert_eq!(rebuilt.stdout, cold.stdout);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_maclane"))
        .args(["q-homology", "--group", "Z/3", "--max-degree", "0"])
        .env("MACLANE_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}

#[test]
fn selftest_passes() {
    let out = maclane(&["selftest"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(!String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}

#[test]
fn failures_exit_nonzero() {
    assert!(!maclane(&["hml", "--ring", "Z/1", "--max-degree", "0"])
        .status
        .success());
    assert!(
        !maclane(&["hml", "--ring", "Z/2 x Z/2", "--max-degree", "0"])
            .status
            .success()
    );
    assert!(!maclane(&[
        "hml",
        "--ring",
        "/nonexistent/ring.json",
        "--max-degree",
        "0"
    ])
    .status
    .success());
    let out = maclane(&[
        "hml",
        "--ring",
        "Z/2",
        "--max-degree",
        "3",
        "--budget",
        "100",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("p = 1, q = 3"));
    assert!(!maclane(&[
        "q-homology",
        "--group",
        "Z/2",
        "--max-degree",
        "1",
        "--budget",
        "0"
    ])
    .status
    .success());
}
