//! End-to-end behaviour of the `qpi` binary: exit codes, determinism, formats and schemas.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const DATA: [&str; 6] = [
    "rank1",
    "covering-sl2",
    "B(0,1)",
    "B(0,2)",
    "B(0,3)",
    "rank2-km",
];

fn qpi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpi"))
        .args(args)
        .env_remove("QPI_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn check_schema(name: &str, doc: &Value) {
    let path = schema_dir().join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn upsilon_rank1_height4_has_even_keys_only() {
    let o = qpi(&[
        "upsilon", "--datum", "rank1", "--height", "4", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["0", "2"]);
}

#[test]
fn bar_inconsistent_datum_fails_validation() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write(
        tmp.path(),
        "bad.json",
        r#"{"I":[1],"dot":[[2]],"parity":[0]}"#,
    );
    let o = qpi(&["validate", "--datum", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bar-consistency"), "{}", stderr(&o));
    let o = qpi(&["upsilon", "--datum", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bar-consistency"));
}

#[test]
fn verify_rank1_height8_passes() {
    let o = qpi(&[
        "verify", "--datum", "rank1", "--height", "8", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "pass");
    check_schema("verify", &v);
}

#[test]
fn verify_passes_on_every_builtin() {
    for d in DATA {
        let o = qpi(&["verify", "--datum", d]);
        assert_eq!(o.status.code(), Some(0), "{d}: {}", stderr(&o));
    }
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    for fmt in ["json", "text", "tex"] {
        let args = [
            "theta-i", "--datum", "B(0,2)", "--height", "3", "--format", fmt,
        ];
        let a = qpi(&args);
        let b = qpi(&args);
        let c = Command::new(env!("CARGO_BIN_EXE_qpi"))
            .args(args)
            .env("QPI_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{fmt}");
        assert_eq!(a.stdout, c.stdout, "{fmt}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path().join("u.json");
    let o = qpi(&[
        "upsilon",
        "--height",
        "5",
        "--format",
        "json",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = qpi(&["upsilon", "--height", "5", "--format", "json"]);
    assert_eq!(std::fs::read(&p).unwrap(), direct.stdout);
}

#[test]
fn tex_output_uses_the_shipped_preamble() {
    let pre = std::fs::read_to_string(schema_dir().join("tex-preamble.tex")).unwrap();
    assert_eq!(pre, qpi::cli::TEX_PREAMBLE);
    let o = qpi(&["upsilon", "--height", "5", "--format", "tex"]);
    let s = stdout(&o);
    assert!(s.starts_with(&pre));
    assert!(s.contains("\\begin{longtable}{ll}"));
    assert!(s.trim_end().ends_with("\\end{document}"));
}

#[test]
fn json_reports_match_schemas_on_every_builtin() {
    for d in DATA {
        let rank_one = matches!(d, "rank1" | "covering-sl2" | "B(0,1)");
        let mut runs: Vec<(&str, Vec<&str>)> = vec![
            ("validate", vec![]),
            ("upsilon", vec!["--height", "4"]),
            ("theta", vec!["--height", "3"]),
            ("theta-i", vec!["--height", "3"]),
            ("idp", vec!["--max", "3"]),
            ("module", vec!["--height", "3"]),
        ];
        if rank_one {
            runs.push(("icb", vec!["--lambda", "2", "--mu", "2"]));
            runs.push(("icb", vec!["--lambda", "3"]));
            runs.push(("stabilize", vec!["--b1", "1", "--b2", "2", "--steps", "3"]));
        }
        for (cmd, extra) in runs {
            let mut args = vec![cmd, "--datum", d, "--format", "json"];
            args.extend(extra);
            let o = qpi(&args);
            assert_eq!(o.status.code(), Some(0), "{d} {cmd}: {}", stderr(&o));
            check_schema(cmd, &serde_json::from_str(&stdout(&o)).unwrap());
        }
    }
}

#[test]
fn pi_specialization_removes_pi() {
    let o = qpi(&["upsilon", "--height", "5", "--pi", "-1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains('p'));
    let generic = stdout(&qpi(&["upsilon", "--height", "5", "--format", "json"]));
    assert!(generic.contains('p'));
    let plus = qpi(&["upsilon", "--height", "5", "--pi", "1", "--format", "json"]);
    assert_eq!(plus.status.code(), Some(0));
    assert!(!stdout(&plus).contains('p'));
    assert_ne!(plus.stdout, o.stdout);
}

#[test]
fn usage_errors_exit_64_with_help() {
    let o = qpi(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("Usage"));
    let o = qpi(&["upsilon", "--pi", "2"]);
    assert_eq!(o.status.code(), Some(64));
    let o = qpi(&["icb", "--datum", "B(0,2)", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("Usage: qpi icb"));
    let o = qpi(&["upsilon", "--datum", "no-such-datum"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(qpi(&["--help"]).status.code(), Some(0));
}

#[test]
fn io_errors_exit_74() {
    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("missing").join("out.json");
    let o = qpi(&["upsilon", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(74));
}

#[test]
fn assertion_failures_exit_2_with_a_report() {
    let o = qpi(&["verify", "--varsigma", "1/2", "--height", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    check_schema("failure", &v);
    let checks: Vec<&str> = v["failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["check"].as_str().unwrap())
        .collect();
    assert!(checks.contains(&"upsilon-intertwiner"), "{checks:?}");
}

#[test]
fn descriptor_round_trip_through_the_cli() {
    let tmp = tempfile::tempdir().unwrap();
    let desc = qpi::datum::DatumDescriptor::from_datum(&qpi::datum::builtin("B(0,2)").unwrap());
    let p = write(tmp.path(), "b02.json", &desc.to_json());
    let a = qpi(&[
        "upsilon",
        "--datum",
        p.to_str().unwrap(),
        "--height",
        "4",
        "--format",
        "json",
    ]);
    let b = qpi(&[
        "upsilon", "--datum", "B(0,2)", "--height", "4", "--format", "json",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn varsigma_override_changes_upsilon() {
    let a = stdout(&qpi(&["upsilon", "--height", "3", "--format", "json"]));
    let b = stdout(&qpi(&[
        "upsilon",
        "--height",
        "3",
        "--format",
        "json",
        "--varsigma",
        "q^-3",
    ]));
    assert_ne!(a, b);
    let o = qpi(&["upsilon", "--varsigma", "1,2"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn idp_table_lists_both_parities() {
    let o = qpi(&["idp", "--max", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["i=1"]["even"]["1"]["coefficients"]["B"], "1");
    assert_eq!(v["i=1"]["odd"]["2"]["numerator"], "B^2 - s*p*q*[1]^2*J");
}
