//! Golden outputs of every subcommand on every built-in datum.
//!
//! Set `QPI_UPDATE_GOLDEN=1` to rewrite the files after an intended change.

use std::path::PathBuf;
use std::process::Command;

const DATA: [&str; 6] = [
    "rank1",
    "covering-sl2",
    "B(0,1)",
    "B(0,2)",
    "B(0,3)",
    "rank2-km",
];

fn rank_one(d: &str) -> bool {
    matches!(d, "rank1" | "covering-sl2" | "B(0,1)")
}

fn cases(d: &str) -> Vec<(&'static str, Vec<&'static str>)> {
    let r1 = rank_one(d);
    vec![
        ("validate", vec![]),
        ("upsilon", vec!["--height", if r1 { "7" } else { "5" }]),
        ("theta", vec!["--height", if r1 { "4" } else { "3" }]),
        ("theta-i", vec!["--height", if r1 { "4" } else { "3" }]),
        ("idp", vec!["--max", "4"]),
        (
            "module",
            if r1 {
                vec!["--lambda", "2"]
            } else {
                vec!["--height", "3"]
            },
        ),
        ("icb", vec!["--lambda", "2", "--mu", "1"]),
        ("stabilize", vec!["--b1", "0", "--b2", "1", "--steps", "3"]),
        ("verify", vec!["--height", if r1 { "6" } else { "4" }]),
    ]
}

fn dir(d: &str) -> PathBuf {
    let clean: String = d
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(clean.trim_end_matches('_'))
}

fn run(d: &str, cmd: &str, args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_qpi"))
        .arg(cmd)
        .args(["--datum", d, "--format", "json"])
        .args(args)
        .env_remove("QPI_THREADS")
        .output()
        .expect("binary runs");
    format!(
        "exit: {}\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output")
    )
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("QPI_UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for d in DATA {
        let dd = dir(d);
        if update {
            std::fs::create_dir_all(&dd).unwrap();
        }
        for (cmd, args) in cases(d) {
            let got = run(d, cmd, &args);
            let path = dd.join(format!("{cmd}.out"));
            if update {
                std::fs::write(&path, &got).unwrap();
                continue;
            }
            let want = std::fs::read_to_string(&path)
                .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
            if got != want {
                mismatches.push(format!("{d} {cmd}"));
            }
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches: {mismatches:?}");
}

#[test]
fn every_subcommand_has_a_golden_file_per_datum() {
    let names = [
        "validate",
        "upsilon",
        "theta",
        "theta-i",
        "idp",
        "module",
        "icb",
        "stabilize",
        "verify",
    ];
    for d in DATA {
        let cmds: Vec<&str> = cases(d).iter().map(|(c, _)| *c).collect();
        assert_eq!(cmds, names);
    }
}
