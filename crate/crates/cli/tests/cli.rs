use std::path::PathBuf;
use std::process::{Command, Output};

use chiral_cli::{RunReport, EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_PARTIAL};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chiral"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_indices() {
    let u = data("U.pres");
    let u = u.to_str().unwrap();
    let o = run(&["enumerate", u, "--subgroup", "(a*c^-1)^4,(c^-1*a)^4"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(stdout(&o).trim(), "index 1024");
    let o = run(&[
        "enumerate",
        u,
        "--subgroup",
        "(b*c^-1)^4,(c^-1*b)^4",
        "--strategy",
        "felsch",
    ]);
    assert_eq!(stdout(&o).trim(), "index 2048");
}

#[test]
fn enumerate_exit_codes() {
    let u = data("U.pres");
    let u = u.to_str().unwrap();
    let o = run(&["enumerate", u, "--max-cosets", "100", "--require-complete"]);
    assert_eq!(o.status.code(), Some(EXIT_PARTIAL));
    assert!(stdout(&o).contains("Partial"));
    let o = run(&["enumerate", u, "--max-cosets", "100"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pres");
    std::fs::write(&bad, "gens a;\nrels a*;\n").unwrap();
    let o = run(&["enumerate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:8"));
    let o = run(&["enumerate", u, "--subgroup", "q"]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));
    let o = run(&["enumerate", "/nonexistent.pres"]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));
}

#[test]
fn enumerate_dump_is_standardized() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s3.pres");
    std::fs::write(&f, "gens a, b;\nrels a^2, b^3, (a*b)^2;\n").unwrap();
    let a = stdout(&run(&["enumerate", f.to_str().unwrap(), "--dump"]));
    let b = stdout(&run(&[
        "enumerate",
        f.to_str().unwrap(),
        "--dump",
        "--strategy",
        "felsch",
    ]));
    assert_eq!(a, b);
    assert!(a.starts_with("index 6\n"));
    assert_eq!(a.lines().count(), 7);
}

#[test]
fn verify_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&[
        "verify",
        "--family",
        "Q",
        "--m",
        "1",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);
    assert!(report.pass);
    assert_eq!(report.schema_version, 1);
    let m = &report.members[0];
    assert_eq!(m.schema_version, 1);
    assert_eq!(m.report.order, Some(2048));
    assert_eq!(m.report.flags, Some(4096));
    assert!(!m.report.timings_ms.is_empty());

    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let member = &v["members"][0];
    for key in [
        "schema_version",
        "family",
        "m",
        "order",
        "expected_order",
        "schlafli",
        "solvable",
        "derived_length",
        "intersection_condition",
        "quotient_criterion",
        "verdict",
        "witness_order",
        "flags",
        "axioms",
        "timings_ms",
    ] {
        assert!(member.get(key).is_some(), "missing {key}");
    }
    for key in ["p1", "p2", "p3", "p4"] {
        assert_eq!(member["axioms"][key], true);
    }
    assert_eq!(member["schlafli"], serde_json::json!([4, 4, 4]));
}

#[test]
fn verify_is_deterministic() {
    let a = run(&[
        "verify",
        "--family",
        "Q",
        "--m",
        "1..2",
        "--json",
        "-",
        "--no-timings",
        "--jobs",
        "1",
    ]);
    let b = run(&[
        "verify",
        "--family",
        "Q",
        "--m",
        "1..2",
        "--json",
        "-",
        "--no-timings",
        "--jobs",
        "4",
    ]);
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_code_tracks_aggregate_pass() {
    let families = ["P", "Q"];
    let ranges = ["1", "2", "1..2"];
    let axiom_flags: [&[&str]; 3] = [&[], &["--no-axioms"], &["--axioms"]];
    for fam in families {
        for m in ranges {
            for extra in axiom_flags {
                let mut args = vec![
                    "verify",
                    "--family",
                    fam,
                    "--m",
                    m,
                    "--json",
                    "-",
                    "--no-timings",
                ];
                args.extend_from_slice(extra);
                let o = run(&args);
                let text = stdout(&o);
                let json = &text[text.find("{\n").unwrap()..];
                let report: RunReport = serde_json::from_str(json).unwrap();
                assert_eq!(report.pass, report.members.iter().all(|m| m.report.passed));
                let want = if report.pass { EXIT_OK } else { EXIT_FAILED };
                assert_eq!(o.status.code(), Some(want), "{args:?}");
            }
        }
    }
}

#[test]
fn conjugation_rows() {
    let o = run(&["conjugation", "--family", "Q"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.contains(" verified ")));

    let o = run(&["conjugation", "--family", "P", "--max-cosets", "10"]);
    assert_eq!(o.status.code(), Some(EXIT_FAILED));
    assert!(stdout(&o).contains("unverified within cap"));
}

#[test]
fn polytope_and_corollary() {
    let o = run(&["polytope", "--family", "Q", "--m", "1"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    assert!(text.contains("flags 4096"));
    assert!(text.contains("P1 ok  P2 ok  P3 ok  P4 ok"));
    assert!(text.contains("facets {4,4}  vertex-figures {4,4}"));

    let o = run(&["polytope", "--family", "Q", "--m", "3"]);
    assert_eq!(o.status.code(), Some(EXIT_INPUT));

    let o = run(&["corollary", "--k-max", "1"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("n=12  P m=2   order 4096"));
}
