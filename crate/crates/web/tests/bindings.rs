use chiral_web::{bundled_presentation, conjugation, enumerate_cosets, verify_member};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn enumerates_bundled_presentation() {
    let u = bundled_presentation("U");
    let r = parse(&enumerate_cosets(
        &u,
        "(a*c^-1)^4, (c^-1*a)^4",
        1_000_000,
        false,
    ));
    assert_eq!(r["complete"], true);
    assert_eq!(r["index"], 1024);
    let r = parse(&enumerate_cosets(&u, "", 100, true));
    assert_eq!(r["complete"], false);
    assert_eq!(r["index"], Value::Null);
}

#[test]
fn reports_parse_errors() {
    let r = parse(&enumerate_cosets("gens a;\nrels a*;", "", 10, false));
    assert!(r["error"].as_str().unwrap().contains("2:8"), "{r}");
    let r = parse(&enumerate_cosets("gens a;\nrels a^3;", "b", 10, false));
    assert!(r["error"].is_string());
    assert!(parse(&verify_member("R", 1, false))["error"].is_string());
    assert_eq!(bundled_presentation("nope"), "");
}

#[test]
fn verifies_member() {
    let r = parse(&verify_member("Q", 1, true));
    assert_eq!(r["order"], 2048);
    assert_eq!(r["verdict"], "Chiral");
    assert_eq!(r["flags"], 4096);
    assert_eq!(r["passed"], true);
}

#[test]
fn conjugation_rows() {
    let rows = parse(&conjugation("P", 100_000));
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["verified"] == true));
}
