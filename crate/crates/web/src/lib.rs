//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every function takes plain strings and numbers and returns a JSON string,
//! either the result or `{"error": "..."}`.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use chiral::families::{self, AxiomMode, FamilyId, MemberOptions};
use chiral::{enumerate, parse_presentation, parse_word_list, EnumerationConfig};

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_else(|e| error(e.to_string()))
}

fn error(msg: impl Into<String>) -> String {
    json!({ "error": msg.into() }).to_string()
}

/// The bundled presentation `U`, `G1` or `H1` as text.
#[wasm_bindgen]
pub fn bundled_presentation(name: &str) -> String {
    match name {
        "U" => families::U_TEXT,
        "G1" => families::G1_TEXT,
        "H1" => families::H1_TEXT,
        _ => "",
    }
    .to_string()
}

/// Enumerates cosets of `subgroup` (comma-separated words) in the group
/// presented by `presentation`.
#[wasm_bindgen]
pub fn enumerate_cosets(
    presentation: &str,
    subgroup: &str,
    max_cosets: u32,
    felsch: bool,
) -> String {
    let p = match parse_presentation(presentation) {
        Ok(p) => p,
        Err(e) => return error(e.to_string()),
    };
    let h = match parse_word_list(subgroup, &p.names()) {
        Ok(h) => h,
        Err(e) => return error(format!("subgroup: {e}")),
    };
    let cap = max_cosets as usize;
    let cfg = if felsch {
        EnumerationConfig::felsch(cap)
    } else {
        EnumerationConfig::hlt(cap)
    };
    match enumerate(&p, &h, &cfg) {
        Ok(t) => {
            let s = t.stats();
            json!({
                "complete": t.is_complete(),
                "index": if t.is_complete() { Some(t.degree()) } else { None },
                "live": t.degree(),
                "defined": s.defined,
                "max_live": s.max_live,
                "coincidences": s.coincidences,
            })
            .to_string()
        }
        Err(e) => error(e.to_string()),
    }
}

/// Runs the verification pipeline for one member of family `P` or `Q`.
#[wasm_bindgen]
pub fn verify_member(family: &str, m: u32, axioms: bool) -> String {
    let f: FamilyId = match family.parse() {
        Ok(f) => f,
        Err(e) => return error(e),
    };
    let opts = MemberOptions {
        axioms: if axioms {
            AxiomMode::Always
        } else {
            AxiomMode::Never
        },
        ..Default::default()
    };
    match families::verify_member(f, m as u64, &opts) {
        Ok(r) => to_json(&r),
        Err(e) => error(e.to_string()),
    }
}

/// Trace proofs of the conjugation relations in `U`.
#[wasm_bindgen]
pub fn conjugation(family: &str, max_cosets: u32) -> String {
    let f: FamilyId = match family.parse() {
        Ok(f) => f,
        Err(e) => return error(e),
    };
    to_json(&families::verify_conjugation_action(
        f,
        &EnumerationConfig::felsch(max_cosets as usize),
    ))
}
