//! The group `U` and the two families `P_m` (groups `G_m`) and `Q_m` (groups `H_m`).
//!
//! `G_m = U / ⟨(ac⁻¹)^{4m}, (c⁻¹a)^{4m}⟩` and `H_m = U / ⟨(bc⁻¹)^{4m}, (c⁻¹b)^{4m}⟩`.
//! [`verify_member`] runs the full check for one member and never panics on a
//! mathematical failure: each failing stage is recorded in the report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;
#[cfg(target_arch = "wasm32")]
use web_time::Instant;

use crate::error::FamilyError;
use crate::parse::{parse_presentation, parse_word, parse_word_list};
use crate::perm::{element_order, evaluate, PermGroup, Permutation, DEFAULT_INTERSECTION_CAP};
use crate::polytope::{
    build_coset_geometry_with, chirality_witnesses, intersection_details, quotient_criterion,
    standard_stabilizers, verify_axioms, AxiomOptions, RotationTriple, EXHAUSTIVE_LIMIT,
};
use crate::tc::{enumerate, enumerate_with_probe, EnumerationConfig};
use crate::word::{Presentation, Word};

pub const U_TEXT: &str = include_str!("../data/U.pres");
pub const G1_TEXT: &str = include_str!("../data/G1.pres");
pub const H1_TEXT: &str = include_str!("../data/H1.pres");

/// Enumeration settings used for member orders unless overridden.
pub const FAMILY_CAP: usize = 10_000_000;

pub fn presentation_u() -> Presentation {
    parse_presentation(U_TEXT).expect("bundled presentation parses")
}

fn abc() -> Vec<String> {
    vec!["a".into(), "b".into(), "c".into()]
}

fn word(text: &str) -> Word {
    parse_word(text, &abc()).expect("built-in word parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    P,
    Q,
}

impl FamilyId {
    pub const ALL: [FamilyId; 2] = [FamilyId::P, FamilyId::Q];

    /// Order of the `m = 1` member.
    pub fn base_order(self) -> u64 {
        match self {
            FamilyId::P => 1024,
            FamilyId::Q => 2048,
        }
    }

    pub fn expected_order(self, m: u64) -> u64 {
        self.base_order() * m * m
    }

    /// `(x, y)` for P and `(z, w)` for Q.
    pub fn lattice_generators(self) -> (Word, Word) {
        match self {
            FamilyId::P => (word("(a*c^-1)^4"), word("(c^-1*a)^4")),
            FamilyId::Q => (word("(b*c^-1)^4"), word("(c^-1*b)^4")),
        }
    }

    pub fn lattice_names(self) -> (&'static str, &'static str) {
        match self {
            FamilyId::P => ("x", "y"),
            FamilyId::Q => ("z", "w"),
        }
    }

    /// The two extra relators of the `m`-th member.
    pub fn extra_relators(self, m: u64) -> [Word; 2] {
        let (x, y) = self.lattice_generators();
        [x.pow(m as i64), y.pow(m as i64)]
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyId::P => "P",
            FamilyId::Q => "Q",
        })
    }
}

impl FromStr for FamilyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" | "p" => Ok(FamilyId::P),
            "Q" | "q" => Ok(FamilyId::Q),
            _ => Err(format!("unknown family {s:?} (expected P or Q)")),
        }
    }
}

/// `U` plus the family's two extra relators.
pub fn family_presentation(f: FamilyId, m: u64) -> Result<Presentation, FamilyError> {
    if m < 1 {
        return Err(FamilyError::BadParameter(m));
    }
    Ok(presentation_u()
        .with_relators(f.extra_relators(m))
        .expect("extra relators are nonempty"))
}

fn stage<E: fmt::Display>(stage: &'static str) -> impl Fn(E) -> FamilyError {
    move |e| FamilyError::Stage {
        stage,
        message: e.to_string(),
    }
}

/// Order of a member, by enumerating cosets of the trivial subgroup.
pub fn member_order(f: FamilyId, m: u64, cfg: &EnumerationConfig) -> Result<u64, FamilyError> {
    let p = family_presentation(f, m)?;
    let t = enumerate(&p, &[], cfg).map_err(stage("enumerate"))?;
    if !t.is_complete() {
        return Err(FamilyError::Stage {
            stage: "enumerate",
            message: format!(
                "cap of {} cosets reached after {} definitions; rerun with a larger cap",
                cfg.max_cosets,
                t.stats().defined
            ),
        });
    }
    Ok(t.degree() as u64)
}

/// Subgroups whose coset actions are tried, in order, as small faithful
/// representations. Each entry is a list of subgroups whose actions are
/// combined side by side; the empty subgroup gives the regular representation.
const ACTION_CANDIDATES: &[&[&str]] = &[&["a,b", "b,c", "a*c"], &["a^2,c^2"], &[""]];

/// A permutation triple for a member, with the order it was certified against.
#[derive(Clone, Debug)]
pub struct MemberAction {
    pub sigma: [Permutation; 3],
    pub group: PermGroup,
    /// Subgroups whose coset actions were combined.
    pub subgroups: Vec<String>,
}

/// Faithful action of the group presented by `p`, of known `order`.
pub fn faithful_action(
    p: &Presentation,
    order: u64,
    cfg: &EnumerationConfig,
) -> Result<MemberAction, FamilyError> {
    let names = p.names();
    for cand in ACTION_CANDIDATES {
        let mut images: Vec<Vec<u32>> = vec![Vec::new(); 3];
        for sg in cand.iter() {
            let h = parse_word_list(sg, &names).map_err(stage("action"))?;
            let t = enumerate(p, &h, cfg).map_err(stage("action"))?;
            if !t.is_complete() {
                return Err(FamilyError::Stage {
                    stage: "action",
                    message: format!("coset enumeration over <{sg}> incomplete"),
                });
            }
            let perms = t
                .standardize()
                .map_err(stage("action"))?
                .permutation_rep()
                .map_err(stage("action"))?;
            for (i, perm) in perms.iter().enumerate() {
                let off = images[i].len() as u32;
                images[i].extend(perm.images().iter().map(|x| x + off));
            }
        }
        let sigma: Vec<Permutation> = images
            .into_iter()
            .map(Permutation::from_images)
            .collect::<Result<_, _>>()
            .map_err(stage("action"))?;
        let group = PermGroup::new(sigma.clone()).map_err(stage("action"))?;
        if group.order() == order as u128 {
            let sigma: [Permutation; 3] = sigma.try_into().expect("three generators");
            return Ok(MemberAction {
                sigma,
                group,
                subgroups: cand.iter().map(|s| s.to_string()).collect(),
            });
        }
    }
    Err(FamilyError::Stage {
        stage: "action",
        message: "no faithful action found".into(),
    })
}

/// Rotation triple of a member on a faithful action.
pub fn member_triple(
    f: FamilyId,
    m: u64,
    cfg: &EnumerationConfig,
) -> Result<RotationTriple, FamilyError> {
    let p = family_presentation(f, m)?;
    let order = member_order(f, m, cfg)?;
    let act = faithful_action(&p, order, cfg)?;
    RotationTriple::new(act.group, act.sigma, Some(p)).map_err(stage("validate"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomMode {
    /// Only for `m = 1`.
    Auto,
    Always,
    Never,
}

#[derive(Clone, Debug)]
pub struct MemberOptions {
    pub enumeration: EnumerationConfig,
    pub intersection_cap: u128,
    pub axioms: AxiomMode,
    pub axiom_options: AxiomOptions,
}

impl Default for MemberOptions {
    fn default() -> Self {
        MemberOptions {
            enumeration: EnumerationConfig::felsch(FAMILY_CAP),
            intersection_cap: DEFAULT_INTERSECTION_CAP,
            axioms: AxiomMode::Auto,
            axiom_options: AxiomOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Regular,
    Chiral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSummary {
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub p4: bool,
    pub sampled: bool,
    pub face_counts: [usize; 4],
    pub facet_type: Option<[u64; 2]>,
    pub vertex_figure_type: Option<[u64; 2]>,
}

impl AxiomSummary {
    pub fn all_ok(&self) -> bool {
        self.p1 && self.p2 && self.p3 && self.p4
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberReport {
    pub family: FamilyId,
    pub m: u64,
    pub order: Option<u64>,
    pub expected_order: u64,
    pub schlafli: Option<[u64; 3]>,
    pub solvable: Option<bool>,
    pub derived_length: Option<usize>,
    pub intersection_condition: Option<bool>,
    /// The three intersection equalities, in order.
    pub intersection_parts: Option<[bool; 3]>,
    pub quotient_criterion: Option<bool>,
    /// `None` when the intersection condition fails.
    pub verdict: Option<VerdictKind>,
    pub mirror_extends: Option<bool>,
    pub witness: Option<String>,
    pub witness_order: Option<u64>,
    pub action_degree: Option<usize>,
    pub flags: Option<u64>,
    pub axioms: Option<AxiomSummary>,
    pub failures: Vec<StageFailure>,
    pub passed: bool,
    pub timings_ms: BTreeMap<String, u64>,
}

impl MemberReport {
    fn new(f: FamilyId, m: u64) -> Self {
        MemberReport {
            family: f,
            m,
            order: None,
            expected_order: f.expected_order(m),
            schlafli: None,
            solvable: None,
            derived_length: None,
            intersection_condition: None,
            intersection_parts: None,
            quotient_criterion: None,
            verdict: None,
            mirror_extends: None,
            witness: None,
            witness_order: None,
            action_degree: None,
            flags: None,
            axioms: None,
            failures: Vec::new(),
            passed: false,
            timings_ms: BTreeMap::new(),
        }
    }

    fn fail(&mut self, stage: &str, message: impl Into<String>) {
        self.failures.push(StageFailure {
            stage: stage.into(),
            message: message.into(),
        });
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.timings_ms
            .insert(stage.into(), t0.elapsed().as_millis() as u64);
        out
    }

    fn conclude(&mut self) {
        let axioms_ok = self.axioms.as_ref().is_none_or(AxiomSummary::all_ok);
        self.passed = self.failures.is_empty()
            && self.order == Some(self.expected_order)
            && self.schlafli == Some([4, 4, 4])
            && self.solvable == Some(true)
            && self.intersection_condition == Some(true)
            && self.quotient_criterion == Some(true)
            && self.verdict == Some(VerdictKind::Chiral)
            && axioms_ok;
    }
}

/// Runs the whole pipeline for one member.
pub fn verify_member(
    f: FamilyId,
    m: u64,
    opts: &MemberOptions,
) -> Result<MemberReport, FamilyError> {
    let p = family_presentation(f, m)?;
    let mut r = MemberReport::new(f, m);
    let cfg = &opts.enumeration;

    let order = match r.time("enumerate", || member_order(f, m, cfg)) {
        Ok(o) => o,
        Err(e) => {
            r.fail("enumerate", e.to_string());
            return Ok(r);
        }
    };
    r.order = Some(order);
    if order != r.expected_order {
        r.fail(
            "order",
            format!("order {order}, expected {}", r.expected_order),
        );
    }

    let act = match r.time("action", || faithful_action(&p, order, cfg)) {
        Ok(a) => a,
        Err(e) => {
            r.fail("action", e.to_string());
            return Ok(r);
        }
    };
    r.action_degree = Some(act.group.degree());

    let triple = match r.time("validate", || {
        RotationTriple::new(act.group, act.sigma, Some(p.clone()))
    }) {
        Ok(t) => t,
        Err(e) => {
            r.fail("validate", e.to_string());
            return Ok(r);
        }
    };
    r.schlafli = Some(triple.schlafli().0);

    match r.time("intersection", || {
        intersection_details(&triple, opts.intersection_cap)
    }) {
        Ok(d) => {
            r.intersection_condition = Some(d.holds());
            r.intersection_parts = Some([d.first, d.second, d.third]);
            if !d.holds() {
                r.fail(
                    "intersection",
                    format!("intersection equalities {:?}", [d.first, d.second, d.third]),
                );
            }
        }
        Err(e) => r.fail("intersection", e.to_string()),
    }

    let quotient = r.time("quotient", || -> Result<bool, FamilyError> {
        let base = family_presentation(f, 1)?;
        let base_order = if m == 1 {
            order
        } else {
            member_order(f, 1, cfg)?
        };
        let small = faithful_action(&base, base_order, cfg)?;
        quotient_criterion(&triple, &small.sigma).map_err(stage("quotient"))
    });
    match quotient {
        Ok(q) => r.quotient_criterion = Some(q),
        Err(e) => r.fail("quotient", e.to_string()),
    }

    match r.time("solvable", || triple.group().derived_length()) {
        Ok(len) => {
            r.solvable = Some(len.is_some());
            r.derived_length = len;
        }
        Err(e) => r.fail("solvable", e.to_string()),
    }

    match r.time("mirror", || chirality_witnesses(&triple)) {
        Ok(ws) => {
            r.mirror_extends = Some(ws.is_empty());
            if let Some(w) = ws.first() {
                r.witness = Some(w.relator.render(&p.names()));
                r.witness_order = Some(w.image_order);
            }
            if r.intersection_condition == Some(true) {
                r.verdict = Some(if ws.is_empty() {
                    VerdictKind::Regular
                } else {
                    VerdictKind::Chiral
                });
            }
        }
        Err(e) => r.fail("mirror", e.to_string()),
    }

    let run_axioms = match opts.axioms {
        AxiomMode::Always => true,
        AxiomMode::Never => false,
        AxiomMode::Auto => m == 1,
    };
    if run_axioms {
        let limit = if opts.axiom_options.sample_stride.is_some() {
            u128::MAX
        } else {
            EXHAUSTIVE_LIMIT
        };
        let res = r.time("axioms", || {
            build_coset_geometry_with(&triple, &standard_stabilizers(), limit)
                .map(|g| verify_axioms(&g, triple.schlafli(), &opts.axiom_options))
        });
        match res {
            Ok(a) => {
                r.flags = Some(a.flag_count);
                r.axioms = Some(AxiomSummary {
                    p1: a.p1_ok,
                    p2: a.p2_ok,
                    p3: a.p3_ok,
                    p4: a.p4_ok,
                    sampled: a.sampled,
                    face_counts: a.face_counts,
                    facet_type: a.facet_section_type.map(|(x, y)| [x, y]),
                    vertex_figure_type: a.vertex_figure_type.map(|(x, y)| [x, y]),
                });
                if !a.all_ok() {
                    r.fail("axioms", "polytope axioms fail on the coset geometry");
                } else if a.flag_count != 2 * order {
                    r.fail(
                        "axioms",
                        format!("{} flags, expected {}", a.flag_count, 2 * order),
                    );
                }
            }
            Err(e) => r.fail("axioms", e.to_string()),
        }
    }

    r.conclude();
    Ok(r)
}

/// Verifies several members in parallel; the result is sorted by family, then `m`.
pub fn verify_members(
    members: &[(FamilyId, u64)],
    opts: &MemberOptions,
) -> Result<Vec<MemberReport>, FamilyError> {
    let mut out: Vec<MemberReport> = members
        .par_iter()
        .map(|&(f, m)| verify_member(f, m, opts))
        .collect::<Result<_, _>>()?;
    out.sort_by_key(|r| (r.family, r.m));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationRow {
    /// The relation, e.g. `b^-1*x*b = y`.
    pub relation: String,
    /// `lhs * rhs^-1` written in `a, b, c`.
    pub word: String,
    pub verified: bool,
    /// Coset definitions made when the trace first closed (0 if the word is
    /// freely trivial), or the cap if it never did.
    pub cosets_used: usize,
}

/// The six conjugation relations and the commuting relation, as
/// `(label, lhs * rhs^-1)`.
pub fn conjugation_relations(f: FamilyId) -> Vec<(String, Word)> {
    let (x, y) = f.lattice_generators();
    let (xn, yn) = f.lattice_names();
    let g = |s: &str| word(s);
    // (conjugator, conjugated is x?, image is x?, image exponent)
    let table: [(&str, bool, bool, i64); 6] = match f {
        FamilyId::P => [
            ("a", true, false, 1),
            ("b", true, false, 1),
            ("c", true, false, 1),
            ("a", false, true, 1),
            ("b", false, true, -1),
            ("c", false, true, -1),
        ],
        FamilyId::Q => [
            ("a", true, true, -1),
            ("b", true, false, 1),
            ("c", true, false, 1),
            ("a", false, false, 1),
            ("b", false, true, -1),
            ("c", false, true, -1),
        ],
    };
    let mut out = Vec::new();
    for (k, src_x, img_x, e) in table {
        let src = if src_x { &x } else { &y };
        let img = if img_x { &x } else { &y };
        let lhs = src.conjugate_by(&g(k));
        let rhs = img.pow(e);
        let label = format!(
            "{k}^-1*{}*{k} = {}{}",
            if src_x { xn } else { yn },
            if img_x { xn } else { yn },
            if e < 0 { "^-1" } else { "" }
        );
        out.push((label, lhs.mul(&rhs.inverse())));
    }
    out.push((format!("[{xn},{yn}] = 1"), Word::commutator(&x, &y)));
    out
}

/// How often (in coset definitions) the conjugation traces are checked.
pub const PROBE_INTERVAL: usize = 64;

/// Proves each relation in `U` by a partial enumeration of the trivial
/// subgroup: a word is verified once its trace from coset 1 closes up.
pub fn verify_conjugation_action(f: FamilyId, cfg: &EnumerationConfig) -> Vec<ConjugationRow> {
    let u = presentation_u();
    let names = u.names();
    conjugation_relations(f)
        .into_par_iter()
        .map(|(relation, w)| {
            let mut used = None;
            if w.is_empty() {
                used = Some(0);
            } else {
                let _ = enumerate_with_probe(&u, &[], cfg, PROBE_INTERVAL, |probe| {
                    if probe.trace_fixes_subgroup_coset(&w) == Some(true) {
                        used = Some(probe.defined());
                        return true;
                    }
                    false
                });
            }
            ConjugationRow {
                relation,
                word: w.render(&names),
                verified: used.is_some(),
                cosets_used: used.unwrap_or(cfg.max_cosets),
            }
        })
        .collect()
}

/// Default enumeration settings for conjugation proofs.
pub fn conjugation_config(cap: usize) -> EnumerationConfig {
    EnumerationConfig::felsch(cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub n: u32,
    pub family: FamilyId,
    pub m: u64,
    pub order: u64,
    pub matches: bool,
}

/// Members of order `2^(10+2k)` (family P) and `2^(11+2k)` (family Q), `m = 2^k`.
pub fn corollary_orders(
    k_max: u32,
    cfg: &EnumerationConfig,
) -> Result<Vec<CorollaryRow>, FamilyError> {
    let jobs: Vec<(u32, FamilyId, u64)> = (0..=k_max)
        .flat_map(|k| {
            [
                (10 + 2 * k, FamilyId::P, 1u64 << k),
                (11 + 2 * k, FamilyId::Q, 1u64 << k),
            ]
        })
        .collect();
    jobs.into_par_iter()
        .map(|(n, family, m)| {
            let order = member_order(family, m, cfg)?;
            Ok(CorollaryRow {
                n,
                family,
                m,
                order,
                matches: order == 1u64 << n,
            })
        })
        .collect()
}

/// Order of an element given as a word in a member's generators.
pub fn word_order(t: &RotationTriple, w: &Word) -> Result<u64, FamilyError> {
    let p = evaluate(w, t.sigma()).map_err(stage("evaluate"))?;
    Ok(element_order(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;

    #[test]
    fn u_shape() {
        let u = presentation_u();
        assert_eq!(u.generator_count(), 3);
        assert_eq!(u.relators().len(), 9);
        assert_eq!(u.relators()[8], word("a^-1*c*a*c^-1*b^2"));
    }

    #[test]
    fn bundled_files_match_family_presentations() {
        assert_eq!(
            parse_presentation(G1_TEXT).unwrap(),
            family_presentation(FamilyId::P, 1).unwrap()
        );
        assert_eq!(
            parse_presentation(H1_TEXT).unwrap(),
            family_presentation(FamilyId::Q, 1).unwrap()
        );
    }

    #[test]
    fn family_presentation_shape() {
        let p = family_presentation(FamilyId::P, 1).unwrap();
        assert_eq!(p.relators().len(), 11);
        assert_eq!(p.relators()[9], word("(a*c^-1)^4"));
        assert_eq!(p.relators()[10], word("(c^-1*a)^4"));
        let q = family_presentation(FamilyId::Q, 2).unwrap();
        assert_eq!(q.relators()[9], word("(b*c^-1)^8"));
        assert_eq!(q.relators()[10], word("(c^-1*b)^8"));
        assert_eq!(
            family_presentation(FamilyId::P, 3).unwrap(),
            family_presentation(FamilyId::P, 3).unwrap()
        );
        assert!(matches!(
            family_presentation(FamilyId::P, 0),
            Err(FamilyError::BadParameter(0))
        ));
    }

    #[test]
    fn family_parsing() {
        assert_eq!("P".parse::<FamilyId>().unwrap(), FamilyId::P);
        assert_eq!("q".parse::<FamilyId>().unwrap(), FamilyId::Q);
        assert!("R".parse::<FamilyId>().is_err());
    }

    #[test]
    fn conjugation_labels() {
        let rows = conjugation_relations(FamilyId::P);
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[1].0, "b^-1*x*b = y");
        assert_eq!(rows[4].0, "b^-1*y*b = x^-1");
        let q = conjugation_relations(FamilyId::Q);
        assert_eq!(q[0].0, "a^-1*z*a = z^-1");
        assert_eq!(q[3].0, "a^-1*w*a = w");
        assert_eq!(q[6].0, "[z,w] = 1");
    }

    #[test]
    fn tiny_cap_leaves_relations_unverified() {
        let rows = verify_conjugation_action(FamilyId::P, &conjugation_config(10));
        assert_eq!(rows.len(), 7);
        for r in &rows {
            if r.word == "1" {
                assert!(r.verified && r.cosets_used == 0);
            } else {
                assert!(!r.verified && r.cosets_used == 10, "{r:?}");
            }
        }
    }

    #[test]
    fn q1_member() {
        let r = verify_member(
            FamilyId::Q,
            1,
            &MemberOptions {
                axioms: AxiomMode::Never,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.order, Some(2048));
        assert_eq!(r.schlafli, Some([4, 4, 4]));
        assert_eq!(r.verdict, Some(VerdictKind::Chiral));
        assert_eq!(r.witness_order, Some(2));
        assert!(r.passed, "{r:?}");
    }
}
