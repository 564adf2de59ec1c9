mod common;

use chiral::families::*;
use chiral::perm::{element_order, evaluate};
use chiral::rewrite::*;
use chiral::{enumerate, EnumerationConfig, Word};
use num_bigint::BigInt;

fn cfg() -> EnumerationConfig {
    EnumerationConfig::felsch(FAMILY_CAP)
}

#[test]
fn lattice_subgroup_index_equals_quotient_order() {
    let u = presentation_u();
    for f in FamilyId::ALL {
        for m in 1..=2 {
            let t = enumerate(&u, &common::lattice_subgroup(f, m), &cfg()).unwrap();
            assert!(t.is_complete());
            assert_eq!(
                t.degree() as u64,
                member_order(f, m, &cfg()).unwrap(),
                "{f} m={m}"
            );
        }
    }
}

#[test]
fn order_ratio_is_sublattice_index() {
    for f in FamilyId::ALL {
        let base = member_order(f, 1, &cfg()).unwrap();
        for m in 1..=4u64 {
            let order = member_order(f, m, &cfg()).unwrap();
            assert_eq!(order % base, 0);
            let d = IntMatrix::diagonal(&[m as i64, m as i64]);
            assert_eq!(
                sublattice_index(&d),
                LatticeIndex::Finite(BigInt::from(order / base))
            );
        }
    }
}

#[test]
fn tower_is_consistent() {
    for f in FamilyId::ALL {
        let (x, y) = f.lattice_generators();
        for (m, k) in [(1u64, 2u64), (2, 2), (1, 4)] {
            let own = member_triple(f, m, &cfg()).unwrap();
            for r in f.extra_relators(m) {
                assert!(evaluate(&r, own.sigma()).unwrap().is_identity());
            }
            let top = member_triple(f, m * k, &cfg()).unwrap();
            for g in [&x, &y] {
                let e = evaluate(&g.pow(m as i64), top.sigma()).unwrap();
                assert_eq!(element_order(&e), k, "{f} m={m} k={k}");
            }
        }
    }
}

#[test]
fn lattice_generators_commute_in_u() {
    let u = presentation_u();
    for f in FamilyId::ALL {
        let (x, y) = f.lattice_generators();
        let t = enumerate(&u, &[x.clone(), y.clone()], &cfg()).unwrap();
        let c = Word::commutator(&x, &y);
        for g in t.transversal().iter().skip(1) {
            assert_eq!(t.trace(1, &g.mul(&c).mul(&g.inverse())), Some(1));
        }
    }
}

#[test]
fn k_simplifies_to_commutator() {
    let u = presentation_u();
    let (z, w) = FamilyId::Q.lattice_generators();
    let t = enumerate(&u, &[z, w], &cfg()).unwrap();
    let sp = reidemeister_schreier(&u, &t).unwrap();
    assert_eq!(
        subgroup_abelian_invariants(&sp),
        vec![BigInt::from(0), BigInt::from(0)]
    );
    let (s, stats) = tietze_simplify(&sp, DEFAULT_TIETZE_BUDGET);
    assert!(!stats.budget_exhausted);
    assert_eq!(s.generator_count(), 2);
    let rels: Vec<_> = s.relators.iter().filter(|r| !r.is_empty()).collect();
    assert_eq!(rels.len(), 1);
    assert!(is_commutator_shape(rels[0]));
    assert_eq!(
        subgroup_abelian_invariants(&s),
        subgroup_abelian_invariants(&sp)
    );
}

#[test]
fn rs_presents_subgroup_of_right_order() {
    for case in common::CORPUS
        .iter()
        .filter(|c| c.index < 1024 && !c.subgroup.is_empty())
    {
        let p = case.presentation();
        let order = enumerate(&p, &[], &cfg()).unwrap().degree();
        let t = enumerate(&p, &case.subgroup_words(), &cfg()).unwrap();
        let sp = reidemeister_schreier(&p, &t).unwrap();
        let sub = enumerate(&sp.to_presentation(), &[], &cfg()).unwrap();
        assert_eq!(sub.degree() * case.index, order, "{}", case.text);
    }
}

#[test]
fn corollary_rows_for_k_up_to_one() {
    let rows = corollary_orders(1, &cfg()).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.matches));
    assert_eq!(
        rows.iter().map(|r| r.n).collect::<Vec<_>>(),
        vec![10, 11, 12, 13]
    );
}

#[test]
fn member_report_round_trips_through_json() {
    let r = verify_member(FamilyId::Q, 1, &MemberOptions::default()).unwrap();
    assert!(r.passed);
    let text = serde_json::to_string(&r).unwrap();
    let back: MemberReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["family"], "Q");
    assert_eq!(v["axioms"]["p3"], true);
}
