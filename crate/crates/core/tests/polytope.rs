use std::collections::{BTreeSet, HashSet, VecDeque};

use chiral::families::{family_presentation, member_triple, FamilyId, FAMILY_CAP};
use chiral::perm::{closure, DEFAULT_INTERSECTION_CAP};
use chiral::polytope::*;
use chiral::{
    enumerate, parse_presentation, parse_word_list, EnumerationConfig, Permutation, Word,
};

fn cfg() -> EnumerationConfig {
    EnumerationConfig::felsch(FAMILY_CAP)
}

fn regular_triple(text: &str) -> RotationTriple {
    let p = parse_presentation(text).unwrap();
    let t = enumerate(&p, &[], &EnumerationConfig::default()).unwrap();
    let s = t.standardize().unwrap().permutation_rep().unwrap();
    RotationTriple::from_generators([s[0].clone(), s[1].clone(), s[2].clone()], Some(p)).unwrap()
}

const ABELIAN_444: &str = "gens s, t, u;
rels s^4, t^4, u^4, (s*t)^2, (t*u)^2, (s*t*u)^2, [s,t], [t,u], [s,u];";

/// Span of `gens` in (Z/4)^3.
fn span(gens: &[[u8; 3]]) -> HashSet<[u8; 3]> {
    let mut seen = HashSet::from([[0u8; 3]]);
    let mut queue = VecDeque::from([[0u8; 3]]);
    while let Some(v) = queue.pop_front() {
        for g in gens {
            let w = [(v[0] + g[0]) % 4, (v[1] + g[1]) % 4, (v[2] + g[2]) % 4];
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

#[test]
fn abelian_quotient_is_regular() {
    // relation lattice R: 2(e1+e2), 2(e2+e3), 2(e1+e2+e3); mirror e1 -> -e1, e2 -> 2e1+e2
    let r = span(&[[2, 2, 0], [0, 2, 2], [2, 2, 2]]);
    let mirror = |v: [u8; 3]| [(4 - v[0] + 2 * v[1]) % 4, v[1], v[2]];
    let oracle = r.iter().all(|&v| r.contains(&mirror(v)));
    assert!(oracle);

    let t = regular_triple(ABELIAN_444);
    assert_eq!(t.order(), 64 / r.len() as u128);
    assert_eq!(mirror_extends(&t).unwrap(), oracle);
}

#[test]
fn enantiomorph_preserves_polytopality() {
    for text in [ABELIAN_444, chiral::families::H1_TEXT] {
        let t = regular_triple(text);
        let e = enantiomorph(&t);
        assert_eq!(e.order(), t.order());
        assert!(e.sigma()[0].then(&e.sigma()[1]).pow(2).is_identity());
        assert_eq!(
            intersection_condition(&t, DEFAULT_INTERSECTION_CAP).unwrap(),
            intersection_condition(&e, DEFAULT_INTERSECTION_CAP).unwrap()
        );
        assert_eq!(enantiomorph(&e), t);
    }
}

#[test]
fn mirror_source_is_satisfied_by_mirror_triple() {
    let t = member_triple(FamilyId::Q, 1, &cfg()).unwrap();
    let e = enantiomorph(&t);
    assert!(chiral::perm::extends_to_homomorphism(e.source().unwrap(), e.sigma()).unwrap());
    assert!(!mirror_extends(&t).unwrap());
    assert!(!mirror_extends(&e).unwrap());
}

#[test]
fn face_counts_match_stabilizer_closures() {
    for f in FamilyId::ALL {
        let t = member_triple(f, 1, &cfg()).unwrap();
        let g = build_coset_geometry_with(&t, &standard_stabilizers(), EXHAUSTIVE_LIMIT).unwrap();
        for (i, gens) in standard_stabilizers().iter().enumerate() {
            let perms: Vec<Permutation> = gens.iter().map(|w| t.image(w).unwrap()).collect();
            let size = closure(&perms).len() as u128;
            assert_eq!(g.stabilizer_orders()[i], size);
            assert_eq!(g.face_counts()[i] as u128 * size, t.order());
        }
    }
}

#[test]
fn quotient_criterion_examples() {
    let g1 = member_triple(FamilyId::P, 1, &cfg()).unwrap();
    assert!(quotient_criterion(&g1, g1.sigma()).unwrap());
    let id = Permutation::identity(1);
    assert!(!quotient_criterion(&g1, &[id.clone(), id.clone(), id]).unwrap());
    let h1 = member_triple(FamilyId::Q, 1, &cfg()).unwrap();
    assert!(matches!(
        quotient_criterion(&g1, h1.sigma()),
        Err(chiral::PolytopeError::NotHomomorphism)
    ));
}

#[test]
fn quotient_criterion_cross_validates_for_q() {
    let h1 = member_triple(FamilyId::Q, 1, &cfg()).unwrap();
    assert!(intersection_condition(&h1, DEFAULT_INTERSECTION_CAP).unwrap());
    for m in 1..=4 {
        let t = member_triple(FamilyId::Q, m, &cfg()).unwrap();
        assert!(quotient_criterion(&t, h1.sigma()).unwrap());
        assert!(intersection_condition(&t, DEFAULT_INTERSECTION_CAP).unwrap());
    }
}

#[test]
fn p_family_third_intersection_depends_on_parity() {
    let names: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    for m in 1..=4 {
        let t = member_triple(FamilyId::P, m, &cfg()).unwrap();
        let d = intersection_details(&t, DEFAULT_INTERSECTION_CAP).unwrap();
        assert!(d.first && d.second);
        assert_eq!(d.third, m % 2 == 0, "m = {m}");
        if m == 1 {
            // (b^2 c^2)^2 = (a^-1 b)^4 lies in both rank-3 subgroups but not in <b>
            let u = chiral::parse_word("(b^2*c^2)^2", &names).unwrap();
            let v = chiral::parse_word("(a^-1*b)^4", &names).unwrap();
            assert_eq!(t.image(&u).unwrap(), t.image(&v).unwrap());
            let b = t.subgroup(&[Word::generator(1)]).unwrap();
            assert!(!b.contains(&t.image(&u).unwrap()).unwrap());
        }
    }
}

#[test]
fn g1_geometry_measurements() {
    let t = member_triple(FamilyId::P, 1, &cfg()).unwrap();
    let g = build_coset_geometry_with(&t, &standard_stabilizers(), EXHAUSTIVE_LIMIT).unwrap();
    assert_eq!(g.face_counts()[3], 8);
    let r = verify_axioms(&g, t.schlafli(), &AxiomOptions::default());
    assert_eq!(r.flag_count, 2 * 1024);
    assert!(r.p1_ok && r.p2_ok && r.p4_ok);
    assert_eq!(
        r.p3_ok,
        intersection_condition(&t, DEFAULT_INTERSECTION_CAP).unwrap()
    );
}

#[test]
fn geometry_dump_is_sorted_and_complete() {
    let t = member_triple(FamilyId::Q, 1, &cfg()).unwrap();
    let g = build_coset_geometry(&t, DEFAULT_INTERSECTION_CAP).unwrap();
    let dump = g.dump();
    let fc = g.face_counts();
    assert_eq!(dump.lines().count(), 1 + fc.iter().sum::<usize>());
    let mut keys = Vec::new();
    for line in dump.lines() {
        let (head, tail) = line.split_once(" : ").unwrap();
        let mut it = head.split(' ').map(|x| x.parse::<i64>().unwrap());
        keys.push((it.next().unwrap(), it.next().unwrap()));
        let ups: Vec<usize> = tail.split(' ').map(|x| x.parse().unwrap()).collect();
        let sorted: BTreeSet<usize> = ups.iter().copied().collect();
        assert_eq!(ups, sorted.into_iter().collect::<Vec<_>>());
    }
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(
        dump,
        build_coset_geometry(&t, DEFAULT_INTERSECTION_CAP)
            .unwrap()
            .dump()
    );
}

#[test]
fn sampled_axioms_are_marked() {
    let t = member_triple(FamilyId::Q, 1, &cfg()).unwrap();
    let g = build_coset_geometry(&t, DEFAULT_INTERSECTION_CAP).unwrap();
    let r = verify_axioms(
        &g,
        t.schlafli(),
        &AxiomOptions {
            sample_stride: Some(5),
        },
    );
    assert!(r.sampled && r.all_ok());
    let full = verify_axioms(&g, t.schlafli(), &AxiomOptions::default());
    assert!(!full.sampled);
    assert_eq!(r.flag_count, full.flag_count);
}

#[test]
fn geometry_refuses_large_groups() {
    let t = member_triple(FamilyId::Q, 3, &cfg()).unwrap();
    assert!(matches!(
        build_coset_geometry(&t, DEFAULT_INTERSECTION_CAP),
        Err(chiral::PolytopeError::TooLarge { order: 18432, .. })
    ));
}

#[test]
fn witness_is_u_relator_for_all_small_members() {
    let want = parse_word_list("a^2*c^2*b^2*(a*c)^2", &["a", "b", "c"].map(String::from))
        .unwrap()
        .remove(0);
    for f in FamilyId::ALL {
        for m in 1..=4 {
            let t = member_triple(f, m, &cfg()).unwrap();
            let ws = chirality_witnesses(&t).unwrap();
            assert_eq!(ws[0].relator, want);
            assert_eq!(ws[0].relator_index, 7);
            assert_eq!(ws[0].mirrored, mirror_word(&want));
            assert_eq!(t.source(), Some(&family_presentation(f, m).unwrap()));
        }
    }
}
