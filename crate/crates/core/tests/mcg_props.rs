mod common;

use obk_core::linalg::IntMatrix;
use obk_core::mcg::{
    homology_action, pi1_automorphism, pi1_framed, verify_relation_instance, TwistWord, VerificationLevel,
};
use obk_core::presets::prop12_surface;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn transvections_and_covariance((s, w, class) in common::arb_mcg_case()) {
        if let Err(e) = common::check_mcg_case(&s, &w, &class) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn word_inverse_cancels_on_pi1(p in 2usize..=4, q in 2usize..=4, picks in prop::collection::vec((0usize..9, -2i64..=2), 0..6)) {
        let (s, _) = prop12_surface(p, q).unwrap();
        let names: Vec<&str> = s.curves().iter().map(|c| c.name.as_str()).collect();
        let pairs: Vec<(&str, i64)> = picks.iter().map(|&(i, e)| (names[i % names.len()], e)).collect();
        let w = TwistWord::from_pairs(&pairs);
        let both = w.then_apply_after(&w.inverse());
        prop_assert!(pi1_automorphism(&s, &both).unwrap().is_identity());
        prop_assert!(homology_action(&s, &w).unwrap().is_identity());
    }
}

#[test]
fn lantern_perturbations_are_rejected() {
    let (s, rels) = prop12_surface(3, 4).unwrap();
    let base = &rels[0];
    assert!(verify_relation_instance(&s, base).pass);
    for side in 0..2 {
        let w = if side == 0 { &base.lhs } else { &base.rhs };
        for i in 0..w.len() {
            let mut f = w.factors().to_vec();
            f[i].exponent += 1;
            let mut r = base.clone();
            let bumped = TwistWord::new(f);
            if side == 0 {
                r.lhs = bumped;
            } else {
                r.rhs = bumped;
            }
            assert!(
                !verify_relation_instance(&s, &r).pass,
                "perturbing factor {i} on side {side}"
            );
        }
    }
}

#[test]
fn exact_relations_agree_on_homology() {
    for (p, q) in [(2, 2), (3, 4), (4, 4), (5, 2)] {
        let (s, rels) = prop12_surface(p, q).unwrap();
        for r in &rels {
            let rep = verify_relation_instance(&s, r);
            assert!(
                rep.pass && rep.level == VerificationLevel::Pi1Exact,
                "{p} {q} {}",
                r.name
            );
            let l = pi1_automorphism(&s, &r.lhs).unwrap().abelianization();
            let rr = pi1_automorphism(&s, &r.rhs).unwrap().abelianization();
            assert_eq!(l, rr);
            assert_eq!(IntMatrix::from_rows(&l), homology_action(&s, &r.lhs).unwrap().matrix);
        }
    }
}

#[test]
fn hole_twists_are_seen_only_by_arcs() {
    let (s, rels) = prop12_surface(3, 3).unwrap();
    let x = TwistWord::from_pairs(&[("x", 1)]);
    assert!(pi1_automorphism(&s, &x).unwrap().is_identity());
    assert!(!pi1_framed(&s, &x).unwrap().is_identity());
    let mut r = rels[0].clone();
    r.lhs = r.lhs.then_apply_after(&x);
    let rep = verify_relation_instance(&s, &r);
    assert!(!rep.pass);
    assert!(
        rep.mismatches.iter().any(|m| m.starts_with("arc to")),
        "{:?}",
        rep.mismatches
    );
}
