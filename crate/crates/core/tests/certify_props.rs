mod common;

use obk_core::certify::{classify_all, Certificate, CertificateKind, Classification, Interval, Rule, Verdict};
use obk_core::scenario::{verdict_report, ResolvedScenario};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn all_certificates() -> Vec<Certificate> {
    let mut v = Vec::new();
    for name in common::SCENARIOS {
        v.extend(common::load_scenario(name).1.certificates);
    }
    v
}

fn has_axiom(certs: &[Certificate], openbook: &str) -> bool {
    certs
        .iter()
        .any(|c| matches!(&c.kind, CertificateKind::ExternalAxiom { openbook: o, .. } if o == openbook))
}

fn contains(outer: Interval, inner: Interval) -> bool {
    outer.lo <= inner.lo
        && match (outer.hi, inner.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => b <= a,
        }
}

fn check_verdict(v: &Verdict, certs: &[Certificate]) -> Result<(), String> {
    if v.classification == Classification::UniversallyTight && !has_axiom(certs, &v.openbook) {
        return Err(format!("{} universally tight without an external axiom", v.openbook));
    }
    if v.classification == Classification::Overtwisted && v.n_bounds.is_point() && v.depth_b != v.n_bounds {
        return Err(format!("{}: depth {} vs n {}", v.openbook, v.depth_b, v.n_bounds));
    }
    if v.classification == Classification::VirtuallyOvertwisted {
        let has = |r: Rule| v.derivation.iter().any(|s| s.rule == r);
        if !(has(Rule::R1) || has(Rule::R11)) || !has(Rule::R2) || !has(Rule::R3) {
            return Err(format!("{}: incomplete derivation {:?}", v.openbook, v.derivation));
        }
    }
    Ok(())
}

#[test]
fn bundled_verdicts_satisfy_the_invariants() {
    for name in common::SCENARIOS {
        let (s, r) = common::load_scenario(name);
        if let Ok(vs) = classify_all(&s.openbook, &r.certificates) {
            for v in &vs {
                check_verdict(v, &r.certificates).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
    }
}

#[test]
fn removing_external_axioms_removes_universal_tightness() {
    for name in common::SCENARIOS {
        let (s, r) = common::load_scenario(name);
        let kept: Vec<_> = r
            .certificates
            .into_iter()
            .filter(|c| !matches!(c.kind, CertificateKind::ExternalAxiom { .. }))
            .collect();
        if let Ok(vs) = classify_all(&s.openbook, &kept) {
            assert!(
                vs.iter().all(|v| v.classification != Classification::UniversallyTight),
                "{name}"
            );
        }
    }
}

fn shuffled_scenario() -> impl Strategy<Value = (usize, Vec<Certificate>)> {
    (0..common::SCENARIOS.len()).prop_flat_map(|i| {
        let certs = common::load_scenario(common::SCENARIOS[i]).1.certificates;
        (Just(i), Just(certs).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdicts_ignore_certificate_order((which, shuffled) in shuffled_scenario()) {
        let (s, r) = common::load_scenario(common::SCENARIOS[which]);
        let permuted = ResolvedScenario { certificates: shuffled, unestablished: r.unestablished.clone() };
        prop_assert_eq!(verdict_report(&s, &permuted), verdict_report(&s, &r));
    }

    #[test]
    fn fewer_certificates_never_sharpen_bounds(which in 0usize..common::SCENARIOS.len(), mask in any::<u32>()) {
        let (s, r) = common::load_scenario(common::SCENARIOS[which]);
        if let Ok(full) = classify_all(&s.openbook, &r.certificates) {
            let sub: Vec<_> = r.certificates.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, c)| c.clone()).collect();
            let part = classify_all(&s.openbook, &sub);
            prop_assert!(part.is_ok());
            for v in part.unwrap() {
                if let Some(f) = full.iter().find(|f| f.openbook == v.openbook) {
                    prop_assert!(contains(v.n_bounds, f.n_bounds), "{}: {} vs {}", v.openbook, v.n_bounds, f.n_bounds);
                    prop_assert!(contains(v.depth_b, f.depth_b), "{}: {} vs {}", v.openbook, v.depth_b, f.depth_b);
                }
            }
        }
    }

    #[test]
    fn no_universal_tightness_without_an_axiom(pool in subsequence(all_certificates(), 0..=6)) {
        if let Ok(vs) = classify_all("base", &pool) {
            for v in &vs {
                if let Err(e) = check_verdict(v, &pool) {
                    prop_assert!(false, "{}", e);
                }
            }
        }
    }
}
