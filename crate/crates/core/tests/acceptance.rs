//! One line per acceptance criterion, then a single assertion over all of
//! them. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines interleaved with the harness output.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use obk_core::certify::{classify_all, CertificateKind, Classification, Interval, Rule};
use obk_core::covers::{
    build_cyclic_cover, check_commutativity, lift_monodromy, lift_twist_power, MonodromyLift, TwistLift,
};
use obk_core::foliation::{
    euler_characteristic, parse_movie, recognize_ot_disk, self_linking, singularity_census, validate_movie,
    SingularityCensus,
};
use obk_core::formats::{parse_cover, parse_surface, parse_word_file, SurfaceBundle};
use obk_core::mcg::{
    positivity_search, verify_relation_instance, PositivityOutcome, RelationRegistry, TwistWord, VerificationLevel,
};
use obk_core::scenario::{verdict_report, ResolvedScenario};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn read(name: &str) -> String {
    std::fs::read_to_string(common::presets_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn surface(name: &str) -> SurfaceBundle {
    parse_surface(&read(name)).unwrap()
}

fn word(name: &str) -> TwistWord {
    parse_word_file(&read(name)).unwrap().word
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let b = surface("example43.surface.json");
    let spec = parse_cover(&read("example43.cover.json"), &b.surface).map_err(|e| e.to_string())?;
    let cover = build_cyclic_cover(&b.surface, &spec).map_err(|e| e.to_string())?;
    ensure(
        (cover.genus(), cover.boundary_count()) == (7, 4),
        format!(
            "cover has genus {} with {} boundaries",
            cover.genus(),
            cover.boundary_count()
        ),
    )?;
    let psi = word("example43.word.json");
    let lifted = match lift_monodromy(&cover, &psi).map_err(|e| e.to_string())? {
        MonodromyLift::Lifted(w) => w,
        other => return Err(format!("lift failed: {other:?}")),
    };
    let documented = TwistWord::parse("T[a~] T[b~] T[c~] T[c~'] T[d~] T[d~'] T[e~]^-1 T[e~']^-1 T[f~] T[f~']").unwrap();
    ensure(lifted == documented, format!("lifted word {lifted}"))?;
    let grouped = TwistWord::parse("T[a~] T[b~] T[c~] T[d~] T[e~]^-1 T[f~] T[c~'] T[d~'] T[e~']^-1 T[f~']").unwrap();
    let sorted = |w: &TwistWord| {
        let mut v: Vec<_> = w.factors().iter().map(|f| (f.curve.clone(), f.exponent)).collect();
        v.sort();
        v
    };
    ensure(
        sorted(&lifted) == sorted(&grouped),
        "factor multiset differs from the sheet-grouped word",
    )?;
    for w in [&lifted, &grouped] {
        let rep = check_commutativity(&cover, &psi, w).map_err(|e| e.to_string())?;
        ensure(rep.pass, format!("commutativity fails for {w}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("genus 7, 4 boundaries, {} factors, {elapsed:?}", lifted.len()))
}

fn ot_disk_check(movie: &str) -> Result<(), String> {
    let m = parse_movie(&read(movie)).map_err(|e| e.to_string())?;
    let d = validate_movie(&m);
    ensure(d.is_empty(), format!("{movie}: {d:?}"))?;
    let c = singularity_census(&m).map_err(|e| e.to_string())?;
    ensure(
        c == SingularityCensus::new(4, 2, 4, 1),
        format!("{movie}: census {c:?}"),
    )?;
    ensure(
        euler_characteristic(&c) == 1,
        format!("{movie}: chi {}", euler_characteristic(&c)),
    )?;
    ensure(self_linking(&c) == 1, format!("{movie}: sl {}", self_linking(&c)))?;
    let cert = recognize_ot_disk(&m).map_err(|r| format!("{movie}: {}", r.reasons.join("; ")))?;
    ensure(cert.e_minus() == 2, format!("{movie}: e- {}", cert.e_minus()))
}

fn scenario_check(name: &str) -> Result<(), String> {
    let (s, r) = common::load_scenario(name);
    ensure(r.unestablished.is_empty(), format!("{name}: {:?}", r.unestablished))?;
    let verdicts = classify_all(&s.openbook, &r.certificates).map_err(|c| format!("{name}: {c:?}"))?;
    let get = |o: &str| {
        verdicts
            .iter()
            .find(|v| v.openbook == o)
            .ok_or(format!("{name}: no verdict for {o}"))
    };
    let base = get("base")?;
    let cover = get("cover")?;
    ensure(
        base.classification == Classification::VirtuallyOvertwisted,
        format!("{name}: base is {:?}", base.classification),
    )?;
    ensure(
        base.derivation.iter().any(|d| d.rule == Rule::R1),
        format!("{name}: tightness not from R1"),
    )?;
    ensure(
        cover.n_bounds == Interval::point(2) && cover.depth_b == Interval::point(2),
        format!("{name}: cover n {} d {}", cover.n_bounds, cover.depth_b),
    )
}

fn criterion_2() -> Outcome {
    let b = surface("prop12-p4-q4.surface.json");
    let w = word("prop12-p4-q4-n-1.word.json");
    let (reg, reports) = RelationRegistry::verified(&b.surface, &b.relations);
    ensure(reports.iter().all(|r| r.pass), "bundled relations do not verify")?;
    match positivity_search(&w, &reg, 1) {
        PositivityOutcome::Found(c) => ensure(c.chain().len() == 1 && c.positive_word().is_positive(), "bad chain")?,
        PositivityOutcome::Unknown { .. } => return Err("no positive word at depth 1".into()),
    }
    ot_disk_check("case1-p4-q4.movie.json")?;
    scenario_check("prop12-case1")?;
    Ok(
        "positive at depth 1; census (4,2,4,1), chi 1, sl 1, e- 2; base virtually overtwisted, cover n = d = [2,2]"
            .into(),
    )
}

fn criterion_3() -> Outcome {
    ot_disk_check("case2-p3-q3.movie.json")?;
    scenario_check("prop12-case2")?;
    Ok("census (4,2,4,1), chi 1, sl 1, e- 2; base virtually overtwisted, cover n = d = [2,2]".into())
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn criterion_4() -> Outcome {
    const CASES: u32 = 1000;
    runner(CASES)
        .run(&(common::arb_cover_case(), -12i64..=12), |((s, spec), e)| {
            common::check_cover_case(&s, &spec, e).map_err(TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{CASES} random covers, zero failures"))
}

fn criterion_5() -> Outcome {
    const CASES: u32 = 500;
    runner(CASES)
        .run(&common::arb_mcg_case(), |(s, w, class)| {
            common::check_mcg_case(&s, &w, &class).map_err(TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{CASES} random words, zero failures"))
}

fn criterion_6() -> Outcome {
    let b = surface("prop12-p4-q4.surface.json");
    let mut perturbed = 0;
    for r in &b.relations {
        let rep = verify_relation_instance(&b.surface, r);
        ensure(rep.pass, format!("{}: {:?}", r.name, rep.mismatches))?;
        ensure(
            rep.level == VerificationLevel::Pi1Exact,
            format!("{}: level {:?}", r.name, rep.level),
        )?;
        for side in 0..2 {
            let w = if side == 0 { &r.lhs } else { &r.rhs };
            for i in 0..w.len() {
                for delta in [-1, 1] {
                    let mut f = w.factors().to_vec();
                    f[i].exponent += delta;
                    let mut bad = r.clone();
                    if side == 0 {
                        bad.lhs = TwistWord::new(f);
                    } else {
                        bad.rhs = TwistWord::new(f);
                    }
                    ensure(
                        !verify_relation_instance(&b.surface, &bad).pass,
                        format!("{}: perturbing factor {i} by {delta} went unnoticed", r.name),
                    )?;
                    perturbed += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} instances pi1-exact, {perturbed} perturbations rejected",
        b.relations.len()
    ))
}

fn criterion_7() -> Outcome {
    let mut shuffles = 0;
    for name in common::SCENARIOS {
        let (s, r) = common::load_scenario(name);
        let expected = verdict_report(&s, &r);
        runner(32)
            .run(&Just(r.certificates.clone()).prop_shuffle(), |certificates| {
                let p = ResolvedScenario {
                    certificates,
                    unestablished: r.unestablished.clone(),
                };
                if verdict_report(&s, &p) == expected {
                    Ok(())
                } else {
                    Err(TestCaseError::fail(format!("{name}: verdict depends on order")))
                }
            })
            .map_err(|e| e.to_string())?;
        shuffles += 32;
        if let Ok(vs) = classify_all(&s.openbook, &r.certificates) {
            for v in vs
                .iter()
                .filter(|v| v.classification == Classification::UniversallyTight)
            {
                let cited = r.certificates.iter().any(|c| {
                    matches!(&c.kind, CertificateKind::ExternalAxiom { openbook, citation, .. }
                        if *openbook == v.openbook && !citation.trim().is_empty())
                });
                ensure(
                    cited,
                    format!("{name}: {} universally tight without a cited axiom", v.openbook),
                )?;
            }
        }
    }
    let (s, r) = common::load_scenario("contradiction");
    let rep = verdict_report(&s, &r);
    ensure(
        !rep.consistent && !rep.contradictions.is_empty(),
        "tight vs n = 1 clash not detected",
    )?;
    let (s, r) = common::load_scenario("universally-tight");
    let v = classify_all(&s.openbook, &r.certificates).map_err(|c| format!("{c:?}"))?;
    ensure(
        v.iter().any(|v| v.classification == Classification::UniversallyTight),
        "universally-tight scenario not classified",
    )?;
    Ok(format!(
        "{shuffles} shuffles over {} scenarios; clash detected ({} contradictions); universal tightness only with a cited axiom",
        common::SCENARIOS.len(),
        rep.contradictions.len()
    ))
}

fn criterion_8() -> Outcome {
    let b = surface("example41.surface.json");
    let w = word("example41-a1-b1.word.json");
    let cover = |file: &str| {
        let spec = parse_cover(&read(file), &b.surface).map_err(|e| e.to_string())?;
        build_cyclic_cover(&b.surface, &spec).map_err(|e| e.to_string())
    };
    let two = cover("example41-k2.cover.json")?;
    match lift_monodromy(&two, &w).map_err(|e| e.to_string())? {
        MonodromyLift::Lifted(lw) => {
            ensure(
                lw.factors().iter().all(|f| f.exponent.abs() == 1),
                format!("k = 2 lift has exponents other than 1: {lw}"),
            )?;
            ensure(
                check_commutativity(&two, &w, &lw).map_err(|e| e.to_string())?.pass,
                "k = 2 lift does not commute",
            )?;
        }
        other => return Err(format!("k = 2: {other:?}")),
    }
    let three = cover("example41-k3.cover.json")?;
    let a = w.factors().iter().find(|f| f.curve == "a").ok_or("no T[a] factor")?;
    match lift_twist_power(&three, "a", a.exponent).map_err(|e| e.to_string())? {
        TwistLift::NotLiftable(_) => {}
        TwistLift::Lifted(_) => return Err(format!("k = 3: T[a]^{} lifts", a.exponent)),
    }
    let word_level = match lift_monodromy(&three, &w).map_err(|e| e.to_string())? {
        MonodromyLift::Lifted(lw) => return Err(format!("k = 3: word lifts to {lw}")),
        MonodromyLift::NotLiftable(_) => "not liftable",
        MonodromyLift::Inconclusive { .. } => "inconclusive, homology action preserves ker",
    };
    Ok(format!(
        "k = 2 lifts with unit exponents; k = 3: T[a]^{} not liftable (word level: {word_level})",
        a.exponent
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("genus-four double cover and lifted monodromy", criterion_1),
        ("lantern family n = -1, p = q = 4, even case", criterion_2),
        ("odd case movie and classification", criterion_3),
        ("cover property suite", criterion_4),
        ("mapping class property suite", criterion_5),
        ("lantern verified on the fundamental groupoid", criterion_6),
        ("certificate engine", criterion_7),
        ("four-holed sphere covers of degree 2 and 3", criterion_8),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        match run() {
            Ok(detail) => writeln!(out, "acceptance {n} PASS: {title}: {detail}").unwrap(),
            Err(e) => {
                writeln!(out, "acceptance {n} FAIL: {title}: {e}").unwrap();
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
