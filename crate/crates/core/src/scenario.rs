//! Turning a scenario file into checked certificates and a verdict report.

use std::collections::BTreeMap;

use crate::certify::{
    canonical_order, check_consistency, classify_all, depth_bounds, verify_cover_relation, Certificate, CertificateKind,
};
use crate::covers::build_cyclic_cover;
use crate::error::ScenarioError;
use crate::foliation::{parse_movie, recognize_ot_disk};
use crate::formats::{
    parse_cover, parse_relations, parse_surface, parse_word_file, CertificateEntry, CertificateSummary, FileRef,
    ScenarioFile, SurfaceBundle, VerdictReport, VERDICT_FORMAT,
};
use crate::mcg::{positivity_search, PositivityOutcome, RelationRegistry, TwistWord};

/// Certificates established from a scenario, and the declared ones that
/// could not be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedScenario {
    pub certificates: Vec<Certificate>,
    pub unestablished: Vec<String>,
}

/// Reads referenced files through `read`, which returns the file contents
/// or an error message.
pub fn resolve_scenario(
    scenario: &ScenarioFile,
    default_depth: usize,
    read: &mut dyn FnMut(&FileRef) -> Result<String, String>,
) -> Result<ResolvedScenario, ScenarioError> {
    let mut load = |r: &FileRef| {
        read(r).map_err(|message| ScenarioError::File {
            path: r.path.clone(),
            message,
        })
    };
    let in_file = |r: &FileRef, e: &dyn std::fmt::Display| ScenarioError::File {
        path: r.path.clone(),
        message: e.to_string(),
    };
    let mut books: BTreeMap<&str, (SurfaceBundle, TwistWord)> = BTreeMap::new();
    for ob in &scenario.openbooks {
        let bundle = parse_surface(&load(&ob.surface)?).map_err(|e| in_file(&ob.surface, &e))?;
        let word = parse_word_file(&load(&ob.word)?)
            .map_err(|e| in_file(&ob.word, &e))?
            .word;
        word.check_curves(&bundle.surface).map_err(|e| in_file(&ob.word, &e))?;
        if books.insert(&ob.name, (bundle, word)).is_some() {
            return Err(ScenarioError::Reference(format!(
                "open book `{}` is declared twice",
                ob.name
            )));
        }
    }
    let book = |name: &str| {
        books
            .get(name)
            .ok_or_else(|| ScenarioError::Reference(format!("unknown open book `{name}`")))
    };
    let mut certificates = Vec::new();
    let mut unestablished = Vec::new();
    for (i, entry) in scenario.certificates.iter().enumerate() {
        match entry {
            CertificateEntry::PositiveWord {
                openbook,
                relations,
                depth,
            } => {
                let (b, w) = book(openbook)?;
                let mut all = b.relations.clone();
                for r in relations {
                    all.extend(parse_relations(&load(r)?).map_err(|e| in_file(r, &e))?);
                }
                let (reg, _) = RelationRegistry::verified(&b.surface, &all);
                let depth = depth.unwrap_or(default_depth);
                match positivity_search(w, &reg, depth) {
                    PositivityOutcome::Found(cert) => certificates.push(Certificate::new(
                        CertificateKind::PositiveWord {
                            openbook: openbook.clone(),
                            cert,
                        },
                        format!("positive factorization found by relation search (depth {depth})"),
                    )),
                    PositivityOutcome::Unknown { explored } => unestablished.push(format!(
                        "certificates[{i}]: no positive factorization of `{openbook}` within depth {depth} ({explored} words explored)"
                    )),
                }
            }
            CertificateEntry::OtDiskMovie { openbook, movie } => {
                let m = parse_movie(&load(movie)?).map_err(|e| in_file(movie, &e))?;
                match recognize_ot_disk(&m) {
                    Ok(cert) => certificates.push(Certificate::new(
                        CertificateKind::OTDiskMovie {
                            openbook: openbook.clone(),
                            cert,
                        },
                        format!("movie {}", movie.path),
                    )),
                    Err(r) => {
                        unestablished.push(format!("certificates[{i}]: movie rejected: {}", r.reasons.join("; ")))
                    }
                }
            }
            CertificateEntry::ExternalAxiom {
                openbook,
                statement,
                citation,
            } => certificates.push(Certificate::new(
                CertificateKind::ExternalAxiom {
                    openbook: openbook.clone(),
                    statement: *statement,
                    citation: citation.clone(),
                },
                format!("external: {citation}"),
            )),
            CertificateEntry::CoverRelation {
                cover,
                base,
                cover_spec,
            } => {
                let (b, w) = book(base)?;
                let spec = parse_cover(&load(cover_spec)?, &b.surface).map_err(|e| in_file(cover_spec, &e))?;
                let c = build_cyclic_cover(&b.surface, &spec).map_err(ScenarioError::Cover)?;
                match verify_cover_relation(&c, w) {
                    Ok(cert) => certificates.push(Certificate::new(
                        CertificateKind::CoverRelation {
                            cover: cover.clone(),
                            base: base.clone(),
                            cert,
                        },
                        format!("cover spec {}", cover_spec.path),
                    )),
                    Err(e) => unestablished.push(format!("certificates[{i}]: cover relation not established: {e}")),
                }
            }
        }
    }
    Ok(ResolvedScenario {
        certificates,
        unestablished,
    })
}

fn kind_name(c: &Certificate) -> &'static str {
    match c.kind {
        CertificateKind::PositiveWord { .. } => "positive_word",
        CertificateKind::OTDiskMovie { .. } => "ot_disk_movie",
        CertificateKind::ExternalAxiom { .. } => "external_axiom",
        CertificateKind::CoverRelation { .. } => "cover_relation",
    }
}

/// Classifies every open book of the scenario. On a contradiction the
/// report lists all clashes found pairwise and on the full set.
pub fn verdict_report(scenario: &ScenarioFile, resolved: &ResolvedScenario) -> VerdictReport {
    let certs = &resolved.certificates;
    let mut report = VerdictReport {
        format: VERDICT_FORMAT.into(),
        scenario: scenario.name.clone(),
        openbook: scenario.openbook.clone(),
        consistent: true,
        certificates: canonical_order(certs)
            .iter()
            .map(|c| CertificateSummary {
                kind: kind_name(c).into(),
                description: c.describe(),
                provenance: c.provenance.clone(),
            })
            .collect(),
        unestablished: resolved.unestablished.clone(),
        verdicts: Vec::new(),
        depth: Vec::new(),
        contradictions: Vec::new(),
    };
    match classify_all(&scenario.openbook, certs) {
        Ok(verdicts) => {
            report.depth = verdicts.iter().map(depth_bounds).collect();
            report.verdicts = verdicts;
        }
        Err(found) => {
            report.consistent = false;
            let mut all = check_consistency(certs).contradictions;
            for c in found {
                if !all.contains(&c) {
                    all.push(c);
                }
            }
            report.contradictions = all;
        }
    }
    report
}
