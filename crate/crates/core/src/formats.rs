//! Versioned JSON file formats and report documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certify::{Contradiction, DepthReport, ExternalStatement, Verdict};
use crate::covers::{
    BoundaryLift, CommutativityReport, CoverSpec, CyclicCover, LiftedCurve, MonodromyLift, NotLiftable,
};
use crate::error::FormatError;
use crate::mcg::{RelationInstance, TwistWord};
use crate::surface::{make_surface, Curve, CurveKind, Surface};
use crate::words::{FreeMap, Word};

pub const SURFACE_FORMAT: &str = "obk-surface/1";
pub const RELATIONS_FORMAT: &str = "obk-relations/1";
pub const COVER_FORMAT: &str = "obk-cover/1";
pub const COVER_REPORT_FORMAT: &str = "obk-cover-report/1";
pub const WORD_FORMAT: &str = "obk-word/1";
pub const SCENARIO_FORMAT: &str = "obk-scenario/1";
pub const VERDICT_FORMAT: &str = "obk-verdict/1";

fn parse_tagged<T: for<'de> Deserialize<'de>>(
    text: &str,
    what: &'static str,
    expected: &'static str,
    tag: impl Fn(&T) -> &str,
) -> Result<T, FormatError> {
    let value: T = serde_json::from_str(text).map_err(|e| FormatError::json(what, e))?;
    if tag(&value) != expected {
        return Err(FormatError::Tag {
            what,
            expected,
            found: tag(&value).to_string(),
        });
    }
    Ok(value)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub name: String,
    pub word: String,
    /// Index of the boundary component the curve is parallel to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pants: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_automorphism: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_inverse: Option<BTreeMap<String, String>>,
    /// Arc words `v` with `t ↦ v t` for the arc to each hole, keyed by the
    /// hole generator; omitted holes have the empty word.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_arcs: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_inverse_arcs: Option<BTreeMap<String, String>>,
}

fn arcs_from_table(table: &BTreeMap<String, String>, surface: &Surface) -> Result<Vec<Word>, String> {
    let names = surface.generators();
    let holes = &names[surface.hole_offset()..];
    let mut arcs = vec![Word::default(); holes.len()];
    for (key, text) in table {
        let j = holes
            .iter()
            .position(|n| n == key)
            .ok_or_else(|| format!("`{key}` is not a hole generator"))?;
        arcs[j] = Word::parse(text, names).map_err(|e| e.to_string())?;
    }
    Ok(arcs)
}

fn arcs_to_table(arcs: &[Word], surface: &Surface) -> BTreeMap<String, String> {
    let names = surface.generators();
    arcs.iter()
        .enumerate()
        .filter(|(_, w)| !w.is_empty())
        .map(|(j, w)| (names[surface.hole_offset() + j].clone(), w.display(names).to_string()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub format: String,
    pub name: String,
    pub genus: usize,
    pub boundary_count: usize,
    #[serde(default)]
    pub curves: Vec<CurveEntry>,
    #[serde(default)]
    pub relation_instances: Vec<RelationInstance>,
}

/// A surface with its declared curves and relation instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceBundle {
    pub surface: Surface,
    pub relations: Vec<RelationInstance>,
}

pub fn parse_surface(text: &str) -> Result<SurfaceBundle, FormatError> {
    const WHAT: &str = "surface";
    let file: SurfaceFile = parse_tagged(text, WHAT, SURFACE_FORMAT, |f: &SurfaceFile| &f.format)?;
    let mut surface =
        make_surface(file.genus, file.boundary_count).map_err(|e| FormatError::field(WHAT, "genus", e))?;
    surface.set_name(file.name.clone());
    for (i, c) in file.curves.iter().enumerate() {
        let at = |field: &str| format!("curves[{i}].{field}");
        let word = surface
            .parse_word(&c.word)
            .map_err(|e| FormatError::field(WHAT, at("word"), e))?;
        let kind = c.boundary.map_or(CurveKind::Interior, CurveKind::BoundaryParallel);
        let mut curve = Curve::from_word(&surface, c.name.clone(), word, kind);
        if let Some(h) = &c.homology {
            curve.homology = h.clone();
        }
        curve.pants = c.pants.clone().map(|[x, y]| (x, y));
        let table = |t: &Option<BTreeMap<String, String>>, field: &str| {
            t.as_ref()
                .map(|t| FreeMap::from_table(t, surface.generators()))
                .transpose()
                .map_err(|e| FormatError::field(WHAT, at(field), e))
        };
        curve.automorphism = table(&c.pi1_automorphism, "pi1_automorphism")?;
        curve.inverse_automorphism = table(&c.pi1_inverse, "pi1_inverse")?;
        let arcs = |t: &Option<BTreeMap<String, String>>, field: &str| {
            t.as_ref()
                .map(|t| arcs_from_table(t, &surface))
                .transpose()
                .map_err(|e| FormatError::field(WHAT, at(field), e))
        };
        curve.arcs = arcs(&c.pi1_arcs, "pi1_arcs")?;
        curve.inverse_arcs = arcs(&c.pi1_inverse_arcs, "pi1_inverse_arcs")?;
        surface
            .add_curve(curve)
            .map_err(|e| FormatError::field(WHAT, format!("curves[{i}]"), e))?;
    }
    for (i, r) in file.relation_instances.iter().enumerate() {
        for side in [&r.lhs, &r.rhs] {
            if let Err(e) = side.check_curves(&surface) {
                return Err(FormatError::field(WHAT, format!("relation_instances[{i}]"), e));
            }
        }
    }
    Ok(SurfaceBundle {
        surface,
        relations: file.relation_instances,
    })
}

pub fn surface_file(surface: &Surface, relations: &[RelationInstance]) -> SurfaceFile {
    let names = surface.generators();
    SurfaceFile {
        format: SURFACE_FORMAT.into(),
        name: surface.name().into(),
        genus: surface.genus(),
        boundary_count: surface.boundary_count(),
        curves: surface
            .curves()
            .iter()
            .map(|c| CurveEntry {
                name: c.name.clone(),
                word: surface.display_word(&c.word),
                boundary: match c.kind {
                    CurveKind::BoundaryParallel(i) => Some(i),
                    CurveKind::Interior => None,
                },
                homology: (c.homology != c.word.abelianize(surface.rank())).then(|| c.homology.clone()),
                pants: c.pants.clone().map(|(x, y)| [x, y]),
                pi1_automorphism: c.automorphism.as_ref().map(|m| m.to_table(names)),
                pi1_inverse: c.inverse_automorphism.as_ref().map(|m| m.to_table(names)),
                pi1_arcs: c.arcs.as_ref().map(|a| arcs_to_table(a, surface)),
                pi1_inverse_arcs: c.inverse_arcs.as_ref().map(|a| arcs_to_table(a, surface)),
            })
            .collect(),
        relation_instances: relations.to_vec(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationsFile {
    pub format: String,
    pub relations: Vec<RelationInstance>,
}

pub fn parse_relations(text: &str) -> Result<Vec<RelationInstance>, FormatError> {
    let f: RelationsFile = parse_tagged(text, "relations", RELATIONS_FORMAT, |f: &RelationsFile| &f.format)?;
    Ok(f.relations)
}

pub fn relations_file(relations: &[RelationInstance]) -> RelationsFile {
    RelationsFile {
        format: RELATIONS_FORMAT.into(),
        relations: relations.to_vec(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub format: String,
    pub k: u32,
    /// Residues on named generators; generators not listed map to 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<BTreeMap<String, i64>>,
    /// Alternatively `λ = ⟨−, c⟩` for this homology vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutting_class: Option<Vec<i64>>,
}

/// Parses a cover file against the surface it refers to.
pub fn parse_cover(text: &str, surface: &Surface) -> Result<CoverSpec, FormatError> {
    const WHAT: &str = "cover";
    let f: CoverFile = parse_tagged(text, WHAT, COVER_FORMAT, |f: &CoverFile| &f.format)?;
    match (&f.lambda, &f.cutting_class) {
        (Some(l), None) => CoverSpec::from_named(surface, f.k, l).map_err(|e| FormatError::field(WHAT, "lambda", e)),
        (None, Some(c)) => {
            CoverSpec::from_cutting_class(surface, f.k, c).map_err(|e| FormatError::field(WHAT, "cutting_class", e))
        }
        _ => Err(FormatError::field(
            WHAT,
            "lambda",
            "give exactly one of `lambda` or `cutting_class`",
        )),
    }
}

pub fn cover_file(surface: &Surface, spec: &CoverSpec) -> CoverFile {
    CoverFile {
        format: COVER_FORMAT.into(),
        k: spec.k,
        lambda: Some(
            surface
                .generators()
                .iter()
                .zip(&spec.lambda.values)
                .filter(|(_, &v)| v != 0)
                .map(|(g, &v)| (g.clone(), i64::from(v)))
                .collect(),
        ),
        cutting_class: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordFile {
    pub format: String,
    /// Name of the surface the word lives on.
    #[serde(default)]
    pub surface: String,
    pub word: TwistWord,
}

pub fn parse_word_file(text: &str) -> Result<WordFile, FormatError> {
    parse_tagged(text, "word", WORD_FORMAT, |f: &WordFile| &f.format)
}

pub fn word_file(surface: &Surface, word: &TwistWord) -> WordFile {
    WordFile {
        format: WORD_FORMAT.into(),
        surface: surface.name().into(),
        word: word.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub name: String,
    pub genus: usize,
    pub boundary_count: usize,
    pub euler_characteristic: i64,
}

impl SurfaceSummary {
    pub fn of(s: &Surface) -> Self {
        SurfaceSummary {
            name: s.name().into(),
            genus: s.genus(),
            boundary_count: s.boundary_count(),
            euler_characteristic: s.euler_characteristic(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LiftReport {
    Lifted {
        word: TwistWord,
        commutativity: CommutativityReport,
    },
    NotLiftable {
        failure: NotLiftable,
    },
    Inconclusive {
        failures: Vec<NotLiftable>,
        note: String,
    },
}

impl LiftReport {
    pub fn new(lift: MonodromyLift, commutativity: Option<CommutativityReport>) -> Self {
        match lift {
            MonodromyLift::Lifted(word) => LiftReport::Lifted {
                word,
                commutativity: commutativity.expect("commutativity checked for lifted words"),
            },
            MonodromyLift::NotLiftable(failure) => LiftReport::NotLiftable { failure },
            MonodromyLift::Inconclusive { failures } => LiftReport::Inconclusive {
                failures,
                note: "factor-wise lifting failed, but the monodromy preserves the kernel of lambda on homology".into(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub format: String,
    pub base: SurfaceSummary,
    pub k: u32,
    pub lambda: BTreeMap<String, u32>,
    pub connected: bool,
    pub components: usize,
    /// Genus of each component.
    pub genus: usize,
    pub boundary_count: usize,
    pub euler_characteristic: i64,
    pub homology_rank: usize,
    pub boundary_table: Vec<BoundaryLift>,
    pub lift_table: Vec<LiftedCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_word: Option<TwistWord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftReport>,
}

pub fn cover_report(cover: &CyclicCover, lift: Option<(TwistWord, LiftReport)>) -> CoverReport {
    let base = cover.base();
    let (base_word, lift) = match lift {
        Some((w, r)) => (Some(w), Some(r)),
        None => (None, None),
    };
    CoverReport {
        format: COVER_REPORT_FORMAT.into(),
        base: SurfaceSummary::of(base),
        k: cover.degree(),
        lambda: base
            .generators()
            .iter()
            .cloned()
            .zip(cover.spec().lambda.values.iter().copied())
            .collect(),
        connected: cover.is_connected(),
        components: cover.components(),
        genus: cover.genus(),
        boundary_count: cover.boundary_count(),
        euler_characteristic: cover.euler_characteristic(),
        homology_rank: cover.homology_rank(),
        boundary_table: cover.boundary_lifts().to_vec(),
        lift_table: cover.lifts().to_vec(),
        base_word,
        lift,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileRef {
    pub path: String,
    /// Hex SHA-256 of the file contents; checked when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenBookEntry {
    pub name: String,
    pub surface: FileRef,
    pub word: FileRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CertificateEntry {
    /// Search for a positive factorization of the open book's word using
    /// the surface's relation instances and any extra relation files.
    PositiveWord {
        openbook: String,
        #[serde(default)]
        relations: Vec<FileRef>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
    },
    OtDiskMovie {
        openbook: String,
        movie: FileRef,
    },
    ExternalAxiom {
        openbook: String,
        statement: ExternalStatement,
        citation: String,
    },
    /// The cover of `base` given by `cover_spec`, named `cover`.
    CoverRelation {
        cover: String,
        base: String,
        cover_spec: FileRef,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format: String,
    pub name: String,
    /// The open book the scenario is about.
    pub openbook: String,
    #[serde(default)]
    pub openbooks: Vec<OpenBookEntry>,
    #[serde(default)]
    pub certificates: Vec<CertificateEntry>,
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile, FormatError> {
    parse_tagged(text, "scenario", SCENARIO_FORMAT, |f: &ScenarioFile| &f.format)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub kind: String,
    pub description: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub format: String,
    pub scenario: String,
    pub openbook: String,
    pub consistent: bool,
    pub certificates: Vec<CertificateSummary>,
    /// Declared certificates that could not be established, with reasons.
    pub unestablished: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub depth: Vec<DepthReport>,
    pub contradictions: Vec<Contradiction>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_round_trip() {
        let text = r#"{"format":"obk-surface/1","name":"t","genus":1,"boundary_count":2,
            "curves":[{"name":"a","word":"a1"},{"name":"c","word":"d1","boundary":0}]}"#;
        let b = parse_surface(text).unwrap();
        assert_eq!(b.surface.curves().len(), 2);
        let again = parse_surface(&to_json(&surface_file(&b.surface, &b.relations))).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn surface_errors_are_located() {
        let bad = r#"{"format":"obk-surface/1","name":"t","genus":1,"boundary_count":1,
            "curves":[{"name":"a","word":"a7"}]}"#;
        match parse_surface(bad) {
            Err(FormatError::Field { field, .. }) => assert_eq!(field, "curves[0].word"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_surface("{\"format\": 3"), Err(FormatError::Json { .. })));
        assert!(matches!(
            parse_surface(r#"{"format":"obk-surface/9","name":"t","genus":1,"boundary_count":1}"#),
            Err(FormatError::Tag { .. })
        ));
    }

    #[test]
    fn cover_spec_forms_agree() {
        let s = make_surface(1, 1).unwrap();
        let a = parse_cover(r#"{"format":"obk-cover/1","k":2,"lambda":{"a1":1}}"#, &s).unwrap();
        let b = parse_cover(r#"{"format":"obk-cover/1","k":2,"cutting_class":[0,1]}"#, &s).unwrap();
        assert_eq!(a, b);
        assert!(parse_cover(r#"{"format":"obk-cover/1","k":2}"#, &s).is_err());
        assert!(parse_cover(r#"{"format":"obk-cover/1","k":2,"lambda":{"zz":1}}"#, &s).is_err());
        assert!(parse_cover(r#"{"format":"obk-cover/1","k":0,"lambda":{}}"#, &s).is_err());
    }
}
