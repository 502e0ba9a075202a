use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use obk_core::covers::{build_cyclic_cover, check_commutativity, lift_monodromy, CyclicCover, MonodromyLift};
use obk_core::foliation::{
    euler_characteristic, giroux_graphs, parse_movie, recognize_ot_disk, self_linking, singularity_census,
    validate_movie, MoviePresentation,
};
use obk_core::formats::{
    self, cover_report, parse_cover, parse_relations, parse_scenario, parse_surface, parse_word_file, LiftReport,
    SurfaceBundle,
};
use obk_core::mcg::{
    pants_pattern_scan, positivity_search, verify_relation_instance, PositivityOutcome, RelationInstance,
    RelationRegistry, TwistWord,
};
use obk_core::presets::{self, OpenBookPreset};
use obk_core::scenario::{resolve_scenario, verdict_report};
use obk_core::surface::CurveKind;

use crate::workspace::Workspace;

/// A report document and whether it is a domain rejection.
pub struct Outcome {
    pub doc: Value,
    pub rejected: bool,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, rejected: false }
    }
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn load_surface(ws: &Workspace, path: &Path) -> Result<SurfaceBundle> {
    let (p, text) = ws.read(path)?;
    parse_surface(&text).with_context(|| format!("in {}", p.display()))
}

fn load_word(ws: &Workspace, path: &Path) -> Result<TwistWord> {
    let (p, text) = ws.read(path)?;
    Ok(parse_word_file(&text)
        .with_context(|| format!("in {}", p.display()))?
        .word)
}

fn load_cover(ws: &Workspace, bundle: &SurfaceBundle, path: &Path) -> Result<CyclicCover> {
    let (p, text) = ws.read(path)?;
    let spec = parse_cover(&text, &bundle.surface).with_context(|| format!("in {}", p.display()))?;
    Ok(build_cyclic_cover(&bundle.surface, &spec)?)
}

pub fn surface_info(ws: &Workspace, path: &Path) -> Result<Outcome> {
    let b = load_surface(ws, path)?;
    let s = &b.surface;
    let diagnostics = s.validate();
    let relations: Vec<_> = b.relations.iter().map(|r| verify_relation_instance(s, r)).collect();
    let rejected = !diagnostics.is_empty() || relations.iter().any(|r| !r.pass);
    let curves: Vec<Value> = s
        .curves()
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "kind": match c.kind {
                    CurveKind::Interior => "interior".to_string(),
                    CurveKind::BoundaryParallel(i) => format!("boundary {i}"),
                },
                "word": s.display_word(&c.word),
                "homology": c.homology,
                "pi1_action": c.automorphism.is_some(),
                "pi1_arcs": c.arcs.is_some() || s.hole_count() == 0,
            })
        })
        .collect();
    Ok(Outcome {
        doc: json!({
            "surface": value(&formats::SurfaceSummary::of(s)),
            "generators": s.generators(),
            "boundary_words": s.boundary_words().iter().map(|w| s.display_word(w)).collect::<Vec<_>>(),
            "curves": curves,
            "diagnostics": value(&diagnostics),
            "relations": value(&relations),
        }),
        rejected,
    })
}

pub fn cover_build(ws: &Workspace, surface: &Path, cover: &Path) -> Result<Outcome> {
    let b = load_surface(ws, surface)?;
    let c = load_cover(ws, &b, cover)?;
    Ok(Outcome::ok(value(&cover_report(&c, None))))
}

pub fn lift(ws: &Workspace, surface: &Path, cover: &Path, word: &Path) -> Result<Outcome> {
    let b = load_surface(ws, surface)?;
    let c = load_cover(ws, &b, cover)?;
    let w = load_word(ws, word)?;
    let lifted = lift_monodromy(&c, &w)?;
    let (report, rejected) = match lifted {
        MonodromyLift::Lifted(ref lw) => {
            let comm = check_commutativity(&c, &w, lw)?;
            let pass = comm.pass;
            (LiftReport::new(lifted, Some(comm)), !pass)
        }
        other => (LiftReport::new(other, None), true),
    };
    Ok(Outcome {
        doc: value(&cover_report(&c, Some((w, report)))),
        rejected,
    })
}

fn movie_doc(m: &MoviePresentation) -> Outcome {
    let diagnostics = validate_movie(m);
    if !diagnostics.is_empty() {
        return Outcome {
            doc: json!({"movie": m.name, "valid": false, "diagnostics": value(&diagnostics)}),
            rejected: true,
        };
    }
    let census = singularity_census(m).expect("valid movie has a census");
    let (gpp, gmm) = giroux_graphs(m).expect("valid movie has Giroux graphs");
    let (ot, rejected) = match recognize_ot_disk(m) {
        Ok(cert) => (
            json!({"recognized": true, "e_minus": cert.e_minus(), "level": cert.level()}),
            false,
        ),
        Err(r) => (json!({"recognized": false, "reasons": r.reasons}), true),
    };
    Outcome {
        doc: json!({
            "movie": m.name,
            "surface": m.surface,
            "valid": true,
            "pages": m.pages.len(),
            "census": value(&census),
            "euler_characteristic": euler_characteristic(&census),
            "self_linking": self_linking(&census),
            "giroux_positive": value(&gpp),
            "giroux_negative": value(&gmm),
            "ot_disk": ot,
        }),
        rejected,
    }
}

pub fn movie_check(ws: &Workspace, path: &Path) -> Result<Outcome> {
    let (p, text) = ws.read(path)?;
    let m = parse_movie(&text).with_context(|| format!("in {}", p.display()))?;
    Ok(movie_doc(&m))
}

fn registry(b: &SurfaceBundle, extra: &[RelationInstance]) -> (RelationRegistry, Vec<Value>) {
    let mut all = b.relations.clone();
    all.extend(extra.iter().cloned());
    let (reg, reports) = RelationRegistry::verified(&b.surface, &all);
    (reg, reports.iter().map(value).collect())
}

pub fn positivity(ws: &Workspace, surface: &Path, word: &Path, relations: &[PathBuf], depth: usize) -> Result<Outcome> {
    let b = load_surface(ws, surface)?;
    let w = load_word(ws, word)?;
    w.check_curves(&b.surface)?;
    let mut extra = Vec::new();
    for r in relations {
        let (p, text) = ws.read(r)?;
        extra.extend(parse_relations(&text).with_context(|| format!("in {}", p.display()))?);
    }
    let (reg, reports) = registry(&b, &extra);
    let pants: Vec<Value> = pants_pattern_scan(&b.surface, &w).iter().map(value).collect();
    let (result, rejected) = match positivity_search(&w, &reg, depth) {
        PositivityOutcome::Found(c) => (
            json!({
                "status": "found",
                "positive_word": c.positive_word(),
                "exact": c.is_exact(),
                "chain": value(&c.chain()),
            }),
            false,
        ),
        PositivityOutcome::Unknown { explored } => (json!({"status": "unknown", "explored": explored}), true),
    };
    Ok(Outcome {
        doc: json!({
            "word": w,
            "depth": depth,
            "relations": reports,
            "pants_patterns": pants,
            "result": result,
        }),
        rejected,
    })
}

pub fn classify(ws: &Workspace, path: &Path, default_depth: usize) -> Result<Outcome> {
    let (p, text) = ws.read(path)?;
    let scenario = parse_scenario(&text).with_context(|| format!("in {}", p.display()))?;
    let dir = p.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut read = |r: &formats::FileRef| ws.read_ref(r, &dir).map(|(_, t)| t).map_err(|e| format!("{e:#}"));
    let resolved =
        resolve_scenario(&scenario, default_depth, &mut read).with_context(|| format!("in {}", p.display()))?;
    let report = verdict_report(&scenario, &resolved);
    Ok(Outcome {
        rejected: !report.consistent,
        doc: value(&report),
    })
}

/// Documents a preset writes, as (file name, contents).
pub type PresetFiles = Vec<(String, String)>;

fn openbook_files(stem: &str, word_name: &str, cover_name: &str, pre: &OpenBookPreset) -> PresetFiles {
    let mut v = vec![
        (
            format!("{stem}.surface.json"),
            formats::to_json(&formats::surface_file(&pre.surface, &pre.relations)),
        ),
        (
            format!("{word_name}.word.json"),
            formats::to_json(&formats::word_file(&pre.surface, &pre.word)),
        ),
    ];
    if let Some(spec) = &pre.cover {
        v.push((
            format!("{cover_name}.cover.json"),
            formats::to_json(&formats::cover_file(&pre.surface, spec)),
        ));
    }
    v
}

pub fn preset_prop12(p: usize, q: usize, n: i64) -> Result<PresetFiles> {
    let pre = presets::prop12(p, q, n)?;
    let stem = format!("prop12-p{p}-q{q}");
    Ok(openbook_files(&stem, &format!("{stem}-n{n}"), &stem, &pre))
}

pub fn preset_example41(alpha: i64, beta: i64, k: u32) -> Result<PresetFiles> {
    let pre = presets::example41(alpha, beta, k)?;
    Ok(openbook_files(
        "example41",
        &format!("example41-a{alpha}-b{beta}"),
        &format!("example41-k{k}"),
        &pre,
    ))
}

pub fn preset_example43() -> PresetFiles {
    openbook_files("example43", "example43", "example43", &presets::example43())
}

pub fn preset_movie(m: MoviePresentation) -> PresetFiles {
    vec![(format!("{}.movie.json", m.name), m.to_json())]
}

pub fn preset_case(case: u8, p: usize, q: usize) -> Result<PresetFiles> {
    let m = if case == 1 {
        presets::case1_movie(p, q)?
    } else {
        presets::case2_movie(p, q)?
    };
    Ok(preset_movie(m))
}

pub fn preset_doc(files: &PresetFiles) -> Result<Value> {
    let mut docs = serde_json::Map::new();
    for (name, text) in files {
        docs.insert(name.clone(), serde_json::from_str(text)?);
    }
    Ok(Value::Object(docs))
}
