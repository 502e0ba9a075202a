//! Movie presentations of open book foliations on embedded disks.
//!
//! A movie is a list of page slices. On each slice the disk meets the page
//! in a-arcs (from an elliptic point to a braid point) and b-arcs (from a
//! positive to a negative elliptic point). Between consecutive slices at
//! most one saddle (hyperbolic point) reconnects two arcs. The closure map
//! identifies the last slice with the first through the monodromy.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{FoliationError, FormatError};
use crate::surface::Diagnostic;

pub const MOVIE_FORMAT: &str = "obk-movie/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Elliptic {
    pub id: String,
    pub sign: Sign,
    /// Binding component the point lies on.
    pub binding: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AArc {
    pub id: String,
    pub elliptic: String,
    /// Braid point (⊙) the arc ends on.
    pub braid: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BArc {
    pub id: String,
    pub pos: String,
    pub neg: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageConfig {
    pub t: f64,
    pub elliptics: Vec<Elliptic>,
    #[serde(default)]
    pub a_arcs: Vec<AArc>,
    #[serde(default)]
    pub b_arcs: Vec<BArc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperbolicEvent {
    pub t: f64,
    pub sign: Sign,
    pub merged: [String; 2],
    pub produced: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incident_elliptics: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region_tag: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureMap {
    pub elliptics: BTreeMap<String, String>,
    pub arcs: BTreeMap<String, String>,
    #[serde(default)]
    pub braid_points: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoviePresentation {
    pub format: String,
    #[serde(default)]
    pub name: String,
    /// Reference to the page surface (a name or file).
    #[serde(default)]
    pub surface: String,
    pub pages: Vec<PageConfig>,
    #[serde(default)]
    pub events: Vec<HyperbolicEvent>,
    pub closure_map: ClosureMap,
}

/// An arc with its id stripped, for comparing configurations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum ArcShape {
    A { elliptic: String, braid: String },
    B { pos: String, neg: String },
}

impl ArcShape {
    fn endpoints(&self) -> [&str; 2] {
        match self {
            ArcShape::A { elliptic, braid } => [elliptic, braid],
            ArcShape::B { pos, neg } => [pos, neg],
        }
    }
}

impl PageConfig {
    fn arcs(&self) -> BTreeMap<&str, ArcShape> {
        let mut m = BTreeMap::new();
        for a in &self.a_arcs {
            m.insert(
                a.id.as_str(),
                ArcShape::A {
                    elliptic: a.elliptic.clone(),
                    braid: a.braid.clone(),
                },
            );
        }
        for b in &self.b_arcs {
            m.insert(
                b.id.as_str(),
                ArcShape::B {
                    pos: b.pos.clone(),
                    neg: b.neg.clone(),
                },
            );
        }
        m
    }

    fn braid_points(&self) -> BTreeSet<&str> {
        self.a_arcs.iter().map(|a| a.braid.as_str()).collect()
    }

    fn elliptic_ids(&self) -> BTreeSet<&str> {
        self.elliptics.iter().map(|e| e.id.as_str()).collect()
    }

    fn elliptic_set(&self) -> BTreeSet<&Elliptic> {
        self.elliptics.iter().collect()
    }

    fn sign_of(&self, id: &str) -> Option<Sign> {
        self.elliptics.iter().find(|e| e.id == id).map(|e| e.sign)
    }
}

/// Parses an "obk-movie/1" document. Rejects malformed JSON, a wrong tag,
/// an empty page list and references to ids that occur on no page.
pub fn parse_movie(text: &str) -> Result<MoviePresentation, FormatError> {
    const WHAT: &str = "movie";
    let movie: MoviePresentation = serde_json::from_str(text).map_err(|e| FormatError::json(WHAT, e))?;
    if movie.format != MOVIE_FORMAT {
        return Err(FormatError::Tag {
            what: WHAT,
            expected: MOVIE_FORMAT,
            found: movie.format,
        });
    }
    if movie.pages.is_empty() {
        return Err(FormatError::field(WHAT, "pages", "at least one page is required"));
    }
    let elliptics: BTreeSet<&str> = movie
        .pages
        .iter()
        .flat_map(|p| p.elliptics.iter().map(|e| e.id.as_str()))
        .collect();
    let arcs: BTreeSet<&str> = movie.pages.iter().flat_map(|p| p.arcs().into_keys()).collect();
    let braids: BTreeSet<&str> = movie.pages.iter().flat_map(|p| p.braid_points()).collect();
    let check = |set: &BTreeSet<&str>, id: &str, field: String| -> Result<(), FormatError> {
        if set.contains(id) {
            Ok(())
        } else {
            Err(FormatError::field(WHAT, field, format!("unknown id `{id}`")))
        }
    };
    for (i, p) in movie.pages.iter().enumerate() {
        for (j, a) in p.a_arcs.iter().enumerate() {
            check(&elliptics, &a.elliptic, format!("pages[{i}].a_arcs[{j}].elliptic"))?;
        }
        for (j, b) in p.b_arcs.iter().enumerate() {
            check(&elliptics, &b.pos, format!("pages[{i}].b_arcs[{j}].pos"))?;
            check(&elliptics, &b.neg, format!("pages[{i}].b_arcs[{j}].neg"))?;
        }
    }
    for (i, e) in movie.events.iter().enumerate() {
        for (j, id) in e.merged.iter().enumerate() {
            check(&arcs, id, format!("events[{i}].merged[{j}]"))?;
        }
        for (j, id) in e.produced.iter().enumerate() {
            check(&arcs, id, format!("events[{i}].produced[{j}]"))?;
        }
        for (j, id) in e.incident_elliptics.iter().flatten().enumerate() {
            check(&elliptics, id, format!("events[{i}].incident_elliptics[{j}]"))?;
        }
    }
    let cm = &movie.closure_map;
    for (set, map, name) in [
        (&elliptics, &cm.elliptics, "elliptics"),
        (&arcs, &cm.arcs, "arcs"),
        (&braids, &cm.braid_points, "braid_points"),
    ] {
        for (k, v) in map {
            check(set, k, format!("closure_map.{name}"))?;
            check(set, v, format!("closure_map.{name}"))?;
        }
    }
    Ok(movie)
}

impl MoviePresentation {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("movie serializes")
    }
}

/// Every structural problem of the movie; empty means valid.
pub fn validate_movie(movie: &MoviePresentation) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut diag = |loc: String, msg: String| out.push(Diagnostic::new(loc, msg));
    let pages = &movie.pages;
    if pages.len() < 2 {
        diag("pages".into(), "a movie needs a first and a last page".into());
        return out;
    }

    // parameter values
    if pages[0].t != 0.0 || pages[pages.len() - 1].t != 1.0 {
        diag("pages".into(), "page parameters must start at 0 and end at 1".into());
    }
    for i in 1..pages.len() {
        if pages[i].t.is_nan() || pages[i].t <= pages[i - 1].t {
            diag(format!("pages[{i}].t"), "page parameters must increase strictly".into());
        }
    }

    // page invariants
    let reference = pages[0].elliptic_set();
    for (i, p) in pages.iter().enumerate() {
        let loc = |what: &str| format!("pages[{i}].{what}");
        let mut ids = BTreeSet::new();
        for e in &p.elliptics {
            if !ids.insert(e.id.as_str()) {
                diag(loc("elliptics"), format!("duplicate elliptic id `{}`", e.id));
            }
        }
        if p.elliptic_set() != reference {
            diag(loc("elliptics"), "elliptic points differ from the first page".into());
        }
        let mut arc_ids = BTreeSet::new();
        let mut touched = BTreeSet::new();
        for a in &p.a_arcs {
            if !arc_ids.insert(a.id.as_str()) {
                diag(loc("a_arcs"), format!("duplicate arc id `{}`", a.id));
            }
            if p.sign_of(&a.elliptic).is_none() {
                diag(
                    loc("a_arcs"),
                    format!("a-arc `{}` starts at a point not on this page", a.id),
                );
            }
            touched.insert(a.elliptic.as_str());
        }
        for b in &p.b_arcs {
            if !arc_ids.insert(b.id.as_str()) {
                diag(loc("b_arcs"), format!("duplicate arc id `{}`", b.id));
            }
            if p.sign_of(&b.pos) != Some(Sign::Plus) {
                diag(
                    loc("b_arcs"),
                    format!("b-arc `{}` must start at a positive elliptic point", b.id),
                );
            }
            if p.sign_of(&b.neg) != Some(Sign::Minus) {
                diag(
                    loc("b_arcs"),
                    format!("b-arc `{}` must end at a negative elliptic point", b.id),
                );
            }
            touched.insert(b.pos.as_str());
            touched.insert(b.neg.as_str());
        }
        for e in &p.elliptics {
            if !touched.contains(e.id.as_str()) {
                diag(loc("elliptics"), format!("elliptic point `{}` meets no arc", e.id));
            }
        }
    }

    // events
    let mut gap_event: Vec<Option<usize>> = vec![None; pages.len() - 1];
    for (n, e) in movie.events.iter().enumerate() {
        let loc = format!("events[{n}]");
        if n > 0 && e.t <= movie.events[n - 1].t {
            diag(loc.clone(), "events must be listed in increasing time".into());
        }
        match (0..pages.len() - 1).find(|&i| pages[i].t < e.t && e.t < pages[i + 1].t) {
            None => diag(loc, "event time lies on no gap between pages".into()),
            Some(i) if gap_event[i].is_some() => diag(loc, format!("second event between pages {i} and {}", i + 1)),
            Some(i) => gap_event[i] = Some(n),
        }
    }
    for (i, ev) in gap_event.iter().enumerate() {
        let (before, after) = (&pages[i], &pages[i + 1]);
        let loc = format!("pages[{}]", i + 1);
        let Some(n) = *ev else {
            if before.arcs() != after.arcs() {
                diag(
                    loc,
                    format!("configuration changes between pages {i} and {} without an event", i + 1),
                );
            }
            continue;
        };
        let e = &movie.events[n];
        let eloc = format!("events[{n}]");
        let (ba, aa) = (before.arcs(), after.arcs());
        let mut ok = true;
        for id in &e.merged {
            if !ba.contains_key(id.as_str()) {
                diag(eloc.clone(), format!("merged arc `{id}` is not on page {i}"));
                ok = false;
            }
        }
        for id in &e.produced {
            if !aa.contains_key(id.as_str()) {
                diag(eloc.clone(), format!("produced arc `{id}` is not on page {}", i + 1));
                ok = false;
            }
        }
        if e.merged[0] == e.merged[1] || e.produced[0] == e.produced[1] {
            diag(
                eloc.clone(),
                "a saddle merges two distinct arcs into two distinct arcs".into(),
            );
            ok = false;
        }
        if !ok {
            continue;
        }
        let mut rest_before = ba.clone();
        let mut rest_after = aa.clone();
        let m: Vec<ArcShape> = e
            .merged
            .iter()
            .map(|id| rest_before.remove(id.as_str()).unwrap())
            .collect();
        let p: Vec<ArcShape> = e
            .produced
            .iter()
            .map(|id| rest_after.remove(id.as_str()).unwrap())
            .collect();
        if rest_before != rest_after {
            diag(loc, format!("arcs other than the reconnected pair change at event {n}"));
        }
        let ends = |v: &[ArcShape]| -> Vec<String> {
            let mut x: Vec<String> = v.iter().flat_map(|a| a.endpoints().map(String::from)).collect();
            x.sort();
            x
        };
        if ends(&m) != ends(&p) {
            diag(eloc.clone(), "reconnection must keep the four arc endpoints".into());
        }
        let mut ms = m.clone();
        ms.sort();
        let mut ps = p.clone();
        ps.sort();
        if ms == ps {
            diag(eloc.clone(), "reconnection leaves the arcs unchanged".into());
        }
        if let Some(inc) = &e.incident_elliptics {
            let merged_ends: BTreeSet<String> = ends(&m).into_iter().collect();
            let uniq: BTreeSet<&String> = inc.iter().collect();
            if uniq.len() != inc.len() || inc.len() > 4 {
                diag(
                    eloc.clone(),
                    "incident elliptic points must be at most four distinct ids".into(),
                );
            }
            for id in inc {
                if !merged_ends.contains(id) {
                    diag(
                        eloc.clone(),
                        format!("incident elliptic `{id}` is not an endpoint of the merged arcs"),
                    );
                }
            }
        }
    }

    // closure
    let (last, first) = (&pages[pages.len() - 1], &pages[0]);
    let cm = &movie.closure_map;
    let bijection = |map: &BTreeMap<String, String>, dom: BTreeSet<&str>, cod: BTreeSet<&str>| {
        let keys: BTreeSet<&str> = map.keys().map(String::as_str).collect();
        let vals: BTreeSet<&str> = map.values().map(String::as_str).collect();
        keys == dom && vals == cod && vals.len() == map.len()
    };
    if !bijection(&cm.elliptics, last.elliptic_ids(), first.elliptic_ids()) {
        diag(
            "closure_map.elliptics".into(),
            "not a bijection from the last page onto the first".into(),
        );
    }
    let arcs_last = last.arcs();
    let arcs_first = first.arcs();
    if !bijection(
        &cm.arcs,
        arcs_last.keys().copied().collect(),
        arcs_first.keys().copied().collect(),
    ) {
        diag(
            "closure_map.arcs".into(),
            "not a bijection from the last page onto the first".into(),
        );
    }
    if !bijection(&cm.braid_points, last.braid_points(), first.braid_points()) {
        diag(
            "closure_map.braid_points".into(),
            "not a bijection from the last page onto the first".into(),
        );
    }
    for e in &last.elliptics {
        if let Some(img) = cm.elliptics.get(&e.id) {
            match first.elliptics.iter().find(|f| &f.id == img) {
                Some(f) if f.sign == e.sign && f.binding == e.binding => {}
                _ => diag(
                    "closure_map.elliptics".into(),
                    format!("`{}` must map to a point of the same sign on the same binding", e.id),
                ),
            }
        }
    }
    let map = |m: &BTreeMap<String, String>, id: &str| m.get(id).cloned().unwrap_or_else(|| id.to_string());
    for (id, shape) in &arcs_last {
        let image = match shape {
            ArcShape::A { elliptic, braid } => ArcShape::A {
                elliptic: map(&cm.elliptics, elliptic),
                braid: map(&cm.braid_points, braid),
            },
            ArcShape::B { pos, neg } => ArcShape::B {
                pos: map(&cm.elliptics, pos),
                neg: map(&cm.elliptics, neg),
            },
        };
        let target = cm.arcs.get(*id).and_then(|t| arcs_first.get(t.as_str()));
        if target != Some(&image) {
            diag(
                "closure_map.arcs".into(),
                format!("image of arc `{id}` does not match the first page"),
            );
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SingularityCensus {
    pub e_plus: u32,
    pub e_minus: u32,
    pub h_plus: u32,
    pub h_minus: u32,
}

impl SingularityCensus {
    pub fn new(e_plus: u32, e_minus: u32, h_plus: u32, h_minus: u32) -> Self {
        SingularityCensus {
            e_plus,
            e_minus,
            h_plus,
            h_minus,
        }
    }
}

fn require_valid(movie: &MoviePresentation) -> Result<(), FoliationError> {
    let d = validate_movie(movie);
    if d.is_empty() {
        Ok(())
    } else {
        Err(FoliationError::Invalid {
            diagnostics: d.iter().map(ToString::to_string).collect(),
        })
    }
}

pub fn singularity_census(movie: &MoviePresentation) -> Result<SingularityCensus, FoliationError> {
    require_valid(movie)?;
    let count = |s: Sign| movie.pages[0].elliptics.iter().filter(|e| e.sign == s).count() as u32;
    let events = |s: Sign| movie.events.iter().filter(|e| e.sign == s).count() as u32;
    Ok(SingularityCensus::new(
        count(Sign::Plus),
        count(Sign::Minus),
        events(Sign::Plus),
        events(Sign::Minus),
    ))
}

/// `(e₊ + e₋) − (h₊ + h₋)`.
pub fn euler_characteristic(c: &SingularityCensus) -> i64 {
    i64::from(c.e_plus) + i64::from(c.e_minus) - i64::from(c.h_plus) - i64::from(c.h_minus)
}

/// `−(e₊ − e₋) + (h₊ − h₋)`.
pub fn self_linking(c: &SingularityCensus) -> i64 {
    -(i64::from(c.e_plus) - i64::from(c.e_minus)) + (i64::from(c.h_plus) - i64::from(c.h_minus))
}

/// Elliptic points of one sign joined through saddles of the same sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirouxGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    /// Events whose same-sign incident points do not form one edge.
    pub dangling: Vec<usize>,
}

impl GirouxGraph {
    fn degree(&self, v: &str) -> usize {
        self.edges
            .iter()
            .map(|(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let Some(first) = self.vertices.first() else {
            return false;
        };
        let mut seen = BTreeSet::from([first.as_str()]);
        let mut stack = vec![first.as_str()];
        while let Some(v) = stack.pop() {
            for (a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && seen.insert(y.as_str()) {
                        stack.push(y.as_str());
                    }
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.dangling.is_empty() && self.edges.len() + 1 == self.vertices.len() && self.is_connected()
    }

    /// One embedded circle through every vertex (parallel edges allowed for
    /// two vertices, a loop for one).
    pub fn is_single_cycle(&self) -> bool {
        self.dangling.is_empty()
            && self.edges.len() == self.vertices.len()
            && self.is_connected()
            && self.vertices.iter().all(|v| self.degree(v) == 2)
    }
}

/// `(G_++, G_−−)`.
pub fn giroux_graphs(movie: &MoviePresentation) -> Result<(GirouxGraph, GirouxGraph), FoliationError> {
    let graph = |sign: Sign| -> Result<GirouxGraph, FoliationError> {
        let page = &movie.pages[0];
        let mut g = GirouxGraph {
            vertices: page
                .elliptics
                .iter()
                .filter(|e| e.sign == sign)
                .map(|e| e.id.clone())
                .collect(),
            edges: Vec::new(),
            dangling: Vec::new(),
        };
        for (n, e) in movie.events.iter().enumerate() {
            let inc = e
                .incident_elliptics
                .as_ref()
                .ok_or(FoliationError::MissingIncidence { event: n })?;
            if e.sign != sign {
                continue;
            }
            let same: Vec<&String> = inc.iter().filter(|id| page.sign_of(id) == Some(sign)).collect();
            match same.as_slice() {
                [a, b] => g.edges.push(((*a).clone(), (*b).clone())),
                _ => g.dangling.push(n),
            }
        }
        Ok(g)
    };
    Ok((graph(Sign::Plus)?, graph(Sign::Minus)?))
}

pub const OT_DISK_LEVEL: &str = "necessary-conditions";

/// A movie meeting the stated necessary conditions for a transverse
/// overtwisted disk. Only [`recognize_ot_disk`] builds one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OTDiskMovieCert {
    movie: String,
    census: SingularityCensus,
    e_minus: u32,
    level: &'static str,
}

impl OTDiskMovieCert {
    pub fn movie(&self) -> &str {
        &self.movie
    }

    pub fn census(&self) -> SingularityCensus {
        self.census
    }

    /// Upper bound for the overtwisted complexity.
    pub fn e_minus(&self) -> u32 {
        self.e_minus
    }

    pub fn level(&self) -> &'static str {
        self.level
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub reasons: Vec<String>,
}

pub fn recognize_ot_disk(movie: &MoviePresentation) -> Result<OTDiskMovieCert, Rejection> {
    let census = singularity_census(movie).map_err(|e| Rejection {
        reasons: match e {
            FoliationError::Invalid { diagnostics } => diagnostics,
            other => vec![other.to_string()],
        },
    })?;
    let mut reasons = Vec::new();
    let chi = euler_characteristic(&census);
    if chi != 1 {
        reasons.push(format!("euler characteristic is {chi}, not 1"));
    }
    let sl = self_linking(&census);
    if sl != 1 {
        reasons.push(format!("self-linking number is {sl}, not 1"));
    }
    match giroux_graphs(movie) {
        Err(e) => reasons.push(e.to_string()),
        Ok((gpp, gmm)) => {
            if !gmm.is_tree() {
                reasons.push("G_-- is not a tree on all negative elliptic points".into());
            }
            if !gpp.is_single_cycle() {
                reasons.push("G_++ is not a single cycle".into());
            }
        }
    }
    if !reasons.is_empty() {
        return Err(Rejection { reasons });
    }
    Ok(OTDiskMovieCert {
        movie: movie.name.clone(),
        census,
        e_minus: census.e_minus,
        level: OT_DISK_LEVEL,
    })
}

/// Renames every elliptic, arc and braid point id through `f`, which must
/// be injective on each kind.
pub fn relabel(movie: &MoviePresentation, f: &dyn Fn(&str) -> String) -> MoviePresentation {
    let mut m = movie.clone();
    for p in &mut m.pages {
        for e in &mut p.elliptics {
            e.id = f(&e.id);
        }
        for a in &mut p.a_arcs {
            a.id = f(&a.id);
            a.elliptic = f(&a.elliptic);
            a.braid = f(&a.braid);
        }
        for b in &mut p.b_arcs {
            b.id = f(&b.id);
            b.pos = f(&b.pos);
            b.neg = f(&b.neg);
        }
    }
    for e in &mut m.events {
        e.merged = e.merged.clone().map(|x| f(&x));
        e.produced = e.produced.clone().map(|x| f(&x));
        if let Some(inc) = &mut e.incident_elliptics {
            for x in inc {
                *x = f(x);
            }
        }
    }
    let remap = |map: &BTreeMap<String, String>| map.iter().map(|(k, v)| (f(k), f(v))).collect();
    m.closure_map = ClosureMap {
        elliptics: remap(&movie.closure_map.elliptics),
        arcs: remap(&movie.closure_map.arcs),
        braid_points: remap(&movie.closure_map.braid_points),
    };
    m
}

/// The same movie started one page later: the old first gap is moved to
/// the end, transported through the inverse closure map. Parameters are
/// respaced evenly.
pub fn rotate_once(movie: &MoviePresentation) -> MoviePresentation {
    let cm = &movie.closure_map;
    let m = movie.pages.len() - 1;
    if m == 0 {
        return movie.clone();
    }
    let invert = |map: &BTreeMap<String, String>| -> BTreeMap<String, String> {
        map.iter().map(|(k, v)| (v.clone(), k.clone())).collect()
    };
    let (inv_e, inv_b, inv_a) = (invert(&cm.elliptics), invert(&cm.braid_points), invert(&cm.arcs));
    let last = &movie.pages[m];
    let mut used: BTreeSet<String> = last.arcs().keys().map(|s| s.to_string()).collect();
    // arc ids of page 1 in the namespace of the new last page
    let mut rho: BTreeMap<String, String> = BTreeMap::new();
    for id in movie.pages[1].arcs().keys() {
        let image = match inv_a.get(*id) {
            Some(x) if movie.pages[0].arcs().contains_key(*id) => x.clone(),
            _ => {
                let mut fresh = format!("{id}^");
                while used.contains(&fresh) {
                    fresh.push('^');
                }
                fresh
            }
        };
        used.insert(image.clone());
        rho.insert(id.to_string(), image);
    }
    let look = |map: &BTreeMap<String, String>, id: &str| map.get(id).cloned().unwrap_or_else(|| id.to_string());
    let src = &movie.pages[1];
    let tail = PageConfig {
        t: 1.0,
        elliptics: src
            .elliptics
            .iter()
            .map(|e| {
                let id = look(&inv_e, &e.id);
                let orig = movie.pages[0].elliptics.iter().find(|x| x.id == id);
                Elliptic {
                    id,
                    sign: orig.map_or(e.sign, |o| o.sign),
                    binding: orig.map_or(e.binding.clone(), |o| o.binding.clone()),
                }
            })
            .collect(),
        a_arcs: src
            .a_arcs
            .iter()
            .map(|a| AArc {
                id: rho[&a.id].clone(),
                elliptic: look(&inv_e, &a.elliptic),
                braid: look(&inv_b, &a.braid),
            })
            .collect(),
        b_arcs: src
            .b_arcs
            .iter()
            .map(|b| BArc {
                id: rho[&b.id].clone(),
                pos: look(&inv_e, &b.pos),
                neg: look(&inv_e, &b.neg),
            })
            .collect(),
    };
    let mut pages: Vec<PageConfig> = movie.pages[1..].to_vec();
    pages.push(tail);
    for (i, p) in pages.iter_mut().enumerate() {
        p.t = i as f64 / m as f64;
    }
    let (t0, t1) = (movie.pages[0].t, movie.pages[1].t);
    let mut events = Vec::new();
    let mut moved = Vec::new();
    for e in &movie.events {
        let gap = (0..m)
            .find(|&i| movie.pages[i].t < e.t && e.t < movie.pages[i + 1].t)
            .unwrap_or(0);
        let mut e2 = e.clone();
        e2.t = ((gap + m - 1) % m) as f64 / m as f64 + 0.5 / m as f64;
        if t0 < e.t && e.t < t1 {
            e2.merged = e.merged.clone().map(|x| look(&inv_a, &x));
            e2.produced = e.produced.clone().map(|x| rho.get(&x).cloned().unwrap_or(x));
            if let Some(inc) = &mut e2.incident_elliptics {
                for x in inc {
                    *x = look(&inv_e, x);
                }
            }
            moved.push(e2);
        } else {
            events.push(e2);
        }
    }
    events.extend(moved);
    let closure = ClosureMap {
        elliptics: cm.elliptics.clone(),
        braid_points: cm.braid_points.clone(),
        arcs: rho.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
    };
    MoviePresentation {
        format: movie.format.clone(),
        name: movie.name.clone(),
        surface: movie.surface.clone(),
        pages,
        events,
        closure_map: closure,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn nonrv_movie() -> MoviePresentation {
        let text = r#"{
          "format": "obk-movie/1", "name": "t", "surface": "s",
          "pages": [
            {"t": 0, "elliptics": [{"id":"P1","sign":"+","binding":"B"},{"id":"P2","sign":"+","binding":"B"},{"id":"N1","sign":"-","binding":"B"}],
             "a_arcs": [{"id":"a1","elliptic":"P2","braid":"o1"}], "b_arcs": [{"id":"b1","pos":"P1","neg":"N1"}]},
            {"t": 0.5, "elliptics": [{"id":"P1","sign":"+","binding":"B"},{"id":"P2","sign":"+","binding":"B"},{"id":"N1","sign":"-","binding":"B"}],
             "a_arcs": [{"id":"a2","elliptic":"P1","braid":"o1"}], "b_arcs": [{"id":"b2","pos":"P2","neg":"N1"}]},
            {"t": 1, "elliptics": [{"id":"P1","sign":"+","binding":"B"},{"id":"P2","sign":"+","binding":"B"},{"id":"N1","sign":"-","binding":"B"}],
             "a_arcs": [{"id":"a3","elliptic":"P2","braid":"o1"}], "b_arcs": [{"id":"b3","pos":"P1","neg":"N1"}]}
          ],
          "events": [
            {"t": 0.25, "sign": "+", "merged": ["a1","b1"], "produced": ["a2","b2"], "incident_elliptics": ["P1","P2","N1"]},
            {"t": 0.75, "sign": "+", "merged": ["a2","b2"], "produced": ["a3","b3"], "incident_elliptics": ["P1","P2","N1"]}
          ],
          "closure_map": {"elliptics": {"P1":"P1","P2":"P2","N1":"N1"}, "arcs": {"a3":"a1","b3":"b1"}, "braid_points": {"o1":"o1"}}
        }"#;
        parse_movie(text).unwrap()
    }

    #[test]
    fn small_movie_is_an_ot_disk_with_one_negative_point() {
        let m = nonrv_movie();
        assert_eq!(validate_movie(&m), vec![]);
        let c = singularity_census(&m).unwrap();
        assert_eq!(c, SingularityCensus::new(2, 1, 2, 0));
        assert_eq!((euler_characteristic(&c), self_linking(&c)), (1, 1));
        let (gpp, gmm) = giroux_graphs(&m).unwrap();
        assert!(gpp.is_single_cycle());
        assert!(gmm.is_tree());
        assert_eq!(recognize_ot_disk(&m).unwrap().e_minus(), 1);
    }

    #[test]
    fn formulas() {
        let c = SingularityCensus::new(2, 2, 2, 2);
        assert_eq!(euler_characteristic(&c), 0);
        assert_eq!(self_linking(&SingularityCensus::new(2, 1, 3, 1)), 1);
        assert_eq!(self_linking(&SingularityCensus::new(1, 0, 0, 0)), -1);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_movie("{").is_err());
        let m = nonrv_movie();
        let mut bad = m.clone();
        bad.pages.clear();
        assert!(parse_movie(&bad.to_json()).is_err());
        let mut bad = m.clone();
        bad.events[0].merged[0] = "zz".into();
        assert!(matches!(parse_movie(&bad.to_json()), Err(FormatError::Field { .. })));
        let mut bad = m;
        bad.format = "obk-movie/2".into();
        assert!(matches!(parse_movie(&bad.to_json()), Err(FormatError::Tag { .. })));
    }

    #[test]
    fn rotation_and_relabeling_keep_validity() {
        let m = nonrv_movie();
        let r = rotate_once(&m);
        assert_eq!(validate_movie(&r), vec![]);
        assert_eq!(singularity_census(&r).unwrap(), singularity_census(&m).unwrap());
        let l = relabel(&m, &|s| format!("x_{s}"));
        assert_eq!(validate_movie(&l), vec![]);
    }

    #[test]
    fn validation_catches_breakage() {
        let m = nonrv_movie();
        let mut bad = m.clone();
        bad.events.remove(1);
        assert!(!validate_movie(&bad).is_empty());
        let mut bad = m.clone();
        bad.closure_map.arcs = BTreeMap::from([("a3".into(), "b1".into()), ("b3".into(), "a1".into())]);
        assert!(!validate_movie(&bad).is_empty());
        let mut bad = m;
        bad.pages.truncate(2);
        bad.pages[1].t = 1.0;
        bad.events.truncate(1);
        assert!(!validate_movie(&bad).is_empty());
    }
}
