//! Compact oriented surfaces with boundary as one-vertex ribbon graphs.
//!
//! The standard model of `S_{g,r}` has free generators
//! `a1, b1, …, ag, bg, d1, …, d(r-1)`, boundary words `∂_i = d_i` for
//! `i < r` and `∂_r = ([a1,b1]⋯[ag,bg]·d1⋯d(r-1))^-1`, and intersection
//! pairing `⟨a_i, b_i⟩ = +1` with every other basic pairing zero. The same
//! orientation convention is used by transvections and cover lifting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{SurfaceError, WordError};
use crate::linalg::IntMatrix;
use crate::mcg::{transvection, CurveSystem};
use crate::ribbon::{HalfEdge, RibbonGraph};
use crate::words::{FramedMap, FreeMap, Letter, Word};

/// Largest genus and boundary count accepted by [`make_surface`].
pub const MAX_GENUS: usize = 64;
pub const MAX_BOUNDARY: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// Parallel to the boundary component with this index.
    BoundaryParallel(usize),
    Interior,
}

/// A simple closed curve, given as declared data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    /// Representative of the free homotopy class.
    pub word: Word,
    pub kind: CurveKind,
    pub homology: Vec<i64>,
    /// Action of the positive Dehn twist on the fundamental group.
    pub automorphism: Option<FreeMap>,
    /// Action of the negative Dehn twist.
    pub inverse_automorphism: Option<FreeMap>,
    /// Arc words of the positive twist, one per hole (see [`FramedMap`]).
    /// Needed to tell twists along boundary components apart.
    pub arcs: Option<Vec<Word>>,
    pub inverse_arcs: Option<Vec<Word>>,
    /// For an interior curve cutting off a pair of pants with two boundary
    /// parallel curves: their names.
    pub pants: Option<(String, String)>,
}

impl Curve {
    /// Curve whose homology is the abelianization of `word`.
    pub fn from_word(surface: &Surface, name: impl Into<String>, word: Word, kind: CurveKind) -> Curve {
        let homology = word.abelianize(surface.rank());
        Curve {
            name: name.into(),
            word: word.cyclically_reduced(),
            kind,
            homology,
            automorphism: None,
            inverse_automorphism: None,
            arcs: None,
            inverse_arcs: None,
            pants: None,
        }
    }
}

/// One located problem found by a validator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// A homomorphism `H_1(S; Z) → Z/k`, stored as its residues on the free
/// generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelativeClass {
    pub modulus: u32,
    pub values: Vec<u32>,
}

impl RelativeClass {
    pub fn new(modulus: u32, values: Vec<i64>) -> Self {
        let k = i64::from(modulus.max(1));
        RelativeClass {
            modulus,
            values: values.into_iter().map(|v| v.rem_euclid(k) as u32).collect(),
        }
    }

    /// Value on an integral homology class.
    pub fn evaluate(&self, class: &[i64]) -> u32 {
        let k = i64::from(self.modulus.max(1));
        let s: i64 = class
            .iter()
            .zip(&self.values)
            .map(|(c, v)| (c.rem_euclid(k) * i64::from(*v)) % k)
            .sum();
        s.rem_euclid(k) as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    name: String,
    genus: usize,
    boundary_count: usize,
    generators: Vec<String>,
    boundary_words: Vec<Word>,
    intersection: IntMatrix,
    ribbon: RibbonGraph,
    curves: Vec<Curve>,
    curve_index: BTreeMap<String, usize>,
}

/// Standard model of `S_{genus, boundary_count}`.
pub fn make_surface(genus: usize, boundary_count: usize) -> Result<Surface, SurfaceError> {
    if boundary_count == 0 {
        return Err(SurfaceError::NoBoundary);
    }
    if genus > MAX_GENUS || boundary_count > MAX_BOUNDARY {
        return Err(SurfaceError::TooLarge { genus, boundary_count });
    }
    let n = 2 * genus + boundary_count - 1;
    let mut generators = Vec::with_capacity(n);
    for i in 1..=genus {
        generators.push(format!("a{i}"));
        generators.push(format!("b{i}"));
    }
    for i in 1..boundary_count {
        generators.push(format!("d{i}"));
    }

    let mut big_face = Vec::new();
    for i in 0..genus {
        let a = Letter::new(2 * i);
        let b = Letter::new(2 * i + 1);
        big_face.extend([a, b, a.inv(), b.inv()]);
    }
    let d = |i: usize| 2 * genus + i;
    big_face.extend((0..boundary_count - 1).map(|i| Letter::new(d(i))));
    let big_face = Word::from_letters(big_face);

    let mut boundary_words: Vec<Word> = (0..boundary_count - 1).map(|i| Word::generator(d(i))).collect();
    boundary_words.push(big_face.inverse());

    let mut intersection = IntMatrix::zeros(n, n);
    for i in 0..genus {
        intersection[(2 * i, 2 * i + 1)] = 1;
        intersection[(2 * i + 1, 2 * i)] = -1;
    }

    let ribbon = standard_ribbon(n, &big_face, (0..boundary_count - 1).map(d));

    Ok(Surface {
        name: format!("S_{genus},{boundary_count}"),
        genus,
        boundary_count,
        generators,
        boundary_words,
        intersection,
        ribbon,
        curves: Vec::new(),
        curve_index: BTreeMap::new(),
    })
}

/// Rotation at the single vertex chosen so that the faces are traced as the
/// big face `W` and the words `d_i^-1`.
fn standard_ribbon(n: usize, big_face: &Word, holes: impl Iterator<Item = usize>) -> RibbonGraph {
    let arrive = |l: Letter| {
        if l.inverse {
            HalfEdge::tail(l.gen)
        } else {
            HalfEdge::head(l.gen)
        }
    };
    let depart = |l: Letter| {
        if l.inverse {
            HalfEdge::head(l.gen)
        } else {
            HalfEdge::tail(l.gen)
        }
    };
    let mut next: BTreeMap<HalfEdge, HalfEdge> = BTreeMap::new();
    let w = big_face.letters();
    for i in 0..w.len() {
        next.insert(arrive(w[i]), depart(w[(i + 1) % w.len()]));
    }
    for h in holes {
        next.insert(HalfEdge::tail(h), HalfEdge::head(h));
    }
    let mut rotation = Vec::with_capacity(2 * n);
    if let Some((&start, _)) = next.iter().next() {
        let mut h = start;
        loop {
            rotation.push(h);
            h = next[&h];
            if h == start {
                break;
            }
        }
    }
    RibbonGraph::new(1, vec![(0, 0); n], vec![rotation])
}

impl Surface {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }

    /// Number of free generators, `2g + r - 1`.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Boundary components other than the one carrying the base point.
    pub fn hole_count(&self) -> usize {
        self.boundary_count - 1
    }

    /// Index of the first hole generator `d1`.
    pub fn hole_offset(&self) -> usize {
        2 * self.genus
    }

    /// The framed action of the positive (or negative) twist along `curve`,
    /// when declared.
    pub fn framed_twist(&self, curve: &Curve, positive: bool) -> Option<Result<FramedMap, WordError>> {
        let (map, arcs) = if positive {
            (curve.automorphism.as_ref()?, curve.arcs.as_ref())
        } else {
            (curve.inverse_automorphism.as_ref()?, curve.inverse_arcs.as_ref())
        };
        let arcs = match arcs {
            Some(a) => a.clone(),
            None if self.hole_count() == 0 => Vec::new(),
            None => return None,
        };
        Some(FramedMap::new(map.clone(), arcs, self.hole_offset()))
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn boundary_words(&self) -> &[Word] {
        &self.boundary_words
    }

    pub fn boundary_class(&self, i: usize) -> Vec<i64> {
        self.boundary_words[i].abelianize(self.rank())
    }

    pub fn intersection_matrix(&self) -> &IntMatrix {
        &self.intersection
    }

    pub fn ribbon(&self) -> &RibbonGraph {
        &self.ribbon
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve(&self, name: &str) -> Option<&Curve> {
        self.curve_index.get(name).map(|&i| &self.curves[i])
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, SurfaceError> {
        Ok(Word::parse(text, &self.generators)?)
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    /// Exponent-sum vector of a word given as text.
    pub fn homology_class(&self, text: &str) -> Result<Vec<i64>, SurfaceError> {
        Ok(self.parse_word(text)?.abelianize(self.rank()))
    }

    /// `xᵀ·M·y` for the intersection matrix `M`.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> Result<i64, SurfaceError> {
        let n = self.rank();
        for v in [x, y] {
            if v.len() != n {
                return Err(SurfaceError::LengthMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        Ok(self.intersection.bilinear(x, y))
    }

    /// Adds a declared curve. Invariants are not enforced here; run
    /// [`validate_curve`] for a diagnostic pass.
    pub fn add_curve(&mut self, curve: Curve) -> Result<(), SurfaceError> {
        if self.curve_index.contains_key(&curve.name) {
            return Err(SurfaceError::DuplicateCurve { name: curve.name });
        }
        if let CurveKind::BoundaryParallel(i) = curve.kind {
            if i >= self.boundary_count {
                return Err(SurfaceError::BadBoundaryIndex {
                    index: i,
                    count: self.boundary_count,
                });
            }
        }
        if curve.homology.len() != self.rank() {
            return Err(SurfaceError::LengthMismatch {
                expected: self.rank(),
                found: curve.homology.len(),
            });
        }
        for map in [&curve.automorphism, &curve.inverse_automorphism].into_iter().flatten() {
            if map.rank() != self.rank() {
                return Err(SurfaceError::LengthMismatch {
                    expected: self.rank(),
                    found: map.rank(),
                });
            }
        }
        for arcs in [&curve.arcs, &curve.inverse_arcs].into_iter().flatten() {
            if arcs.len() != self.hole_count() {
                return Err(SurfaceError::LengthMismatch {
                    expected: self.hole_count(),
                    found: arcs.len(),
                });
            }
        }
        self.curve_index.insert(curve.name.clone(), self.curves.len());
        self.curves.push(curve);
        Ok(())
    }

    /// Runs [`validate_curve`] on every declared curve.
    pub fn validate(&self) -> Vec<Diagnostic> {
        self.curves.iter().flat_map(|c| validate_curve(self, c)).collect()
    }
}

impl CurveSystem for Surface {
    fn rank(&self) -> usize {
        self.generators.len()
    }

    fn intersection(&self) -> &IntMatrix {
        &self.intersection
    }

    fn curve_class(&self, name: &str) -> Option<&[i64]> {
        self.curve(name).map(|c| c.homology.as_slice())
    }
}

/// Checks every curve invariant, returning one diagnostic per failure.
pub fn validate_curve(surface: &Surface, curve: &Curve) -> Vec<Diagnostic> {
    let loc = |what: &str| format!("curve `{}`: {what}", curve.name);
    let mut out = Vec::new();
    let n = surface.rank();

    if let Some(g) = curve.word.max_generator() {
        if g >= n {
            out.push(Diagnostic::new(
                loc("word"),
                format!("generator index {g} out of range"),
            ));
            return out;
        }
    }
    if curve.word.cyclically_reduced() != curve.word {
        out.push(Diagnostic::new(loc("word"), "word is not cyclically reduced"));
    }
    if curve.homology != curve.word.abelianize(n) {
        out.push(Diagnostic::new(
            loc("homology"),
            format!(
                "homology mismatch: declared {:?}, word abelianizes to {:?}",
                curve.homology,
                curve.word.abelianize(n)
            ),
        ));
    }
    match curve.kind {
        CurveKind::BoundaryParallel(i) if i >= surface.boundary_count() => {
            out.push(Diagnostic::new(loc("kind"), format!("boundary index {i} out of range")));
        }
        CurveKind::BoundaryParallel(i) => {
            let b = surface.boundary_class(i);
            if curve.homology != b {
                out.push(Diagnostic::new(
                    loc("kind"),
                    format!("class {:?} differs from boundary {i} class {:?}", curve.homology, b),
                ));
            }
        }
        CurveKind::Interior => {}
    }

    if let Some(map) = &curve.automorphism {
        for (i, bw) in surface.boundary_words().iter().enumerate() {
            if !map.apply(bw).is_conjugate_to(bw) {
                out.push(Diagnostic::new(
                    loc("pi1_automorphism"),
                    format!("boundary word {i} not preserved up to conjugacy"),
                ));
            }
        }
        let expected = transvection(surface.intersection_matrix(), &curve.homology);
        let actual = IntMatrix::from_rows(&map.abelianization());
        if actual != expected {
            out.push(Diagnostic::new(
                loc("pi1_automorphism"),
                "abelianization differs from the transvection along the curve class",
            ));
        }
    }
    match (&curve.automorphism, &curve.inverse_automorphism) {
        (Some(f), Some(g)) => {
            if !f.compose(g).is_identity() || !g.compose(f).is_identity() {
                out.push(Diagnostic::new(
                    loc("pi1_inverse"),
                    "declared inverse does not invert the automorphism",
                ));
            }
        }
        (None, Some(_)) => out.push(Diagnostic::new(
            loc("pi1_inverse"),
            "inverse declared without the automorphism",
        )),
        _ => {}
    }
    let framed: Vec<_> = [true, false]
        .iter()
        .map(|&pos| surface.framed_twist(curve, pos))
        .collect();
    for (r, field) in framed.iter().zip(["pi1_arcs", "pi1_inverse_arcs"]) {
        if let Some(Err(e)) = r {
            out.push(Diagnostic::new(loc(field), e.to_string()));
        }
    }
    if let [Some(Ok(f)), Some(Ok(g))] = &framed[..] {
        if !f.compose(g).is_identity() || !g.compose(f).is_identity() {
            out.push(Diagnostic::new(
                loc("pi1_inverse_arcs"),
                "declared inverse arcs do not invert the twist",
            ));
        }
    }

    if let Some((x, y)) = &curve.pants {
        if curve.kind != CurveKind::Interior {
            out.push(Diagnostic::new(
                loc("pants"),
                "pants record on a boundary parallel curve",
            ));
        }
        for b in [x, y] {
            match surface.curve(b) {
                Some(c) if matches!(c.kind, CurveKind::BoundaryParallel(_)) => {}
                Some(_) => out.push(Diagnostic::new(
                    loc("pants"),
                    format!("pants leg `{b}` is not boundary parallel"),
                )),
                None => out.push(Diagnostic::new(loc("pants"), format!("unknown pants leg `{b}`"))),
            }
        }
    }
    out
}
