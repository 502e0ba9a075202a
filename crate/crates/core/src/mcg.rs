//! Dehn twist words, their action on homology and on the fundamental group,
//! relation instances, positivity search and the pants pattern.
//!
//! A word `T[c1]^e1 T[c2]^e2 ⋯ T[cm]^em` denotes the composite
//! `T_{c1}^{e1} ∘ T_{c2}^{e2} ∘ ⋯ ∘ T_{cm}^{em}`: the rightmost factor is
//! applied first. The positive twist acts on homology by the transvection
//! `x ↦ x + ⟨γ, x⟩ γ`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::McgError;
use crate::linalg::IntMatrix;
use crate::surface::{CurveKind, Surface};
use crate::words::{FramedMap, FreeMap, Word};

/// Anything carrying named curve classes in a homology lattice with an
/// intersection form: a base surface, or a cover with its lifted curves.
pub trait CurveSystem {
    fn rank(&self) -> usize;
    fn intersection(&self) -> &IntMatrix;
    fn curve_class(&self, name: &str) -> Option<&[i64]>;
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwistFactor {
    pub curve: String,
    pub exponent: i64,
}

impl TwistFactor {
    pub fn new(curve: impl Into<String>, exponent: i64) -> Self {
        TwistFactor {
            curve: curve.into(),
            exponent,
        }
    }
}

/// Bound on twist exponents accepted by the parser.
pub const MAX_TWIST_EXPONENT: i64 = 1 << 20;

/// A product of Dehn twist powers, leftmost factor applied last.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TwistWord {
    factors: Vec<TwistFactor>,
}

impl TwistWord {
    pub fn identity() -> Self {
        TwistWord::default()
    }

    /// Builds a normalized word.
    pub fn new(factors: Vec<TwistFactor>) -> Self {
        let mut w = TwistWord { factors };
        w.normalize();
        w
    }

    pub fn from_pairs(pairs: &[(&str, i64)]) -> Self {
        TwistWord::new(pairs.iter().map(|&(c, e)| TwistFactor::new(c, e)).collect())
    }

    pub fn factors(&self) -> &[TwistFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Merges adjacent factors on the same curve and drops zero exponents.
    /// Twists on distinct curves are never commuted past each other.
    fn normalize(&mut self) {
        let mut out: Vec<TwistFactor> = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            if f.exponent == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.curve == f.curve => {
                    last.exponent += f.exponent;
                    if last.exponent == 0 {
                        out.pop();
                    }
                }
                _ => out.push(f),
            }
        }
        self.factors = out;
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord::new(
            self.factors
                .iter()
                .rev()
                .map(|f| TwistFactor::new(f.curve.clone(), -f.exponent))
                .collect(),
        )
    }

    /// `self ∘ other`.
    pub fn then_apply_after(&self, other: &TwistWord) -> TwistWord {
        TwistWord::new(self.factors.iter().chain(other.factors.iter()).cloned().collect())
    }

    pub fn is_positive(&self) -> bool {
        self.factors.iter().all(|f| f.exponent > 0)
    }

    pub fn curves(&self) -> BTreeSet<&str> {
        self.factors.iter().map(|f| f.curve.as_str()).collect()
    }

    /// Fails on the first curve not declared by `system`.
    pub fn check_curves<S: CurveSystem + ?Sized>(&self, system: &S) -> Result<(), McgError> {
        match self.factors.iter().find(|f| system.curve_class(&f.curve).is_none()) {
            Some(f) => Err(McgError::UnknownCurve { name: f.curve.clone() }),
            None => Ok(()),
        }
    }

    /// Parses `T[a]^2 T[e]^-1 T[f]`. `1` and the empty string are the
    /// identity.
    pub fn parse(text: &str) -> Result<TwistWord, McgError> {
        let bytes = text.as_bytes();
        let mut i = 0;
        let mut factors = Vec::new();
        let err = |offset: usize, message: &str| McgError::Syntax {
            offset,
            message: message.to_string(),
        };
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && (bytes[*i].is_ascii_whitespace() || bytes[*i] == b'*') {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if text[i..].trim() == "1" {
            return Ok(TwistWord::identity());
        }
        while i < bytes.len() {
            if !text[i..].starts_with("T[") {
                return Err(err(i, "expected `T[`"));
            }
            i += 2;
            let close = text[i..].find(']').ok_or_else(|| err(i, "unterminated curve name"))?;
            let name = &text[i..i + close];
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '[') {
                return Err(err(i, "bad curve name"));
            }
            i += close + 1;
            let mut exponent = 1i64;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exponent = text[start..i].parse().map_err(|_| err(start, "bad exponent"))?;
                if exponent.abs() > MAX_TWIST_EXPONENT {
                    return Err(err(start, "exponent too large"));
                }
            }
            if i < bytes.len() && !(bytes[i].is_ascii_whitespace() || bytes[i] == b'*') {
                return Err(err(i, "expected whitespace between factors"));
            }
            factors.push(TwistFactor::new(name, exponent));
            skip_ws(&mut i);
        }
        let w = TwistWord::new(factors);
        if w.factors.iter().any(|f| f.exponent.abs() > MAX_TWIST_EXPONENT) {
            return Err(err(0, "merged exponent too large"));
        }
        Ok(w)
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if t.exponent == 1 {
                write!(f, "T[{}]", t.curve)?;
            } else {
                write!(f, "T[{}]^{}", t.curve, t.exponent)?;
            }
        }
        Ok(())
    }
}

impl TryFrom<String> for TwistWord {
    type Error = McgError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        TwistWord::parse(&s)
    }
}

impl From<TwistWord> for String {
    fn from(w: TwistWord) -> String {
        w.to_string()
    }
}

impl std::str::FromStr for TwistWord {
    type Err = McgError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TwistWord::parse(s)
    }
}

/// Matrix of `x ↦ x + ⟨γ, x⟩ γ`, i.e. `I + γ γᵀ M`.
pub fn transvection(intersection: &IntMatrix, class: &[i64]) -> IntMatrix {
    transvection_power(intersection, class, 1)
}

/// `τ^p = I + p γ γᵀ M`; exact because `γᵀ M γ = 0`.
fn transvection_power(intersection: &IntMatrix, class: &[i64], p: i64) -> IntMatrix {
    let n = class.len();
    let row = intersection.transpose().mul_vec(class); // γᵀ M
    let mut t = IntMatrix::identity(n);
    for i in 0..n {
        if class[i] == 0 {
            continue;
        }
        for j in 0..n {
            t[(i, j)] += p * class[i] * row[j];
        }
    }
    t
}

/// The induced map on first homology.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyAction {
    pub matrix: IntMatrix,
}

impl HomologyAction {
    pub fn identity(n: usize) -> Self {
        HomologyAction {
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMatrix::identity(self.matrix.rows())
    }

    pub fn determinant(&self) -> i128 {
        self.matrix.determinant()
    }

    /// `Aᵀ I A = I` for the intersection matrix `I`.
    pub fn preserves_form(&self, intersection: &IntMatrix) -> bool {
        &(&self.matrix.transpose() * intersection) * &self.matrix == *intersection
    }
}

pub fn twist_transvection<S: CurveSystem + ?Sized>(system: &S, curve: &str) -> Result<HomologyAction, McgError> {
    let class = system.curve_class(curve).ok_or_else(|| McgError::UnknownCurve {
        name: curve.to_string(),
    })?;
    Ok(HomologyAction {
        matrix: transvection(system.intersection(), class),
    })
}

/// Ordered product of transvection powers, leftmost factor outermost.
pub fn homology_action<S: CurveSystem + ?Sized>(system: &S, word: &TwistWord) -> Result<HomologyAction, McgError> {
    let mut m = IntMatrix::identity(system.rank());
    for f in word.factors() {
        let class = system
            .curve_class(&f.curve)
            .ok_or_else(|| McgError::UnknownCurve { name: f.curve.clone() })?;
        m = &m * &transvection_power(system.intersection(), class, f.exponent);
    }
    Ok(HomologyAction { matrix: m })
}

/// Composite automorphism of the fundamental group.
pub fn pi1_automorphism(surface: &Surface, word: &TwistWord) -> Result<FreeMap, McgError> {
    let mut total = FreeMap::identity(surface.rank());
    for f in word.factors() {
        let curve = surface
            .curve(&f.curve)
            .ok_or_else(|| McgError::UnknownCurve { name: f.curve.clone() })?;
        let map = if f.exponent > 0 {
            curve
                .automorphism
                .as_ref()
                .ok_or_else(|| McgError::NoAutomorphism { name: f.curve.clone() })?
        } else {
            if curve.automorphism.is_none() {
                return Err(McgError::NoAutomorphism { name: f.curve.clone() });
            }
            curve
                .inverse_automorphism
                .as_ref()
                .ok_or_else(|| McgError::NoInverseAutomorphism { name: f.curve.clone() })?
        };
        for _ in 0..f.exponent.unsigned_abs() {
            total = total.compose(map);
        }
    }
    Ok(total)
}

/// Image of generator `gen` under the composite, freely reduced.
pub fn pi1_apply(surface: &Surface, word: &TwistWord, gen: usize) -> Result<Word, McgError> {
    if gen >= surface.rank() {
        return Err(McgError::BadGenerator { gen });
    }
    // right to left, one generator image at a time
    let mut w = Word::generator(gen);
    for f in word.factors().iter().rev() {
        let curve = surface
            .curve(&f.curve)
            .ok_or_else(|| McgError::UnknownCurve { name: f.curve.clone() })?;
        let auto = curve
            .automorphism
            .as_ref()
            .ok_or_else(|| McgError::NoAutomorphism { name: f.curve.clone() })?;
        let map = if f.exponent > 0 {
            auto
        } else {
            curve
                .inverse_automorphism
                .as_ref()
                .ok_or_else(|| McgError::NoInverseAutomorphism { name: f.curve.clone() })?
        };
        for _ in 0..f.exponent.unsigned_abs() {
            w = map.apply(&w);
        }
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationInstance {
    pub name: String,
    pub lhs: TwistWord,
    pub rhs: TwistWord,
    pub citation: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationLevel {
    /// Composite actions agree on every generator and every boundary arc.
    Pi1Exact,
    /// Only the homology actions were compared.
    HomologyOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub level: VerificationLevel,
    pub pass: bool,
    pub warning: Option<String>,
    pub mismatches: Vec<String>,
}

/// Composite action on the fundamental groupoid, which unlike
/// [`pi1_automorphism`] also sees twists along boundary components.
pub fn pi1_framed(surface: &Surface, word: &TwistWord) -> Result<FramedMap, McgError> {
    let mut total = FramedMap::identity(surface.rank(), surface.hole_offset());
    for f in word.factors() {
        let curve = surface
            .curve(&f.curve)
            .ok_or_else(|| McgError::UnknownCurve { name: f.curve.clone() })?;
        if curve.automorphism.is_none() {
            return Err(McgError::NoAutomorphism { name: f.curve.clone() });
        }
        let map = surface
            .framed_twist(curve, f.exponent > 0)
            .ok_or_else(|| {
                if f.exponent < 0 && curve.inverse_automorphism.is_none() {
                    McgError::NoInverseAutomorphism { name: f.curve.clone() }
                } else {
                    McgError::NoArcImages { name: f.curve.clone() }
                }
            })?
            .map_err(|e| McgError::BadArcImages {
                name: f.curve.clone(),
                message: e.to_string(),
            })?;
        for _ in 0..f.exponent.unsigned_abs() {
            total = total.compose(&map);
        }
    }
    Ok(total)
}

/// Compares both sides on the fundamental groupoid when every curve
/// declares its action with arc images (level pi1-exact); otherwise compares
/// homology actions and, when available, the bare automorphisms.
pub fn verify_relation_instance(surface: &Surface, instance: &RelationInstance) -> RelationReport {
    let mut report = RelationReport {
        relation: instance.name.clone(),
        level: VerificationLevel::HomologyOnly,
        pass: false,
        warning: None,
        mismatches: Vec::new(),
    };
    for side in [&instance.lhs, &instance.rhs] {
        if let Err(e) = side.check_curves(surface) {
            report.mismatches.push(e.to_string());
            return report;
        }
    }
    let names = surface.generators();
    let exact = pi1_framed(surface, &instance.lhs).and_then(|l| pi1_framed(surface, &instance.rhs).map(|r| (l, r)));
    match exact {
        Ok((l, r)) => {
            report.level = VerificationLevel::Pi1Exact;
            for (g, name) in names.iter().enumerate() {
                if l.map().image(g) != r.map().image(g) {
                    report.mismatches.push(format!(
                        "generator {name}: {} vs {}",
                        surface.display_word(l.map().image(g)),
                        surface.display_word(r.map().image(g))
                    ));
                }
            }
            if report.mismatches.is_empty() && l != r {
                let (la, ra) = (l.arcs().unwrap_or_default(), r.arcs().unwrap_or_default());
                for j in 0..surface.hole_count() {
                    if la.get(j) != ra.get(j) {
                        let show = |a: &[Word]| a.get(j).map(|w| surface.display_word(w)).unwrap_or_default();
                        report.mismatches.push(format!(
                            "arc to {}: {} vs {}",
                            names[surface.hole_offset() + j],
                            show(&la),
                            show(&ra)
                        ));
                    }
                }
                if report.mismatches.is_empty() {
                    report.mismatches.push("arc images differ".to_string());
                }
            }
        }
        Err(e) => {
            report.warning = Some(format!(
                "fundamental groupoid action unavailable ({e}); equal homology actions are necessary but not sufficient"
            ));
            // both sides were checked against the surface above
            let l = homology_action(surface, &instance.lhs).expect("curves checked");
            let r = homology_action(surface, &instance.rhs).expect("curves checked");
            if l != r {
                report.mismatches.push("homology actions differ".to_string());
            }
            if let (Ok(l), Ok(r)) = (
                pi1_automorphism(surface, &instance.lhs),
                pi1_automorphism(surface, &instance.rhs),
            ) {
                if l != r {
                    report.mismatches.push("fundamental group actions differ".to_string());
                }
            }
        }
    }
    report.pass = report.mismatches.is_empty();
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    LhsToRhs,
    RhsToLhs,
}

/// Replaces the given side of `instance` at `position` (in the normalized
/// word) by the other side, if it occurs there.
pub fn rewrite_at(
    word: &TwistWord,
    instance: &RelationInstance,
    direction: Direction,
    position: usize,
) -> Option<TwistWord> {
    let (from, to) = match direction {
        Direction::LhsToRhs => (&instance.lhs, &instance.rhs),
        Direction::RhsToLhs => (&instance.rhs, &instance.lhs),
    };
    let f = word.factors();
    let pat = from.factors();
    if pat.is_empty() || position + pat.len() > f.len() || f[position..position + pat.len()] != *pat {
        return None;
    }
    let mut out = f[..position].to_vec();
    out.extend_from_slice(to.factors());
    out.extend_from_slice(&f[position + pat.len()..]);
    Some(TwistWord::new(out))
}

/// Rewrites an occurrence of the left side (tried first) or right side of
/// `instance` found at `position`.
pub fn rewrite_with_relation(
    word: &TwistWord,
    instance: &RelationInstance,
    position: usize,
) -> Result<TwistWord, McgError> {
    rewrite_at(word, instance, Direction::LhsToRhs, position)
        .or_else(|| rewrite_at(word, instance, Direction::RhsToLhs, position))
        .ok_or_else(|| McgError::NoOccurrence {
            relation: instance.name.clone(),
            position,
        })
}

/// Relation instances that passed verification, sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationRegistry {
    entries: Vec<(RelationInstance, VerificationLevel)>,
}

impl RelationRegistry {
    /// Verifies every instance against `surface`; failures are reported and
    /// left out.
    pub fn verified(surface: &Surface, instances: &[RelationInstance]) -> (RelationRegistry, Vec<RelationReport>) {
        let mut entries = Vec::new();
        let mut reports = Vec::new();
        for inst in instances {
            let r = verify_relation_instance(surface, inst);
            if r.pass {
                entries.push((inst.clone(), r.level));
            }
            reports.push(r);
        }
        entries.sort_by(|a, b| a.0.name.cmp(&b.0.name));
        (RelationRegistry { entries }, reports)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn instances(&self) -> impl Iterator<Item = &RelationInstance> {
        self.entries.iter().map(|(i, _)| i)
    }

    fn level(&self, name: &str) -> Option<VerificationLevel> {
        self.entries.iter().find(|(i, _)| i.name == name).map(|(_, l)| *l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub relation: String,
    pub direction: Direction,
    pub position: usize,
    pub level: VerificationLevel,
    pub result: String,
}

/// Evidence that a monodromy equals a product of positive twists. Only
/// produced by [`positivity_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveWordCert {
    original: TwistWord,
    chain: Vec<RewriteStep>,
    positive: TwistWord,
}

impl PositiveWordCert {
    pub fn original(&self) -> &TwistWord {
        &self.original
    }

    pub fn chain(&self) -> &[RewriteStep] {
        &self.chain
    }

    pub fn positive_word(&self) -> &TwistWord {
        &self.positive
    }

    /// True iff every rewrite used a relation verified at the exact level.
    pub fn is_exact(&self) -> bool {
        self.chain.iter().all(|s| s.level == VerificationLevel::Pi1Exact)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositivityOutcome {
    Found(PositiveWordCert),
    /// Nothing found within the depth; says nothing about impossibility.
    Unknown {
        explored: usize,
    },
}

pub const DEFAULT_SEARCH_DEPTH: usize = 3;
/// Cap on distinct words visited by one search.
pub const SEARCH_STATE_LIMIT: usize = 200_000;

/// Breadth-first search over relation rewrites. Successors are generated by
/// position, then relation name, then direction, so the first positive word
/// found (and its chain) is reproducible.
pub fn positivity_search(word: &TwistWord, registry: &RelationRegistry, depth: usize) -> PositivityOutcome {
    let mut seen: BTreeSet<TwistWord> = BTreeSet::new();
    let mut queue: VecDeque<(TwistWord, Vec<RewriteStep>)> = VecDeque::new();
    seen.insert(word.clone());
    queue.push_back((word.clone(), Vec::new()));
    while let Some((w, chain)) = queue.pop_front() {
        if w.is_positive() {
            return PositivityOutcome::Found(PositiveWordCert {
                original: word.clone(),
                chain,
                positive: w,
            });
        }
        if chain.len() >= depth {
            continue;
        }
        for position in 0..w.len() {
            for inst in registry.instances() {
                for direction in [Direction::LhsToRhs, Direction::RhsToLhs] {
                    let Some(next) = rewrite_at(&w, inst, direction, position) else {
                        continue;
                    };
                    if seen.len() >= SEARCH_STATE_LIMIT || !seen.insert(next.clone()) {
                        continue;
                    }
                    let mut c = chain.clone();
                    c.push(RewriteStep {
                        relation: inst.name.clone(),
                        direction,
                        position,
                        level: registry.level(&inst.name).expect("registered"),
                        result: next.to_string(),
                    });
                    queue.push_back((next, c));
                }
            }
        }
    }
    PositivityOutcome::Unknown { explored: seen.len() }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PantsMatch {
    pub x: String,
    pub y: String,
    pub z: String,
}

/// Pants regions `P` bounded by boundary parallel `x`, `y` and an interior
/// `z` on which the monodromy restricts to `T_x T_y T_z^-1`.
pub fn pants_pattern_scan(surface: &Surface, word: &TwistWord) -> Vec<PantsMatch> {
    let mut exps: BTreeMap<&str, Vec<i64>> = BTreeMap::new();
    for f in word.factors() {
        exps.entry(f.curve.as_str()).or_default().push(f.exponent);
    }
    let has = |c: &str, e: i64| exps.get(c).is_some_and(|v| v.contains(&e));
    let mut out = Vec::new();
    for z in surface.curves() {
        let Some((x, y)) = &z.pants else { continue };
        if z.kind != CurveKind::Interior {
            continue;
        }
        let boundary = |name: &str| {
            surface
                .curve(name)
                .is_some_and(|c| matches!(c.kind, CurveKind::BoundaryParallel(_)))
        };
        if boundary(x) && boundary(y) && has(x, 1) && has(y, 1) && has(&z.name, -1) {
            out.push(PantsMatch {
                x: x.clone(),
                y: y.clone(),
                z: z.name.clone(),
            });
        }
    }
    out.sort();
    out
}
