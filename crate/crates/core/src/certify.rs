//! Certificate engine: verified evidence about open books is combined by a
//! fixed set of inference rules into classification verdicts and bounds on
//! the overtwisted complexity `n` and the binding depth `d(B)`.
//!
//! Open books are referred to by name. A cover relation links a cover's
//! open book to its base.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::covers::{check_commutativity, lift_monodromy, preserves_kernel, CyclicCover, MonodromyLift, NotLiftable};
use crate::error::CoverError;
use crate::foliation::OTDiskMovieCert;
use crate::mcg::{homology_action, PositiveWordCert, TwistWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverLevel {
    /// The monodromy lifted factor by factor and the homology square
    /// commutes.
    Lifted,
    /// No factor-wise lift, but the monodromy preserves `ker λ`; boundary
    /// behaviour of the global lift is not checked.
    HomologyCriterion,
}

/// Evidence that one open book covers another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverRelationCert {
    degree: u32,
    lifted_word: Option<TwistWord>,
    level: CoverLevel,
}

impl CoverRelationCert {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn lifted_word(&self) -> Option<&TwistWord> {
        self.lifted_word.as_ref()
    }

    pub fn level(&self) -> CoverLevel {
        self.level
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverRelationError {
    Cover(CoverError),
    Disconnected { components: usize },
    NotLiftable(NotLiftable),
    CommutativityFailed { mismatched_entries: usize },
}

impl fmt::Display for CoverRelationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverRelationError::Cover(e) => write!(f, "{e}"),
            CoverRelationError::Disconnected { components } => {
                write!(f, "cover is disconnected ({components} components)")
            }
            CoverRelationError::NotLiftable(n) => write!(f, "{n}"),
            CoverRelationError::CommutativityFailed { mismatched_entries } => {
                write!(
                    f,
                    "lifted word fails the covering square ({mismatched_entries} entries differ)"
                )
            }
        }
    }
}

impl std::error::Error for CoverRelationError {}

/// Admits a cover relation for `base_word` on a connected cover.
pub fn verify_cover_relation(
    cover: &CyclicCover,
    base_word: &TwistWord,
) -> Result<CoverRelationCert, CoverRelationError> {
    if !cover.is_connected() {
        return Err(CoverRelationError::Disconnected {
            components: cover.components(),
        });
    }
    match lift_monodromy(cover, base_word).map_err(CoverRelationError::Cover)? {
        MonodromyLift::Lifted(w) => {
            let report = check_commutativity(cover, base_word, &w).map_err(CoverRelationError::Cover)?;
            if !report.pass {
                return Err(CoverRelationError::CommutativityFailed {
                    mismatched_entries: report.mismatched_entries,
                });
            }
            Ok(CoverRelationCert {
                degree: cover.degree(),
                lifted_word: Some(w),
                level: CoverLevel::Lifted,
            })
        }
        MonodromyLift::Inconclusive { .. } => {
            let action = homology_action(cover.base(), base_word).map_err(|e| CoverRelationError::Cover(e.into()))?;
            debug_assert!(preserves_kernel(cover.spec(), &action));
            Ok(CoverRelationCert {
                degree: cover.degree(),
                lifted_word: None,
                level: CoverLevel::HomologyCriterion,
            })
        }
        MonodromyLift::NotLiftable(n) => Err(CoverRelationError::NotLiftable(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExternalStatement {
    UniversallyTight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    PositiveWord {
        openbook: String,
        cert: PositiveWordCert,
    },
    OTDiskMovie {
        openbook: String,
        cert: OTDiskMovieCert,
    },
    /// Accepted without proof; the citation names the source.
    ExternalAxiom {
        openbook: String,
        statement: ExternalStatement,
        citation: String,
    },
    CoverRelation {
        cover: String,
        base: String,
        cert: CoverRelationCert,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub provenance: String,
}

impl Certificate {
    pub fn new(kind: CertificateKind, provenance: impl Into<String>) -> Self {
        Certificate {
            kind,
            provenance: provenance.into(),
        }
    }

    /// Open books the certificate speaks about.
    pub fn openbooks(&self) -> Vec<&str> {
        match &self.kind {
            CertificateKind::PositiveWord { openbook, .. }
            | CertificateKind::OTDiskMovie { openbook, .. }
            | CertificateKind::ExternalAxiom { openbook, .. } => vec![openbook],
            CertificateKind::CoverRelation { cover, base, .. } => vec![base, cover],
        }
    }

    /// Short description used in derivations.
    pub fn describe(&self) -> String {
        match &self.kind {
            CertificateKind::PositiveWord { openbook, cert } => {
                format!("positive word {} for `{openbook}`", cert.positive_word())
            }
            CertificateKind::OTDiskMovie { openbook, cert } => format!(
                "overtwisted disk movie `{}` on `{openbook}` with e- = {}",
                cert.movie(),
                cert.e_minus()
            ),
            CertificateKind::ExternalAxiom { openbook, citation, .. } => {
                format!("external axiom: `{openbook}` is universally tight ({citation})")
            }
            CertificateKind::CoverRelation { cover, base, cert } => {
                format!("`{cover}` is a {}-fold cover of `{base}`", cert.degree())
            }
        }
    }

    fn sort_key(&self) -> (u8, String, String) {
        let rank = match self.kind {
            CertificateKind::CoverRelation { .. } => 0,
            CertificateKind::ExternalAxiom { .. } => 1,
            CertificateKind::PositiveWord { .. } => 2,
            CertificateKind::OTDiskMovie { .. } => 3,
        };
        (rank, self.describe(), self.provenance.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
}

impl Rule {
    pub fn citation(self) -> &'static str {
        match self {
            Rule::R1 => "a product of positive Dehn twists supports a Stein fillable, hence tight, contact structure",
            Rule::R2 => {
                "a transverse overtwisted disk violates the Bennequin-Eliashberg inequality; its e- bounds n from above"
            }
            Rule::R3 => "a tight contact structure with an overtwisted finite cover is virtually overtwisted",
            Rule::R4 => "n(S, phi) = 0 exactly when the supported contact structure is tight",
            Rule::R5 => "if a finite cover has n = 1 then the base open book supports an overtwisted contact structure",
            Rule::R6 => "for an overtwisted open book the binding depth equals the overtwisted complexity",
            Rule::R7 => "d(B) = 1 exactly when the monodromy is not right-veering",
            Rule::R8 => "a monodromy is right-veering exactly when its lift to a finite cover is",
            Rule::R9 => "tight contact structures are supported only by right-veering monodromies",
            Rule::R10 => "right-veering and overtwisted imply 1 < d(B) <= d(L) for Legendrian approximations L",
            Rule::R11 => "universal tightness is accepted from an external source and implies tightness",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Closed interval of non-negative integers, possibly unbounded above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u32,
    pub hi: Option<u32>,
}

impl Interval {
    pub const UNBOUNDED: Interval = Interval { lo: 0, hi: None };

    pub fn point(v: u32) -> Self {
        Interval { lo: v, hi: Some(v) }
    }

    pub fn is_point(&self) -> bool {
        self.hi == Some(self.lo)
    }

    pub fn is_unbounded(&self) -> bool {
        *self == Interval::UNBOUNDED
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{}, {}]", self.lo, h),
            None => write!(f, "[{}, inf)", self.lo),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Overtwisted,
    Tight,
    VirtuallyOvertwisted,
    UniversallyTight,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub rule: Rule,
    pub citation: String,
    pub inputs: Vec<String>,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub openbook: String,
    pub classification: Classification,
    pub n_bounds: Interval,
    pub depth_b: Interval,
    pub derivation: Vec<DerivationStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub openbook: String,
    pub depth_b: Interval,
    /// Present when the open book is right-veering and overtwisted.
    pub legendrian_note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Prop {
    Tight,
    Overtwisted,
    UniversallyTight,
    VirtuallyOvertwisted,
    RightVeering,
    NotRightVeering,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Fact {
    Certificate(usize),
    Holds(String, Prop),
    NAtLeast(String, u32),
    NAtMost(String, u32),
    DAtLeast(String, u32),
    DAtMost(String, u32),
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Certificate(i) => write!(f, "certificate {i}"),
            Fact::Holds(x, p) => {
                let p = match p {
                    Prop::Tight => "tight",
                    Prop::Overtwisted => "overtwisted",
                    Prop::UniversallyTight => "universally tight",
                    Prop::VirtuallyOvertwisted => "virtually overtwisted",
                    Prop::RightVeering => "right-veering",
                    Prop::NotRightVeering => "not right-veering",
                };
                write!(f, "`{x}` is {p}")
            }
            Fact::NAtLeast(x, v) => write!(f, "n(`{x}`) >= {v}"),
            Fact::NAtMost(x, v) => write!(f, "n(`{x}`) <= {v}"),
            Fact::DAtLeast(x, v) => write!(f, "d(B of `{x}`) >= {v}"),
            Fact::DAtMost(x, v) => write!(f, "d(B of `{x}`) <= {v}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    fact: Fact,
    rule: Option<Rule>,
    premises: Vec<usize>,
}

/// Why classification halted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contradiction {
    pub openbook: String,
    pub message: String,
    /// Certificates (by canonical position) the clash depends on.
    pub certificates: Vec<usize>,
    pub rules: Vec<Rule>,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`: {}", self.openbook, self.message)
    }
}

struct Engine<'a> {
    certs: &'a [Certificate],
    entries: Vec<Entry>,
    index: BTreeMap<Fact, usize>,
    /// (cover, base) pairs with the certificate index.
    links: Vec<(String, String, usize)>,
    books: BTreeSet<String>,
}

impl<'a> Engine<'a> {
    fn new(certs: &'a [Certificate]) -> Self {
        let mut e = Engine {
            certs,
            entries: Vec::new(),
            index: BTreeMap::new(),
            links: Vec::new(),
            books: BTreeSet::new(),
        };
        for (i, c) in certs.iter().enumerate() {
            e.add(Fact::Certificate(i), None, vec![]);
            for b in c.openbooks() {
                e.books.insert(b.to_string());
            }
            if let CertificateKind::CoverRelation { cover, base, .. } = &c.kind {
                e.links.push((cover.clone(), base.clone(), i));
            }
        }
        e
    }

    fn get(&self, f: &Fact) -> Option<usize> {
        self.index.get(f).copied()
    }

    fn holds(&self, x: &str, p: Prop) -> Option<usize> {
        self.get(&Fact::Holds(x.to_string(), p))
    }

    /// Strongest known bound of one kind: the largest lower or the
    /// smallest upper bound.
    fn bound(&self, x: &str, kind: fn(String, u32) -> Fact) -> Option<(u32, usize)> {
        let probe = kind(String::new(), 0);
        let lower = matches!(probe, Fact::NAtLeast(..) | Fact::DAtLeast(..));
        self.index
            .iter()
            .filter_map(|(f, &i)| {
                let (y, v) = match f {
                    Fact::NAtLeast(y, v) | Fact::NAtMost(y, v) | Fact::DAtLeast(y, v) | Fact::DAtMost(y, v) => (y, *v),
                    _ => return None,
                };
                (y == x && std::mem::discriminant(f) == std::mem::discriminant(&probe)).then_some((v, i))
            })
            .max_by_key(|&(v, i)| {
                if lower {
                    (v as i64, usize::MAX - i)
                } else {
                    (-(v as i64), usize::MAX - i)
                }
            })
    }

    fn n_lo(&self, x: &str) -> Option<(u32, usize)> {
        self.bound(x, Fact::NAtLeast)
    }

    fn n_hi(&self, x: &str) -> Option<(u32, usize)> {
        self.bound(x, Fact::NAtMost)
    }

    fn d_lo(&self, x: &str) -> Option<(u32, usize)> {
        self.bound(x, Fact::DAtLeast)
    }

    fn d_hi(&self, x: &str) -> Option<(u32, usize)> {
        self.bound(x, Fact::DAtMost)
    }

    /// Adds a fact unless it, or a stronger bound, is already known.
    fn add(&mut self, fact: Fact, rule: Option<Rule>, premises: Vec<usize>) -> bool {
        if self.index.contains_key(&fact) {
            return false;
        }
        let subsumed = match &fact {
            Fact::NAtLeast(x, v) => self.n_lo(x).is_some_and(|(b, _)| b >= *v),
            Fact::NAtMost(x, v) => self.n_hi(x).is_some_and(|(b, _)| b <= *v),
            Fact::DAtLeast(x, v) => self.d_lo(x).is_some_and(|(b, _)| b >= *v),
            Fact::DAtMost(x, v) => self.d_hi(x).is_some_and(|(b, _)| b <= *v),
            _ => false,
        };
        if subsumed {
            return false;
        }
        self.index.insert(fact.clone(), self.entries.len());
        self.entries.push(Entry { fact, rule, premises });
        true
    }

    fn derive(&mut self, fact: Fact, rule: Rule, premises: Vec<usize>) -> bool {
        self.add(fact, Some(rule), premises)
    }

    fn run(&mut self) {
        loop {
            let mut changed = false;
            // certificate rules
            for (i, c) in self.certs.iter().enumerate() {
                let ci = self.get(&Fact::Certificate(i)).expect("certificate fact");
                match &c.kind {
                    CertificateKind::PositiveWord { openbook, .. } => {
                        changed |= self.derive(Fact::Holds(openbook.clone(), Prop::Tight), Rule::R1, vec![ci]);
                    }
                    CertificateKind::OTDiskMovie { openbook, cert } => {
                        changed |= self.derive(Fact::Holds(openbook.clone(), Prop::Overtwisted), Rule::R2, vec![ci]);
                        changed |= self.derive(Fact::NAtMost(openbook.clone(), cert.e_minus()), Rule::R2, vec![ci]);
                    }
                    CertificateKind::ExternalAxiom { openbook, .. } => {
                        changed |= self.derive(
                            Fact::Holds(openbook.clone(), Prop::UniversallyTight),
                            Rule::R11,
                            vec![ci],
                        );
                    }
                    CertificateKind::CoverRelation { .. } => {}
                }
            }
            let books: Vec<String> = self.books.iter().cloned().collect();
            for x in &books {
                changed |= self.single_book_rules(x);
            }
            for (cover, base, ci) in self.links.clone() {
                let ci = self.get(&Fact::Certificate(ci)).expect("certificate fact");
                changed |= self.cover_rules(&cover, &base, ci);
            }
            if !changed {
                break;
            }
        }
    }

    fn single_book_rules(&mut self, x: &str) -> bool {
        let mut changed = false;
        let s = x.to_string();
        if let Some(u) = self.holds(x, Prop::UniversallyTight) {
            changed |= self.derive(Fact::Holds(s.clone(), Prop::Tight), Rule::R11, vec![u]);
        }
        if let Some(t) = self.holds(x, Prop::Tight) {
            changed |= self.derive(Fact::NAtMost(s.clone(), 0), Rule::R4, vec![t]);
            changed |= self.derive(Fact::Holds(s.clone(), Prop::RightVeering), Rule::R9, vec![t]);
        }
        if let Some(o) = self.holds(x, Prop::Overtwisted) {
            changed |= self.derive(Fact::NAtLeast(s.clone(), 1), Rule::R4, vec![o]);
            // d(B) and n agree
            if let Some((v, i)) = self.n_lo(x) {
                changed |= self.derive(Fact::DAtLeast(s.clone(), v), Rule::R6, vec![o, i]);
            }
            if let Some((v, i)) = self.n_hi(x) {
                changed |= self.derive(Fact::DAtMost(s.clone(), v), Rule::R6, vec![o, i]);
            }
            if let Some((v, i)) = self.d_lo(x) {
                changed |= self.derive(Fact::NAtLeast(s.clone(), v), Rule::R6, vec![o, i]);
            }
            if let Some((v, i)) = self.d_hi(x) {
                changed |= self.derive(Fact::NAtMost(s.clone(), v), Rule::R6, vec![o, i]);
            }
            if let Some(r) = self.holds(x, Prop::RightVeering) {
                changed |= self.derive(Fact::DAtLeast(s.clone(), 2), Rule::R10, vec![r, o]);
            }
        }
        if let Some((lo, i)) = self.n_lo(x) {
            if lo >= 1 {
                changed |= self.derive(Fact::Holds(s.clone(), Prop::Overtwisted), Rule::R4, vec![i]);
            }
        }
        if let Some((0, i)) = self.n_hi(x) {
            changed |= self.derive(Fact::Holds(s.clone(), Prop::Tight), Rule::R4, vec![i]);
        }
        if let Some(nr) = self.holds(x, Prop::NotRightVeering) {
            changed |= self.derive(Fact::Holds(s.clone(), Prop::Overtwisted), Rule::R9, vec![nr]);
            changed |= self.derive(Fact::DAtMost(s.clone(), 1), Rule::R7, vec![nr]);
            changed |= self.derive(Fact::DAtLeast(s.clone(), 1), Rule::R7, vec![nr]);
        }
        if let (Some((1, i)), Some((1, j))) = (self.d_lo(x), self.d_hi(x)) {
            changed |= self.derive(Fact::Holds(s, Prop::NotRightVeering), Rule::R7, vec![i, j]);
        }
        changed
    }

    fn cover_rules(&mut self, cover: &str, base: &str, link: usize) -> bool {
        let mut changed = false;
        for (from, to) in [(cover, base), (base, cover)] {
            for p in [Prop::RightVeering, Prop::NotRightVeering] {
                if let Some(i) = self.holds(from, p) {
                    changed |= self.derive(Fact::Holds(to.to_string(), p), Rule::R8, vec![i, link]);
                }
            }
        }
        if let (Some(t), Some(o)) = (self.holds(base, Prop::Tight), self.holds(cover, Prop::Overtwisted)) {
            changed |= self.derive(
                Fact::Holds(base.to_string(), Prop::VirtuallyOvertwisted),
                Rule::R3,
                vec![t, o, link],
            );
        }
        if let (Some((1, i)), Some((1, j))) = (self.n_lo(cover), self.n_hi(cover)) {
            changed |= self.derive(
                Fact::Holds(base.to_string(), Prop::Overtwisted),
                Rule::R5,
                vec![i, j, link],
            );
        }
        changed
    }

    fn support(&self, roots: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = roots.to_vec();
        while let Some(i) = stack.pop() {
            if seen.insert(i) {
                stack.extend(&self.entries[i].premises);
            }
        }
        seen
    }

    fn certificates_of(&self, roots: &[usize]) -> Vec<usize> {
        self.support(roots)
            .into_iter()
            .filter_map(|i| match self.entries[i].fact {
                Fact::Certificate(c) => Some(c),
                _ => None,
            })
            .collect()
    }

    fn rules_of(&self, roots: &[usize]) -> Vec<Rule> {
        let set: BTreeSet<Rule> = self
            .support(roots)
            .into_iter()
            .filter_map(|i| self.entries[i].rule)
            .collect();
        set.into_iter().collect()
    }

    fn contradictions(&self) -> Vec<Contradiction> {
        let mut out = Vec::new();
        for x in &self.books {
            let mut clash = |message: String, roots: Vec<usize>| {
                out.push(Contradiction {
                    openbook: x.clone(),
                    message,
                    certificates: self.certificates_of(&roots),
                    rules: self.rules_of(&roots),
                })
            };
            if let (Some(t), Some(o)) = (self.holds(x, Prop::Tight), self.holds(x, Prop::Overtwisted)) {
                clash("derived both tight and overtwisted".into(), vec![t, o]);
            }
            if let (Some(r), Some(nr)) = (self.holds(x, Prop::RightVeering), self.holds(x, Prop::NotRightVeering)) {
                clash("derived both right-veering and not right-veering".into(), vec![r, nr]);
            }
            if let (Some((lo, i)), Some((hi, j))) = (self.n_lo(x), self.n_hi(x)) {
                if lo > hi {
                    clash(format!("empty range for n: [{lo}, {hi}]"), vec![i, j]);
                }
            }
            if let (Some((lo, i)), Some((hi, j))) = (self.d_lo(x), self.d_hi(x)) {
                if lo > hi {
                    clash(format!("empty range for d(B): [{lo}, {hi}]"), vec![i, j]);
                }
            }
        }
        out
    }

    fn verdict(&self, x: &str) -> Verdict {
        let mut roots = Vec::new();
        let classification = [
            (Prop::UniversallyTight, Classification::UniversallyTight),
            (Prop::VirtuallyOvertwisted, Classification::VirtuallyOvertwisted),
            (Prop::Tight, Classification::Tight),
            (Prop::Overtwisted, Classification::Overtwisted),
        ]
        .into_iter()
        .find_map(|(p, c)| self.holds(x, p).map(|i| (c, i)));
        let classification = match classification {
            Some((c, i)) => {
                roots.push(i);
                c
            }
            None => Classification::Unknown,
        };
        let mut bounds = |lo: Option<(u32, usize)>, hi: Option<(u32, usize)>| {
            let mut iv = Interval::UNBOUNDED;
            if let Some((v, i)) = lo {
                iv.lo = v;
                roots.push(i);
            }
            if let Some((v, i)) = hi {
                iv.hi = Some(v);
                roots.push(i);
            }
            iv
        };
        let n_bounds = bounds(self.n_lo(x), self.n_hi(x));
        let depth_b = bounds(self.d_lo(x), self.d_hi(x));
        let derivation = self
            .support(&roots)
            .into_iter()
            .filter_map(|i| {
                let e = &self.entries[i];
                let rule = e.rule?;
                Some(DerivationStep {
                    rule,
                    citation: rule.citation().to_string(),
                    inputs: e.premises.iter().map(|&p| self.describe(p)).collect(),
                    conclusion: e.fact.to_string(),
                })
            })
            .collect();
        Verdict {
            openbook: x.to_string(),
            classification,
            n_bounds,
            depth_b,
            derivation,
        }
    }

    fn describe(&self, i: usize) -> String {
        match &self.entries[i].fact {
            Fact::Certificate(c) => self.certs[*c].describe(),
            f => f.to_string(),
        }
    }
}

/// Certificates in canonical order; the engine only ever sees this order.
pub fn canonical_order(certs: &[Certificate]) -> Vec<Certificate> {
    let mut v = certs.to_vec();
    v.sort_by_key(Certificate::sort_key);
    v
}

/// Verdicts for every open book mentioned by the certificates, plus
/// `openbook` itself, in name order.
pub fn classify_all(openbook: &str, certs: &[Certificate]) -> Result<Vec<Verdict>, Vec<Contradiction>> {
    let sorted = canonical_order(certs);
    let mut engine = Engine::new(&sorted);
    engine.books.insert(openbook.to_string());
    engine.run();
    let c = engine.contradictions();
    if !c.is_empty() {
        return Err(c);
    }
    Ok(engine.books.iter().map(|x| engine.verdict(x)).collect())
}

pub fn classify(openbook: &str, certs: &[Certificate]) -> Result<Verdict, Vec<Contradiction>> {
    classify_all(openbook, certs).map(|v| {
        v.into_iter()
            .find(|x| x.openbook == openbook)
            .expect("requested open book is classified")
    })
}

pub fn depth_bounds(verdict: &Verdict) -> DepthReport {
    let rv_ot = verdict.derivation.iter().any(|s| s.rule == Rule::R10);
    DepthReport {
        openbook: verdict.openbook.clone(),
        depth_b: verdict.depth_b,
        legendrian_note: rv_ot.then(|| "d(L) >= d(B) for every Legendrian approximation L of the binding".to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub contradictions: Vec<Contradiction>,
}

/// Runs the rules on every pair of certificates, then on the whole set,
/// collecting contradictions (deduplicated). Certificate indices refer to
/// the canonical order.
pub fn check_consistency(certs: &[Certificate]) -> ConsistencyReport {
    let sorted = canonical_order(certs);
    let mut found: Vec<Contradiction> = Vec::new();
    let mut push = |mut c: Contradiction, map: &[usize]| {
        c.certificates = c.certificates.iter().map(|&i| map[i]).collect();
        if !found.contains(&c) {
            found.push(c);
        }
    };
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let pair = [sorted[i].clone(), sorted[j].clone()];
            let mut e = Engine::new(&pair);
            e.run();
            for c in e.contradictions() {
                push(c, &[i, j]);
            }
        }
    }
    let all: Vec<usize> = (0..sorted.len()).collect();
    let mut e = Engine::new(&sorted);
    e.run();
    for c in e.contradictions() {
        push(c, &all);
    }
    ConsistencyReport {
        consistent: found.is_empty(),
        contradictions: found,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::{recognize_ot_disk, tests::nonrv_movie};
    use crate::mcg::{positivity_search, PositivityOutcome, RelationRegistry};

    fn positive(book: &str) -> Certificate {
        let PositivityOutcome::Found(cert) =
            positivity_search(&TwistWord::parse("T[a]").unwrap(), &RelationRegistry::default(), 0)
        else {
            panic!("positive word")
        };
        Certificate::new(
            CertificateKind::PositiveWord {
                openbook: book.into(),
                cert,
            },
            "test",
        )
    }

    fn disk(book: &str) -> Certificate {
        Certificate::new(
            CertificateKind::OTDiskMovie {
                openbook: book.into(),
                cert: recognize_ot_disk(&nonrv_movie()).unwrap(),
            },
            "test",
        )
    }

    fn link(cover: &str, base: &str) -> Certificate {
        Certificate::new(
            CertificateKind::CoverRelation {
                cover: cover.into(),
                base: base.into(),
                cert: CoverRelationCert {
                    degree: 2,
                    lifted_word: None,
                    level: CoverLevel::HomologyCriterion,
                },
            },
            "test",
        )
    }

    #[test]
    fn positive_word_only() {
        let v = classify("B", &[positive("B")]).unwrap();
        assert_eq!(v.classification, Classification::Tight);
        assert_eq!(v.n_bounds, Interval::point(0));
        assert!(v.depth_b.is_unbounded());
        let rules: Vec<Rule> = v.derivation.iter().map(|s| s.rule).collect();
        assert_eq!(rules, vec![Rule::R1, Rule::R4]);
    }

    #[test]
    fn nothing_known() {
        let v = classify("B", &[]).unwrap();
        assert_eq!(v.classification, Classification::Unknown);
        assert!(v.n_bounds.is_unbounded() && v.depth_b.is_unbounded());
        assert!(v.derivation.is_empty());
    }

    #[test]
    fn one_negative_point_means_not_right_veering() {
        let v = classify("B", &[disk("B")]).unwrap();
        assert_eq!(v.classification, Classification::Overtwisted);
        assert_eq!(v.n_bounds, Interval::point(1));
        assert_eq!(v.depth_b, Interval::point(1));
        assert_eq!(depth_bounds(&v).legendrian_note, None);
    }

    #[test]
    fn clashes() {
        let r = check_consistency(&[positive("B"), disk("B")]);
        assert!(!r.consistent);
        // n = 1 on a cover forces the base to be overtwisted
        let certs = [disk("C"), positive("B"), link("C", "B")];
        assert!(classify("B", &certs).is_err());
        let r = check_consistency(&certs);
        assert!(!r.consistent);
        assert!(r
            .contradictions
            .iter()
            .any(|c| c.rules.contains(&Rule::R5) && c.rules.contains(&Rule::R1)));
        assert!(check_consistency(&[positive("B"), disk("C")]).consistent);
    }
}
