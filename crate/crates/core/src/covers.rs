//! Finite cyclic covers of surfaces determined by a homomorphism
//! `λ: H_1(S; Z) → Z/k`, and lifting of curves and twist words to them.
//!
//! The cover is built on the ribbon graph of the base: sheet `s` carries a
//! copy of the base vertex, and the copy of generator `x_j` starting on
//! sheet `s` ends on sheet `s + λ(x_j)`. Rotations are copied from the base,
//! so the lifted ribbon graph thickens to the total space.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::CoverError;
use crate::linalg::IntMatrix;
use crate::mcg::{homology_action, CurveSystem, HomologyAction, TwistFactor, TwistWord};
use crate::ribbon::{CycleBasis, End, HalfEdge, RibbonGraph, Step};
use crate::surface::{CurveKind, RelativeClass, Surface};
use crate::words::Word;

/// Largest supported number of sheets.
pub const MAX_DEGREE: u32 = 64;
/// Largest supported number of edges (generators times sheets) in a cover.
pub const MAX_COVER_EDGES: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverSpec {
    pub k: u32,
    pub lambda: RelativeClass,
}

impl CoverSpec {
    pub fn new(k: u32, values: Vec<i64>) -> Result<Self, CoverError> {
        if k == 0 {
            return Err(CoverError::ZeroDegree);
        }
        if k > MAX_DEGREE {
            return Err(CoverError::DegreeTooLarge { k, max: MAX_DEGREE });
        }
        Ok(CoverSpec {
            k,
            lambda: RelativeClass::new(k, values),
        })
    }

    /// `λ(x) = ⟨x, c⟩ mod k`, the cover cut along a class `c`.
    pub fn from_cutting_class(surface: &Surface, k: u32, class: &[i64]) -> Result<Self, CoverError> {
        let values = (0..surface.rank())
            .map(|j| {
                let mut e = vec![0; surface.rank()];
                e[j] = 1;
                surface.pairing(&e, class)
            })
            .collect::<Result<Vec<_>, _>>()?;
        CoverSpec::new(k, values)
    }

    /// `λ` given by residues on named generators; unnamed generators map to 0.
    pub fn from_named(surface: &Surface, k: u32, values: &BTreeMap<String, i64>) -> Result<Self, CoverError> {
        let mut v = vec![0; surface.rank()];
        for (name, &x) in values {
            let j = surface
                .generators()
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| CoverError::UnknownGenerator { name: name.clone() })?;
            v[j] = x;
        }
        CoverSpec::new(k, v)
    }

    pub fn evaluate(&self, class: &[i64]) -> u32 {
        self.lambda.evaluate(class)
    }
}

/// The lifts of one base boundary component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryLift {
    pub boundary: usize,
    pub lambda: u32,
    pub components: usize,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftComponent {
    pub lift_name: String,
    /// Sheets visited by the lift, starting at its minimal sheet.
    pub sheets: Vec<u32>,
    pub degree: u32,
    pub homology_in_cover: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedCurve {
    pub base_curve: String,
    pub kind: CurveKind,
    pub components: Vec<LiftComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCover {
    base: Surface,
    spec: CoverSpec,
    /// Components of the total space; all are homeomorphic.
    components: usize,
    /// Genus of each component.
    genus: usize,
    boundary_count: usize,
    boundary_lifts: Vec<BoundaryLift>,
    ribbon: RibbonGraph,
    basis: CycleBasis,
    intersection: IntMatrix,
    projection: IntMatrix,
    lifts: Vec<LiftedCurve>,
    lift_classes: BTreeMap<String, Vec<i64>>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lift_name(base: &str, index: usize) -> String {
    format!("{base}~{}", "'".repeat(index))
}

pub fn build_cyclic_cover(surface: &Surface, spec: &CoverSpec) -> Result<CyclicCover, CoverError> {
    let n = surface.rank();
    let k = spec.k;
    if k == 0 {
        return Err(CoverError::ZeroDegree);
    }
    if spec.lambda.values.len() != n {
        return Err(CoverError::LambdaLength {
            expected: n,
            found: spec.lambda.values.len(),
        });
    }
    let max = MAX_COVER_EDGES
        .checked_div(n)
        .map_or(MAX_DEGREE, |m| MAX_DEGREE.min(m as u32));
    if k > max {
        return Err(CoverError::DegreeTooLarge { k, max });
    }
    let ku = k as usize;
    let lam: Vec<usize> = spec.lambda.values.iter().map(|&v| (v % k) as usize).collect();

    // sheet graph
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..ku).map(move |s| (j, s)))
        .map(|(j, s)| (s, (s + lam[j]) % ku))
        .collect();
    let base_rot = surface.ribbon().rotation(0);
    let rotation: Vec<Vec<HalfEdge>> = (0..ku)
        .map(|s| {
            base_rot
                .iter()
                .map(|h| match h.end {
                    End::Tail => HalfEdge::tail(h.edge * ku + s),
                    End::Head => HalfEdge::head(h.edge * ku + (s + ku - lam[h.edge]) % ku),
                })
                .collect()
        })
        .collect();
    let ribbon = RibbonGraph::new(ku, edges, rotation);

    // topology from gcd arithmetic
    let components = lam.iter().fold(u64::from(k), |g, &l| gcd(g, l as u64)) as usize;
    let mut boundary_lifts = Vec::with_capacity(surface.boundary_count());
    for i in 0..surface.boundary_count() {
        let l = spec.evaluate(&surface.boundary_class(i));
        let g = gcd(u64::from(k), u64::from(l)) as usize;
        boundary_lifts.push(BoundaryLift {
            boundary: i,
            lambda: l,
            components: g,
            degree: k / g as u32,
        });
    }
    let boundary_count: usize = boundary_lifts.iter().map(|b| b.components).sum();
    let chi = i64::from(k) * surface.euler_characteristic();
    let c = components as i64;
    let r = boundary_count as i64;
    let bad = || CoverError::BadGenus {
        chi,
        boundary: boundary_count,
        components,
    };
    if chi % c != 0 || r % c != 0 {
        return Err(bad());
    }
    let twice_genus = 2 - chi / c - r / c;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(bad());
    }

    // homology
    let basis = ribbon.cycle_basis();
    let e = ribbon.edge_count();
    let c_mat = basis.as_matrix(e);
    let k_mat = ribbon.intersection_form();
    let intersection = &c_mat.transpose() * &(&k_mat * &c_mat);
    let mut fold = IntMatrix::zeros(n, e);
    for j in 0..n {
        for s in 0..ku {
            fold[(j, j * ku + s)] = 1;
        }
    }
    let projection = &fold * &c_mat;

    let mut cover = CyclicCover {
        base: surface.clone(),
        spec: spec.clone(),
        components,
        genus: (twice_genus / 2) as usize,
        boundary_count,
        boundary_lifts,
        ribbon,
        basis,
        intersection,
        projection,
        lifts: Vec::new(),
        lift_classes: BTreeMap::new(),
    };
    for curve in surface.curves() {
        let lifted = lift_curve(&cover, &curve.name)?;
        for comp in &lifted.components {
            cover
                .lift_classes
                .insert(comp.lift_name.clone(), comp.homology_in_cover.clone());
        }
        cover.lifts.push(lifted);
    }
    Ok(cover)
}

impl CyclicCover {
    pub fn base(&self) -> &Surface {
        &self.base
    }

    pub fn spec(&self) -> &CoverSpec {
        &self.spec
    }

    pub fn degree(&self) -> u32 {
        self.spec.k
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    /// Genus of each component of the total space.
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn euler_characteristic(&self) -> i64 {
        i64::from(self.spec.k) * self.base.euler_characteristic()
    }

    pub fn boundary_lifts(&self) -> &[BoundaryLift] {
        &self.boundary_lifts
    }

    /// The lifted ribbon graph, vertex `s` being sheet `s`.
    pub fn ribbon(&self) -> &RibbonGraph {
        &self.ribbon
    }

    pub fn homology_rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn intersection_matrix(&self) -> &IntMatrix {
        &self.intersection
    }

    /// `π_*: H_1(S̃) → H_1(S)`, base rank × cover rank.
    pub fn projection(&self) -> &IntMatrix {
        &self.projection
    }

    pub fn lifts(&self) -> &[LiftedCurve] {
        &self.lifts
    }

    pub fn lifted(&self, base_curve: &str) -> Option<&LiftedCurve> {
        self.lifts.iter().find(|l| l.base_curve == base_curve)
    }

    /// Cover edge index of generator `j` starting on sheet `s`.
    pub fn edge(&self, j: usize, s: u32) -> usize {
        j * self.spec.k as usize + s as usize
    }

    /// Chain and final sheet of the lift of `word` starting on `sheet`.
    pub fn trace_word(&self, word: &Word, sheet: u32) -> (Vec<i64>, u32) {
        let k = self.spec.k;
        let mut chain = vec![0; self.ribbon.edge_count()];
        let mut s = sheet % k;
        for l in word.letters() {
            let step = self.spec.lambda.values[l.gen] % k;
            if l.inverse {
                s = (s + k - step) % k;
                chain[self.edge(l.gen, s)] -= 1;
            } else {
                chain[self.edge(l.gen, s)] += 1;
                s = (s + step) % k;
            }
        }
        (chain, s)
    }

    /// Coordinates of a cycle of the lifted graph in the cover basis.
    pub fn coordinates(&self, chain: &[i64]) -> Vec<i64> {
        self.basis.coordinates(chain)
    }

    /// Faces of the lifted ribbon graph as edge chains, in the cover basis.
    pub fn boundary_classes(&self) -> Vec<Vec<i64>> {
        self.ribbon
            .faces()
            .iter()
            .map(|f: &Vec<Step>| self.coordinates(&self.ribbon.chain_of(f)))
            .collect()
    }
}

impl CurveSystem for CyclicCover {
    fn rank(&self) -> usize {
        self.basis.rank()
    }

    fn intersection(&self) -> &IntMatrix {
        &self.intersection
    }

    fn curve_class(&self, name: &str) -> Option<&[i64]> {
        self.lift_classes.get(name).map(Vec::as_slice)
    }
}

/// Components of the preimage of a declared base curve, named `c~`, `c~'`,
/// `c~''`, … by minimal sheet.
pub fn lift_curve(cover: &CyclicCover, curve: &str) -> Result<LiftedCurve, CoverError> {
    let base = cover.base.curve(curve).ok_or_else(|| {
        CoverError::Surface(crate::error::SurfaceError::UnknownCurve {
            name: curve.to_string(),
        })
    })?;
    let k = cover.spec.k;
    let shift = cover.spec.evaluate(&base.homology);
    let g = gcd(u64::from(k), u64::from(shift)) as u32;
    let degree = k / g;
    let mut components = Vec::with_capacity(g as usize);
    // orbits of s ↦ s + shift; the minimal sheets are 0..g
    for start in 0..g {
        let sheets: Vec<u32> = (0..degree).map(|i| (start + i * shift) % k).collect();
        let mut chain = vec![0; cover.ribbon.edge_count()];
        let mut s = start;
        for _ in 0..degree {
            let (c, next) = cover.trace_word(&base.word, s);
            for (a, b) in chain.iter_mut().zip(c) {
                *a += b;
            }
            s = next;
        }
        debug_assert_eq!(s, start);
        components.push(LiftComponent {
            lift_name: lift_name(curve, start as usize),
            sheets,
            degree,
            homology_in_cover: cover.coordinates(&chain),
        });
    }
    Ok(LiftedCurve {
        base_curve: curve.to_string(),
        kind: base.kind,
        components,
    })
}

/// Why a twist power has no factor-wise lift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotLiftable {
    pub curve: String,
    /// Degree of each component of the preimage.
    pub degree: u32,
    pub exponent: i64,
}

impl std::fmt::Display for NotLiftable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "T[{}]^{} does not lift: preimage components have degree {}, which does not divide {}",
            self.curve, self.exponent, self.degree, self.exponent
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistLift {
    Lifted(Vec<TwistFactor>),
    NotLiftable(NotLiftable),
}

/// A degree `d` annulus cover pulls `T^d` back to one full twist, so
/// `T_γ^p` lifts iff `d | p`, with exponent `p / d` on every component.
pub fn lift_twist_power(cover: &CyclicCover, curve: &str, exponent: i64) -> Result<TwistLift, CoverError> {
    let lifted = cover.lifted(curve).ok_or_else(|| {
        CoverError::Surface(crate::error::SurfaceError::UnknownCurve {
            name: curve.to_string(),
        })
    })?;
    let d = lifted.components[0].degree;
    if exponent % i64::from(d) != 0 {
        return Ok(TwistLift::NotLiftable(NotLiftable {
            curve: curve.to_string(),
            degree: d,
            exponent,
        }));
    }
    let e = exponent / i64::from(d);
    Ok(TwistLift::Lifted(
        lifted
            .components
            .iter()
            .map(|c| TwistFactor::new(c.lift_name.clone(), e))
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonodromyLift {
    Lifted(TwistWord),
    /// The first factor without a lift; the monodromy does not preserve
    /// `ker λ` on homology, so it has no lift at all.
    NotLiftable(NotLiftable),
    /// Some factors have no factor-wise lift, yet the monodromy preserves
    /// `ker λ`; a global lift may exist.
    Inconclusive {
        failures: Vec<NotLiftable>,
    },
}

pub fn lift_monodromy(cover: &CyclicCover, word: &TwistWord) -> Result<MonodromyLift, CoverError> {
    word.check_curves(&cover.base)?;
    let mut factors = Vec::new();
    let mut failures = Vec::new();
    for f in word.factors() {
        match lift_twist_power(cover, &f.curve, f.exponent)? {
            TwistLift::Lifted(mut fs) => factors.append(&mut fs),
            TwistLift::NotLiftable(n) => failures.push(n),
        }
    }
    if failures.is_empty() {
        return Ok(MonodromyLift::Lifted(TwistWord::new(factors)));
    }
    let action = homology_action(&cover.base, word)?;
    if preserves_kernel(&cover.spec, &action) {
        Ok(MonodromyLift::Inconclusive { failures })
    } else {
        Ok(MonodromyLift::NotLiftable(failures.swap_remove(0)))
    }
}

/// Whether `A(ker λ) ⊆ ker λ`, i.e. `λ ∘ A` factors through `λ`.
///
/// With `g = gcd(λ, k)` the image of `λ` is generated by `g`, and a
/// factorization sends `g` to some `m` with `(k/g) m ≡ 0`, forcing
/// `λ(A e_j) ≡ (λ_j / g) m` for every generator.
pub fn preserves_kernel(spec: &CoverSpec, action: &HomologyAction) -> bool {
    let k = u64::from(spec.k);
    let n = spec.lambda.values.len();
    let lam: Vec<u64> = spec.lambda.values.iter().map(|&v| u64::from(v) % k).collect();
    let mu: Vec<u64> = (0..n)
        .map(|j| {
            let col: Vec<i64> = (0..n).map(|i| action.matrix[(i, j)]).collect();
            u64::from(spec.evaluate(&col))
        })
        .collect();
    let g = lam.iter().fold(k, |g, &l| gcd(g, l));
    (0..k).any(|m| (k / g) * m % k == 0 && (0..n).all(|j| (lam[j] / g) * m % k == mu[j]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativityReport {
    pub pass: bool,
    /// Entries where `π_* ∘ φ̃_*` and `φ_* ∘ π_*` differ.
    pub mismatched_entries: usize,
}

/// Compares `π_* ∘ H(lifted)` with `H(base) ∘ π_*`.
pub fn check_commutativity(
    cover: &CyclicCover,
    base_word: &TwistWord,
    lifted_word: &TwistWord,
) -> Result<CommutativityReport, CoverError> {
    if let Some(f) = lifted_word
        .factors()
        .iter()
        .find(|f| cover.curve_class(&f.curve).is_none())
    {
        return Err(CoverError::UnknownLift { name: f.curve.clone() });
    }
    let up = homology_action(cover, lifted_word)?;
    let down = homology_action(&cover.base, base_word)?;
    let lhs = &cover.projection * &up.matrix;
    let rhs = &down.matrix * &cover.projection;
    let mut mismatched = 0;
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            if lhs[(i, j)] != rhs[(i, j)] {
                mismatched += 1;
            }
        }
    }
    Ok(CommutativityReport {
        pass: mismatched == 0,
        mismatched_entries: mismatched,
    })
}
