//! Built-in open books, covers and movies.

use std::collections::{BTreeMap, BTreeSet};

use crate::covers::CoverSpec;
use crate::error::PresetError;
use crate::foliation::{
    AArc, BArc, ClosureMap, Elliptic, HyperbolicEvent, MoviePresentation, PageConfig, Sign, MOVIE_FORMAT,
};
use crate::mcg::{RelationInstance, TwistWord};
use crate::surface::{make_surface, Curve, CurveKind, Surface};
use crate::words::{FramedMap, Letter, Word};

/// A surface, its relation instances, a monodromy word and optionally a cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenBookPreset {
    pub surface: Surface,
    pub relations: Vec<RelationInstance>,
    pub word: TwistWord,
    pub cover: Option<CoverSpec>,
}

const LANTERN_CITATION: &str = "lantern relation in the mapping class group of the four-holed sphere";

fn relation(name: &str, lhs: &str, rhs: &str) -> RelationInstance {
    RelationInstance {
        name: name.into(),
        lhs: TwistWord::parse(lhs).expect("preset relation parses"),
        rhs: TwistWord::parse(rhs).expect("preset relation parses"),
        citation: LANTERN_CITATION.into(),
    }
}

fn span(lo: usize, hi: usize) -> Word {
    Word::from_letters((lo - 1..hi).map(Letter::new))
}

fn set_framed(c: &mut Curve, pos: FramedMap, neg: FramedMap) {
    c.automorphism = Some(pos.map().clone());
    c.arcs = pos.arcs();
    c.inverse_automorphism = Some(neg.map().clone());
    c.inverse_arcs = neg.arcs();
}

/// Round curve around holes `lo..=hi` (1-based) of a planar surface.
fn round_curve(s: &Surface, name: &str, lo: usize, hi: usize) -> Curve {
    let rank = s.rank();
    let mut c = Curve::from_word(s, name, span(lo, hi), CurveKind::Interior);
    set_framed(
        &mut c,
        FramedMap::block_twist(rank, 0, lo - 1..hi, true),
        FramedMap::block_twist(rank, 0, lo - 1..hi, false),
    );
    c
}

fn hole(s: &Surface, name: &str, i: usize) -> Curve {
    let rank = s.rank();
    let mut c = Curve::from_word(s, name, span(i, i), CurveKind::BoundaryParallel(i - 1));
    set_framed(
        &mut c,
        FramedMap::block_twist(rank, 0, i - 1..i, true),
        FramedMap::block_twist(rank, 0, i - 1..i, false),
    );
    c
}

fn outer(s: &Surface, name: &str) -> Curve {
    let rank = s.rank();
    let w = span(1, rank).inverse().cyclically_reduced();
    let mut c = Curve::from_word(s, name, w, CurveKind::BoundaryParallel(rank));
    set_framed(
        &mut c,
        FramedMap::block_twist(rank, 0, 0..rank, true),
        FramedMap::block_twist(rank, 0, 0..rank, false),
    );
    c
}

/// Curve around holes `1..=p` after moving hole `last` next to hole `p`
/// by half twists: `h^-1(C)` with `h = σ_p ∘ ⋯ ∘ σ_{last-1}`.
fn dragged_curve(s: &Surface, name: &str, p: usize, last: usize) -> Curve {
    let rank = s.rank();
    let mut h = FramedMap::identity(rank, 0);
    let mut h_inv = FramedMap::identity(rank, 0);
    for i in (p..last).rev() {
        h = FramedMap::half_twist(rank, 0, i - 1, true).compose(&h);
        h_inv = h_inv.compose(&FramedMap::half_twist(rank, 0, i - 1, false));
    }
    let conj = |m: &FramedMap| h_inv.compose(&m.compose(&h));
    let word = h_inv.map().apply(&span(1, p)).cyclically_reduced();
    let mut c = Curve::from_word(s, name, word, CurveKind::Interior);
    set_framed(
        &mut c,
        conj(&FramedMap::block_twist(rank, 0, 0..p, true)),
        conj(&FramedMap::block_twist(rank, 0, 0..p, false)),
    );
    c
}

fn check_pq(p: usize, q: usize) -> Result<(), PresetError> {
    for (name, v) in [("p", p), ("q", q)] {
        if !(2..=32).contains(&v) {
            return Err(PresetError::Parameter {
                name,
                value: v as i64,
                expected: "2 <= value <= 32",
            });
        }
    }
    Ok(())
}

/// The planar surface with `p + q` boundary components carrying the curves
/// of the lantern family: holes `p1.., q1.., x`, the outer boundary `y`,
/// and the round curves `alpha, beta, gamma, u, v`.
pub fn prop12_surface(p: usize, q: usize) -> Result<(Surface, Vec<RelationInstance>), PresetError> {
    check_pq(p, q)?;
    let r = p + q;
    let mut s = make_surface(0, r).expect("planar surface with at least four holes");
    s.set_name(format!("prop12-p{p}-q{q}"));
    let mut curves = Vec::new();
    for i in 1..p {
        curves.push(hole(&s, &format!("p{i}"), i));
    }
    for j in 1..q {
        curves.push(hole(&s, &format!("q{j}"), p - 1 + j));
    }
    curves.push(hole(&s, "x", r - 1));
    curves.push(outer(&s, "y"));
    let mut alpha = round_curve(&s, "alpha", 1, r - 2);
    alpha.pants = Some(("x".into(), "y".into()));
    curves.push(alpha);
    curves.push(round_curve(&s, "beta", 1, p - 1));
    curves.push(round_curve(&s, "gamma", p, r - 2));
    curves.push(round_curve(&s, "u", p, r - 1));
    curves.push(dragged_curve(&s, "v", p, r - 1));
    for c in curves {
        s.add_curve(c).expect("preset curves are distinct and valid");
    }
    let relations = vec![
        relation("lantern", "T[x] T[y] T[alpha]^-1 T[beta] T[gamma]", "T[u] T[v]"),
        relation("lantern-plain", "T[x] T[y] T[beta] T[gamma]", "T[alpha] T[u] T[v]"),
    ];
    Ok((s, relations))
}

/// `T[p1] ⋯ T[q1] ⋯ T[x] T[y] T[alpha]^n T[beta] T[gamma]`.
pub fn prop12_word(p: usize, q: usize, n: i64) -> TwistWord {
    let mut pairs: Vec<(String, i64)> = (1..p).map(|i| (format!("p{i}"), 1)).collect();
    pairs.extend((1..q).map(|j| (format!("q{j}"), 1)));
    for (c, e) in [("x", 1), ("y", 1), ("alpha", n), ("beta", 1), ("gamma", 1)] {
        pairs.push((c.into(), e));
    }
    let refs: Vec<(&str, i64)> = pairs.iter().map(|(c, e)| (c.as_str(), *e)).collect();
    TwistWord::from_pairs(&refs)
}

/// Double cover with `λ(beta) = λ(gamma) = 1` and `λ(x) = λ(y) = 0`. A block
/// with an odd number of holes gets 1 on each hole, an even block gets 1 on
/// all holes but its last.
pub fn prop12_cover(p: usize, q: usize) -> Result<CoverSpec, PresetError> {
    check_pq(p, q)?;
    let block = |len: usize| -> Vec<i64> {
        let mut v = vec![1; len];
        if len.is_multiple_of(2) {
            v[len - 1] = 0;
        }
        v
    };
    let mut values = block(p - 1);
    values.extend(block(q - 1));
    values.push(0);
    Ok(CoverSpec::new(2, values).expect("k = 2 is a valid degree"))
}

pub fn prop12(p: usize, q: usize, n: i64) -> Result<OpenBookPreset, PresetError> {
    if n.unsigned_abs() > 64 {
        return Err(PresetError::Parameter {
            name: "n",
            value: n,
            expected: "|n| <= 64",
        });
    }
    let (surface, relations) = prop12_surface(p, q)?;
    Ok(OpenBookPreset {
        surface,
        relations,
        word: prop12_word(p, q, n),
        cover: Some(prop12_cover(p, q)?),
    })
}

/// Four-holed sphere with holes `a, b, c`, outer boundary `d`, the curve `e`
/// around `a, b` and the lantern partners `u, v`.
pub fn example41(alpha: i64, beta: i64, k: u32) -> Result<OpenBookPreset, PresetError> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if v.unsigned_abs() > 64 {
            return Err(PresetError::Parameter {
                name,
                value: v,
                expected: "|value| <= 64",
            });
        }
    }
    if !(2..=16).contains(&k) {
        return Err(PresetError::Parameter {
            name: "k",
            value: i64::from(k),
            expected: "2 <= k <= 16",
        });
    }
    let mut s = make_surface(0, 4).expect("four-holed sphere");
    s.set_name("example41");
    let mut e = round_curve(&s, "e", 1, 2);
    e.pants = Some(("c".into(), "d".into()));
    let curves = vec![
        hole(&s, "a", 1),
        hole(&s, "b", 2),
        hole(&s, "c", 3),
        outer(&s, "d"),
        e,
        round_curve(&s, "u", 2, 3),
        dragged_curve(&s, "v", 2, 3),
    ];
    for c in curves {
        s.add_curve(c).expect("preset curves are valid");
    }
    let relations = vec![relation("lantern", "T[a] T[b] T[c] T[d] T[e]^-1", "T[u] T[v]")];
    let word = TwistWord::from_pairs(&[("a", alpha + 1), ("b", beta + 1), ("c", 1), ("d", 1), ("e", -1)]);
    let cover = CoverSpec::new(k, vec![1, i64::from(k) - 1, 0]).expect("valid degree");
    Ok(OpenBookPreset {
        surface: s,
        relations,
        word,
        cover: Some(cover),
    })
}

/// Genus four surface with two boundary components and the double cover
/// dual to `b1`.
pub fn example43() -> OpenBookPreset {
    let mut s = make_surface(4, 2).expect("genus four, two boundaries");
    s.set_name("example43");
    let word = |t: &str| s.parse_word(t).expect("preset word parses");
    let boundary_two = s.boundary_words()[1].cyclically_reduced();
    let e_word = word("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1 a3 b3 a3^-1 b3^-1 a4 b4 a4^-1 b4^-1").inverse();
    let mut e = Curve::from_word(&s, "e", e_word, CurveKind::Interior);
    e.pants = Some(("c".into(), "d".into()));
    let curves = vec![
        Curve::from_word(&s, "c", word("d1"), CurveKind::BoundaryParallel(0)),
        Curve::from_word(&s, "d", boundary_two, CurveKind::BoundaryParallel(1)),
        Curve::from_word(&s, "a", word("a1"), CurveKind::Interior),
        Curve::from_word(&s, "b", word("a1 a2 b2 a2^-1 b2^-1"), CurveKind::Interior),
        e,
        Curve::from_word(&s, "f", word("a2"), CurveKind::Interior),
    ];
    for c in curves {
        s.add_curve(c).expect("preset curves are valid");
    }
    let word = TwistWord::from_pairs(&[("a", 2), ("b", 2), ("c", 1), ("d", 1), ("e", -1), ("f", 1)]);
    let mut lambda = vec![0; s.rank()];
    lambda[0] = 1;
    let cover = CoverSpec::new(2, lambda).expect("valid degree");
    OpenBookPreset {
        surface: s,
        relations: Vec::new(),
        word,
        cover: Some(cover),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Arc {
    A(&'static str, &'static str),
    B(&'static str, &'static str),
}

struct Step {
    sign: Sign,
    merged: [Arc; 2],
    produced: [Arc; 2],
}

fn elliptic(id: &str, sign: Sign, binding: &str) -> Elliptic {
    Elliptic {
        id: id.into(),
        sign,
        binding: binding.into(),
    }
}

/// Assembles a movie with one event between consecutive pages. Arc ids are
/// fresh on every page; the closure map sends the last page to page 0
/// through `braid_closure`.
fn assemble_movie(
    name: String,
    surface: String,
    elliptics: Vec<Elliptic>,
    start: Vec<Arc>,
    steps: Vec<Step>,
    braid_closure: &[(&'static str, &'static str)],
) -> MoviePresentation {
    let gaps = steps.len().max(1);
    let id = |page: usize, m: usize, arc: &Arc| match arc {
        Arc::A(..) => format!("a{page}.{m}"),
        Arc::B(..) => format!("b{page}.{m}"),
    };
    let page_of = |j: usize, arcs: &[Arc], ids: &[String]| {
        let mut page = PageConfig {
            t: j as f64 / gaps as f64,
            elliptics: elliptics.clone(),
            a_arcs: Vec::new(),
            b_arcs: Vec::new(),
        };
        for (m, arc) in arcs.iter().enumerate() {
            match arc {
                Arc::A(e, o) => page.a_arcs.push(AArc {
                    id: ids[m].clone(),
                    elliptic: (*e).into(),
                    braid: (*o).into(),
                }),
                Arc::B(pos, neg) => page.b_arcs.push(BArc {
                    id: ids[m].clone(),
                    pos: (*pos).into(),
                    neg: (*neg).into(),
                }),
            }
        }
        page
    };
    let mut arcs = start.clone();
    let mut ids: Vec<String> = arcs.iter().enumerate().map(|(m, a)| id(0, m, a)).collect();
    let mut pages = vec![page_of(0, &arcs, &ids)];
    let mut events = Vec::new();
    for (j, step) in steps.iter().enumerate() {
        let mut slots = [0usize; 2];
        for (slot, target) in slots.iter_mut().zip(&step.merged) {
            *slot = arcs
                .iter()
                .position(|a| a == target)
                .expect("merged arc is on the page");
        }
        let merged = [ids[slots[0]].clone(), ids[slots[1]].clone()];
        let mut incident = BTreeSet::new();
        for &m in &slots {
            match &arcs[m] {
                Arc::A(e, _) => {
                    incident.insert(e.to_string());
                }
                Arc::B(pos, neg) => {
                    incident.insert(pos.to_string());
                    incident.insert(neg.to_string());
                }
            }
        }
        for (&m, arc) in slots.iter().zip(&step.produced) {
            arcs[m] = arc.clone();
            ids[m] = id(j + 1, m, arc);
        }
        events.push(HyperbolicEvent {
            t: (j as f64 + 0.5) / gaps as f64,
            sign: step.sign,
            merged,
            produced: [ids[slots[0]].clone(), ids[slots[1]].clone()],
            incident_elliptics: Some(incident.into_iter().collect()),
            region_tag: None,
        });
        pages.push(page_of(j + 1, &arcs, &ids));
    }
    if steps.is_empty() {
        pages.push(page_of(1, &arcs, &ids));
    }
    let braid: BTreeMap<&'static str, &'static str> = braid_closure.iter().copied().collect();
    let mut closure_arcs = BTreeMap::new();
    for (m, arc) in arcs.iter().enumerate() {
        let image = match arc {
            Arc::A(e, o) => Arc::A(e, braid.get(o).copied().unwrap_or(o)),
            b => b.clone(),
        };
        let target = start
            .iter()
            .position(|a| *a == image)
            .expect("closure returns to page 0");
        closure_arcs.insert(ids[m].clone(), id(0, target, &start[target]));
    }
    MoviePresentation {
        format: MOVIE_FORMAT.into(),
        name,
        surface,
        pages,
        events,
        closure_map: ClosureMap {
            elliptics: elliptics.iter().map(|e| (e.id.clone(), e.id.clone())).collect(),
            arcs: closure_arcs,
            braid_points: braid.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        },
    }
}

fn check_case(case: u8, p: usize, q: usize) -> Result<(), PresetError> {
    check_pq(p, q)?;
    let want = if case == 1 { 0 } else { 1 };
    if p % 2 != want || q % 2 != want {
        return Err(PresetError::Parity {
            case,
            parity: if case == 1 { "even" } else { "odd" },
            p,
            q,
        });
    }
    Ok(())
}

fn case_elliptics() -> Vec<Elliptic> {
    vec![
        elliptic("P1", Sign::Plus, "x~'"),
        elliptic("P2", Sign::Plus, "p1~"),
        elliptic("P3", Sign::Plus, "y~'"),
        elliptic("P4", Sign::Plus, "q1~"),
        elliptic("N1", Sign::Minus, "x~"),
        elliptic("N2", Sign::Minus, "y~"),
    ]
}

/// Overtwisted disk movie in the double cover, for `p` and `q` even.
pub fn case1_movie(p: usize, q: usize) -> Result<MoviePresentation, PresetError> {
    use Arc::{A, B};
    check_case(1, p, q)?;
    let start = vec![B("P1", "N1"), B("P3", "N2"), A("P2", "o1"), A("P4", "o2")];
    let steps = vec![
        Step {
            sign: Sign::Minus,
            merged: [B("P1", "N1"), B("P3", "N2")],
            produced: [B("P1", "N2"), B("P3", "N1")],
        },
        Step {
            sign: Sign::Plus,
            merged: [A("P2", "o1"), B("P1", "N2")],
            produced: [B("P2", "N2"), A("P1", "o1")],
        },
        Step {
            sign: Sign::Plus,
            merged: [A("P4", "o2"), B("P3", "N1")],
            produced: [B("P4", "N1"), A("P3", "o2")],
        },
        Step {
            sign: Sign::Plus,
            merged: [A("P3", "o2"), B("P2", "N2")],
            produced: [B("P3", "N2"), A("P2", "o2")],
        },
        Step {
            sign: Sign::Plus,
            merged: [A("P1", "o1"), B("P4", "N1")],
            produced: [B("P1", "N1"), A("P4", "o1")],
        },
    ];
    Ok(assemble_movie(
        format!("case1-p{p}-q{q}"),
        format!("prop12-p{p}-q{q}~"),
        case_elliptics(),
        start,
        steps,
        &[("o1", "o2"), ("o2", "o1")],
    ))
}

/// Overtwisted disk movie in the double cover, for `p` and `q` odd.
pub fn case2_movie(p: usize, q: usize) -> Result<MoviePresentation, PresetError> {
    use Arc::{A, B};
    check_case(2, p, q)?;
    let start = vec![B("P1", "N1"), B("P2", "N2"), A("P3", "o1"), A("P4", "o2")];
    let steps = vec![
        Step {
            sign: Sign::Minus,
            merged: [B("P1", "N1"), B("P2", "N2")],
            produced: [B("P1", "N2"), B("P2", "N1")],
        },
        Step {
            sign: Sign::Plus,
            merged: [A("P3", "o1"), B("P1", "N2")],
            produced: [B("P3", "N2"), A("P1", "o1")],
        },
        Step {
            sign: Sign::Plus,
            merged: [A("P4", "o2"), B("P2", "N1")],
            produced: [B("P4", "N1"), A("P2", "o2")],
        },
        Step {
            sign: Sign::Plus,
            merged: [A("P1", "o1"), B("P4", "N1")],
            produced: [B("P1", "N1"), A("P4", "o1")],
        },
        Step {
            sign: Sign::Plus,
            merged: [A("P2", "o2"), B("P3", "N2")],
            produced: [B("P2", "N2"), A("P3", "o2")],
        },
    ];
    Ok(assemble_movie(
        format!("case2-p{p}-q{q}"),
        format!("prop12-p{p}-q{q}~"),
        case_elliptics(),
        start,
        steps,
        &[("o1", "o2"), ("o2", "o1")],
    ))
}

/// A disk foliated by a single positive elliptic point.
pub fn trivial_disk_movie() -> MoviePresentation {
    assemble_movie(
        "trivial-disk".into(),
        "disk".into(),
        vec![elliptic("P1", Sign::Plus, "B")],
        vec![Arc::A("P1", "o1")],
        Vec::new(),
        &[("o1", "o1")],
    )
}

/// Overtwisted disk with one negative elliptic point: census (2, 1, 2, 0).
pub fn one_negative_disk_movie() -> MoviePresentation {
    use Arc::{A, B};
    assemble_movie(
        "one-negative-disk".into(),
        "prop12-p4-q4".into(),
        vec![
            elliptic("P1", Sign::Plus, "x"),
            elliptic("P2", Sign::Plus, "y"),
            elliptic("N1", Sign::Minus, "p1"),
        ],
        vec![B("P1", "N1"), A("P2", "o1")],
        vec![
            Step {
                sign: Sign::Plus,
                merged: [B("P1", "N1"), A("P2", "o1")],
                produced: [B("P2", "N1"), A("P1", "o1")],
            },
            Step {
                sign: Sign::Plus,
                merged: [B("P2", "N1"), A("P1", "o1")],
                produced: [B("P1", "N1"), A("P2", "o1")],
            },
        ],
        &[("o1", "o1")],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{build_cyclic_cover, lift_monodromy, MonodromyLift};
    use crate::foliation::{giroux_graphs, recognize_ot_disk, singularity_census, validate_movie, SingularityCensus};
    use crate::mcg::{
        positivity_search, verify_relation_instance, PositivityOutcome, RelationRegistry, VerificationLevel,
    };

    #[test]
    fn lantern_relations_hold_exactly() {
        for (p, q) in [(2, 2), (3, 3), (4, 4), (3, 5), (2, 5)] {
            let (s, rels) = prop12_surface(p, q).unwrap();
            assert!(s.validate().is_empty(), "{:?}", s.validate());
            for r in &rels {
                let rep = verify_relation_instance(&s, r);
                assert!(rep.pass, "{p} {q} {}", r.name);
                assert_eq!(rep.level, VerificationLevel::Pi1Exact);
            }
        }
        let ex = example41(1, 1, 2).unwrap();
        let rep = verify_relation_instance(&ex.surface, &ex.relations[0]);
        assert!(rep.pass && rep.level == VerificationLevel::Pi1Exact);
    }

    #[test]
    fn positivity_by_exponent() {
        let (s, rels) = prop12_surface(4, 4).unwrap();
        let (reg, _) = RelationRegistry::verified(&s, &rels);
        match positivity_search(&prop12_word(4, 4, -1), &reg, 3) {
            PositivityOutcome::Found(c) => assert!(c.positive_word().is_positive()),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            positivity_search(&prop12_word(4, 4, -2), &reg, 3),
            PositivityOutcome::Unknown { .. }
        ));
    }

    #[test]
    fn cover_topology() {
        let pre = prop12(4, 4, -1).unwrap();
        let cov = build_cyclic_cover(&pre.surface, pre.cover.as_ref().unwrap()).unwrap();
        assert_eq!((cov.genus(), cov.boundary_count(), cov.is_connected()), (2, 10, true));
        let ex = example43();
        let cov = build_cyclic_cover(&ex.surface, ex.cover.as_ref().unwrap()).unwrap();
        assert_eq!((cov.genus(), cov.boundary_count()), (7, 4));
        match lift_monodromy(&cov, &ex.word).unwrap() {
            MonodromyLift::Lifted(w) => assert_eq!(w.len(), 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn case_movies_are_ot_disks() {
        for m in [case1_movie(4, 4).unwrap(), case2_movie(3, 3).unwrap()] {
            assert_eq!(validate_movie(&m), vec![], "{}", m.name);
            assert_eq!(singularity_census(&m).unwrap(), SingularityCensus::new(4, 2, 4, 1));
            let (gpp, gmm) = giroux_graphs(&m).unwrap();
            assert!(gpp.is_single_cycle() && gmm.is_tree());
            assert_eq!(recognize_ot_disk(&m).unwrap().e_minus(), 2);
        }
        assert!(case1_movie(3, 3).is_err());
        assert!(case2_movie(4, 4).is_err());
        assert!(case1_movie(4, 3).is_err());
    }

    #[test]
    fn one_negative_disk() {
        let m = one_negative_disk_movie();
        assert_eq!(validate_movie(&m), vec![]);
        assert_eq!(singularity_census(&m).unwrap(), SingularityCensus::new(2, 1, 2, 0));
        assert_eq!(recognize_ot_disk(&m).unwrap().e_minus(), 1);
    }

    #[test]
    fn trivial_disk_is_rejected() {
        let m = trivial_disk_movie();
        assert_eq!(validate_movie(&m), vec![]);
        assert_eq!(singularity_census(&m).unwrap(), SingularityCensus::new(1, 0, 0, 0));
        assert!(recognize_ot_disk(&m).is_err());
    }

    #[test]
    fn small_parameters_are_refused() {
        assert!(prop12(1, 4, 0).is_err());
        assert!(prop12(4, 1, 0).is_err());
        assert!(example41(1, 1, 1).is_err());
    }
}
