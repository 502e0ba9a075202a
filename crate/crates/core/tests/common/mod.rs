//! Strategies and brute-force oracles shared by the property suites and the
//! acceptance target.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use obk_core::covers::{build_cyclic_cover, lift_curve, lift_twist_power, CoverSpec, TwistLift};
use obk_core::formats::{parse_scenario, FileRef, ScenarioFile};
use obk_core::linalg::IntMatrix;
use obk_core::mcg::{homology_action, transvection, CurveSystem, TwistWord};
use obk_core::scenario::{resolve_scenario, ResolvedScenario};
use obk_core::surface::{make_surface, Curve, CurveKind, Surface};
use obk_core::words::{Letter, Word};
use proptest::prelude::*;

pub fn presets_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

pub const SCENARIOS: [&str; 7] = [
    "prop12-case1",
    "prop12-case2",
    "prop12-n-2",
    "tight-only",
    "empty",
    "universally-tight",
    "contradiction",
];

pub fn load_scenario(name: &str) -> (ScenarioFile, ResolvedScenario) {
    let dir = presets_dir();
    let text = std::fs::read_to_string(dir.join(format!("{name}.scenario.json"))).unwrap();
    let s = parse_scenario(&text).unwrap();
    let mut read = |r: &FileRef| std::fs::read_to_string(dir.join(&r.path)).map_err(|e| e.to_string());
    let resolved = resolve_scenario(&s, obk_core::mcg::DEFAULT_SEARCH_DEPTH, &mut read).unwrap();
    (s, resolved)
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A random reduced word on `rank` generators.
pub fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 1..=max_len).prop_map(|letters| {
        Word::from_letters(letters.into_iter().map(|(g, inv)| {
            let l = Letter::new(g);
            if inv {
                l.inv()
            } else {
                l
            }
        }))
    })
}

/// Surface with up to three random interior curves `c0, c1, ..`.
pub fn arb_surface_with_curves(max_genus: usize, max_boundary: usize) -> impl Strategy<Value = Surface> {
    (0..=max_genus, 1..=max_boundary)
        .prop_filter("non-trivial homology", |(g, r)| 2 * g + r > 1)
        .prop_flat_map(|(g, r)| {
            let rank = 2 * g + r - 1;
            (Just((g, r)), prop::collection::vec(arb_word(rank, 6), 1..=3))
        })
        .prop_map(|((g, r), words)| {
            let mut s = make_surface(g, r).unwrap();
            for (i, w) in words.into_iter().enumerate() {
                let w = w.cyclically_reduced();
                let c = Curve::from_word(&s, format!("c{i}"), w, CurveKind::Interior);
                s.add_curve(c).unwrap();
            }
            s
        })
}

pub fn arb_cover_case() -> impl Strategy<Value = (Surface, CoverSpec)> {
    (arb_surface_with_curves(3, 5), 1u32..=6).prop_flat_map(|(s, k)| {
        let rank = s.rank();
        (Just(s), prop::collection::vec(0..i64::from(k), rank)).prop_map(move |(s, v)| {
            let spec = CoverSpec::new(k, v).unwrap();
            (s, spec)
        })
    })
}

/// Number of orbits of the sheet permutation induced by tracing `word`.
fn orbit_count(k: u32, next: impl Fn(u32) -> u32) -> u32 {
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for s in 0..k {
        if seen.insert(s) {
            orbits += 1;
            let mut t = next(s);
            while seen.insert(t) {
                t = next(t);
            }
        }
    }
    orbits
}

/// Checks the cover against brute-force enumeration: faces of the lifted
/// ribbon graph, components by graph search, sheet orbits of boundary
/// words and curves, and twist liftability.
pub fn check_cover_case(s: &Surface, spec: &CoverSpec, exponent: i64) -> Result<(), String> {
    let cover = build_cyclic_cover(s, spec).map_err(|e| e.to_string())?;
    let k = spec.k;
    let ensure = |ok: bool, what: String| if ok { Ok(()) } else { Err(what) };

    ensure(
        cover.euler_characteristic() == i64::from(k) * s.euler_characteristic(),
        format!(
            "chi: {} vs {}*{}",
            cover.euler_characteristic(),
            k,
            s.euler_characteristic()
        ),
    )?;
    let r = cover.ribbon();
    ensure(
        r.vertex_count() as i64 - r.edge_count() as i64 == cover.euler_characteristic(),
        "chi of the lifted graph".into(),
    )?;

    let faces = r.faces().len();
    let formula: u32 = s
        .boundary_words()
        .iter()
        .map(|w| gcd(spec.evaluate(&w.abelianize(s.rank())), k))
        .sum();
    let orbits: u32 = s
        .boundary_words()
        .iter()
        .map(|w| orbit_count(k, |t| cover.trace_word(w, t).1))
        .sum();
    ensure(
        faces == cover.boundary_count() && formula as usize == faces && orbits == formula,
        format!(
            "boundaries: faces {faces}, reported {}, gcd sum {formula}, orbits {orbits}",
            cover.boundary_count()
        ),
    )?;

    let comps: BTreeSet<usize> = r.components().into_iter().collect();
    let want = spec.lambda.values.iter().fold(k, |g, &v| gcd(g, v));
    ensure(
        comps.len() == cover.components() && comps.len() == want as usize,
        format!(
            "components: search {}, reported {}, gcd {want}",
            comps.len(),
            cover.components()
        ),
    )?;
    let c = cover.components() as i64;
    ensure(
        2 * c - cover.euler_characteristic() - cover.boundary_count() as i64 == 2 * c * cover.genus() as i64,
        "genus formula".into(),
    )?;

    for curve in s.curves() {
        let shift = spec.evaluate(&curve.homology);
        let g = gcd(shift, k);
        let lifted = lift_curve(&cover, &curve.name).map_err(|e| e.to_string())?;
        let orbits = orbit_count(k, |t| cover.trace_word(&curve.word, t).1);
        ensure(
            lifted.components.len() == g as usize && orbits == g,
            format!(
                "lift of {}: {} components, gcd {g}, orbits {orbits}",
                curve.name,
                lifted.components.len()
            ),
        )?;
        for comp in &lifted.components {
            let down = cover.projection().mul_vec(&comp.homology_in_cover);
            let want: Vec<i64> = curve.homology.iter().map(|x| x * i64::from(comp.degree)).collect();
            ensure(down == want, format!("projection of {}", comp.lift_name))?;
        }
        let d = i64::from(k / g);
        match lift_twist_power(&cover, &curve.name, exponent).map_err(|e| e.to_string())? {
            TwistLift::Lifted(factors) => ensure(
                exponent % d == 0 && factors.len() == g as usize && factors.iter().all(|f| f.exponent == exponent / d),
                format!("twist {}^{exponent} lifted with d = {d}", curve.name),
            )?,
            TwistLift::NotLiftable(_) => ensure(
                exponent % d != 0,
                format!("twist {}^{exponent} refused with d = {d}", curve.name),
            )?,
        }
    }
    Ok(())
}

pub fn inverse_of(m: &IntMatrix, inv: &IntMatrix) -> bool {
    (m * inv) == IntMatrix::identity(m.rows())
}

/// Transvection preserves the form, and `T_{A c} = A T_c A^-1` for the
/// action `A` of a random word on the surface's curves.
pub fn check_mcg_case(s: &Surface, word: &TwistWord, class: &[i64]) -> Result<(), String> {
    let m = s.intersection();
    let t = transvection(m, class);
    if &(&t.transpose() * m) * &t != *m {
        return Err("transvection does not preserve the form".into());
    }
    let a = homology_action(s, word).map_err(|e| e.to_string())?.matrix;
    let a_inv = homology_action(s, &word.inverse()).map_err(|e| e.to_string())?.matrix;
    if !inverse_of(&a, &a_inv) {
        return Err("inverse word does not invert the action".into());
    }
    let lhs = transvection(m, &a.mul_vec(class));
    let rhs = &(&a * &t) * &a_inv;
    if lhs != rhs {
        return Err("conjugation covariance fails".into());
    }
    if s.genus() == 0 && a != IntMatrix::identity(s.rank()) {
        return Err("planar word acts non-trivially on homology".into());
    }
    Ok(())
}

pub fn arb_mcg_case() -> impl Strategy<Value = (Surface, TwistWord, Vec<i64>)> {
    arb_surface_with_curves(3, 4).prop_flat_map(|s| {
        let names: Vec<String> = s.curves().iter().map(|c| c.name.clone()).collect();
        let rank = s.rank();
        let factors = prop::collection::vec((prop::sample::select(names), -3i64..=3), 0..=5);
        (Just(s), factors, prop::collection::vec(-3i64..=3, rank)).prop_map(|(s, f, class)| {
            let pairs: Vec<(&str, i64)> = f.iter().map(|(c, e)| (c.as_str(), *e)).collect();
            let w = TwistWord::from_pairs(&pairs);
            (s, w, class)
        })
    })
}
