mod common;

use obk_core::foliation::{
    euler_characteristic, parse_movie, recognize_ot_disk, relabel, rotate_once, self_linking, singularity_census,
    validate_movie, MoviePresentation,
};
use proptest::prelude::*;

const MOVIES: [&str; 4] = ["case1-p4-q4", "case2-p3-q3", "one-negative-disk", "trivial-disk"];

fn load(name: &str) -> MoviePresentation {
    let text = std::fs::read_to_string(common::presets_dir().join(format!("{name}.movie.json"))).unwrap();
    parse_movie(&text).unwrap()
}

#[test]
fn bundled_disks_have_euler_characteristic_one() {
    for name in MOVIES {
        let m = load(name);
        assert!(validate_movie(&m).is_empty(), "{name}: {:?}", validate_movie(&m));
        let c = singularity_census(&m).unwrap();
        assert_eq!(euler_characteristic(&c), 1, "{name}");
        if recognize_ot_disk(&m).is_ok() {
            assert_eq!(self_linking(&c), 1, "{name}");
        }
    }
}

#[test]
fn flipping_one_event_sign_moves_sl_by_two() {
    for name in MOVIES {
        let m = load(name);
        let sl = self_linking(&singularity_census(&m).unwrap());
        for i in 0..m.events.len() {
            let mut bad = m.clone();
            bad.events[i].sign = bad.events[i].sign.flip();
            let c = singularity_census(&bad).unwrap();
            assert_eq!((self_linking(&c) - sl).abs(), 2, "{name} event {i}");
            assert_eq!(euler_characteristic(&c), 1);
            if recognize_ot_disk(&m).is_ok() {
                assert!(
                    recognize_ot_disk(&bad).is_err(),
                    "{name}: flipping event {i} went unnoticed"
                );
            }
        }
    }
}

#[test]
fn truncated_movies_fail_validation() {
    for name in MOVIES {
        let m = load(name);
        for keep in 1..m.pages.len() {
            let mut t = m.clone();
            t.pages.truncate(keep);
            t.events.truncate(keep.saturating_sub(1));
            assert!(!validate_movie(&t).is_empty(), "{name} truncated to {keep} pages");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn census_ignores_labels_and_starting_page(which in 0usize..MOVIES.len(), turns in 0usize..8, tag in "[a-z]{1,3}") {
        let m = load(MOVIES[which]);
        let census = singularity_census(&m).unwrap();
        let accepted = recognize_ot_disk(&m).is_ok();
        let renamed = relabel(&m, &|s| format!("{tag}_{s}"));
        prop_assert!(validate_movie(&renamed).is_empty());
        prop_assert_eq!(singularity_census(&renamed).unwrap(), census);
        let mut r = m.clone();
        for _ in 0..turns {
            r = rotate_once(&r);
        }
        let d = validate_movie(&r);
        prop_assert!(d.is_empty(), "{:?}", d);
        prop_assert_eq!(singularity_census(&r).unwrap(), census);
        prop_assert_eq!(recognize_ot_disk(&r).is_ok(), accepted);
    }
}
