#![no_main]

use libfuzzer_sys::fuzz_target;
use obk_core::surface::make_surface;

fuzz_target!(|data: &str| {
    let s = make_surface(2, 3).unwrap();
    let Ok(w) = s.parse_word(data) else {
        return;
    };
    let back = s.parse_word(&s.display_word(&w)).expect("displayed word parses");
    assert_eq!(back, w);
    let _ = s.homology_class(data);
    let _ = w.cyclically_reduced();
});
