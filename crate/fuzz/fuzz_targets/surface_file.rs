#![no_main]

use libfuzzer_sys::fuzz_target;
use obk_core::formats::{parse_surface, surface_file, to_json};

fuzz_target!(|data: &str| {
    let Ok(b) = parse_surface(data) else {
        return;
    };
    let _ = b.surface.validate();
    let text = to_json(&surface_file(&b.surface, &b.relations));
    let again = parse_surface(&text).expect("written surface parses");
    assert_eq!(again.surface, b.surface);
});
