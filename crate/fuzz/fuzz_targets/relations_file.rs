#![no_main]

use libfuzzer_sys::fuzz_target;
use obk_core::formats::parse_relations;
use obk_core::presets::prop12_surface;

fuzz_target!(|data: &str| {
    let Ok(rels) = parse_relations(data) else {
        return;
    };
    let (s, _) = prop12_surface(2, 3).unwrap();
    for r in &rels {
        let _ = r.lhs.check_curves(&s);
        let _ = r.rhs.check_curves(&s);
    }
});
