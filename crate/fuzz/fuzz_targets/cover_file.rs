#![no_main]

use libfuzzer_sys::fuzz_target;
use obk_core::covers::{build_cyclic_cover, lift_monodromy};
use obk_core::formats::parse_cover;
use obk_core::presets::example43;

fuzz_target!(|data: &str| {
    let pre = example43();
    let Ok(spec) = parse_cover(data, &pre.surface) else {
        return;
    };
    let Ok(cover) = build_cyclic_cover(&pre.surface, &spec) else {
        return;
    };
    assert_eq!(
        cover.euler_characteristic(),
        i64::from(spec.k) * pre.surface.euler_characteristic()
    );
    let _ = lift_monodromy(&cover, &pre.word);
});
