#![no_main]

use libfuzzer_sys::fuzz_target;
use obk_core::formats::{parse_scenario, FileRef};
use obk_core::scenario::{resolve_scenario, verdict_report};

fuzz_target!(|data: &str| {
    let Ok(s) = parse_scenario(data) else {
        return;
    };
    let mut read = |r: &FileRef| Err(format!("{} is not available", r.path));
    if let Ok(resolved) = resolve_scenario(&s, 1, &mut read) {
        let _ = verdict_report(&s, &resolved);
    }
});
