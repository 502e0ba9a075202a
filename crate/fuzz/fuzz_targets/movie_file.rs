#![no_main]

use libfuzzer_sys::fuzz_target;
use obk_core::foliation::{giroux_graphs, parse_movie, recognize_ot_disk, singularity_census, validate_movie};

fuzz_target!(|data: &str| {
    let Ok(m) = parse_movie(data) else {
        return;
    };
    if !validate_movie(&m).is_empty() {
        assert!(recognize_ot_disk(&m).is_err());
        return;
    }
    let _ = singularity_census(&m);
    let _ = giroux_graphs(&m);
    let _ = recognize_ot_disk(&m);
});
