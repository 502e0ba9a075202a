#![no_main]

use libfuzzer_sys::fuzz_target;
use obk_core::formats::{parse_word_file, word_file};
use obk_core::presets::example43;

fuzz_target!(|data: &str| {
    let Ok(f) = parse_word_file(data) else {
        return;
    };
    let pre = example43();
    if f.word.check_curves(&pre.surface).is_ok() {
        let back = word_file(&pre.surface, &f.word);
        assert_eq!(back.word, f.word);
    }
});
