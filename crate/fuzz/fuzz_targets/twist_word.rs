#![no_main]

use libfuzzer_sys::fuzz_target;
use obk_core::mcg::TwistWord;

fuzz_target!(|data: &str| {
    let Ok(w) = TwistWord::parse(data) else {
        return;
    };
    let back = TwistWord::parse(&w.to_string()).expect("displayed word parses");
    assert_eq!(back, w);
    assert_eq!(w.inverse().inverse(), w);
});
