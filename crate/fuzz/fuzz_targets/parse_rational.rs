#![no_main]

use libfuzzer_sys::fuzz_target;
use ptkv_core::rat::{parse_rat, rat_to_frac_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Keep giant digit strings from dominating the run.
    if text.len() > 64 {
        return;
    }
    if let Ok(value) = parse_rat(text) {
        let canonical = rat_to_frac_string(&value);
        let reparsed = parse_rat(&canonical)
            .unwrap_or_else(|e| panic!("canonical form `{canonical}` unparseable: {e}"));
        assert_eq!(reparsed, value);
    }
});
