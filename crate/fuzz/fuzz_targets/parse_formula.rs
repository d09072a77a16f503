#![no_main]

use libfuzzer_sys::fuzz_target;
use ptkv_core::syntax::{parse, print};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(formula) = parse(text) {
        // Accepted formulas carry in-range thresholds and survive a
        // print/parse round trip structurally unchanged.
        assert!(formula.thresholds_well_formed());
        let printed = print(&formula);
        let reparsed = parse(&printed)
            .unwrap_or_else(|e| panic!("printer emitted unparseable `{printed}`: {e}"));
        assert_eq!(reparsed, formula);
    }
});
