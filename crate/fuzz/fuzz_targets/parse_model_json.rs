#![no_main]

use libfuzzer_sys::fuzz_target;
use ptkv_core::model::json::ModelFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = ModelFile::from_json_str(text) else {
        return;
    };
    // Violation scanning must never panic, whatever the file contains.
    let Ok(violations) = file.violations() else {
        return;
    };
    if violations.is_empty() {
        let model = file.build().expect("violation-free files build");
        assert!(model.validate().is_ok());
        // Canonical serialization round-trips to the same model.
        let reloaded = ModelFile::from_json_str(&model.to_json_string())
            .expect("canonical form parses")
            .build()
            .expect("canonical form builds");
        assert_eq!(model, reloaded);
    } else {
        assert!(file.build().is_err());
    }
});
