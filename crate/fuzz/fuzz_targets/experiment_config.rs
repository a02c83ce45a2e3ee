#![no_main]

use autoreg_cli::config::ExperimentConfig;
use libfuzzer_sys::fuzz_target;
use std::path::Path;

// Parses and validates attacker-controlled sweep configs. Validation is
// value-level only; nothing here may allocate proportionally to the values.
fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let _ = ExperimentConfig::parse(&text, Path::new("fuzz.json"));
});
