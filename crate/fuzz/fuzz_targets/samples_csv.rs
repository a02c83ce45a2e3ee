#![no_main]

use autoreg_cli::formats::parse_samples_csv;
use libfuzzer_sys::fuzz_target;
use std::path::Path;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let _ = parse_samples_csv(&text, Path::new("fuzz.csv"));
});
