#![no_main]

use autoreg_cli::formats::CsvTable;
use autoreg_cli::plot::render_kind;
use libfuzzer_sys::fuzz_target;
use std::path::Path;

// Runs every chart kind over an attacker-controlled table. Rendering may
// refuse the table but must not panic on hostile values (non-finite numbers,
// zeros on log axes, absurd magnitudes).
fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let Ok(table) = CsvTable::parse(&text, Path::new("fuzz.csv")) else {
        return;
    };
    for kind in ["misalignment-vs-N", "alpha-vs-N", "alpha-trace"] {
        let _ = render_kind(&table, Path::new("fuzz.csv"), kind);
    }
});
