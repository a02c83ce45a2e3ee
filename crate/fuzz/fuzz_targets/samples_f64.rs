#![no_main]

use autoreg_cli::formats::parse_samples_f64;
use autoreg_core::autoreg::{gm_step_eigen, gm_step_matrix};
use autoreg_core::estimation::{build_stats, zero_prehistory};
use autoreg_core::wiener::to_eigen_domain;
use libfuzzer_sys::fuzz_target;
use std::path::Path;

// Decodes raw samples and, when they form a usable record, drives them
// through the estimation stack. Arbitrary bit patterns (NaN, infinities,
// subnormals) must surface as errors, never as panics.
fuzz_target!(|data: &[u8]| {
    let Ok(vals) = parse_samples_f64(data, Path::new("fuzz.f64")) else {
        return;
    };
    if vals.len() < 4 || vals.len() > 4096 {
        return;
    }
    let l = 1 + vals.len() % 8;
    let half = vals.len() / 2;
    let x = vals[..half].to_vec();
    let d = vals[half..2 * half].to_vec();
    let Ok(sig) = zero_prehistory(x, d, l) else {
        return;
    };
    let Ok(stats) = build_stats(&sig) else {
        return;
    };
    if let Ok(es) = to_eigen_domain(&stats) {
        let _ = gm_step_eigen(&es, 0.5);
    }
    let _ = gm_step_matrix(&stats, 0.5);
});
