//! `fit`: estimate a filter from sample files with automatic regularization.

use crate::error::{io_ctx, CliError, Result};
use crate::formats::read_samples;
use crate::manifest::RunManifest;
use autoreg_core::autoreg::{estimate_alpha, variance_updates, TraceStatus};
use autoreg_core::estimation::{build_stats, zero_prehistory};
use autoreg_core::experiments::DEFAULT_REL_TOL;
use autoreg_core::wiener::{solve_wiener, to_eigen_domain};
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub struct FitArgs {
    pub x: PathBuf,
    pub d: PathBuf,
    pub l: usize,
    pub alpha0: f64,
    pub iters: usize,
    pub out: PathBuf,
}

fn status_name(status: TraceStatus) -> &'static str {
    match status {
        TraceStatus::Completed => "completed",
        TraceStatus::EarlyConverged => "early-converged",
        TraceStatus::DegenerateData => "degenerate-data",
        TraceStatus::IllPosed => "ill-posed",
        TraceStatus::Aborted => "aborted",
    }
}

pub fn run(args: &FitArgs) -> Result<()> {
    let start = Instant::now();
    if args.l == 0 {
        return Err(CliError::usage("--L must be >= 1"));
    }
    if !(args.alpha0.is_finite() && args.alpha0 > 0.0) {
        return Err(CliError::usage(format!(
            "--alpha0 must be finite and > 0, got {}",
            args.alpha0
        )));
    }
    let x = read_samples(&args.x)?;
    let d = read_samples(&args.d)?;
    if x.len() != d.len() {
        return Err(CliError::usage(format!(
            "input and desired signals differ in length: {} has {} samples, {} has {}",
            args.x.display(),
            x.len(),
            args.d.display(),
            d.len()
        )));
    }
    if x.is_empty() {
        return Err(CliError::usage("sample files are empty"));
    }
    if args.l > x.len() {
        return Err(CliError::usage(format!(
            "--L {} exceeds the record length {}",
            args.l,
            x.len()
        )));
    }

    let sig = zero_prehistory(x, d, args.l).map_err(CliError::from)?;
    let stats = build_stats(&sig)?;
    let es = to_eigen_domain(&stats)?;
    let trace = estimate_alpha(&es, args.alpha0, args.iters, DEFAULT_REL_TOL).map_err(|e| {
        CliError::numerical(format!(
            "regularization estimation failed ({}): {}",
            status_name(e.partial.status),
            e.source
        ))
    })?;
    let alpha = trace.final_alpha;
    let sol = solve_wiener(&es, alpha)?;
    let hp = variance_updates(&es, alpha, &sol.w_hat)?;
    let gamma = autoreg_core::autoreg::effective_params(es.lambda(), alpha);

    std::fs::create_dir_all(&args.out).map_err(io_ctx(&args.out, "creating"))?;

    let mut filter_csv = String::new();
    for w in &sol.w_hat {
        writeln!(filter_csv, "{w}").expect("string write");
    }
    write_text(&args.out.join("filter.csv"), &filter_csv)?;

    let mut trace_csv = String::from("iter,alpha,gamma,v_e,v_w\n");
    for s in &trace.steps {
        writeln!(
            trace_csv,
            "{},{},{},{},{}",
            s.iter, s.alpha, s.gamma, s.v_e, s.v_w
        )
        .expect("string write");
    }
    // Final alpha closes the trace; the step quantities at it were not part
    // of the iteration.
    writeln!(trace_csv, "{},{},,,", trace.steps.len(), alpha).expect("string write");
    write_text(&args.out.join("trace.csv"), &trace_csv)?;

    let summary = json!({
        "final_alpha": alpha,
        "gamma": gamma,
        "v_e": hp.v_e,
        "v_w": hp.v_w,
        "iterations_run": trace.steps.len(),
        "status": status_name(trace.status),
        "filter_length": args.l,
        "samples": sig.n(),
    });
    write_text(
        &args.out.join("summary.json"),
        &(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"),
    )?;

    let config = json!({
        "x": args.x.display().to_string(),
        "d": args.d.display().to_string(),
        "l": args.l,
        "alpha0": args.alpha0,
        "iters": args.iters,
        "prehistory": "zero-padded",
    });
    RunManifest::new(
        "fit",
        None,
        config,
        vec![
            "filter.csv".into(),
            "trace.csv".into(),
            "summary.json".into(),
        ],
        start.elapsed(),
    )
    .write(&args.out)?;

    println!(
        "fit: alpha = {alpha}, gamma = {gamma}, v_e = {}, v_w = {}, {} steps ({}) -> {}",
        hp.v_e,
        hp.v_w,
        trace.steps.len(),
        status_name(trace.status),
        args.out.display()
    );
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_ctx(path, "writing"))
}
