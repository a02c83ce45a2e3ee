//! `experiment`: run a configured sweep and serialize the results.
//!
//! Three tables come out of a run, all with deterministic bytes for a fixed
//! configuration: `results.csv` has one row per (n, snr, realization),
//! `summary.csv` aggregates each cell, and `traces.csv` records the
//! regularization path of every realization.

use crate::config::ExperimentConfig;
use crate::error::{io_ctx, CliError, Result};
use crate::formats::csv_field;
use crate::manifest::RunManifest;
use autoreg_core::experiments::{mismatch_floor_db, run_scenario, RealizationResult};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

pub struct ExperimentArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    pub threads: Option<usize>,
}

struct CellRows {
    n: usize,
    snr_db: f64,
    floor_db: f64,
    results: Vec<std::result::Result<RealizationResult, autoreg_core::Error>>,
}

pub fn run(args: &ExperimentArgs) -> Result<()> {
    let start = Instant::now();
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Ok(raw) = std::env::var("AUTOREG_SEED") {
        let seed: u64 = raw.trim().parse().map_err(|_| {
            CliError::usage(format!("AUTOREG_SEED must be an unsigned integer, got {raw:?}"))
        })?;
        cfg.seed = seed;
    }

    let cells = compute(&cfg, args.threads)?;

    std::fs::create_dir_all(&args.out).map_err(io_ctx(&args.out, "creating"))?;
    write_results(&args.out, &cells)?;
    write_summary(&args.out, &cells)?;
    write_traces(&args.out, &cells)?;

    let resolved = serde_json::to_value(&cfg).expect("config serializes");
    RunManifest::new(
        "experiment",
        Some(cfg.seed),
        resolved,
        vec![
            "results.csv".into(),
            "summary.csv".into(),
            "traces.csv".into(),
        ],
        start.elapsed(),
    )
    .write(&args.out)?;

    let total: usize = cells.iter().map(|c| c.results.len()).sum();
    println!(
        "experiment: {} cells, {} realizations -> {}",
        cells.len(),
        total,
        args.out.display()
    );
    Ok(())
}

/// Runs every sweep cell, optionally on a bounded thread pool.
fn compute(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<Vec<CellRows>> {
    let impulse = cfg.impulse()?;
    let run_all = || -> Result<Vec<CellRows>> {
        let mut cells = Vec::new();
        for &n in &cfg.n {
            for &snr_db in &cfg.snr_db {
                let scn = cfg.cell(n, snr_db, &impulse)?;
                cells.push(CellRows {
                    n,
                    snr_db,
                    floor_db: mismatch_floor_db(&impulse, cfg.l),
                    results: run_scenario(&scn),
                });
            }
        }
        Ok(cells)
    };
    match threads {
        None => run_all(),
        Some(k) => {
            if k == 0 {
                return Err(CliError::usage("--threads must be >= 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::usage(format!("cannot build thread pool: {e}")))?;
            pool.install(run_all)
        }
    }
}

fn write_results(out: &std::path::Path, cells: &[CellRows]) -> Result<()> {
    let mut text =
        String::from("n,snr_db,realization,alpha_auto,m_auto_db,alpha_oracle,m_oracle_db,floor_db,status\n");
    for cell in cells {
        for (r, res) in cell.results.iter().enumerate() {
            match res {
                Ok(res) => writeln!(
                    text,
                    "{},{},{},{},{},{},{},{},ok",
                    cell.n,
                    cell.snr_db,
                    r,
                    res.alpha_auto,
                    res.m_auto_db,
                    res.alpha_oracle,
                    res.m_oracle_db,
                    cell.floor_db
                )
                .expect("string write"),
                Err(e) => writeln!(
                    text,
                    "{},{},{},,,,,{},{}",
                    cell.n,
                    cell.snr_db,
                    r,
                    cell.floor_db,
                    csv_field(&e.to_string())
                )
                .expect("string write"),
            }
        }
    }
    let path = out.join("results.csv");
    std::fs::write(&path, text).map_err(io_ctx(&path, "writing"))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in summaries"));
    let mid = s.len() / 2;
    if s.len() % 2 == 1 {
        s[mid]
    } else {
        0.5 * (s[mid - 1] + s[mid])
    }
}

fn write_summary(out: &std::path::Path, cells: &[CellRows]) -> Result<()> {
    let mut text = String::from(
        "n,snr_db,realizations_ok,mean_m_auto_db,median_m_auto_db,mean_m_oracle_db,median_m_oracle_db,median_gap_db,mean_alpha_auto,floor_db\n",
    );
    for cell in cells {
        let ok: Vec<&RealizationResult> =
            cell.results.iter().filter_map(|r| r.as_ref().ok()).collect();
        if ok.is_empty() {
            writeln!(text, "{},{},0,,,,,,,{}", cell.n, cell.snr_db, cell.floor_db)
                .expect("string write");
            continue;
        }
        let m_auto: Vec<f64> = ok.iter().map(|r| r.m_auto_db).collect();
        let m_oracle: Vec<f64> = ok.iter().map(|r| r.m_oracle_db).collect();
        let gaps: Vec<f64> = ok.iter().map(|r| r.m_auto_db - r.m_oracle_db).collect();
        let alphas: Vec<f64> = ok.iter().map(|r| r.alpha_auto).collect();
        writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{}",
            cell.n,
            cell.snr_db,
            ok.len(),
            mean(&m_auto),
            median(&m_auto),
            mean(&m_oracle),
            median(&m_oracle),
            median(&gaps),
            mean(&alphas),
            cell.floor_db
        )
        .expect("string write");
    }
    let path = out.join("summary.csv");
    std::fs::write(&path, text).map_err(io_ctx(&path, "writing"))
}

fn write_traces(out: &std::path::Path, cells: &[CellRows]) -> Result<()> {
    let mut text = String::from("n,snr_db,realization,iter,alpha\n");
    for cell in cells {
        for (r, res) in cell.results.iter().enumerate() {
            if let Ok(res) = res {
                for (i, alpha) in res.trace.alphas().iter().enumerate() {
                    writeln!(text, "{},{},{},{},{}", cell.n, cell.snr_db, r, i, alpha)
                        .expect("string write");
                }
            }
        }
    }
    let path = out.join("traces.csv");
    std::fs::write(&path, text).map_err(io_ctx(&path, "writing"))
}
