//! The `plot` subcommand: renders sweep results and iteration traces to SVG.

use crate::error::{io_ctx, CliError, Result};
use crate::formats::CsvTable;
use crate::svg::{fmt_num, Figure, Scale, PALETTE};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub struct PlotArgs {
    pub csv: PathBuf,
    pub kind: String,
    pub out: PathBuf,
}

pub fn run(args: &PlotArgs) -> Result<()> {
    let table = CsvTable::read(&args.csv)?;
    let doc = render_kind(&table, &args.csv, &args.kind)?;
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io_ctx(parent, "creating"))?;
        }
    }
    fs::write(&args.out, doc).map_err(io_ctx(&args.out, "writing"))?;
    println!("plot: {} -> {}", args.kind, args.out.display());
    Ok(())
}

/// Renders one chart kind from a parsed table; `origin` names the table in
/// error messages.
pub fn render_kind(table: &CsvTable, origin: &Path, kind: &str) -> Result<String> {
    match kind.to_ascii_lowercase().as_str() {
        "misalignment-vs-n" => sweep_chart(
            table,
            origin,
            "m_auto_db",
            Some("m_oracle_db"),
            Scale::Linear,
            "Misalignment across data lengths",
            "misalignment (dB)",
        ),
        "alpha-vs-n" => sweep_chart(
            table,
            origin,
            "alpha_auto",
            Some("alpha_oracle"),
            Scale::Log,
            "Selected regularization across data lengths",
            "alpha",
        ),
        "alpha-trace" => trace_chart(table, origin),
        other => Err(CliError::usage(format!(
            "unknown plot kind {other:?} (expected misalignment-vs-N, alpha-vs-N, or alpha-trace)"
        ))),
    }
}

fn num(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// One sweep row that parsed cleanly.
struct SweepRow {
    n: f64,
    snr: f64,
    value: f64,
    oracle: Option<f64>,
}

/// Per-SNR chart of a metric against the record length, with thin lines per
/// realization and a thick mean per SNR level.
fn sweep_chart(
    table: &CsvTable,
    path: &Path,
    value_col: &str,
    oracle_col: Option<&str>,
    y_scale: Scale,
    title: &str,
    y_label: &str,
) -> Result<String> {
    let c_n = table.column("n", path)?;
    let c_snr = table.column("snr_db", path)?;
    let c_real = table.column("realization", path)?;
    let c_val = table.column(value_col, path)?;
    let c_status = table.header.iter().position(|h| h.trim() == "status");
    let c_oracle = oracle_col.and_then(|name| table.header.iter().position(|h| h.trim() == name));

    let mut rows: Vec<(u64, SweepRow)> = Vec::new();
    for raw in &table.rows {
        if let Some(cs) = c_status {
            if raw.get(cs).map(|s| s.trim()) != Some("ok") {
                continue;
            }
        }
        let parsed = (|| {
            // The record length sits on a logarithmic axis.
            let n = num(raw.get(c_n)?).filter(|n| *n > 0.0)?;
            let snr = num(raw.get(c_snr)?)?;
            let real = raw.get(c_real)?.trim().parse::<u64>().ok()?;
            let value = num(raw.get(c_val)?)?;
            if y_scale == Scale::Log && value <= 0.0 {
                return None;
            }
            let oracle = c_oracle.and_then(|c| raw.get(c)).and_then(|f| num(f));
            Some((real, SweepRow { n, snr, value, oracle }))
        })();
        if let Some(r) = parsed {
            rows.push(r);
        }
    }
    if rows.is_empty() {
        return Err(CliError::usage(format!(
            "{}: no plottable rows for column {value_col:?}",
            path.display()
        )));
    }

    let mut snrs: Vec<f64> = rows.iter().map(|(_, r)| r.snr).collect();
    snrs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    snrs.dedup();
    let mut ns: Vec<f64> = rows.iter().map(|(_, r)| r.n).collect();
    ns.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    ns.dedup();

    let y_all: Vec<f64> = rows
        .iter()
        .flat_map(|(_, r)| r.oracle.iter().copied().chain([r.value]).collect::<Vec<_>>())
        .filter(|v| y_scale == Scale::Linear || *v > 0.0)
        .collect();
    let y_lo = y_all.iter().copied().fold(f64::INFINITY, f64::min);
    let y_hi = y_all.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut fig = Figure::new(
        title,
        "record length N (samples)",
        y_label,
        Scale::Log,
        (ns[0], ns[ns.len() - 1]),
        y_scale,
        (y_lo, y_hi),
    );
    fig.set_x_ticks(
        ns.iter()
            .map(|&n| (n, format!("{}", n.round() as i64)))
            .collect(),
    );

    let mut any_oracle = false;
    for (gi, &snr) in snrs.iter().enumerate() {
        let color = PALETTE[gi % PALETTE.len()];
        let mut reals: Vec<u64> = rows
            .iter()
            .filter(|(_, r)| r.snr == snr)
            .map(|(real, _)| *real)
            .collect();
        reals.sort_unstable();
        reals.dedup();
        for &real in &reals {
            let mut pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|(rl, r)| *rl == real && r.snr == snr)
                .map(|(_, r)| (r.n, r.value))
                .collect();
            pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
            fig.polyline(&pts, color, 1.1, 0.3, false);
        }
        let mean_pts = mean_by_n(&ns, rows.iter().filter(|(_, r)| r.snr == snr).map(|(_, r)| (r.n, r.value)));
        fig.polyline(&mean_pts, color, 2.8, 1.0, false);
        let oracle_pts = mean_by_n(
            &ns,
            rows.iter()
                .filter(|(_, r)| r.snr == snr)
                .filter_map(|(_, r)| r.oracle.map(|o| (r.n, o))),
        );
        if !oracle_pts.is_empty() && (y_scale == Scale::Linear || oracle_pts.iter().all(|p| p.1 > 0.0)) {
            fig.polyline(&oracle_pts, color, 1.8, 0.85, true);
            any_oracle = true;
        }
        fig.legend_entry(&format!("SNR {} dB", fmt_num(snr)), color, false);
    }
    if any_oracle {
        fig.legend_entry("grid-search reference", "#777777", true);
    }
    Ok(fig.render())
}

/// Means of `values` grouped by the record-length grid `ns`.
fn mean_by_n(ns: &[f64], values: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut sums = vec![(0.0f64, 0usize); ns.len()];
    for (n, v) in values {
        if let Some(i) = ns.iter().position(|&g| g == n) {
            sums[i].0 += v;
            sums[i].1 += 1;
        }
    }
    ns.iter()
        .zip(sums)
        .filter(|(_, (_, count))| *count > 0)
        .map(|(&n, (sum, count))| (n, sum / count as f64))
        .collect()
}

/// Regularization against iteration index, one thin line per trace plus the
/// across-trace mean when there is more than one.
fn trace_chart(table: &CsvTable, path: &Path) -> Result<String> {
    type TraceGroup = (Vec<String>, Vec<(f64, f64)>);
    let c_iter = table.column("iter", path)?;
    let c_alpha = table.column("alpha", path)?;
    let group_cols: Vec<usize> = ["n", "snr_db", "realization"]
        .iter()
        .filter_map(|name| table.header.iter().position(|h| h.trim() == *name))
        .collect();

    let mut groups: Vec<TraceGroup> = Vec::new();
    for raw in &table.rows {
        let (iter, alpha) = match (raw.get(c_iter).and_then(|f| num(f)), raw.get(c_alpha).and_then(|f| num(f))) {
            (Some(i), Some(a)) if a > 0.0 => (i, a),
            _ => continue,
        };
        let key: Vec<String> = group_cols
            .iter()
            .map(|&c| raw.get(c).map(|s| s.trim().to_string()).unwrap_or_default())
            .collect();
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((iter, alpha)),
            None => groups.push((key, vec![(iter, alpha)])),
        }
    }
    for (_, pts) in &mut groups {
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    }
    if groups.is_empty() {
        return Err(CliError::usage(format!(
            "{}: no plottable rows for columns \"iter\", \"alpha\"",
            path.display()
        )));
    }

    let all: Vec<(f64, f64)> = groups.iter().flat_map(|(_, pts)| pts.iter().copied()).collect();
    let x_hi = all.iter().map(|p| p.0).fold(0.0f64, f64::max);
    let y_lo = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let y_hi = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);

    let mut fig = Figure::new(
        "Regularization trajectory",
        "iteration",
        "alpha",
        Scale::Linear,
        (0.0, x_hi.max(1.0)),
        Scale::Log,
        (y_lo, y_hi),
    );
    if x_hi <= 14.0 {
        fig.set_x_ticks((0..=x_hi as i64).map(|i| (i as f64, format!("{i}"))).collect());
    }

    let single = groups.len() == 1;
    for (_, pts) in &groups {
        if single {
            fig.polyline(pts, PALETTE[0], 2.8, 1.0, false);
        } else {
            fig.polyline(pts, PALETTE[0], 1.0, 0.25, false);
        }
    }
    if single {
        fig.legend_entry("trace", PALETTE[0], false);
    } else {
        let max_len = groups.iter().map(|(_, pts)| pts.len()).max().unwrap_or(0);
        let mut mean_pts = Vec::new();
        for i in 0..max_len {
            let vals: Vec<f64> = groups.iter().filter_map(|(_, pts)| pts.get(i).map(|p| p.1)).collect();
            if !vals.is_empty() {
                let x = groups
                    .iter()
                    .find_map(|(_, pts)| pts.get(i).map(|p| p.0))
                    .expect("nonempty by construction");
                mean_pts.push((x, vals.iter().sum::<f64>() / vals.len() as f64));
            }
        }
        fig.polyline(&mean_pts, PALETTE[1], 3.0, 1.0, false);
        fig.legend_entry("per-trace", PALETTE[0], false);
        fig.legend_entry("mean", PALETTE[1], false);
    }
    Ok(fig.render())
}
