//! Per-run records, summaries and the three output formats.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::args::OutputFormat;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub method: String,
    pub k_init: usize,
    pub run: usize,
    pub seed: u64,
    pub final_k: usize,
    pub iterations: usize,
    pub objective: f64,
    /// 100 × mean silhouette; absent when fewer than two clusters remain.
    pub quality: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub dataset: String,
    pub method: String,
    pub k_init: usize,
    pub runs: usize,
    pub median_final_k: f64,
    pub median_quality: Option<f64>,
    pub best_quality: Option<f64>,
    pub best_run: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodQuality {
    pub method: String,
    pub quality: Option<f64>,
}

/// One line of the comparison table: median quality of every method on one
/// dataset at one initial K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub dataset: String,
    pub k_init: usize,
    /// Median final K of the reference adaptive method (eiagmfi, else agmfi,
    /// else isodata), or the initial K when only K-Means was compared.
    pub final_k: f64,
    pub quality: Vec<MethodQuality>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum JsonRecord {
    Run(RunRecord),
    Summary(Summary),
    Comparison(ComparisonRow),
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}

pub fn summarize(records: &[RunRecord]) -> Summary {
    let first = &records[0];
    let qualities: Vec<f64> = records.iter().filter_map(|r| r.quality).collect();
    let best = records
        .iter()
        .filter_map(|r| r.quality.map(|q| (r.run, q)))
        .fold(None, |best: Option<(usize, f64)>, (run, q)| match best {
            Some((_, bq)) if bq >= q => best,
            _ => Some((run, q)),
        });
    let ks: Vec<f64> = records.iter().map(|r| r.final_k as f64).collect();
    Summary {
        dataset: first.dataset.clone(),
        method: first.method.clone(),
        k_init: first.k_init,
        runs: records.len(),
        median_final_k: median(&ks).unwrap_or(0.0),
        median_quality: median(&qualities),
        best_quality: best.map(|b| b.1),
        best_run: best.map(|b| b.0),
    }
}

fn fmt_quality(q: Option<f64>) -> String {
    q.map(|q| format!("{q:.3}")).unwrap_or_else(|| "-".into())
}

pub fn write_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json_lines<W: Write>(mut out: W, records: &[JsonRecord]) -> Result<(), CliError> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_run_table<W: Write>(
    mut out: W,
    records: &[RunRecord],
    summary: &Summary,
    shape: (usize, usize),
) -> Result<(), CliError> {
    writeln!(
        out,
        "dataset: {} ({} x {})",
        summary.dataset, shape.0, shape.1
    )?;
    writeln!(
        out,
        "method:  {}  k_init: {}",
        summary.method, summary.k_init
    )?;
    writeln!(
        out,
        "{:>4} {:>20} {:>8} {:>10} {:>16} {:>10}",
        "run", "seed", "final_k", "iterations", "objective", "quality"
    )?;
    for r in records {
        writeln!(
            out,
            "{:>4} {:>20} {:>8} {:>10} {:>16.6} {:>10}",
            r.run,
            r.seed,
            r.final_k,
            r.iterations,
            r.objective,
            fmt_quality(r.quality)
        )?;
    }
    writeln!(
        out,
        "median quality: {}  best quality: {}{}  median final_k: {}",
        fmt_quality(summary.median_quality),
        fmt_quality(summary.best_quality),
        summary
            .best_run
            .map(|r| format!(" (run {r})"))
            .unwrap_or_default(),
        summary.median_final_k
    )?;
    Ok(())
}

pub fn write_comparison_table<W: Write>(
    mut out: W,
    rows: &[ComparisonRow],
) -> Result<(), CliError> {
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let name_width = rows
        .iter()
        .map(|r| r.dataset.len())
        .max()
        .unwrap_or(7)
        .max(7);
    write!(
        out,
        "{:<name_width$} {:>9} {:>7}",
        "dataset", "initial_k", "final_k"
    )?;
    for q in &first.quality {
        write!(out, " {:>12}", q.method)?;
    }
    writeln!(out)?;
    for row in rows {
        write!(
            out,
            "{:<name_width$} {:>9} {:>7}",
            row.dataset, row.k_init, row.final_k
        )?;
        for q in &row.quality {
            write!(out, " {:>12}", fmt_quality(q.quality))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn emit<W: Write>(
    out: W,
    format: OutputFormat,
    records: &[RunRecord],
    json: Vec<JsonRecord>,
    table: impl FnOnce(W) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match format {
        OutputFormat::Table => table(out),
        OutputFormat::Csv => write_csv(out, records),
        OutputFormat::JsonLines => write_json_lines(out, &json),
    }
}
