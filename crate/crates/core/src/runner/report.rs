use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::Strategy;
use super::format::{format_percent, format_sig6};
use super::{Result, RunnerError};
use crate::learn::{CvMode, SweepStats};

/// Marker for an absent statistic, as in tables where nothing improved.
pub const MISSING: &str = "-";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub p: f64,
    pub accuracy: f64,
    pub correct: usize,
    pub total: usize,
    /// Summed over samples.
    pub virtual_edges_requested: usize,
    pub virtual_edges_added: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMetadata {
    pub samples: usize,
    /// Titles of documents too short for the sample length.
    pub skipped_samples: Vec<String>,
    pub mean_vocabulary_size: f64,
    pub shared_words: usize,
    pub feature_columns: usize,
}

/// One (embedding, length, strategy, classifier) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellReport {
    pub embedding: String,
    pub length: usize,
    pub strategy: Strategy,
    pub classifier: String,
    pub metadata: Option<CellMetadata>,
    /// p = 0 first, then the sweep levels.
    pub points: Vec<PointResult>,
    pub sweep: Option<SweepStats>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub length: usize,
    pub best_accuracy: Option<f64>,
    /// Baseline of the winning cell; `None` when a baseline is itself the best.
    pub baseline_accuracy: Option<f64>,
    pub gain_percent: Option<f64>,
    /// Embeddings reaching the best accuracy through enrichment.
    pub embeddings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningNote {
    pub note: String,
    /// Classifier label → parameter settings searched.
    pub grids: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub cv: CvMode,
    /// Levels evaluated, baseline included.
    pub p_grid: Vec<f64>,
    pub tuning: TuningNote,
    pub cells: Vec<CellReport>,
    pub summary: Vec<SummaryRow>,
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Relative gain in percent computed from accuracies rounded to two-decimal
/// percentages, the precision the tables are printed at.
pub fn summary_gain(best: f64, baseline: f64) -> Option<f64> {
    let (b, g) = (round2(best * 100.0), round2(baseline * 100.0));
    crate::learn::gain_percent(b, g)
}

/// Best accuracy per length over all successful cells.
///
/// When some baseline reaches the best accuracy, the gain and embedding columns
/// stay empty. Otherwise every embedding whose enriched network reaches it is
/// listed, and the gain is the smallest over those winning cells.
pub fn summarize(cells: &[CellReport], lengths: &[usize]) -> Vec<SummaryRow> {
    lengths
        .iter()
        .map(|&length| {
            let ok: Vec<&CellReport> = cells
                .iter()
                .filter(|c| c.length == length && c.error.is_none() && !c.points.is_empty())
                .collect();
            let best = ok
                .iter()
                .flat_map(|c| c.points.iter().map(|p| p.accuracy))
                .reduce(f64::max);
            let mut row = SummaryRow {
                length,
                best_accuracy: best,
                baseline_accuracy: None,
                gain_percent: None,
                embeddings: Vec::new(),
            };
            let Some(best) = best else { return row };
            if ok.iter().any(|c| c.points[0].accuracy == best) {
                return row;
            }
            let mut winners: Vec<(f64, &CellReport)> = ok
                .iter()
                .filter(|c| c.points[1..].iter().any(|p| p.accuracy == best))
                .map(|c| (summary_gain(best, c.points[0].accuracy).unwrap_or(f64::INFINITY), *c))
                .collect();
            winners.sort_by(|a, b| a.0.total_cmp(&b.0));
            if let Some(&(gain, cell)) = winners.first() {
                row.baseline_accuracy = Some(cell.points[0].accuracy);
                row.gain_percent = gain.is_finite().then_some(gain);
            }
            let mut names: Vec<String> = winners.iter().map(|(_, c)| c.embedding.clone()).collect();
            names.sort();
            names.dedup();
            row.embeddings = names;
            row
        })
        .collect()
}

/// Mean absolute (percentage points) and relative improvement over improving
/// cases, computed from accuracies rounded to two-decimal percentages as printed.
pub fn printed_improvements(sweep: &SweepStats) -> (Option<f64>, Option<f64>) {
    let base = round2(sweep.gamma0 * 100.0);
    let improving: Vec<f64> = sweep
        .gamma_plus
        .iter()
        .filter(|&&(_, g)| g > sweep.gamma0)
        .map(|&(_, g)| round2(g * 100.0))
        .collect();
    if improving.is_empty() {
        return (None, None);
    }
    let n = improving.len() as f64;
    let abs = improving.iter().map(|g| g - base).sum::<f64>() / n;
    let rel = (base > 0.0).then(|| improving.iter().map(|g| g / base).sum::<f64>() / n);
    (Some(abs), rel)
}

fn opt_fixed2(v: Option<f64>) -> String {
    v.map_or_else(|| MISSING.to_string(), |x| format!("{x:.2}"))
}

fn opt_percent(v: Option<f64>) -> String {
    v.map_or_else(|| MISSING.to_string(), format_percent)
}

fn opt_sig6(v: Option<f64>) -> String {
    v.map_or_else(|| MISSING.to_string(), format_sig6)
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> RunnerError + '_ {
    move |e| RunnerError::Io(format!("{}: {e}", path.display()))
}

/// Sweep row as rendered in `sweeps.csv`: accuracies in percent, mean absolute
/// improvement in percentage points and mean relative improvement as a ratio, all
/// with two decimals and taken from the printed percentages.
pub fn sweep_record(cell: &CellReport) -> Vec<String> {
    let meta = cell.metadata.as_ref();
    let sweep = cell.sweep.as_ref();
    let (mean_abs, mean_rel) = sweep.map_or((None, None), printed_improvements);
    vec![
        cell.embedding.clone(),
        cell.length.to_string(),
        cell.strategy.to_string(),
        cell.classifier.clone(),
        opt_percent(sweep.map(|s| s.gamma0)),
        opt_percent(sweep.and_then(|s| s.max_gamma_plus)),
        opt_fixed2(mean_abs),
        opt_fixed2(mean_rel),
        sweep.map_or_else(|| MISSING.to_string(), |s| s.n_plus.to_string()),
        meta.map_or_else(|| MISSING.to_string(), |m| m.samples.to_string()),
        meta.map_or_else(|| MISSING.to_string(), |m| m.shared_words.to_string()),
        opt_sig6(meta.map(|m| m.mean_vocabulary_size)),
        cell.error.clone().unwrap_or_default(),
    ]
}

pub const CELLS_HEADER: [&str; 10] = [
    "embedding",
    "length",
    "strategy",
    "classifier",
    "p",
    "accuracy",
    "correct",
    "total",
    "virtual_edges_requested",
    "virtual_edges_added",
];

pub const SWEEPS_HEADER: [&str; 13] = [
    "embedding",
    "length",
    "strategy",
    "classifier",
    "gamma0",
    "max_gamma_plus",
    "mean_abs_improvement",
    "mean_rel_improvement",
    "n_plus",
    "samples",
    "shared_words",
    "mean_vocabulary_size",
    "error",
];

pub const SUMMARY_HEADER: [&str; 5] = ["length", "best_accuracy", "baseline_accuracy", "gain_percent", "embeddings"];

/// Writes `cells.csv`, `sweeps.csv`, `summary.csv` and `report.json` into `out_dir`
/// and returns their paths.
pub fn emit_report(report: &ExperimentReport, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| RunnerError::Io(format!("{}: {e}", out_dir.display())))?;

    let cells_path = out_dir.join("cells.csv");
    let mut w = csv::Writer::from_path(&cells_path).map_err(csv_err(&cells_path))?;
    w.write_record(CELLS_HEADER).map_err(csv_err(&cells_path))?;
    for cell in &report.cells {
        for p in &cell.points {
            w.write_record([
                cell.embedding.clone(),
                cell.length.to_string(),
                cell.strategy.to_string(),
                cell.classifier.clone(),
                format_sig6(p.p),
                format_sig6(p.accuracy),
                p.correct.to_string(),
                p.total.to_string(),
                p.virtual_edges_requested.to_string(),
                p.virtual_edges_added.to_string(),
            ])
            .map_err(csv_err(&cells_path))?;
        }
    }
    w.flush().map_err(|e| RunnerError::Io(e.to_string()))?;

    let sweeps_path = out_dir.join("sweeps.csv");
    let mut w = csv::Writer::from_path(&sweeps_path).map_err(csv_err(&sweeps_path))?;
    w.write_record(SWEEPS_HEADER).map_err(csv_err(&sweeps_path))?;
    for cell in &report.cells {
        w.write_record(sweep_record(cell)).map_err(csv_err(&sweeps_path))?;
    }
    w.flush().map_err(|e| RunnerError::Io(e.to_string()))?;

    let summary_path = out_dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&summary_path).map_err(csv_err(&summary_path))?;
    w.write_record(SUMMARY_HEADER).map_err(csv_err(&summary_path))?;
    for row in &report.summary {
        let embeddings = if row.embeddings.is_empty() {
            MISSING.to_string()
        } else {
            row.embeddings.join(", ")
        };
        w.write_record([
            row.length.to_string(),
            opt_percent(row.best_accuracy),
            opt_percent(row.baseline_accuracy),
            row.gain_percent.map_or_else(|| MISSING.to_string(), |g| format!("{g:.2}")),
            embeddings,
        ])
        .map_err(csv_err(&summary_path))?;
    }
    w.flush().map_err(|e| RunnerError::Io(e.to_string()))?;

    let json_path = out_dir.join("report.json");
    let mut json = serde_json::to_string_pretty(report).map_err(|e| RunnerError::Io(e.to_string()))?;
    json.push('\n');
    fs::write(&json_path, json).map_err(|e| RunnerError::Io(format!("{}: {e}", json_path.display())))?;

    Ok(vec![cells_path, sweeps_path, summary_path, json_path])
}
