//! Feature matrices over the shared vocabulary, classifiers and cross-validation.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::netbuild::TextNetwork;
use crate::netmetrics::{measure_nodes, MeasurementSpec, MetricsError, PageRankConfig};
use crate::scalar::Scalar;

mod classify;
mod cv;
mod standardize;
mod sweep;

pub use classify::{train_predict, ClassifierKind, ClassifierSpec, Model};
pub use cv::{cross_validate, fold_assignment, write_fold_assignments, CvMode, CvOutcome};
pub use standardize::{standardize, Standardizer};
pub use sweep::{gain_percent, sweep_stats, SweepStats};

#[derive(Debug, Error, PartialEq)]
pub enum LearnError {
    #[error("no samples given")]
    NoSamples,
    #[error("no word occurs in every sample")]
    EmptyIntersection,
    #[error("feature matrix is not rectangular: row {row} has {found} values, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("feature matrix row {row}, column {column} is not finite")]
    NonFinite { row: usize, column: usize },
    #[error("{labels} labels for {rows} rows")]
    LabelCount { labels: usize, rows: usize },
    #[error("standardization needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("train and test matrices have different columns")]
    SchemaMismatch,
    #[error("training set has a single class")]
    SingleClass,
    #[error("invalid classifier parameters: {0}")]
    InvalidParameters(String),
    #[error("stratified {folds}-fold split is infeasible: smallest class has {smallest} rows")]
    InfeasibleStratification { folds: usize, smallest: usize },
    #[error("empty p grid")]
    EmptyGrid,
    #[error("accuracy {0} is outside [0, 1]")]
    InvalidAccuracy(f64),
    #[error("gamma at p = 0 ({at_zero}) differs from the baseline ({gamma0})")]
    BaselineMismatch { gamma0: f64, at_zero: f64 },
    #[error("duplicate p value {0} in grid")]
    DuplicateP(f64),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, LearnError>;

/// Samples × (word × measurement) matrix with one author label per row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureMatrix<T> {
    column_names: Vec<String>,
    rows: Vec<Vec<T>>,
    labels: Vec<String>,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn new(column_names: Vec<String>, rows: Vec<Vec<T>>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(LearnError::LabelCount {
                labels: labels.len(),
                rows: rows.len(),
            });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != column_names.len() {
                return Err(LearnError::Ragged {
                    row: r,
                    expected: column_names.len(),
                    found: row.len(),
                });
            }
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(LearnError::NonFinite { row: r, column: c });
            }
        }
        Ok(Self {
            column_names,
            rows,
            labels,
        })
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.column_names.len()
    }

    /// Sub-matrix with the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            column_names: self.column_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// Every value multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            column_names: self.column_names.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&v| v * factor).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub(crate) fn with_rows(&self, rows: Vec<Vec<T>>) -> Self {
        Self {
            column_names: self.column_names.clone(),
            rows,
            labels: self.labels.clone(),
        }
    }
}

/// Words present in every sample, sorted.
pub fn shared_vocabulary<I, W, S>(sets: I) -> Result<Vec<String>>
where
    I: IntoIterator<Item = W>,
    W: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut iter = sets.into_iter();
    let first = iter.next().ok_or(LearnError::NoSamples)?;
    let mut shared: BTreeSet<String> = first.into_iter().map(|s| s.as_ref().to_string()).collect();
    for set in iter {
        let other: BTreeSet<String> = set.into_iter().map(|s| s.as_ref().to_string()).collect();
        shared.retain(|w| other.contains(w));
    }
    if shared.is_empty() {
        return Err(LearnError::EmptyIntersection);
    }
    Ok(shared.into_iter().collect())
}

/// Column names `word.measurement`, word-major.
pub fn feature_names(words: &[String], spec: &MeasurementSpec) -> Vec<String> {
    words
        .iter()
        .flat_map(|w| spec.measurements().iter().map(move |m| format!("{w}.{m}")))
        .collect()
}

/// One feature row for a network: the measurements of every word, concatenated.
pub fn feature_row<T: Scalar>(
    network: &TextNetwork<T>,
    words: &[String],
    spec: &MeasurementSpec,
    pagerank: &PageRankConfig,
) -> Result<Vec<T>> {
    Ok(measure_nodes(network, words, spec, pagerank)?
        .into_iter()
        .flat_map(|m| m.values)
        .collect())
}

pub fn build_feature_matrix<T: Scalar>(
    networks: &[TextNetwork<T>],
    labels: &[String],
    words: &[String],
    spec: &MeasurementSpec,
    pagerank: &PageRankConfig,
) -> Result<FeatureMatrix<T>> {
    let rows = networks
        .iter()
        .map(|net| feature_row(net, words, spec, pagerank))
        .collect::<Result<Vec<_>>>()?;
    FeatureMatrix::new(feature_names(words, spec), rows, labels.to_vec())
}
