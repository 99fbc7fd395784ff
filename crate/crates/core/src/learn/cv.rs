use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::classify::{train_predict, ClassifierSpec, Model};
use super::{FeatureMatrix, LearnError, Result, Standardizer};
use crate::scalar::Scalar;

/// Folds used by the inner cross-validation that picks grid parameters.
const INNER_FOLDS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default)]
pub enum CvMode {
    #[default]
    LeaveOneOut,
    StratifiedKFold(usize),
}


/// Test-fold index for every row.
///
/// Stratified mode shuffles each class (classes in name order) with a seeded
/// generator and deals its rows round-robin, continuing the fold counter from
/// one class to the next so fold sizes differ by at most one.
pub fn fold_assignment(labels: &[String], mode: CvMode, seed: u64) -> Result<Vec<usize>> {
    match mode {
        CvMode::LeaveOneOut => Ok((0..labels.len()).collect()),
        CvMode::StratifiedKFold(k) => {
            let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
            for (i, l) in labels.iter().enumerate() {
                by_class.entry(l).or_default().push(i);
            }
            let smallest = by_class.values().map(Vec::len).min().unwrap_or(0);
            if k < 2 || k > smallest {
                return Err(LearnError::InfeasibleStratification { folds: k, smallest });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut folds = vec![0; labels.len()];
            let mut next = 0;
            for members in by_class.values_mut() {
                members.shuffle(&mut rng);
                for &i in members.iter() {
                    folds[i] = next % k;
                    next += 1;
                }
            }
            Ok(folds)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvOutcome {
    pub correct: usize,
    pub total: usize,
    /// Predicted label per row of the input matrix.
    pub predictions: Vec<String>,
    /// Test-fold index per row.
    pub folds: Vec<usize>,
    /// Parameters used in each fold, in fold order.
    pub selected: Vec<ClassifierSpec>,
}

impl CvOutcome {
    /// Correct predictions over all rows, pooled across folds.
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.correct as f64 / self.total as f64
    }
}

fn fold_seed(seed: u64, fold: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(fold as u64)
}

/// Inner cross-validation over the kind's grid; the first best setting wins.
fn select<T: Scalar>(train: &FeatureMatrix<T>, model: &Model, seed: u64) -> Result<ClassifierSpec> {
    let grid = match model {
        Model::Fixed(spec) => return Ok(*spec),
        Model::Tuned(kind) => kind.grid(),
    };
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in train.labels() {
        *counts.entry(l).or_default() += 1;
    }
    let smallest = counts.values().copied().min().unwrap_or(0);
    let inner = INNER_FOLDS.min(smallest);
    if grid.len() == 1 || inner < 2 {
        return Ok(grid[0]);
    }
    let mut best = (grid[0], -1.0);
    for spec in grid {
        let acc = cross_validate(train, &Model::Fixed(spec), CvMode::StratifiedKFold(inner), seed)?.accuracy();
        if acc > best.1 {
            best = (spec, acc);
        }
    }
    Ok(best.0)
}

/// Cross-validated predictions for every row. Each fold is standardized with
/// statistics of its training rows; tuned models pick parameters per fold.
pub fn cross_validate<T: Scalar>(
    matrix: &FeatureMatrix<T>,
    model: &Model,
    mode: CvMode,
    seed: u64,
) -> Result<CvOutcome> {
    if let Model::Fixed(spec) = model {
        spec.validate()?;
    }
    let folds = fold_assignment(matrix.labels(), mode, seed)?;
    let n_folds = folds.iter().max().map_or(0, |m| m + 1);
    let mut predictions = vec![String::new(); matrix.row_count()];
    let mut selected = Vec::with_capacity(n_folds);
    for fold in 0..n_folds {
        let (test_idx, train_idx): (Vec<usize>, Vec<usize>) =
            (0..matrix.row_count()).partition(|&i| folds[i] == fold);
        let train = matrix.select_rows(&train_idx);
        let test = matrix.select_rows(&test_idx);
        let spec = select(&train, model, fold_seed(seed, fold))?;
        let scaler = Standardizer::fit(&train)?;
        let predicted = train_predict(
            &scaler.transform(&train)?,
            &scaler.transform(&test)?,
            &spec,
            fold_seed(seed, fold),
        )?;
        for (i, p) in test_idx.into_iter().zip(predicted) {
            predictions[i] = p;
        }
        selected.push(spec);
    }
    let correct = predictions
        .iter()
        .zip(matrix.labels())
        .filter(|(p, l)| p == l)
        .count();
    Ok(CvOutcome {
        correct,
        total: matrix.row_count(),
        predictions,
        folds,
        selected,
    })
}

/// CSV with columns `row,label,fold`.
pub fn write_fold_assignments<W: Write>(writer: W, labels: &[String], folds: &[usize]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| LearnError::Io(e.to_string());
    w.write_record(["row", "label", "fold"]).map_err(io)?;
    for (i, (l, f)) in labels.iter().zip(folds).enumerate() {
        w.write_record([i.to_string(), l.clone(), f.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| LearnError::Io(e.to_string()))
}
