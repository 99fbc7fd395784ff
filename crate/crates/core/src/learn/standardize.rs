use super::{FeatureMatrix, LearnError, Result};
use crate::scalar::{order_independent_sum, Scalar};

/// Per-column z-scoring with population statistics from a training matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer<T> {
    mean: Vec<T>,
    /// `None` marks a constant column, mapped to 0.
    scale: Vec<Option<T>>,
}

impl<T: Scalar> Standardizer<T> {
    pub fn fit(matrix: &FeatureMatrix<T>) -> Result<Self> {
        let n = matrix.row_count();
        if n < 2 {
            return Err(LearnError::TooFewRows(n));
        }
        let nf = T::of_usize(n);
        let mut mean = Vec::with_capacity(matrix.column_count());
        let mut scale = Vec::with_capacity(matrix.column_count());
        let mut column = Vec::with_capacity(n);
        for c in 0..matrix.column_count() {
            column.clear();
            column.extend(matrix.rows().iter().map(|r| r[c]));
            let constant = column.iter().all(|&v| v == column[0]);
            let m = order_independent_sum(&mut column) / nf;
            mean.push(m);
            if constant {
                scale.push(None);
                continue;
            }
            let mut sq: Vec<T> = column.iter().map(|&v| (v - m) * (v - m)).collect();
            let sd = (order_independent_sum(&mut sq) / nf).sqrt();
            scale.push((sd > T::zero()).then_some(sd));
        }
        Ok(Self { mean, scale })
    }

    pub fn transform_row(&self, row: &[T]) -> Vec<T> {
        row.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(&v, (&m, s))| s.map_or(T::zero(), |s| (v - m) / s))
            .collect()
    }

    pub fn transform(&self, matrix: &FeatureMatrix<T>) -> Result<FeatureMatrix<T>> {
        if matrix.column_count() != self.mean.len() {
            return Err(LearnError::SchemaMismatch);
        }
        Ok(matrix.with_rows(matrix.rows().iter().map(|r| self.transform_row(r)).collect()))
    }
}

/// Z-scores a matrix with its own statistics.
pub fn standardize<T: Scalar>(matrix: &FeatureMatrix<T>) -> Result<FeatureMatrix<T>> {
    Standardizer::fit(matrix)?.transform(matrix)
}
