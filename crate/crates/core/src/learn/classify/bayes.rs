use super::{argmax, Encoded, Predictor};
use crate::scalar::{order_independent_sum, Scalar};

const VARIANCE_FLOOR: f64 = 1e-9;

/// Gaussian naive Bayes with per-class, per-feature variances floored at 1e-9.
pub(crate) struct GaussianNb<T> {
    log_prior: Vec<T>,
    mean: Vec<Vec<T>>,
    var: Vec<Vec<T>>,
}

impl<T: Scalar> GaussianNb<T> {
    pub fn fit(data: &Encoded<'_, T>) -> Self {
        let n = T::of_usize(data.rows.len());
        let d = data.rows.first().map_or(0, Vec::len);
        let floor = T::of(VARIANCE_FLOOR);
        let mut log_prior = Vec::new();
        let mut mean = Vec::new();
        let mut var = Vec::new();
        for c in 0..data.n_classes() {
            let members: Vec<&Vec<T>> = data
                .rows
                .iter()
                .zip(&data.y)
                .filter(|(_, &y)| y == c)
                .map(|(r, _)| r)
                .collect();
            let count = T::of_usize(members.len());
            log_prior.push((count / n).ln());
            let mut mu = Vec::with_capacity(d);
            let mut sigma2 = Vec::with_capacity(d);
            let mut column = Vec::with_capacity(members.len());
            for f in 0..d {
                // Sorted sums keep the fit independent of training-row order.
                column.clear();
                column.extend(members.iter().map(|r| r[f]));
                let m = order_independent_sum(&mut column) / count;
                let mut sq: Vec<T> = column.iter().map(|&v| (v - m) * (v - m)).collect();
                let v = order_independent_sum(&mut sq) / count;
                mu.push(m);
                sigma2.push(v.max(floor));
            }
            mean.push(mu);
            var.push(sigma2);
        }
        Self { log_prior, mean, var }
    }

    fn log_posterior(&self, c: usize, row: &[T]) -> T {
        let two_pi = T::of(std::f64::consts::TAU);
        let half = T::of(0.5);
        row.iter()
            .zip(self.mean[c].iter().zip(&self.var[c]))
            .fold(self.log_prior[c], |acc, (&x, (&m, &v))| {
                acc - half * (two_pi * v).ln() - (x - m) * (x - m) / (v + v)
            })
    }
}

impl<T: Scalar> Predictor<T> for GaussianNb<T> {
    fn predict(&self, row: &[T]) -> usize {
        let scores: Vec<T> = (0..self.log_prior.len())
            .map(|c| self.log_posterior(c, row))
            .collect();
        argmax(&scores)
    }
}
