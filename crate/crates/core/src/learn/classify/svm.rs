use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{argmax, Encoded, Predictor};
use crate::scalar::Scalar;

/// One-vs-rest linear SVM fit by Pegasos subgradient steps.
///
/// The bias is an extra constant-1 feature (so it is regularized too), and the
/// returned weights are the average of all iterates. λ = 1 / (C·n).
pub(crate) struct LinearSvm<T> {
    /// One augmented weight vector per class; the last entry is the bias.
    weights: Vec<Vec<T>>,
}

fn score<T: Scalar>(w: &[T], row: &[T]) -> T {
    let d = row.len();
    row.iter().zip(&w[..d]).fold(w[d], |acc, (&x, &wi)| acc + x * wi)
}

impl<T: Scalar> LinearSvm<T> {
    pub fn fit(data: &Encoded<'_, T>, c: f64, epochs: usize, seed: u64) -> Self {
        let n = data.rows.len();
        let d = data.rows.first().map_or(0, Vec::len);
        let lambda = T::of(1.0 / (c * n as f64));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut schedule = Vec::with_capacity(n * epochs);
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..epochs {
            order.shuffle(&mut rng);
            schedule.extend_from_slice(&order);
        }
        let weights = (0..data.n_classes())
            .map(|class| {
                let mut w = vec![T::zero(); d + 1];
                let mut avg = vec![T::zero(); d + 1];
                for (step, &i) in schedule.iter().enumerate() {
                    let t = T::of_usize(step + 1);
                    let eta = T::one() / (lambda * t);
                    let y = if data.y[i] == class { T::one() } else { -T::one() };
                    let x = &data.rows[i];
                    let margin = y * score(&w, x);
                    let shrink = T::one() - eta * lambda;
                    for wi in w.iter_mut() {
                        *wi = *wi * shrink;
                    }
                    if margin < T::one() {
                        for (wi, &xi) in w.iter_mut().zip(x) {
                            *wi = *wi + eta * y * xi;
                        }
                        w[d] = w[d] + eta * y;
                    }
                    // Running mean of the iterates.
                    for (a, &wi) in avg.iter_mut().zip(&w) {
                        *a = *a + (wi - *a) / t;
                    }
                }
                avg
            })
            .collect();
        Self { weights }
    }
}

impl<T: Scalar> Predictor<T> for LinearSvm<T> {
    fn predict(&self, row: &[T]) -> usize {
        let scores: Vec<T> = self.weights.iter().map(|w| score(w, row)).collect();
        argmax(&scores)
    }
}
