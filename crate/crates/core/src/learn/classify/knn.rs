use super::{Encoded, Predictor};
use crate::scalar::Scalar;

/// Euclidean k-nearest neighbours with majority vote.
///
/// Neighbours are ranked by distance, then class name. Vote ties go to the
/// class whose closest member is nearest, then to the smaller class name.
pub(crate) struct Knn<T> {
    rows: Vec<Vec<T>>,
    y: Vec<usize>,
    n_classes: usize,
    k: usize,
}

impl<T: Scalar> Knn<T> {
    pub fn fit(data: &Encoded<'_, T>, k: usize) -> Self {
        Self {
            rows: data.rows.to_vec(),
            y: data.y.clone(),
            n_classes: data.n_classes(),
            k,
        }
    }
}

fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

impl<T: Scalar> Predictor<T> for Knn<T> {
    fn predict(&self, row: &[T]) -> usize {
        let mut ranked: Vec<(T, usize)> = self
            .rows
            .iter()
            .zip(&self.y)
            .map(|(r, &c)| (squared_distance(r, row), c))
            .collect();
        ranked.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.1.cmp(&b.1))
        });
        let k = self.k.min(ranked.len());
        let mut votes = vec![0usize; self.n_classes];
        let mut nearest: Vec<Option<usize>> = vec![None; self.n_classes];
        for (rank, &(_, c)) in ranked[..k].iter().enumerate() {
            votes[c] += 1;
            nearest[c].get_or_insert(rank);
        }
        (0..self.n_classes)
            .filter(|&c| votes[c] > 0)
            .min_by_key(|&c| (std::cmp::Reverse(votes[c]), nearest[c], c))
            .expect("k ≥ 1 gives at least one vote")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data<'a>(rows: &'a [Vec<f64>], y: &[usize], n: usize) -> Encoded<'a, f64> {
        Encoded {
            rows,
            y: y.to_vec(),
            classes: (0..n).map(|i| format!("c{i}")).collect(),
        }
    }

    #[test]
    fn vote_tie_goes_to_nearest_class() {
        let rows = vec![vec![0.0], vec![3.0], vec![-4.0], vec![5.0]];
        let d = data(&rows, &[1, 0, 1, 0], 2);
        // k = 4: two votes each; class 1 owns the nearest neighbour.
        assert_eq!(Knn::fit(&d, 4).predict(&[0.5]), 1);
        assert_eq!(Knn::fit(&d, 4).predict(&[3.5]), 0);
    }

    #[test]
    fn equal_distances_prefer_smaller_class() {
        let rows = vec![vec![-1.0], vec![1.0]];
        let d = data(&rows, &[1, 0], 2);
        assert_eq!(Knn::fit(&d, 1).predict(&[0.0]), 0);
    }

    #[test]
    fn k_larger_than_training_set() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0]];
        let d = data(&rows, &[0, 1, 1], 2);
        assert_eq!(Knn::fit(&d, 10).predict(&[0.0]), 1);
    }
}
