use super::{Encoded, Predictor};
use crate::scalar::Scalar;

/// CART classification tree with Gini impurity and midpoint thresholds.
pub(crate) struct Tree<T> {
    nodes: Vec<Node<T>>,
}

enum Node<T> {
    Leaf(usize),
    Split {
        feature: usize,
        threshold: T,
        left: usize,
        right: usize,
    },
}

struct Builder<'a, 'b, T> {
    data: &'a Encoded<'b, T>,
    max_depth: Option<usize>,
    min_leaf: usize,
    nodes: Vec<Node<T>>,
}

fn gini<T: Scalar>(counts: &[usize], total: usize) -> T {
    let n = T::of_usize(total);
    let mut g = T::one();
    for &c in counts {
        let p = T::of_usize(c) / n;
        g = g - p * p;
    }
    g
}

/// Majority class; ties go to the smaller class index.
fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate() {
        if n > counts[best] {
            best = c;
        }
    }
    best
}

impl<T: Scalar> Builder<'_, '_, T> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.data.n_classes()];
        for &i in idx {
            counts[self.data.y[i]] += 1;
        }
        counts
    }

    /// Best (weighted child impurity, feature, threshold); earlier features and
    /// lower thresholds win ties.
    fn best_split(&self, idx: &[usize]) -> Option<(T, usize, T)> {
        let d = self.data.rows.first().map_or(0, Vec::len);
        let k = self.data.n_classes();
        let n = idx.len();
        let mut best: Option<(T, usize, T)> = None;
        let mut order = idx.to_vec();
        for f in 0..d {
            let value = |i: usize| self.data.rows[i][f];
            order.sort_by(|&a, &b| value(a).partial_cmp(&value(b)).unwrap_or(std::cmp::Ordering::Equal));
            let mut left = vec![0usize; k];
            let mut right = self.counts(idx);
            for pos in 0..n - 1 {
                let i = order[pos];
                left[self.data.y[i]] += 1;
                right[self.data.y[i]] -= 1;
                let (lo, hi) = (value(i), value(order[pos + 1]));
                let n_left = pos + 1;
                if lo == hi || n_left < self.min_leaf || n - n_left < self.min_leaf {
                    continue;
                }
                let impurity = (T::of_usize(n_left) * gini::<T>(&left, n_left)
                    + T::of_usize(n - n_left) * gini::<T>(&right, n - n_left))
                    / T::of_usize(n);
                if best.is_none_or(|(b, _, _)| impurity < b) {
                    let mut threshold = (lo + hi) / T::of(2.0);
                    // Midpoints of adjacent floats can round up to `hi`.
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some((impurity, f, threshold));
                }
            }
        }
        best
    }

    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let counts = self.counts(&idx);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf(majority(&counts)));
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_left = self.max_depth.is_none_or(|m| depth < m);
        if pure || !depth_left || idx.len() < 2 * self.min_leaf {
            return id;
        }
        let Some((impurity, feature, threshold)) = self.best_split(&idx) else {
            return id;
        };
        if impurity >= gini::<T>(&counts, idx.len()) {
            return id;
        }
        let (l, r): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| self.data.rows[i][feature] <= threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }
}

impl<T: Scalar> Tree<T> {
    pub fn fit(data: &Encoded<'_, T>, max_depth: Option<usize>, min_leaf: usize) -> Self {
        let mut b = Builder {
            data,
            max_depth,
            min_leaf,
            nodes: Vec::new(),
        };
        b.grow((0..data.rows.len()).collect(), 0);
        Self { nodes: b.nodes }
    }

    #[cfg(test)]
    pub fn depth(&self) -> usize {
        fn walk<T>(nodes: &[Node<T>], id: usize) -> usize {
            match nodes[id] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

impl<T: Scalar> Predictor<T> for Tree<T> {
    fn predict(&self, row: &[T]) -> usize {
        let mut id = 0;
        loop {
            match self.nodes[id] {
                Node::Leaf(c) => return c,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => id = if row[feature] <= threshold { left } else { right },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encoded<'a>(rows: &'a [Vec<f64>], y: &[usize]) -> Encoded<'a, f64> {
        let n = y.iter().max().unwrap() + 1;
        Encoded {
            rows,
            y: y.to_vec(),
            classes: (0..n).map(|i| format!("c{i}")).collect(),
        }
    }

    #[test]
    fn midpoint_threshold() {
        let rows = vec![vec![1.0], vec![2.0], vec![4.0], vec![6.0]];
        let d = encoded(&rows, &[0, 0, 1, 1]);
        let t = Tree::fit(&d, None, 1);
        assert!(matches!(t.nodes[0], Node::Split { threshold, .. } if threshold == 3.0));
        assert_eq!(t.predict(&[2.9]), 0);
        assert_eq!(t.predict(&[3.1]), 1);
    }

    #[test]
    fn xor_needs_depth_two() {
        let rows = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let d = encoded(&rows, &[0, 1, 1, 0]);
        // No single split lowers Gini on XOR, so CART stops at the root.
        assert_eq!(Tree::fit(&d, None, 1).depth(), 0);
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 1.0],
        ];
        let d = encoded(&rows, &[0, 1, 1, 0, 0]);
        let t = Tree::fit(&d, None, 1);
        for (r, &y) in rows.iter().zip(&d.y) {
            assert_eq!(t.predict(r), y);
        }
        assert_eq!(Tree::fit(&d, Some(1), 1).depth(), 1);
    }

    #[test]
    fn min_leaf_blocks_small_children() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let d = encoded(&rows, &[0, 1, 1, 1]);
        assert_eq!(Tree::fit(&d, None, 1).depth(), 1);
        let t = Tree::fit(&d, None, 2);
        assert!(t.depth() <= 1);
        assert_eq!(t.predict(&[0.0]), if t.depth() == 0 { 1 } else { 0 });
    }
}
