//! Shortest-path betweenness (Brandes accumulation) and mean BFS distance.

use std::collections::VecDeque;

use super::{MetricsError, Result};
use crate::netbuild::TextNetwork;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathMeasures<T> {
    /// Unnormalized betweenness over unordered node pairs.
    pub betweenness: T,
    /// Mean distance to the nodes reachable from this one; 0 when none are.
    pub avg_shortest_path: T,
}

/// Betweenness and average shortest path for every node, indexed like the network's nodes.
pub fn path_measures<T: Scalar>(network: &TextNetwork<T>) -> Result<Vec<PathMeasures<T>>> {
    let n = network.node_count();
    if n == 0 {
        return Err(MetricsError::EmptyNetwork);
    }
    let mut betweenness = vec![T::zero(); n];
    let mut avg = vec![T::zero(); n];

    let mut dist: Vec<Option<usize>> = vec![None; n];
    let mut sigma = vec![T::zero(); n];
    let mut delta = vec![T::zero(); n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        for v in 0..n {
            dist[v] = None;
            sigma[v] = T::zero();
            delta[v] = T::zero();
            preds[v].clear();
        }
        stack.clear();
        dist[s] = Some(0);
        sigma[s] = T::one();
        queue.push_back(s);
        let (mut reached, mut total) = (0usize, 0usize);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            let dv = dist[v].expect("queued nodes have a distance");
            if v != s {
                reached += 1;
                total += dv;
            }
            for &w in network.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
                if dist[w] == Some(dv + 1) {
                    sigma[w] = sigma[w] + sigma[v];
                    preds[w].push(v);
                }
            }
        }
        if reached > 0 {
            avg[s] = T::of_usize(total) / T::of_usize(reached);
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] = delta[v] + sigma[v] / sigma[w] * (T::one() + delta[w]);
            }
            if w != s {
                betweenness[w] = betweenness[w] + delta[w];
            }
        }
    }
    let half = T::of(0.5);
    Ok(betweenness
        .into_iter()
        .zip(avg)
        .map(|(b, a)| PathMeasures {
            betweenness: b * half,
            avg_shortest_path: a,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_word(net: &TextNetwork<f64>, m: &[PathMeasures<f64>], w: &str) -> PathMeasures<f64> {
        m[net.node_index(w).unwrap()]
    }

    #[test]
    fn path_graph() {
        let net: TextNetwork<f64> = TextNetwork::from_pairs([("a", "b"), ("b", "c")]).unwrap();
        let m = path_measures(&net).unwrap();
        assert_eq!(by_word(&net, &m, "b"), PathMeasures { betweenness: 1.0, avg_shortest_path: 1.0 });
        assert_eq!(by_word(&net, &m, "a").avg_shortest_path, 1.5);
        assert_eq!(by_word(&net, &m, "a").betweenness, 0.0);
    }

    #[test]
    fn triangle() {
        let net: TextNetwork<f64> = TextNetwork::from_pairs([("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        for pm in path_measures(&net).unwrap() {
            assert_eq!(pm, PathMeasures { betweenness: 0.0, avg_shortest_path: 1.0 });
        }
    }

    #[test]
    fn square_splits_paths() {
        // C4: each node lies on one of the two shortest paths between its neighbours.
        let net: TextNetwork<f64> =
            TextNetwork::from_pairs([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        for pm in path_measures(&net).unwrap() {
            assert!((pm.betweenness - 0.5).abs() < 1e-15);
            assert!((pm.avg_shortest_path - 4.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn isolated_and_disconnected() {
        let mut net: TextNetwork<f64> = TextNetwork::from_pairs([("a", "b")]).unwrap();
        net.add_node("z");
        let m = path_measures(&net).unwrap();
        assert_eq!(by_word(&net, &m, "z"), PathMeasures { betweenness: 0.0, avg_shortest_path: 0.0 });
        assert_eq!(by_word(&net, &m, "a").avg_shortest_path, 1.0);
        assert_eq!(path_measures(&TextNetwork::<f64>::new()), Err(MetricsError::EmptyNetwork));
    }
}
