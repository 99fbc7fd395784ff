use serde::{Deserialize, Serialize};

use super::{MetricsError, Result};
use crate::netbuild::TextNetwork;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PageRankConfig {
    pub damping: f64,
    /// Stop once the L1 change between iterates falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRank<T> {
    pub scores: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration with uniform teleport; isolated nodes spread their mass uniformly.
///
/// A run that hits `max_iterations` returns the last iterate with `converged = false`.
pub fn pagerank<T: Scalar>(network: &TextNetwork<T>, config: &PageRankConfig) -> Result<PageRank<T>> {
    let n = network.node_count();
    if n == 0 {
        return Err(MetricsError::EmptyNetwork);
    }
    if !(0.0..=1.0).contains(&config.damping) {
        return Err(MetricsError::InvalidPageRank("damping must lie in [0, 1]"));
    }
    if !(config.tolerance > 0.0) {
        return Err(MetricsError::InvalidPageRank("tolerance must be positive"));
    }
    let d = T::of(config.damping);
    let nf = T::of_usize(n);
    let teleport = (T::one() - d) / nf;
    let inv_degree: Vec<T> = (0..n)
        .map(|i| match network.degree(i) {
            0 => T::zero(),
            k => T::one() / T::of_usize(k),
        })
        .collect();
    let dangling: Vec<usize> = (0..n).filter(|&i| network.degree(i) == 0).collect();
    let tol = T::of(config.tolerance);

    let mut x = vec![T::one() / nf; n];
    let mut next = vec![T::zero(); n];
    for iteration in 1..=config.max_iterations {
        let dangling_mass = dangling.iter().fold(T::zero(), |acc, &i| acc + x[i]);
        let base = teleport + d * dangling_mass / nf;
        for (i, slot) in next.iter_mut().enumerate() {
            let inflow = network
                .neighbors(i)
                .iter()
                .fold(T::zero(), |acc, &j| acc + x[j] * inv_degree[j]);
            *slot = base + d * inflow;
        }
        let change = x
            .iter()
            .zip(&next)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b).abs());
        std::mem::swap(&mut x, &mut next);
        if change < tol {
            return Ok(PageRank {
                scores: x,
                iterations: iteration,
                converged: true,
            });
        }
    }
    Ok(PageRank {
        scores: x,
        iterations: config.max_iterations,
        converged: false,
    })
}
