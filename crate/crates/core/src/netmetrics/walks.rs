use std::collections::BTreeMap;

use super::{check_level, node_of, MetricsError, Result};
use crate::netbuild::TextNetwork;
use crate::scalar::Scalar;

/// Accessibility at hierarchical level `h` ∈ {2, 3}.
pub fn accessibility<T: Scalar>(network: &TextNetwork<T>, word: &str, h: usize) -> Result<T> {
    check_level(h)?;
    accessibility_at_depth(network, word, h)
}

/// `exp(-Σ P log P)` over the `depth`-step distribution of a uniform random walk
/// started at `word`. Isolated nodes give 0.
pub fn accessibility_at_depth<T: Scalar>(network: &TextNetwork<T>, word: &str, depth: usize) -> Result<T> {
    if depth == 0 {
        return Err(MetricsError::ZeroDepth);
    }
    let start = node_of(network, word)?;
    if network.degree(start) == 0 {
        return Ok(T::zero());
    }
    let mut dist: BTreeMap<usize, T> = BTreeMap::from([(start, T::one())]);
    for _ in 0..depth {
        let mut next = BTreeMap::new();
        for (&node, &p) in &dist {
            let nbrs = network.neighbors(node);
            let share = p / T::of_usize(nbrs.len());
            for &v in nbrs {
                let slot = next.entry(v).or_insert_with(T::zero);
                *slot = *slot + share;
            }
        }
        dist = next;
    }
    let entropy = dist
        .values()
        .filter(|p| **p > T::zero())
        .fold(T::zero(), |acc, &p| acc - p * p.ln());
    Ok(entropy.exp())
}
