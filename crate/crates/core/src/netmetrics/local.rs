use std::collections::HashSet;

use super::{node_of, Result};
use crate::netbuild::TextNetwork;
use crate::scalar::Scalar;

/// Degree and local clustering coefficient `2T / (k(k-1))`, 0 when `k < 2`.
pub fn local_measures<T: Scalar>(network: &TextNetwork<T>, word: &str) -> Result<(usize, T)> {
    let node = node_of(network, word)?;
    let nbrs = network.neighbors(node);
    let k = nbrs.len();
    if k < 2 {
        return Ok((k, T::zero()));
    }
    let set: HashSet<usize> = nbrs.iter().copied().collect();
    // Each triangle is seen once from each of its two other corners.
    let links: usize = nbrs
        .iter()
        .map(|&u| network.neighbors(u).iter().filter(|v| set.contains(v)).count())
        .sum();
    let triangles = links / 2;
    let clustering = T::of_usize(2 * triangles) / T::of_usize(k * (k - 1));
    Ok((k, clustering))
}
