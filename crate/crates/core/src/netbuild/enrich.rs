//! Virtual-edge enrichment under the global and local (disparity) strategies.
//!
//! Both strategies add the same number of virtual edges, `floor(p/100 × E)`
//! with `E` the co-occurrence edge count. Global keeps the most similar
//! candidates; local keeps the candidates with the smallest disparity
//! significance in the provisional graph that holds every candidate.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{disparity_alpha, DisparityScore, EdgeKind, NetworkError, Result, TextNetwork};
use crate::embed::{CandidatePair, EmbeddingTable};
use crate::scalar::Scalar;

/// Lower bound for weights entering the disparity computation. Similarities at or
/// below zero would otherwise give non-positive strengths.
pub const MIN_DISPARITY_WEIGHT: f64 = 1e-12;

/// Percentage `p` of additional edges, relative to the co-occurrence edge count.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EnrichmentLevel(f64);

impl EnrichmentLevel {
    pub const NONE: EnrichmentLevel = EnrichmentLevel(0.0);

    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=100.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(NetworkError::InvalidLevel(p))
        }
    }

    pub fn percent(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for EnrichmentLevel {
    type Error = NetworkError;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<EnrichmentLevel> for f64 {
    fn from(l: EnrichmentLevel) -> f64 {
        l.0
    }
}

/// Number of virtual edges requested at level `p`.
pub fn edge_budget<T: Scalar>(network: &TextNetwork<T>, level: EnrichmentLevel) -> usize {
    budget_for(network.count_edges(EdgeKind::Cooccurrence), level)
}

fn budget_for(cooccurrence_edges: usize, level: EnrichmentLevel) -> usize {
    // p·E is exact for integral p, so the division cannot round up across an integer.
    (level.0 * cooccurrence_edges as f64 / 100.0).floor() as usize
}

/// Enriched network plus bookkeeping about the requested budget.
#[derive(Debug, Clone)]
pub struct Enrichment<T> {
    pub network: TextNetwork<T>,
    pub requested: usize,
    pub added: usize,
}

impl<T> Enrichment<T> {
    /// Virtual edges that could not be added because candidates ran out.
    pub fn shortfall(&self) -> usize {
        self.requested - self.added
    }
}

fn add_virtual<T: Scalar>(net: &mut TextNetwork<T>, pair: &CandidatePair<T>) -> Result<()> {
    let u = net
        .node_index(&pair.word_a)
        .ok_or_else(|| NetworkError::UnknownWord(pair.word_a.to_string()))?;
    let v = net
        .node_index(&pair.word_b)
        .ok_or_else(|| NetworkError::UnknownWord(pair.word_b.to_string()))?;
    net.add_edge(u, v, EdgeKind::Virtual, 0, pair.similarity)
}

/// Adds the first `edge_budget` candidates (already ranked) as virtual edges.
pub fn enrich_global<T: Scalar>(
    network: &TextNetwork<T>,
    candidates: &[CandidatePair<T>],
    level: EnrichmentLevel,
) -> Result<Enrichment<T>> {
    let requested = edge_budget(network, level);
    let mut out = network.clone();
    let take = requested.min(candidates.len());
    for pair in &candidates[..take] {
        add_virtual(&mut out, pair)?;
    }
    Ok(Enrichment {
        network: out,
        requested,
        added: take,
    })
}

/// Significance of a candidate virtual edge in the provisional graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSignificance<T> {
    pub pair: CandidatePair<T>,
    /// Smaller of the two endpoint alphas.
    pub significance: T,
    /// Endpoint whose alpha is the minimum (first endpoint on ties).
    pub endpoint: Arc<str>,
    pub score: DisparityScore<T>,
}

impl<T: Scalar> EdgeSignificance<T> {
    /// Retention order: significance ascending, similarity descending, then words.
    fn retention_cmp(&self, other: &Self) -> Ordering {
        self.significance
            .partial_cmp(&other.significance)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.pair.rank_cmp(&other.pair))
    }
}

/// Disparity significance of every candidate in the provisional graph made of the
/// network plus all candidates.
///
/// Virtual edges weigh their similarity; co-occurrence edges weigh the cosine
/// similarity of their endpoints, or 1 when a vector is missing. Weights are
/// floored at [`MIN_DISPARITY_WEIGHT`].
pub fn virtual_edge_significance<T: Scalar>(
    network: &TextNetwork<T>,
    candidates: &[CandidatePair<T>],
    table: &EmbeddingTable<T>,
) -> Result<Vec<EdgeSignificance<T>>> {
    let floor = T::of(MIN_DISPARITY_WEIGHT);
    let n = network.node_count();
    let mut degree: Vec<usize> = (0..n).map(|i| network.degree(i)).collect();
    let mut strength = vec![T::zero(); n];
    for e in network.edges() {
        let w = match e.kind {
            EdgeKind::Cooccurrence => table
                .similarity(network.word(e.a), network.word(e.b))
                .unwrap_or_else(T::one),
            EdgeKind::Virtual => e.weight,
        }
        .max(floor);
        strength[e.a] = strength[e.a] + w;
        strength[e.b] = strength[e.b] + w;
    }
    let mut endpoints = Vec::with_capacity(candidates.len());
    for pair in candidates {
        let lookup = |w: &Arc<str>| {
            network
                .node_index(w)
                .ok_or_else(|| NetworkError::UnknownWord(w.to_string()))
        };
        let (u, v) = (lookup(&pair.word_a)?, lookup(&pair.word_b)?);
        if network.edge_between(u, v).is_some() {
            return Err(NetworkError::DuplicateEdge(
                pair.word_a.to_string(),
                pair.word_b.to_string(),
            ));
        }
        let w = pair.similarity.max(floor);
        degree[u] += 1;
        degree[v] += 1;
        strength[u] = strength[u] + w;
        strength[v] = strength[v] + w;
        endpoints.push((u, v, w));
    }
    candidates
        .iter()
        .zip(endpoints)
        .map(|(pair, (u, v, w))| {
            let su = disparity_alpha(strength[u], degree[u], w)?;
            let sv = disparity_alpha(strength[v], degree[v], w)?;
            let (score, endpoint) = if sv.alpha < su.alpha {
                (sv, &pair.word_b)
            } else {
                (su, &pair.word_a)
            };
            Ok(EdgeSignificance {
                pair: pair.clone(),
                significance: score.alpha,
                endpoint: Arc::clone(endpoint),
                score,
            })
        })
        .collect()
}

/// Candidates in local retention order: significance ascending, then similarity
/// descending, then words. The significance does not depend on `p`, so every level
/// keeps a prefix of this list.
pub fn rank_by_significance<T: Scalar>(
    network: &TextNetwork<T>,
    candidates: &[CandidatePair<T>],
    table: &EmbeddingTable<T>,
) -> Result<Vec<CandidatePair<T>>> {
    let mut scored = virtual_edge_significance(network, candidates, table)?;
    scored.sort_by(EdgeSignificance::retention_cmp);
    Ok(scored.into_iter().map(|s| s.pair).collect())
}

/// Local strategy: keeps the `edge_budget` candidates with the smallest disparity
/// significance. Co-occurrence edges are never removed.
pub fn enrich_local<T: Scalar>(
    network: &TextNetwork<T>,
    candidates: &[CandidatePair<T>],
    level: EnrichmentLevel,
    table: &EmbeddingTable<T>,
) -> Result<Enrichment<T>> {
    if edge_budget(network, level) == 0 {
        return enrich_global(network, &[], level);
    }
    enrich_global(network, &rank_by_significance(network, candidates, table)?, level)
}
