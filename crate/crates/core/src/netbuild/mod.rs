//! Word adjacency networks and their enrichment with virtual edges.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::TokenSequence;
use crate::scalar::Scalar;

mod disparity;
mod edgelist;
mod enrich;

pub use disparity::{disparity_alpha, DisparityScore};
pub use edgelist::{read_edge_list, write_edge_list};
pub use enrich::{
    edge_budget, enrich_global, enrich_local, rank_by_significance, virtual_edge_significance,
    EdgeSignificance,
    Enrichment, EnrichmentLevel, MIN_DISPARITY_WEIGHT,
};

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("cannot build a network from an empty sample")]
    EmptySample,
    #[error("self-loop on {0:?}")]
    SelfLoop(String),
    #[error("edge {0:?}-{1:?} already exists")]
    DuplicateEdge(String, String),
    #[error("unknown word {0:?}")]
    UnknownWord(String),
    #[error("enrichment level {0} is outside [0, 100]")]
    InvalidLevel(f64),
    #[error("node strength must be positive, got {0}")]
    NonPositiveStrength(f64),
    #[error("edge weight must be positive, got {0}")]
    NonPositiveWeight(f64),
    #[error("edge weight {weight} exceeds node strength {strength}")]
    WeightExceedsStrength { weight: f64, strength: f64 },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for NetworkError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, NetworkError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Cooccurrence,
    Virtual,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Cooccurrence => "cooccurrence",
            EdgeKind::Virtual => "virtual",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cooccurrence" => Ok(EdgeKind::Cooccurrence),
            "virtual" => Ok(EdgeKind::Virtual),
            other => Err(format!("unknown edge kind {other:?}")),
        }
    }
}

/// Undirected edge between node indices `a < b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge<T> {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
    /// Number of adjacent occurrences; 0 for virtual edges.
    pub cooccurrence_count: u32,
    pub weight: T,
}

/// Undirected simple graph over words with typed, weighted edges.
///
/// Nodes are numbered in insertion order. There are no self-loops and at most
/// one edge per unordered pair.
#[derive(Debug, Clone, Default)]
pub struct TextNetwork<T> {
    words: Vec<Arc<str>>,
    index: HashMap<Arc<str>, usize>,
    edges: Vec<Edge<T>>,
    edge_index: HashMap<(usize, usize), usize>,
    adjacency: Vec<Vec<usize>>,
}

impl<T: Scalar> TextNetwork<T> {
    pub fn new() -> Self {
        Self {
            words: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            edge_index: HashMap::new(),
            adjacency: Vec::new(),
        }
    }

    /// Adds a node if absent and returns its index.
    pub fn add_node(&mut self, word: &str) -> usize {
        if let Some(&i) = self.index.get(word) {
            return i;
        }
        let id = self.words.len();
        let word: Arc<str> = Arc::from(word);
        self.index.insert(Arc::clone(&word), id);
        self.words.push(word);
        self.adjacency.push(Vec::new());
        id
    }

    /// Adds an edge between existing nodes.
    pub fn add_edge(
        &mut self,
        u: usize,
        v: usize,
        kind: EdgeKind,
        cooccurrence_count: u32,
        weight: T,
    ) -> Result<()> {
        let n = self.words.len();
        if u >= n || v >= n {
            return Err(NetworkError::UnknownWord(format!("#{}", u.max(v))));
        }
        if u == v {
            return Err(NetworkError::SelfLoop(self.words[u].to_string()));
        }
        let (a, b) = (u.min(v), u.max(v));
        if self.edge_index.contains_key(&(a, b)) {
            return Err(NetworkError::DuplicateEdge(
                self.words[a].to_string(),
                self.words[b].to_string(),
            ));
        }
        let count = match kind {
            EdgeKind::Cooccurrence => cooccurrence_count,
            EdgeKind::Virtual => 0,
        };
        self.edge_index.insert((a, b), self.edges.len());
        self.edges.push(Edge {
            a,
            b,
            kind,
            cooccurrence_count: count,
            weight,
        });
        self.adjacency[a].push(b);
        self.adjacency[b].push(a);
        Ok(())
    }

    /// Adds an edge by word, creating nodes as needed.
    pub fn add_word_edge(
        &mut self,
        a: &str,
        b: &str,
        kind: EdgeKind,
        cooccurrence_count: u32,
        weight: T,
    ) -> Result<()> {
        let u = self.add_node(a);
        let v = self.add_node(b);
        self.add_edge(u, v, kind, cooccurrence_count, weight)
    }

    /// Co-occurrence network with unit counts from a list of word pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut net = Self::new();
        for (a, b) in pairs {
            net.add_word_edge(a, b, EdgeKind::Cooccurrence, 1, T::one())?;
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.words.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count_edges(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn words(&self) -> &[Arc<str>] {
        &self.words
    }

    pub fn word(&self, node: usize) -> &str {
        &self.words[node]
    }

    pub fn node_index(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    /// Neighbor indices in edge insertion order.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<&Edge<T>> {
        self.edge_index
            .get(&(u.min(v), u.max(v)))
            .map(|&i| &self.edges[i])
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.node_index(a), self.node_index(b)) {
            (Some(u), Some(v)) => self.edge_index.contains_key(&(u.min(v), u.max(v))),
            _ => false,
        }
    }

    /// Lexicographically ordered `(word_a, word_b, kind)` triples, `word_a < word_b`.
    pub fn edge_set(&self) -> BTreeSet<(String, String, EdgeKind)> {
        self.edges
            .iter()
            .map(|e| {
                let (x, y) = (self.word(e.a), self.word(e.b));
                let (x, y) = if x <= y { (x, y) } else { (y, x) };
                (x.to_string(), y.to_string(), e.kind)
            })
            .collect()
    }

    /// Same nodes, only co-occurrence edges.
    pub fn cooccurrence_subgraph(&self) -> Self {
        let mut out = Self::new();
        for w in &self.words {
            out.add_node(w);
        }
        for e in self.edges.iter().filter(|e| e.kind == EdgeKind::Cooccurrence) {
            out.add_edge(e.a, e.b, e.kind, e.cooccurrence_count, e.weight)
                .expect("edges of a valid network stay valid");
        }
        out
    }
}

impl<T: Scalar> PartialEq for TextNetwork<T> {
    /// Structural equality: same node words and the same typed, weighted edges.
    fn eq(&self, other: &Self) -> bool {
        if self.node_count() != other.node_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        if self.words.iter().any(|w| !other.contains_word(w)) {
            return false;
        }
        self.edges.iter().all(|e| {
            let (Some(u), Some(v)) = (
                other.node_index(self.word(e.a)),
                other.node_index(self.word(e.b)),
            ) else {
                return false;
            };
            other.edge_between(u, v).is_some_and(|o| {
                o.kind == e.kind
                    && o.cooccurrence_count == e.cooccurrence_count
                    && o.weight == e.weight
            })
        })
    }
}

/// Word adjacency network: one node per distinct token, an edge for every
/// pair of adjacent distinct tokens, weight = number of adjacencies.
pub fn build_cooccurrence<T: Scalar>(sample: &TokenSequence) -> Result<TextNetwork<T>> {
    if sample.is_empty() {
        return Err(NetworkError::EmptySample);
    }
    let mut net = TextNetwork::new();
    let ids: Vec<usize> = sample.iter().map(|t| net.add_node(t)).collect();
    let mut counts: HashMap<(usize, usize), u32> = HashMap::new();
    let mut order = Vec::new();
    for pair in ids.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        let c = counts.entry(key).or_insert_with(|| {
            order.push(key);
            0
        });
        *c += 1;
    }
    for key in order {
        let c = counts[&key];
        net.add_edge(key.0, key.1, EdgeKind::Cooccurrence, c, T::of(f64::from(c)))?;
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tokens(words: &[&str]) -> TokenSequence {
        words.iter().copied().collect()
    }

    fn count(net: &TextNetwork<f64>, a: &str, b: &str) -> Option<u32> {
        let (u, v) = (net.node_index(a)?, net.node_index(b)?);
        net.edge_between(u, v).map(|e| e.cooccurrence_count)
    }

    #[test]
    fn cooccurrence_examples() {
        let net: TextNetwork<f64> = build_cooccurrence(&tokens(&["a", "b", "a", "c"])).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.edge_count(), 2);
        assert_eq!(count(&net, "a", "b"), Some(2));
        assert_eq!(count(&net, "a", "c"), Some(1));
        assert_eq!(net.edge_between(0, 1).unwrap().weight, 2.0);

        let single: TextNetwork<f64> = build_cooccurrence(&tokens(&["a"])).unwrap();
        assert_eq!((single.node_count(), single.edge_count()), (1, 0));

        let rep: TextNetwork<f64> = build_cooccurrence(&tokens(&["a", "a", "b"])).unwrap();
        assert_eq!(rep.edge_count(), 1);
        assert_eq!(count(&rep, "a", "b"), Some(1));

        assert_eq!(
            build_cooccurrence::<f64>(&TokenSequence::default()),
            Err(NetworkError::EmptySample)
        );
    }

    #[test]
    fn rejects_invalid_edges() {
        let mut net = TextNetwork::<f64>::new();
        let a = net.add_node("a");
        let b = net.add_node("b");
        assert!(matches!(
            net.add_edge(a, a, EdgeKind::Virtual, 0, 1.0),
            Err(NetworkError::SelfLoop(_))
        ));
        net.add_edge(a, b, EdgeKind::Virtual, 5, 0.5).unwrap();
        assert_eq!(net.edges()[0].cooccurrence_count, 0);
        assert!(matches!(
            net.add_edge(b, a, EdgeKind::Cooccurrence, 1, 1.0),
            Err(NetworkError::DuplicateEdge(..))
        ));
        assert!(net.add_edge(a, 9, EdgeKind::Virtual, 0, 1.0).is_err());
    }

    #[test]
    fn subgraph_and_equality() {
        let mut net: TextNetwork<f64> = TextNetwork::from_pairs([("a", "b"), ("b", "c")]).unwrap();
        let plain = net.clone();
        net.add_word_edge("a", "c", EdgeKind::Virtual, 0, 0.9).unwrap();
        assert_ne!(net, plain);
        assert_eq!(net.cooccurrence_subgraph(), plain);
        assert_eq!(net.count_edges(EdgeKind::Virtual), 1);
        assert!(net.has_edge("c", "a"));
    }
}
