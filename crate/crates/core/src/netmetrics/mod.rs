//! Per-node topological measurements.
//!
//! Every measurement treats the network as unweighted and undirected over the
//! union of co-occurrence and virtual edges; weights only matter upstream when
//! virtual edges are selected.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netbuild::TextNetwork;
use crate::scalar::Scalar;

mod local;
mod paths;
mod pagerank;
mod symmetry;
mod walks;

pub use local::local_measures;
pub use pagerank::{pagerank, PageRank, PageRankConfig};
pub use paths::{path_measures, PathMeasures};
pub use symmetry::{symmetry, symmetry_at_depth, SymmetryVariant};
pub use walks::{accessibility, accessibility_at_depth};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("word {0:?} is not a node of the network")]
    UnknownWord(String),
    #[error("hierarchical level {0} is not supported (expected 2 or 3)")]
    InvalidLevel(usize),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("network has no nodes")]
    EmptyNetwork,
    #[error("measurement list is empty")]
    EmptySpec,
    #[error("measurement {0} listed twice")]
    DuplicateMeasurement(Measurement),
    #[error("unknown measurement {0:?}")]
    UnknownMeasurement(String),
    #[error("invalid PageRank configuration: {0}")]
    InvalidPageRank(&'static str),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

pub(crate) fn node_of<T: Scalar>(network: &TextNetwork<T>, word: &str) -> Result<usize> {
    network
        .node_index(word)
        .ok_or_else(|| MetricsError::UnknownWord(word.to_string()))
}

pub(crate) fn check_level(h: usize) -> Result<()> {
    if h == 2 || h == 3 {
        Ok(())
    } else {
        Err(MetricsError::InvalidLevel(h))
    }
}

/// One feature column per word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measurement {
    Degree,
    Betweenness,
    Clustering,
    AvgShortestPath,
    Pagerank,
    AccessibilityH2,
    AccessibilityH3,
    SymmetryBackboneH2,
    SymmetryBackboneH3,
    SymmetryMergedH2,
    SymmetryMergedH3,
}

impl Measurement {
    pub const ALL: [Measurement; 11] = [
        Measurement::Degree,
        Measurement::Betweenness,
        Measurement::Clustering,
        Measurement::AvgShortestPath,
        Measurement::Pagerank,
        Measurement::AccessibilityH2,
        Measurement::AccessibilityH3,
        Measurement::SymmetryBackboneH2,
        Measurement::SymmetryBackboneH3,
        Measurement::SymmetryMergedH2,
        Measurement::SymmetryMergedH3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measurement::Degree => "degree",
            Measurement::Betweenness => "betweenness",
            Measurement::Clustering => "clustering",
            Measurement::AvgShortestPath => "avg_shortest_path",
            Measurement::Pagerank => "pagerank",
            Measurement::AccessibilityH2 => "accessibility_h2",
            Measurement::AccessibilityH3 => "accessibility_h3",
            Measurement::SymmetryBackboneH2 => "symmetry_backbone_h2",
            Measurement::SymmetryBackboneH3 => "symmetry_backbone_h3",
            Measurement::SymmetryMergedH2 => "symmetry_merged_h2",
            Measurement::SymmetryMergedH3 => "symmetry_merged_h3",
        }
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measurement {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self> {
        Measurement::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| MetricsError::UnknownMeasurement(s.to_string()))
    }
}

/// Ordered, duplicate-free selection of measurements; the order fixes feature columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Measurement>", into = "Vec<Measurement>")]
pub struct MeasurementSpec(Vec<Measurement>);

impl MeasurementSpec {
    pub fn new(selected: Vec<Measurement>) -> Result<Self> {
        if selected.is_empty() {
            return Err(MetricsError::EmptySpec);
        }
        for (i, m) in selected.iter().enumerate() {
            if selected[..i].contains(m) {
                return Err(MetricsError::DuplicateMeasurement(*m));
            }
        }
        Ok(Self(selected))
    }

    /// All eleven measurements in canonical order.
    pub fn full() -> Self {
        Self(Measurement::ALL.to_vec())
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn needs(&self, any: &[Measurement]) -> bool {
        self.0.iter().any(|m| any.contains(m))
    }
}

impl Default for MeasurementSpec {
    fn default() -> Self {
        Self::full()
    }
}

impl TryFrom<Vec<Measurement>> for MeasurementSpec {
    type Error = MetricsError;

    fn try_from(v: Vec<Measurement>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MeasurementSpec> for Vec<Measurement> {
    fn from(s: MeasurementSpec) -> Self {
        s.0
    }
}

/// Measurement values of one word, aligned with a [`MeasurementSpec`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeMeasurements<T> {
    pub word: String,
    pub values: Vec<T>,
}

/// Measures each word of `words` on `network`, columns in `spec` order.
///
/// Betweenness, shortest paths and PageRank are whole-graph passes and are
/// computed at most once per call.
pub fn measure_nodes<T: Scalar, S: AsRef<str>>(
    network: &TextNetwork<T>,
    words: &[S],
    spec: &MeasurementSpec,
    pagerank_config: &PageRankConfig,
) -> Result<Vec<NodeMeasurements<T>>> {
    let nodes = words
        .iter()
        .map(|w| node_of(network, w.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    if nodes.is_empty() {
        return Ok(Vec::new());
    }
    let paths = if spec.needs(&[Measurement::Betweenness, Measurement::AvgShortestPath]) {
        Some(path_measures(network)?)
    } else {
        None
    };
    let ranks = if spec.needs(&[Measurement::Pagerank]) {
        let pr = pagerank(network, pagerank_config)?;
        if !pr.converged {
            log::warn!(
                "PageRank did not converge after {} iterations; using the last iterate",
                pr.iterations
            );
        }
        Some(pr.scores)
    } else {
        None
    };
    let mut out = Vec::with_capacity(nodes.len());
    for (word, &node) in words.iter().zip(&nodes) {
        let w = word.as_ref();
        let mut values = Vec::with_capacity(spec.len());
        for &m in spec.measurements() {
            let v = match m {
                Measurement::Degree => T::of_usize(network.degree(node)),
                Measurement::Clustering => local_measures(network, w)?.1,
                Measurement::Betweenness => paths.as_ref().expect("computed above")[node].betweenness,
                Measurement::AvgShortestPath => {
                    paths.as_ref().expect("computed above")[node].avg_shortest_path
                }
                Measurement::Pagerank => ranks.as_ref().expect("computed above")[node],
                Measurement::AccessibilityH2 => accessibility(network, w, 2)?,
                Measurement::AccessibilityH3 => accessibility(network, w, 3)?,
                Measurement::SymmetryBackboneH2 => symmetry(network, w, 2, SymmetryVariant::Backbone)?,
                Measurement::SymmetryBackboneH3 => symmetry(network, w, 3, SymmetryVariant::Backbone)?,
                Measurement::SymmetryMergedH2 => symmetry(network, w, 2, SymmetryVariant::Merged)?,
                Measurement::SymmetryMergedH3 => symmetry(network, w, 3, SymmetryVariant::Merged)?,
            };
            values.push(v);
        }
        out.push(NodeMeasurements {
            word: w.to_string(),
            values,
        });
    }
    Ok(out)
}

/// Writes a `word,<measurement>...` CSV table.
pub fn write_measurements_csv<T: Scalar, W: Write>(
    rows: &[NodeMeasurements<T>],
    spec: &MeasurementSpec,
    out: W,
) -> Result<()> {
    let io = |e: csv::Error| MetricsError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["word".to_string()];
    header.extend(spec.measurements().iter().map(|m| m.name().to_string()));
    w.write_record(&header).map_err(io)?;
    for row in rows {
        let mut rec = vec![row.word.clone()];
        rec.extend(row.values.iter().map(|v| crate::runner::format_sig6(v.to_f64_lossy())));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| MetricsError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> TextNetwork<f64> {
        TextNetwork::from_pairs([("a", "b"), ("b", "c"), ("c", "a")]).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert_eq!(MeasurementSpec::new(vec![]), Err(MetricsError::EmptySpec));
        assert_eq!(
            MeasurementSpec::new(vec![Measurement::Degree, Measurement::Degree]),
            Err(MetricsError::DuplicateMeasurement(Measurement::Degree))
        );
        assert_eq!(MeasurementSpec::full().len(), 11);
        let parsed: MeasurementSpec =
            serde_json::from_str(r#"["pagerank","symmetry_merged_h3"]"#).unwrap();
        assert_eq!(
            parsed.measurements(),
            &[Measurement::Pagerank, Measurement::SymmetryMergedH3]
        );
        assert!(serde_json::from_str::<MeasurementSpec>(r#"["degree","degree"]"#).is_err());
        assert_eq!("avg_shortest_path".parse::<Measurement>(), Ok(Measurement::AvgShortestPath));
        for m in Measurement::ALL {
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
    }

    #[test]
    fn degree_only() {
        let spec = MeasurementSpec::new(vec![Measurement::Degree]).unwrap();
        let rows = measure_nodes(&triangle(), &["a"], &spec, &PageRankConfig::default()).unwrap();
        assert_eq!(rows, vec![NodeMeasurements { word: "a".into(), values: vec![2.0] }]);
    }

    #[test]
    fn column_order_follows_spec() {
        let net: TextNetwork<f64> =
            TextNetwork::from_pairs([("a", "b"), ("b", "c"), ("c", "d"), ("b", "d")]).unwrap();
        let cfg = PageRankConfig::default();
        let pd = MeasurementSpec::new(vec![Measurement::Pagerank, Measurement::Degree]).unwrap();
        let dp = MeasurementSpec::new(vec![Measurement::Degree, Measurement::Pagerank]).unwrap();
        let x = measure_nodes(&net, &["b", "c"], &pd, &cfg).unwrap();
        let y = measure_nodes(&net, &["b", "c"], &dp, &cfg).unwrap();
        for (r, s) in x.iter().zip(&y) {
            assert_eq!(r.values[0], s.values[1]);
            assert_eq!(r.values[1], s.values[0]);
        }
    }

    #[test]
    fn missing_word() {
        let spec = MeasurementSpec::full();
        let err = measure_nodes(&triangle(), &["zz"], &spec, &PageRankConfig::default());
        assert_eq!(err, Err(MetricsError::UnknownWord("zz".into())));
    }

    #[test]
    fn csv_table() {
        let spec = MeasurementSpec::new(vec![Measurement::Degree, Measurement::Clustering]).unwrap();
        let rows = measure_nodes(&triangle(), &["a", "b"], &spec, &PageRankConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_measurements_csv(&rows, &spec, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "word,degree,clustering\na,2,1\nb,2,1\n");
    }
}
