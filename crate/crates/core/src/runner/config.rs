use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Result, RunnerError};
use crate::corpus::SampleSpec;
use crate::learn::{ClassifierKind, ClassifierSpec, CvMode, Model};
use crate::netbuild::EnrichmentLevel;
use crate::netmetrics::{MeasurementSpec, PageRankConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSource {
    /// Method name used in reports, e.g. `glove`.
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopwordMode {
    #[default]
    Keep,
    Remove,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopwordConfig {
    #[serde(default)]
    pub mode: StopwordMode,
    /// List used when removing; the bundled English list when absent.
    #[serde(default)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Global,
    Local,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Global => "global",
            Strategy::Local => "local",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A classifier entry: full parameters, or just a kind to tune over its grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassifierEntry {
    Fixed(ClassifierSpec),
    Tuned {
        kind: ClassifierKind,
    },
}

impl ClassifierEntry {
    pub fn model(self) -> Model {
        match self {
            ClassifierEntry::Fixed(spec) => Model::Fixed(spec),
            ClassifierEntry::Tuned { kind } => Model::Tuned(kind),
        }
    }
}

fn default_p_grid() -> Vec<EnrichmentLevel> {
    (1..=20)
        .map(|p| EnrichmentLevel::new(f64::from(p)).expect("1..=20 is a valid level"))
        .collect()
}

fn default_strategies() -> Vec<Strategy> {
    vec![Strategy::Global]
}

fn default_classifiers() -> Vec<ClassifierEntry> {
    [
        ClassifierKind::DecisionTree,
        ClassifierKind::Knn,
        ClassifierKind::NaiveBayes,
        ClassifierKind::SvmLinear,
    ]
    .map(|kind| ClassifierEntry::Tuned { kind })
    .to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `path,author,title` manifest.
    pub corpus: PathBuf,
    pub embeddings: Vec<EmbeddingSource>,
    #[serde(default)]
    pub stopwords: StopwordConfig,
    #[serde(default)]
    pub lemma_map: Option<PathBuf>,
    /// Sample lengths `w`.
    pub lengths: Vec<SampleSpec>,
    /// Enrichment levels in percent, ascending. The baseline p = 0 is always run.
    #[serde(default = "default_p_grid")]
    pub p_grid: Vec<EnrichmentLevel>,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<Strategy>,
    #[serde(default)]
    pub measurements: MeasurementSpec,
    #[serde(default = "default_classifiers")]
    pub classifiers: Vec<ClassifierEntry>,
    #[serde(default)]
    pub cv: CvMode,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub pagerank: PageRankConfig,
    /// Documents per length allowed to be shorter than `w` before that length's
    /// cells fail.
    #[serde(default)]
    pub max_skipped_samples: usize,
}

impl ExperimentConfig {
    /// Reads and validates a JSON config; relative paths resolve against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| RunnerError::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        config.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(config)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| RunnerError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus);
        fix(&mut self.output_dir);
        for e in &mut self.embeddings {
            fix(&mut e.path);
        }
        if let Some(f) = &mut self.stopwords.file {
            fix(f);
        }
        if let Some(l) = &mut self.lemma_map {
            fix(l);
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(RunnerError::Config(m));
        if self.embeddings.is_empty() {
            return bad("at least one embedding is required".into());
        }
        let mut names = BTreeSet::new();
        for e in &self.embeddings {
            if e.name.is_empty() || !names.insert(&e.name) {
                return bad(format!("embedding name {:?} is empty or repeated", e.name));
            }
        }
        if self.lengths.is_empty() {
            return bad("at least one sample length is required".into());
        }
        if has_duplicates(&self.lengths) {
            return bad("sample lengths must be distinct".into());
        }
        if self
            .p_grid
            .windows(2)
            .any(|w| w[0].percent() >= w[1].percent())
        {
            return bad("p grid must be strictly ascending".into());
        }
        if self.strategies.is_empty() || has_duplicates(&self.strategies) {
            return bad("strategies must be non-empty and distinct".into());
        }
        if self.classifiers.is_empty() {
            return bad("at least one classifier is required".into());
        }
        let mut labels = BTreeSet::new();
        for c in &self.classifiers {
            if let ClassifierEntry::Fixed(spec) = c {
                spec.validate().map_err(|e| RunnerError::Config(e.to_string()))?;
            }
            if !labels.insert(c.model().label()) {
                return bad(format!("classifier {} listed twice", c.model().label()));
            }
        }
        if let CvMode::StratifiedKFold(k) = self.cv {
            if k < 2 {
                return bad("stratified k-fold needs k ≥ 2".into());
            }
        }
        let pr = &self.pagerank;
        if !(pr.damping > 0.0 && pr.damping < 1.0) || !(pr.tolerance > 0.0) || pr.max_iterations == 0 {
            return bad("pagerank needs 0 < damping < 1, tolerance > 0 and max_iterations ≥ 1".into());
        }
        Ok(())
    }

    /// Enrichment levels of the sweep, without the baseline.
    pub fn sweep_levels(&self) -> Vec<EnrichmentLevel> {
        self.p_grid.iter().copied().filter(|p| p.percent() > 0.0).collect()
    }
}

fn has_duplicates<T: Ord>(items: &[T]) -> bool {
    items.iter().collect::<BTreeSet<_>>().len() != items.len()
}
