//! Classifiers: k-nearest neighbours, Gaussian naive Bayes, CART decision tree
//! and a linear one-vs-rest SVM.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FeatureMatrix, LearnError, Result};
use crate::scalar::Scalar;

mod bayes;
mod knn;
mod svm;
mod tree;

pub const DEFAULT_SVM_EPOCHS: usize = 50;

/// A classifier with concrete parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierSpec {
    DecisionTree {
        /// `None` grows until leaves are pure or `min_leaf` stops it.
        max_depth: Option<usize>,
        min_leaf: usize,
    },
    Knn {
        k: usize,
    },
    NaiveBayes,
    SvmLinear {
        c: f64,
        epochs: usize,
    },
}

impl ClassifierSpec {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            ClassifierSpec::DecisionTree { .. } => ClassifierKind::DecisionTree,
            ClassifierSpec::Knn { .. } => ClassifierKind::Knn,
            ClassifierSpec::NaiveBayes => ClassifierKind::NaiveBayes,
            ClassifierSpec::SvmLinear { .. } => ClassifierKind::SvmLinear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(LearnError::InvalidParameters(m.to_string()));
        match *self {
            ClassifierSpec::DecisionTree { max_depth, min_leaf } => {
                if max_depth == Some(0) {
                    return bad("max_depth must be at least 1");
                }
                if min_leaf == 0 {
                    return bad("min_leaf must be at least 1");
                }
            }
            ClassifierSpec::Knn { k: 0 } => return bad("k must be at least 1"),
            ClassifierSpec::SvmLinear { c, epochs } => {
                if !(c > 0.0 && c.is_finite()) {
                    return bad("C must be positive and finite");
                }
                if epochs == 0 {
                    return bad("epochs must be at least 1");
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for ClassifierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierSpec::DecisionTree { max_depth, min_leaf } => match max_depth {
                Some(d) => write!(f, "decision_tree(max_depth={d},min_leaf={min_leaf})"),
                None => write!(f, "decision_tree(max_depth=none,min_leaf={min_leaf})"),
            },
            ClassifierSpec::Knn { k } => write!(f, "knn(k={k})"),
            ClassifierSpec::NaiveBayes => f.write_str("naive_bayes"),
            ClassifierSpec::SvmLinear { c, epochs } => write!(f, "svm_linear(c={c},epochs={epochs})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    DecisionTree,
    Knn,
    NaiveBayes,
    SvmLinear,
}

impl ClassifierKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::DecisionTree => "decision_tree",
            ClassifierKind::Knn => "knn",
            ClassifierKind::NaiveBayes => "naive_bayes",
            ClassifierKind::SvmLinear => "svm_linear",
        }
    }

    /// Parameter grid searched when a classifier is tuned.
    pub fn grid(self) -> Vec<ClassifierSpec> {
        match self {
            ClassifierKind::DecisionTree => vec![
                ClassifierSpec::DecisionTree { max_depth: None, min_leaf: 1 },
                ClassifierSpec::DecisionTree { max_depth: Some(10), min_leaf: 1 },
            ],
            ClassifierKind::Knn => [1, 3, 5].map(|k| ClassifierSpec::Knn { k }).to_vec(),
            ClassifierKind::NaiveBayes => vec![ClassifierSpec::NaiveBayes],
            ClassifierKind::SvmLinear => [0.1, 1.0, 10.0]
                .map(|c| ClassifierSpec::SvmLinear { c, epochs: DEFAULT_SVM_EPOCHS })
                .to_vec(),
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What cross-validation trains in each fold: fixed parameters, or the kind's
/// grid with parameters chosen by an inner cross-validation on the training fold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Fixed(ClassifierSpec),
    Tuned(ClassifierKind),
}

impl Model {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Model::Fixed(s) => s.kind(),
            Model::Tuned(k) => *k,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Model::Fixed(s) => s.to_string(),
            Model::Tuned(k) => k.name().to_string(),
        }
    }
}

pub(crate) trait Predictor<T> {
    fn predict(&self, row: &[T]) -> usize;
}

/// Training rows with labels mapped to indices of the sorted class list.
pub(crate) struct Encoded<'a, T> {
    pub rows: &'a [Vec<T>],
    pub y: Vec<usize>,
    pub classes: Vec<String>,
}

impl<T> Encoded<'_, T> {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }
}

fn encode<T: Scalar>(train: &FeatureMatrix<T>) -> Encoded<'_, T> {
    let classes: Vec<String> = train
        .labels()
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let y = train
        .labels()
        .iter()
        .map(|l| classes.binary_search(l).expect("label is in the class list"))
        .collect();
    Encoded {
        rows: train.rows(),
        y,
        classes,
    }
}

fn fit<T: Scalar>(data: &Encoded<'_, T>, spec: &ClassifierSpec, seed: u64) -> Box<dyn Predictor<T>> {
    match *spec {
        ClassifierSpec::Knn { k } => Box::new(knn::Knn::fit(data, k)),
        ClassifierSpec::NaiveBayes => Box::new(bayes::GaussianNb::fit(data)),
        ClassifierSpec::DecisionTree { max_depth, min_leaf } => {
            Box::new(tree::Tree::fit(data, max_depth, min_leaf))
        }
        ClassifierSpec::SvmLinear { c, epochs } => Box::new(svm::LinearSvm::fit(data, c, epochs, seed)),
    }
}

/// Trains on `train` and labels every row of `test`.
pub fn train_predict<T: Scalar>(
    train: &FeatureMatrix<T>,
    test: &FeatureMatrix<T>,
    spec: &ClassifierSpec,
    seed: u64,
) -> Result<Vec<String>> {
    spec.validate()?;
    if train.column_names() != test.column_names() {
        return Err(LearnError::SchemaMismatch);
    }
    let data = encode(train);
    if data.n_classes() < 2 {
        return Err(LearnError::SingleClass);
    }
    let model = fit(&data, spec, seed);
    Ok(test
        .rows()
        .iter()
        .map(|r| data.classes[model.predict(r)].clone())
        .collect())
}

/// Index of the largest score; the first one wins ties.
pub(crate) fn argmax<T: Scalar>(scores: &[T]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}
