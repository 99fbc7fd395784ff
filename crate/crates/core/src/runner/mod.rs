//! Experiment grid orchestration and report output.

use thiserror::Error;

use crate::corpus::CorpusError;

mod config;
mod experiment;
mod format;
mod report;

pub use config::{ClassifierEntry, EmbeddingSource, ExperimentConfig, StopwordConfig, StopwordMode, Strategy};
pub use experiment::run_experiment;
pub use format::{format_percent, format_sig6};
pub use report::{
    emit_report, printed_improvements, summarize, summary_gain, sweep_record, CellMetadata, CellReport, ExperimentReport, PointResult,
    SummaryRow, TuningNote, MISSING,
};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, RunnerError>;
