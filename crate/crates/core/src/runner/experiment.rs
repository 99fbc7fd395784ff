use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;

use super::config::{ExperimentConfig, Strategy, StopwordMode};
use super::report::{summarize, CellMetadata, CellReport, ExperimentReport, PointResult, TuningNote};
use super::{Result, RunnerError};
use crate::corpus::{load_corpus, take_sample, LabeledDocument, LemmaMap, Preprocessing, StopwordSet, TokenSequence};
use crate::embed::{load_embedding_table, rank_candidate_pairs, rank_top_candidate_pairs, LoadOptions, PairSet};
use crate::learn::{cross_validate, feature_names, feature_row, shared_vocabulary, sweep_stats, FeatureMatrix, SweepStats};
use crate::netbuild::{
    build_cooccurrence, edge_budget, enrich_global, rank_by_significance, EnrichmentLevel, TextNetwork,
};
use crate::embed::EmbeddingTable;

/// Networks for one sample length, shared by every embedding and strategy.
struct LengthData {
    networks: Vec<TextNetwork<f64>>,
    labels: Vec<String>,
    shared: Vec<String>,
    skipped: Vec<String>,
    mean_vocabulary_size: f64,
}

/// Feature matrices at p = 0 followed by each sweep level.
struct UnitFeatures {
    matrices: Vec<FeatureMatrix<f64>>,
    requested: Vec<usize>,
    added: Vec<usize>,
}

fn preprocessing(config: &ExperimentConfig) -> Result<Preprocessing> {
    let stopwords = match (config.stopwords.mode, &config.stopwords.file) {
        (StopwordMode::Keep, _) => None,
        (StopwordMode::Remove, None) => Some(StopwordSet::default_list()),
        (StopwordMode::Remove, Some(path)) => Some(StopwordSet::load(path)?),
    };
    let lemma_map = config.lemma_map.as_ref().map(LemmaMap::load).transpose()?;
    Ok(Preprocessing { stopwords, lemma_map })
}

fn prepare_length(
    docs: &[LabeledDocument],
    tokens: &[TokenSequence],
    length: usize,
    max_skipped: usize,
) -> std::result::Result<LengthData, String> {
    let spec = crate::corpus::SampleSpec::new(length).map_err(|e| e.to_string())?;
    let mut samples = Vec::new();
    let mut labels = Vec::new();
    let mut skipped = Vec::new();
    for (doc, toks) in docs.iter().zip(tokens) {
        match take_sample(toks, spec) {
            Ok(s) => {
                samples.push(s);
                labels.push(doc.author().to_string());
            }
            Err(e) => {
                warn!("w={length}: skipping {:?}: {e}", doc.title());
                skipped.push(doc.title().to_string());
            }
        }
    }
    if skipped.len() > max_skipped {
        return Err(format!(
            "{} documents shorter than {length} tokens (limit {max_skipped})",
            skipped.len()
        ));
    }
    let networks = samples
        .par_iter()
        .map(build_cooccurrence::<f64>)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let shared = shared_vocabulary(networks.iter().map(|n| n.words().iter()))
        .map_err(|e| format!("shared vocabulary: {e}"))?;
    let mean_vocabulary_size = if networks.is_empty() {
        0.0
    } else {
        networks.iter().map(|n| n.node_count() as f64).sum::<f64>() / networks.len() as f64
    };
    Ok(LengthData {
        networks,
        labels,
        shared,
        skipped,
        mean_vocabulary_size,
    })
}

/// Virtual-edge candidates of one network in retention order for the strategy.
fn ordered_candidates(
    network: &TextNetwork<f64>,
    table: &EmbeddingTable<f64>,
    strategy: Strategy,
    max_level: EnrichmentLevel,
) -> crate::netbuild::Result<Vec<crate::embed::CandidatePair<f64>>> {
    let vocabulary: BTreeSet<&str> = network.words().iter().map(|w| &**w).collect();
    let exclude: PairSet = network
        .edges()
        .iter()
        .map(|e| (network.word(e.a), network.word(e.b)))
        .collect();
    match strategy {
        Strategy::Global => {
            let limit = edge_budget(network, max_level);
            Ok(rank_top_candidate_pairs(&vocabulary, table, &exclude, Some(limit)))
        }
        Strategy::Local => {
            let all = rank_candidate_pairs(&vocabulary, table, &exclude);
            rank_by_significance(network, &all, table)
        }
    }
}

fn unit_features(
    data: &LengthData,
    table: &EmbeddingTable<f64>,
    strategy: Strategy,
    levels: &[EnrichmentLevel],
    config: &ExperimentConfig,
) -> std::result::Result<UnitFeatures, String> {
    let max_level = levels.last().copied().unwrap_or(EnrichmentLevel::NONE);
    let spec = &config.measurements;
    // Per sample: one (row, requested, added) triple per level.
    let per_sample = data
        .networks
        .par_iter()
        .map(|net| {
            let ordered = ordered_candidates(net, table, strategy, max_level).map_err(|e| e.to_string())?;
            levels
                .iter()
                .map(|&level| {
                    let enriched = enrich_global(net, &ordered, level).map_err(|e| e.to_string())?;
                    let row = feature_row(&enriched.network, &data.shared, spec, &config.pagerank)
                        .map_err(|e| e.to_string())?;
                    Ok((row, enriched.requested, enriched.added))
                })
                .collect::<std::result::Result<Vec<_>, String>>()
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    let names = feature_names(&data.shared, spec);
    let mut out = UnitFeatures {
        matrices: Vec::with_capacity(levels.len()),
        requested: vec![0; levels.len()],
        added: vec![0; levels.len()],
    };
    for li in 0..levels.len() {
        let mut rows = Vec::with_capacity(per_sample.len());
        for sample in &per_sample {
            let (row, requested, added) = &sample[li];
            rows.push(row.clone());
            out.requested[li] += requested;
            out.added[li] += added;
        }
        let m = FeatureMatrix::new(names.clone(), rows, data.labels.clone()).map_err(|e| e.to_string())?;
        out.matrices.push(m);
    }
    Ok(out)
}

fn failed_cell(
    embedding: &str,
    length: usize,
    strategy: Strategy,
    classifier: String,
    metadata: Option<CellMetadata>,
    reason: String,
) -> CellReport {
    CellReport {
        embedding: embedding.to_string(),
        length,
        strategy,
        classifier,
        metadata,
        points: Vec::new(),
        sweep: None,
        error: Some(reason),
    }
}

/// Runs the whole grid. `workers` bounds the thread pool; 0 uses all cores.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| RunnerError::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(config))
}

fn run_in_pool(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let docs = load_corpus(&config.corpus)?;
    let prep = preprocessing(config)?;
    let tokens: Vec<TokenSequence> = docs.par_iter().map(|d| prep.apply(d.text())).collect();
    info!("preprocessed {} documents in {:.2?}", docs.len(), started.elapsed());

    let lengths: Vec<usize> = config.lengths.iter().map(|l| l.len()).collect();
    let length_data: Vec<std::result::Result<LengthData, String>> = lengths
        .iter()
        .map(|&w| prepare_length(&docs, &tokens, w, config.max_skipped_samples))
        .collect();

    // Only words of some sample can take part in a virtual edge.
    let mut wanted: HashSet<String> = HashSet::new();
    for data in length_data.iter().flatten() {
        for net in &data.networks {
            wanted.extend(net.words().iter().map(|w| w.to_string()));
        }
    }

    let mut levels = vec![EnrichmentLevel::NONE];
    levels.extend(config.sweep_levels());
    let models: Vec<_> = config.classifiers.iter().map(|c| c.model()).collect();
    let mut cells = Vec::new();

    for source in &config.embeddings {
        let t = Instant::now();
        let table = load_embedding_table::<f64>(
            &source.path,
            &LoadOptions {
                restrict_to: Some(&wanted),
            },
        );
        match &table {
            Ok(tab) => info!("{}: {} vectors in {:.2?}", source.name, tab.len(), t.elapsed()),
            Err(e) => warn!("{}: {e}", source.name),
        }
        for (&length, data) in lengths.iter().zip(&length_data) {
            for &strategy in &config.strategies {
                let data = match (data, &table) {
                    (Err(reason), _) => {
                        for m in &models {
                            cells.push(failed_cell(&source.name, length, strategy, m.label(), None, reason.clone()));
                        }
                        continue;
                    }
                    (_, Err(e)) => {
                        for m in &models {
                            let reason = format!("embedding {}: {e}", source.name);
                            cells.push(failed_cell(&source.name, length, strategy, m.label(), None, reason));
                        }
                        continue;
                    }
                    (Ok(d), _) => d,
                };
                let table = table.as_ref().expect("checked above");
                let t = Instant::now();
                let features = unit_features(data, table, strategy, &levels, config);
                let metadata = CellMetadata {
                    samples: data.networks.len(),
                    skipped_samples: data.skipped.clone(),
                    mean_vocabulary_size: data.mean_vocabulary_size,
                    shared_words: data.shared.len(),
                    feature_columns: data.shared.len() * config.measurements.len(),
                };
                let features = match features {
                    Ok(f) => f,
                    Err(reason) => {
                        for m in &models {
                            cells.push(failed_cell(
                                &source.name,
                                length,
                                strategy,
                                m.label(),
                                Some(metadata.clone()),
                                reason.clone(),
                            ));
                        }
                        continue;
                    }
                };
                info!(
                    "{} w={length} {strategy}: features for {} levels in {:.2?}",
                    source.name,
                    levels.len(),
                    t.elapsed()
                );
                let t = Instant::now();
                let jobs: Vec<(usize, usize)> = (0..models.len())
                    .flat_map(|mi| (0..levels.len()).map(move |li| (mi, li)))
                    .collect();
                let outcomes: Vec<_> = jobs
                    .par_iter()
                    .map(|&(mi, li)| cross_validate(&features.matrices[li], &models[mi], config.cv, config.seed))
                    .collect();
                let mut outcomes = outcomes.into_iter();
                for model in &models {
                    let mine: Vec<_> = outcomes.by_ref().take(levels.len()).collect();
                    let mut points = Vec::with_capacity(levels.len());
                    let mut error = None;
                    for (li, outcome) in mine.into_iter().enumerate() {
                        match outcome {
                            Ok(o) => points.push(PointResult {
                                p: levels[li].percent(),
                                accuracy: o.accuracy(),
                                correct: o.correct,
                                total: o.total,
                                virtual_edges_requested: features.requested[li],
                                virtual_edges_added: features.added[li],
                            }),
                            Err(e) => {
                                error = Some(format!("p={}: {e}", levels[li].percent()));
                                break;
                            }
                        }
                    }
                    if let Some(reason) = error {
                        cells.push(failed_cell(
                            &source.name,
                            length,
                            strategy,
                            model.label(),
                            Some(metadata.clone()),
                            reason,
                        ));
                        continue;
                    }
                    let gamma0 = points[0].accuracy;
                    let sweep = if points.len() == 1 {
                        Ok(SweepStats::baseline_only(gamma0))
                    } else {
                        let grid: Vec<(f64, f64)> = points[1..].iter().map(|p| (p.p, p.accuracy)).collect();
                        sweep_stats(gamma0, &grid)
                    };
                    match sweep {
                        Ok(s) => cells.push(CellReport {
                            embedding: source.name.clone(),
                            length,
                            strategy,
                            classifier: model.label(),
                            metadata: Some(metadata.clone()),
                            points,
                            sweep: Some(s),
                            error: None,
                        }),
                        Err(e) => cells.push(failed_cell(
                            &source.name,
                            length,
                            strategy,
                            model.label(),
                            Some(metadata.clone()),
                            e.to_string(),
                        )),
                    }
                }
                info!(
                    "{} w={length} {strategy}: {} classifiers cross-validated in {:.2?}",
                    source.name,
                    models.len(),
                    t.elapsed()
                );
            }
        }
    }
    info!("experiment finished in {:.2?}", started.elapsed());

    let grids: BTreeMap<String, Vec<String>> = models
        .iter()
        .map(|m| {
            let entries = match m {
                crate::learn::Model::Fixed(spec) => vec![spec.to_string()],
                crate::learn::Model::Tuned(kind) => kind.grid().iter().map(|s| s.to_string()).collect(),
            };
            (m.label(), entries)
        })
        .collect();
    let summary = summarize(&cells, &lengths);
    Ok(ExperimentReport {
        seed: config.seed,
        cv: config.cv,
        p_grid: levels.iter().map(|l| l.percent()).collect(),
        tuning: TuningNote {
            note: "classifier parameters come from a fixed grid searched by nested cross-validation; \
                   the grid is a stand-in for unspecified optimization heuristics"
                .into(),
            grids,
        },
        cells,
        summary,
    })
}
