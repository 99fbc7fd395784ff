use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use coocnet::corpus::{take_sample, LemmaMap, Preprocessing, SampleSpec, StopwordSet};
use coocnet::embed::{load_embedding_table, rank_candidate_pairs, LoadOptions, PairSet};
use coocnet::netbuild::{
    build_cooccurrence, enrich_global, enrich_local, write_edge_list, EnrichmentLevel, TextNetwork,
};
use coocnet::netmetrics::{measure_nodes, write_measurements_csv, Measurement, MeasurementSpec, PageRankConfig};
use coocnet::runner::{emit_report, run_experiment, ExperimentConfig, Strategy};

#[derive(Parser)]
#[command(name = "coocnet", version, about = "Co-occurrence networks with embedding-based virtual edges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid from a JSON config and write the report files.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the (optionally enriched) network of one text as an edge list.
    DumpNetwork {
        #[command(flatten)]
        network: NetworkArgs,
        /// Output file; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print per-word measurements of one text's network as CSV.
    Measure {
        #[command(flatten)]
        network: NetworkArgs,
        /// Comma-separated words; every node when absent.
        #[arg(long, value_delimiter = ',')]
        words: Vec<String>,
        /// Comma-separated measurement names; all of them when absent.
        #[arg(long, value_delimiter = ',')]
        measurements: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Global,
    Local,
}

#[derive(Args)]
struct NetworkArgs {
    /// Plain-text document.
    #[arg(long)]
    text: PathBuf,
    /// Keep only the first W tokens.
    #[arg(long)]
    length: Option<usize>,
    /// Remove stopwords (bundled list unless --stopword-file is given).
    #[arg(long)]
    remove_stopwords: bool,
    #[arg(long, requires = "remove_stopwords")]
    stopword_file: Option<PathBuf>,
    #[arg(long)]
    lemma_map: Option<PathBuf>,
    /// Text-format embedding table used for virtual edges.
    #[arg(long, requires = "p")]
    embedding: Option<PathBuf>,
    /// Percentage of virtual edges relative to co-occurrence edges.
    #[arg(long, requires = "embedding")]
    p: Option<f64>,
    #[arg(long, value_enum, default_value = "global")]
    strategy: StrategyArg,
}

type BoxError = Box<dyn std::error::Error>;

fn build_network(args: &NetworkArgs) -> Result<TextNetwork<f64>, BoxError> {
    let text = fs::read_to_string(&args.text).map_err(|e| format!("{}: {e}", args.text.display()))?;
    let stopwords = match (&args.stopword_file, args.remove_stopwords) {
        (_, false) => None,
        (None, true) => Some(StopwordSet::default_list()),
        (Some(f), true) => Some(StopwordSet::load(f)?),
    };
    let lemma_map = args.lemma_map.as_ref().map(LemmaMap::load).transpose()?;
    let mut tokens = Preprocessing { stopwords, lemma_map }.apply(&text);
    if let Some(w) = args.length {
        tokens = take_sample(&tokens, SampleSpec::new(w)?)?;
    }
    let network = build_cooccurrence::<f64>(&tokens)?;
    let (Some(path), Some(p)) = (&args.embedding, args.p) else {
        return Ok(network);
    };
    let level = EnrichmentLevel::new(p)?;
    let vocabulary: BTreeSet<String> = network.words().iter().map(|w| w.to_string()).collect();
    let wanted: HashSet<String> = vocabulary.iter().cloned().collect();
    let table = load_embedding_table::<f64>(
        path,
        &LoadOptions {
            restrict_to: Some(&wanted),
        },
    )?;
    let exclude: PairSet = network
        .edges()
        .iter()
        .map(|e| (network.word(e.a), network.word(e.b)))
        .collect();
    let candidates = rank_candidate_pairs(&vocabulary, &table, &exclude);
    let strategy = match args.strategy {
        StrategyArg::Global => Strategy::Global,
        StrategyArg::Local => Strategy::Local,
    };
    let enriched = match strategy {
        Strategy::Global => enrich_global(&network, &candidates, level)?,
        Strategy::Local => enrich_local(&network, &candidates, level, &table)?,
    };
    if enriched.shortfall() > 0 {
        log::warn!(
            "only {} of {} virtual edges available",
            enriched.added,
            enriched.requested
        );
    }
    Ok(enriched.network)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, BoxError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), BoxError> {
    match cli.command {
        Command::Run {
            config,
            workers,
            seed,
            out,
        } => {
            let mut config = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(o) = out {
                config.output_dir = o;
            }
            let report = run_experiment(&config, workers)?;
            for path in emit_report(&report, &config.output_dir)? {
                info!("wrote {}", path.display());
            }
            let failed = report.cells.iter().filter(|c| c.error.is_some()).count();
            if failed > 0 {
                log::warn!("{failed} of {} cells failed; see sweeps.csv", report.cells.len());
            }
        }
        Command::DumpNetwork { network, output: path } => {
            let net = build_network(&network)?;
            let mut out = output(&path)?;
            write_edge_list(&net, &mut out)?;
            out.flush()?;
        }
        Command::Measure {
            network,
            words,
            measurements,
            output: path,
        } => {
            let net = build_network(&network)?;
            let spec = if measurements.is_empty() {
                MeasurementSpec::full()
            } else {
                let parsed = measurements
                    .iter()
                    .map(|m| m.parse::<Measurement>())
                    .collect::<Result<Vec<_>, _>>()?;
                MeasurementSpec::new(parsed)?
            };
            let words: Vec<String> = if words.is_empty() {
                let mut all: Vec<String> = net.words().iter().map(|w| w.to_string()).collect();
                all.sort();
                all
            } else {
                words
            };
            let rows = measure_nodes(&net, &words, &spec, &PageRankConfig::default())?;
            let mut out = output(&path)?;
            write_measurements_csv(&rows, &spec, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
