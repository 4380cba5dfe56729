//! `graphbpe` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors (parse or
//! I/O failures, reported with file and line context).

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::context::ContextualizerKind;
use crate::engine::{train, with_workers, TrainOptions, Vocabulary};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, TokenizedGraph};
use crate::hypergraph::{centroid_hypergraph, to_hypergraph, Hypergraph};
use crate::io::{self, Format};
use crate::stats::{self, step_stats, token_frequency};
use crate::topology::{Topology, TopologyKind, DEFAULT_MIN_CLIQUE_SIZE};

#[derive(Debug, Parser)]
#[command(
    name = "graphbpe",
    version,
    about = "Count-and-merge tokenization of graph corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn merge rules from a corpus.
    Train(TrainArgs),
    /// Tokenize a corpus with a learned vocabulary.
    Apply(ApplyArgs),
    /// Export hypergraph incidence structures.
    ExportHypergraph(ExportArgs),
    /// Replay a vocabulary over a corpus and report per-step statistics.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Corpus location (TUDataset prefix or directory, SMILES file, JSON file).
    #[arg(long)]
    pub input: PathBuf,
    /// Input format: tud, smiles or json.
    #[arg(long)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Maximum number of merge rules to learn.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Structure contracted before tokenization: none, ring or clique.
    #[arg(long, default_value_t = TopologyKind::None)]
    pub topology: TopologyKind,
    #[arg(long, default_value_t = DEFAULT_MIN_CLIQUE_SIZE)]
    pub min_clique_size: usize,
    /// neighborhood, pse or structural.
    #[arg(long, default_value_t = ContextualizerKind::Neighborhood)]
    pub contextualizer: ContextualizerKind,
    /// Vocabulary output (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Per-step statistics output (CSV).
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Every intermediate tokenized corpus (JSON).
    #[arg(long)]
    pub snapshots: Option<PathBuf>,
    /// Worker threads; 0 picks automatically.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// Tokenized graphs output (JSON).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypergraphMode {
    Graphbpe,
    Centroid,
}

impl fmt::Display for HypergraphMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HypergraphMode::Graphbpe => "graphbpe",
            HypergraphMode::Centroid => "centroid",
        })
    }
}

impl FromStr for HypergraphMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "graphbpe" => Ok(HypergraphMode::Graphbpe),
            "centroid" => Ok(HypergraphMode::Centroid),
            other => Err(format!(
                "unknown hypergraph mode {other:?} (expected graphbpe or centroid)"
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// graphbpe (requires --vocab) or centroid.
    #[arg(long, default_value_t = HypergraphMode::Graphbpe)]
    pub mode: HypergraphMode,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    /// Incidence TSV output.
    #[arg(long)]
    pub out: PathBuf,
    /// Sidecar metadata output; defaults to `<out>.meta.json`.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// Per-step statistics output (CSV).
    #[arg(long)]
    pub out: PathBuf,
    /// Identity frequencies of the final tokenization (CSV).
    #[arg(long)]
    pub tokens: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Train(args) => run_train(args),
        Command::Apply(args) => run_apply(args),
        Command::ExportHypergraph(args) => run_export(args),
        Command::Stats(args) => run_stats(args),
    }
}

fn load(input: &InputArgs) -> Result<Vec<Arc<SimpleGraph>>> {
    Ok(io::load_corpus(&input.input, input.format)?.graphs)
}

fn run_train(args: TrainArgs) -> std::result::Result<(), Failure> {
    let topology = Topology {
        kind: args.topology,
        min_clique_size: args.min_clique_size,
    };
    topology
        .validate()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let corpus = load(&args.input)?;
    let opts = TrainOptions {
        steps: args.steps,
        topology,
        contextualizer: args.contextualizer,
        emit_snapshots: args.stats.is_some() || args.snapshots.is_some(),
        workers: args.workers,
    };
    let training = train(&corpus, &opts)?;
    io::write_vocabulary(&training.vocabulary, &args.out)?;
    if let Some(path) = &args.stats {
        let rows = step_stats(&training.snapshots, &training.vocabulary)?;
        stats::write_step_stats(&rows, path)?;
    }
    if let Some(path) = &args.snapshots {
        io::write_snapshots(&training.snapshots, path)?;
    }
    eprintln!(
        "learned {} rules from {} graphs",
        training.vocabulary.rules.len(),
        corpus.len()
    );
    Ok(())
}

fn apply_all(
    vocab: &Vocabulary,
    corpus: &[Arc<SimpleGraph>],
    workers: usize,
) -> Result<Vec<TokenizedGraph>> {
    vocab.validate()?;
    with_workers(workers, || {
        corpus
            .par_iter()
            .map(|g| vocab.apply(Arc::clone(g)))
            .collect()
    })
}

fn run_apply(args: ApplyArgs) -> std::result::Result<(), Failure> {
    let vocab = io::read_vocabulary(&args.vocab)?;
    let corpus = load(&args.input)?;
    let tokenized = apply_all(&vocab, &corpus, args.workers)?;
    io::write_tokenized(&tokenized, &args.out)?;
    Ok(())
}

fn run_export(args: ExportArgs) -> std::result::Result<(), Failure> {
    let vocab = match (args.mode, &args.vocab) {
        (HypergraphMode::Graphbpe, None) => {
            return Err(Failure::Usage(
                "--mode graphbpe requires --vocab".to_string(),
            ))
        }
        (HypergraphMode::Graphbpe, Some(path)) => Some(io::read_vocabulary(path)?),
        (HypergraphMode::Centroid, _) => None,
    };
    let corpus = load(&args.input)?;
    let hypergraphs: Vec<Hypergraph> = match &vocab {
        Some(vocab) => apply_all(vocab, &corpus, args.workers)?
            .iter()
            .map(to_hypergraph)
            .collect(),
        None => corpus.iter().map(|g| centroid_hypergraph(g)).collect(),
    };
    let names: Vec<Option<String>> = corpus
        .iter()
        .map(|g| g.name().map(str::to_string))
        .collect();
    let meta = args
        .meta
        .clone()
        .unwrap_or_else(|| io::meta_path_for(&args.out));
    io::write_incidence(
        &hypergraphs,
        &names,
        &args.mode.to_string(),
        &args.out,
        &meta,
    )?;
    Ok(())
}

fn run_stats(args: StatsArgs) -> std::result::Result<(), Failure> {
    let vocab = io::read_vocabulary(&args.vocab)?;
    let corpus = load(&args.input)?;
    let snapshots = with_workers(args.workers, || vocab.replay(&corpus))?;
    let rows = step_stats(&snapshots, &vocab)?;
    stats::write_step_stats(&rows, &args.out)?;
    if let Some(path) = &args.tokens {
        let last = snapshots.last().map(Vec::as_slice).unwrap_or(&[]);
        stats::write_token_frequency(&token_frequency(last), path)?;
    }
    Ok(())
}
