//! Byte-pair-encoding style tokenization for graph corpora.
//!
//! Graphs are tokenized by repeatedly counting the contexts of all edges in
//! a corpus and contracting every occurrence of the most frequent one into a
//! hypernode. Optional preprocessing first contracts fused ring systems or
//! cliques. The recorded merge rules form a [`Vocabulary`] that replays on
//! unseen graphs, and tokenized graphs export as contracted simple graphs or
//! as hypergraph incidence structures.

pub mod cli;
pub mod context;
pub mod engine;
pub mod error;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod stats;
pub mod topology;

pub use context::ContextualizerKind;
pub use engine::{
    count_pairs, merge_step, select_best, train, MergeRule, PairCounter, TrainOptions, Training,
    Vocabulary,
};
pub use error::{Error, Result};
pub use graph::{Hypernode, NodeId, SimpleGraph, TokenizedGraph};
pub use hypergraph::{centroid_hypergraph, to_hypergraph, Hypergraph, Incidence};
pub use io::{Corpus, Format};
pub use topology::{preprocess, Topology, TopologyKind};
