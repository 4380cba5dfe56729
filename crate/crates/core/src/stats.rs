//! Per-step corpus statistics over a sequence of tokenization snapshots.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;

use crate::engine::Vocabulary;
use crate::error::{Error, Result};
use crate::graph::TokenizedGraph;

pub const STEP_COLUMNS: [&str; 7] = [
    "step",
    "rule_context",
    "rule_frequency",
    "total_hypernodes",
    "mean_hypernodes_per_graph",
    "compression_ratio",
    "distinct_identities",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepStats {
    pub step: usize,
    pub rule_context: String,
    pub rule_frequency: usize,
    pub total_hypernodes: usize,
    pub mean_hypernodes_per_graph: f64,
    /// Mean over non-empty graphs of hypernodes / original nodes.
    pub compression_ratio: f64,
    pub distinct_identities: usize,
}

fn snapshot_stats(step: usize, snapshot: &[TokenizedGraph]) -> StepStats {
    let total_hypernodes: usize = snapshot.iter().map(TokenizedGraph::len).sum();
    let mean_hypernodes_per_graph = if snapshot.is_empty() {
        0.0
    } else {
        total_hypernodes as f64 / snapshot.len() as f64
    };
    let ratios: Vec<f64> = snapshot
        .iter()
        .filter(|tg| !tg.base().is_empty())
        .map(|tg| tg.len() as f64 / tg.base().node_count() as f64)
        .collect();
    let compression_ratio = if ratios.is_empty() {
        1.0
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    };
    let distinct_identities = snapshot
        .iter()
        .flat_map(|tg| tg.hypernodes().iter().map(|h| h.identity()))
        .collect::<BTreeSet<_>>()
        .len();
    StepStats {
        step,
        rule_context: String::new(),
        rule_frequency: 0,
        total_hypernodes,
        mean_hypernodes_per_graph,
        compression_ratio,
        distinct_identities,
    }
}

/// One row per snapshot; row `t > 0` carries the rule that produced it.
pub fn step_stats(snapshots: &[Vec<TokenizedGraph>], vocab: &Vocabulary) -> Result<Vec<StepStats>> {
    if snapshots.len() != vocab.rules.len() + 1 {
        return Err(Error::LengthMismatch {
            expected: vocab.rules.len() + 1,
            actual: snapshots.len(),
        });
    }
    Ok(snapshots
        .iter()
        .enumerate()
        .map(|(step, snapshot)| {
            let mut row = snapshot_stats(step, snapshot);
            if let Some(rule) = step.checked_sub(1).map(|i| &vocab.rules[i]) {
                row.rule_context = rule.context.clone();
                row.rule_frequency = rule.frequency;
            }
            row
        })
        .collect())
}

/// Hypernode identities with their counts, most frequent first, ties by
/// identity.
pub fn token_frequency(snapshot: &[TokenizedGraph]) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for tg in snapshot {
        for h in tg.hypernodes() {
            *counts.entry(h.identity()).or_default() += 1;
        }
    }
    let mut table: Vec<(String, usize)> = counts
        .into_iter()
        .map(|(identity, count)| (identity.to_string(), count))
        .collect();
    table.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    table
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_string<F>(path: &Path, fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    fill(&mut writer).map_err(csv_error(path))?;
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output of UTF-8 fields"))
}

/// RFC-4180 CSV with a header row and LF line endings.
pub fn step_stats_csv(rows: &[StepStats]) -> String {
    csv_string(Path::new("<memory>"), |w| {
        w.write_record(STEP_COLUMNS)?;
        rows.iter().try_for_each(|row| w.serialize(row))
    })
    .expect("in-memory csv")
}

pub fn token_frequency_csv(table: &[(String, usize)]) -> String {
    csv_string(Path::new("<memory>"), |w| {
        w.write_record(["identity", "count"])?;
        table.iter().try_for_each(|(identity, count)| {
            w.write_record([identity.as_str(), &count.to_string()])
        })
    })
    .expect("in-memory csv")
}

pub fn write_step_stats(rows: &[StepStats], path: &Path) -> Result<()> {
    std::fs::write(path, step_stats_csv(rows)).map_err(|e| Error::io(path, e))
}

pub fn write_token_frequency(table: &[(String, usize)], path: &Path) -> Result<()> {
    std::fs::write(path, token_frequency_csv(table)).map_err(|e| Error::io(path, e))
}
