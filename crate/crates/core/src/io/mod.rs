//! Corpus ingestion and the on-disk formats for vocabularies, tokenized
//! graphs, and incidence exports.

pub mod smiles;
pub mod tudataset;

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{Vocabulary, VOCAB_FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, TokenizedGraph};
use crate::hypergraph::Hypergraph;

pub use smiles::{parse_smiles, SmilesError};
pub use tudataset::parse_tudataset;

/// Header line of an incidence export.
pub const INCIDENCE_HEADER: &str = "#graphbpe-incidence v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Tud,
    Smiles,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Tud => "tud",
            Format::Smiles => "smiles",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tud" => Ok(Format::Tud),
            "smiles" => Ok(Format::Smiles),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown input format {other:?} (expected tud, smiles or json)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub format: Format,
    pub path: PathBuf,
}

/// An ordered collection of graphs with the set of labels they use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub graphs: Vec<Arc<SimpleGraph>>,
    pub source: Source,
    pub label_alphabet: BTreeSet<String>,
}

impl Corpus {
    pub fn new(graphs: Vec<Arc<SimpleGraph>>, source: Source) -> Self {
        let label_alphabet = graphs
            .iter()
            .flat_map(|g| g.labels().iter().cloned())
            .collect();
        Self {
            graphs,
            source,
            label_alphabet,
        }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Total number of original nodes.
    pub fn node_count(&self) -> usize {
        self.graphs.iter().map(|g| g.node_count()).sum()
    }
}

pub fn load_corpus(path: &Path, format: Format) -> Result<Corpus> {
    let graphs = match format {
        Format::Tud => parse_tudataset(path)?,
        Format::Smiles => read_smiles_file(path)?,
        Format::Json => return read_json_corpus(path),
    };
    Ok(Corpus::new(
        graphs,
        Source {
            format,
            path: path.to_path_buf(),
        },
    ))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// One SMILES per line. Blank lines and `#` comments are skipped; anything
/// after the first whitespace on a line is taken as the molecule's name.
pub fn read_smiles_file(path: &Path) -> Result<Vec<Arc<SimpleGraph>>> {
    let text = read_text(path)?;
    parse_smiles_lines(&text, path)
}

pub fn parse_smiles_lines(text: &str, path: &Path) -> Result<Vec<Arc<SimpleGraph>>> {
    let mut graphs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (smiles, name) = match line.split_once(char::is_whitespace) {
            Some((s, rest)) => (s, Some(rest.trim())),
            None => (line, None),
        };
        let mut g = parse_smiles(smiles).map_err(|source| Error::Smiles {
            path: path.to_path_buf(),
            line: i + 1,
            source,
        })?;
        g.set_name(name.filter(|n| !n.is_empty()).map(str::to_string));
        graphs.push(Arc::new(g));
    }
    Ok(graphs)
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonCorpus {
    graphs: Vec<JsonGraph>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGraph {
    name: Option<String>,
    labels: Vec<String>,
    edges: Vec<[usize; 2]>,
}

pub fn read_json_corpus(path: &Path) -> Result<Corpus> {
    let text = read_text(path)?;
    let graphs = parse_json_corpus(&text)?;
    Ok(Corpus::new(
        graphs,
        Source {
            format: Format::Json,
            path: path.to_path_buf(),
        },
    ))
}

/// Parses `{"graphs": [{"name", "labels", "edges"}]}`.
pub fn parse_json_corpus(text: &str) -> Result<Vec<Arc<SimpleGraph>>> {
    let raw: JsonCorpus =
        serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))?;
    raw.graphs
        .into_iter()
        .enumerate()
        .map(|(i, jg)| {
            let n = jg.labels.len();
            for (j, &[u, v]) in jg.edges.iter().enumerate() {
                let path = format!("graphs[{i}].edges[{j}]");
                if u >= n || v >= n {
                    return Err(Error::schema(
                        path,
                        format!("endpoint out of range for {n} labels"),
                    ));
                }
                if u == v {
                    return Err(Error::schema(path, "self-loop"));
                }
            }
            let mut g = SimpleGraph::new(jg.labels, jg.edges.into_iter().map(|[u, v]| (u, v)))?;
            g.set_name(jg.name);
            Ok(Arc::new(g))
        })
        .collect()
}

pub fn json_corpus_string(graphs: &[Arc<SimpleGraph>]) -> String {
    let doc = JsonCorpus {
        graphs: graphs
            .iter()
            .map(|g| JsonGraph {
                name: g.name().map(str::to_string),
                labels: g.labels().to_vec(),
                edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            })
            .collect(),
    };
    to_json(&doc)
}

pub fn write_json_corpus(graphs: &[Arc<SimpleGraph>], path: &Path) -> Result<()> {
    write_text(path, &json_corpus_string(graphs))
}

/// Pretty JSON with a trailing newline.
fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable document");
    text.push('\n');
    text
}

pub fn vocabulary_string(vocab: &Vocabulary) -> String {
    to_json(vocab)
}

pub fn write_vocabulary(vocab: &Vocabulary, path: &Path) -> Result<()> {
    write_text(path, &vocabulary_string(vocab))
}

pub fn read_vocabulary(path: &Path) -> Result<Vocabulary> {
    parse_vocabulary(&read_text(path)?)
}

pub fn parse_vocabulary(text: &str) -> Result<Vocabulary> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))?;
    match value.get("format_version").map(serde_json::Value::as_u64) {
        Some(Some(VOCAB_FORMAT_VERSION)) => {}
        Some(Some(found)) => {
            return Err(Error::VersionMismatch {
                found,
                expected: VOCAB_FORMAT_VERSION,
            })
        }
        Some(None) => {
            return Err(Error::schema(
                "format_version",
                "expected a non-negative integer",
            ))
        }
        None => return Err(Error::schema("format_version", "missing field")),
    }
    let vocab: Vocabulary =
        serde_json::from_value(value).map_err(|e| Error::schema("$", e.to_string()))?;
    vocab.validate()?;
    Ok(vocab)
}

#[derive(Debug, Serialize)]
struct JsonHypernode<'a> {
    nodes: &'a [usize],
    identity: &'a str,
}

#[derive(Debug, Serialize)]
struct JsonTokenized<'a> {
    name: Option<&'a str>,
    labels: &'a [String],
    hypernodes: Vec<JsonHypernode<'a>>,
    edges: Vec<[usize; 2]>,
}

impl<'a> JsonTokenized<'a> {
    fn new(tg: &'a TokenizedGraph) -> Self {
        Self {
            name: tg.base().name(),
            labels: tg.base().labels(),
            hypernodes: tg
                .hypernodes()
                .iter()
                .map(|h| JsonHypernode {
                    nodes: h.nodes(),
                    identity: h.identity(),
                })
                .collect(),
            edges: tg.edges().iter().map(|&(j, k)| [j, k]).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
struct JsonTokenizedCorpus<'a> {
    graphs: Vec<JsonTokenized<'a>>,
}

/// `{"graphs": [{"name", "labels", "hypernodes": [{"nodes", "identity"}], "edges"}]}`
pub fn tokenized_string(graphs: &[TokenizedGraph]) -> String {
    to_json(&JsonTokenizedCorpus {
        graphs: graphs.iter().map(JsonTokenized::new).collect(),
    })
}

pub fn write_tokenized(graphs: &[TokenizedGraph], path: &Path) -> Result<()> {
    write_text(path, &tokenized_string(graphs))
}

#[derive(Debug, Serialize)]
struct JsonSnapshot<'a> {
    step: usize,
    graphs: Vec<JsonTokenized<'a>>,
}

/// Every snapshot, `{"snapshots": [{"step", "graphs": [...]}]}`.
pub fn snapshots_string(snapshots: &[Vec<TokenizedGraph>]) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        snapshots: Vec<JsonSnapshot<'a>>,
    }
    to_json(&Doc {
        snapshots: snapshots
            .iter()
            .enumerate()
            .map(|(step, graphs)| JsonSnapshot {
                step,
                graphs: graphs.iter().map(JsonTokenized::new).collect(),
            })
            .collect(),
    })
}

pub fn write_snapshots(snapshots: &[Vec<TokenizedGraph>], path: &Path) -> Result<()> {
    write_text(path, &snapshots_string(snapshots))
}

/// Tab-separated `graph_id hyperedge_id node_id` rows, one per incidence
/// entry, after the [`INCIDENCE_HEADER`] line.
pub fn incidence_tsv(hypergraphs: &[Hypergraph]) -> String {
    let mut out = String::from(INCIDENCE_HEADER);
    out.push('\n');
    for (graph, hg) in hypergraphs.iter().enumerate() {
        for (node, edge) in hg.incidence().entries {
            out.push_str(&format!("{graph}\t{edge}\t{node}\n"));
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct IncidenceMeta {
    pub format: String,
    pub mode: String,
    pub graphs: Vec<IncidenceGraphMeta>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct IncidenceGraphMeta {
    pub graph_id: usize,
    pub name: Option<String>,
    pub num_vertices: usize,
    pub num_hyperedges: usize,
    pub weights: Vec<f64>,
}

pub fn incidence_meta_string(
    hypergraphs: &[Hypergraph],
    names: &[Option<String>],
    mode: &str,
) -> String {
    to_json(&IncidenceMeta {
        format: INCIDENCE_HEADER.trim_start_matches('#').to_string(),
        mode: mode.to_string(),
        graphs: hypergraphs
            .iter()
            .enumerate()
            .map(|(graph_id, hg)| IncidenceGraphMeta {
                graph_id,
                name: names.get(graph_id).cloned().flatten(),
                num_vertices: hg.num_vertices(),
                num_hyperedges: hg.num_hyperedges(),
                weights: hg.weights().to_vec(),
            })
            .collect(),
    })
}

/// Default sidecar location for an incidence export: `<tsv>.meta.json`.
pub fn meta_path_for(tsv: &Path) -> PathBuf {
    let mut name = tsv.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_incidence(
    hypergraphs: &[Hypergraph],
    names: &[Option<String>],
    mode: &str,
    tsv: &Path,
    meta: &Path,
) -> Result<()> {
    write_text(tsv, &incidence_tsv(hypergraphs))?;
    write_text(meta, &incidence_meta_string(hypergraphs, names, mode))
}
