//! Reader for the TUDataset plain-text layout.
//!
//! `<prefix>_graph_indicator.txt` assigns each (1-based) node to a graph,
//! `<prefix>_node_labels.txt` gives each node an integer label, and
//! `<prefix>_A.txt` lists edges as `u, v` with 1-based node ids, usually in
//! both directions.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Resolves a TUDataset location: either a file prefix such as
/// `data/MUTAG/MUTAG`, or a directory `data/MUTAG` holding `MUTAG_A.txt` etc.
pub fn resolve_prefix(path: &Path) -> PathBuf {
    if path.is_dir() {
        if let Some(name) = path.file_name() {
            return path.join(name);
        }
    }
    path.to_path_buf()
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_int(path: &Path, line: usize, field: &str) -> Result<i64> {
    field.trim().parse().map_err(|_| Error::MalformedLine {
        path: path.to_path_buf(),
        line,
        message: format!("expected an integer, found {:?}", field.trim()),
    })
}

/// Loads every graph, in ascending graph id. Graph names are the ids.
pub fn parse_tudataset(location: &Path) -> Result<Vec<Arc<SimpleGraph>>> {
    let prefix = resolve_prefix(location);
    let indicator_path = with_suffix(&prefix, "_graph_indicator.txt");
    let labels_path = with_suffix(&prefix, "_node_labels.txt");
    let edges_path = with_suffix(&prefix, "_A.txt");
    let indicator_text = read(&indicator_path)?;
    let labels_text = read(&labels_path)?;
    let edges_text = read(&edges_path)?;

    let mut graph_of = Vec::new();
    for (line, field) in lines(&indicator_text) {
        graph_of.push(parse_int(&indicator_path, line, field)?);
    }
    let mut labels = Vec::with_capacity(graph_of.len());
    let mut last_line = 0;
    for (line, field) in lines(&labels_text) {
        // Some dumps carry extra label columns; the first is the categorical one.
        let first = field.split(',').next().unwrap_or(field);
        labels.push(parse_int(&labels_path, line, first)?.to_string());
        last_line = line;
    }
    if labels.len() != graph_of.len() {
        return Err(Error::MalformedLine {
            path: labels_path,
            line: last_line,
            message: format!(
                "{} node labels for {} nodes in the graph indicator",
                labels.len(),
                graph_of.len()
            ),
        });
    }

    // Local index of each global node within its graph.
    let mut members: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut local = vec![0usize; graph_of.len()];
    for (node, &gid) in graph_of.iter().enumerate() {
        let list = members.entry(gid).or_default();
        local[node] = list.len();
        list.push(node);
    }

    let mut edges: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for (line, text) in lines(&edges_text) {
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::MalformedLine {
                path: edges_path,
                line,
                message: format!("expected \"u, v\", found {text:?}"),
            });
        }
        let mut ends = [0usize; 2];
        for (slot, field) in ends.iter_mut().zip(&fields) {
            let id = parse_int(&edges_path, line, field)?;
            if id < 1 || id as usize > graph_of.len() {
                return Err(Error::DanglingEdge {
                    path: edges_path,
                    line,
                    node: id.max(0) as usize,
                });
            }
            *slot = id as usize - 1;
        }
        let [u, v] = ends;
        let (gu, gv) = (graph_of[u], graph_of[v]);
        if gu != gv {
            return Err(Error::CrossGraphEdge {
                path: edges_path,
                line,
                u: u + 1,
                v: v + 1,
                graph_u: gu,
                graph_v: gv,
            });
        }
        if u == v {
            return Err(Error::MalformedLine {
                path: edges_path,
                line,
                message: format!("self-loop on node {}", u + 1),
            });
        }
        edges.entry(gu).or_default().push((local[u], local[v]));
    }

    members
        .into_iter()
        .map(|(gid, nodes)| {
            let node_labels: Vec<String> = nodes.iter().map(|&n| labels[n].clone()).collect();
            let graph_edges = edges.remove(&gid).unwrap_or_default();
            let g = SimpleGraph::new(node_labels, graph_edges)?.with_name(gid.to_string());
            Ok(Arc::new(g))
        })
        .collect()
}
