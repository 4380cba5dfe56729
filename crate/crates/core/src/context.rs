//! Identifiable strings for nodes, node sets, and edges.
//!
//! Labels are backslash-escaped before they are composed, so a label such
//! as `a-b` never collides with the merge of `a` and `b`. The reserved
//! characters are `( ) , | - { }` and the backslash itself.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SimpleGraph, TokenizedGraph};

const RESERVED: &[char] = &['(', ')', ',', '|', '-', '{', '}', '\\'];

/// Separator between the two endpoint identities of an edge context.
pub const EDGE_SEPARATOR: char = '-';
/// Separator between member identities of a node set.
pub const SET_SEPARATOR: char = '|';

/// How much of a node's surroundings its base identity carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextualizerKind {
    /// Label plus the sorted multiset of neighbor labels.
    Neighborhood,
    /// Label only.
    Pse,
    /// Label plus degree.
    Structural,
}

impl ContextualizerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ContextualizerKind::Neighborhood => "neighborhood",
            ContextualizerKind::Pse => "pse",
            ContextualizerKind::Structural => "structural",
        }
    }
}

impl fmt::Display for ContextualizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ContextualizerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "neighborhood" => Ok(ContextualizerKind::Neighborhood),
            "pse" => Ok(ContextualizerKind::Pse),
            "structural" => Ok(ContextualizerKind::Structural),
            other => Err(format!(
                "unknown contextualizer {other:?} (expected neighborhood, pse or structural)"
            )),
        }
    }
}

pub fn escape(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for c in raw.chars() {
        if RESERVED.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// Inverse of [`escape`]. Returns `None` on a dangling backslash.
pub fn unescape(escaped: &str) -> Option<String> {
    let mut out = String::with_capacity(escaped.len());
    let mut chars = escaped.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            out.push(chars.next()?);
        } else {
            out.push(c);
        }
    }
    Some(out)
}

/// Splits at every occurrence of `sep` not preceded by an escaping backslash.
/// The pieces are returned still escaped.
pub fn split_unescaped(s: &str, sep: char) -> Vec<&str> {
    let mut pieces = Vec::new();
    let mut start = 0;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if escaped {
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == sep {
            pieces.push(&s[start..i]);
            start = i + c.len_utf8();
        }
    }
    pieces.push(&s[start..]);
    pieces
}

/// Recovers the two endpoint identities of an edge context string.
pub fn split_edge_context(context: &str) -> Option<(String, String)> {
    match split_unescaped(context, EDGE_SEPARATOR).as_slice() {
        [a, b] => Some((unescape(a)?, unescape(b)?)),
        _ => None,
    }
}

/// Identity of a single original node before any merging.
pub fn base_identity(g: &SimpleGraph, v: NodeId, kind: ContextualizerKind) -> Result<String> {
    let label = g.label(v).ok_or(Error::IndexOutOfRange {
        index: v,
        len: g.node_count(),
    })?;
    let mut out = escape(label);
    match kind {
        ContextualizerKind::Pse => {}
        ContextualizerKind::Neighborhood => {
            let mut around: Vec<String> = g
                .neighbors(v)
                .iter()
                .map(|&u| escape(&g.labels()[u]))
                .collect();
            around.sort_unstable();
            out.push('(');
            out.push_str(&around.join(","));
            out.push(')');
        }
        ContextualizerKind::Structural => {
            out.push('(');
            out.push_str(&g.degree(v).to_string());
            out.push(')');
        }
    }
    Ok(out)
}

/// Base identities for every node of `g`, in node order.
pub fn base_identities(g: &SimpleGraph, kind: ContextualizerKind) -> Vec<String> {
    (0..g.node_count())
        .map(|v| base_identity(g, v, kind).expect("node index in range"))
        .collect()
}

/// Sorted, `|`-joined member identities, optionally wrapped as `TAG{...}`.
pub fn context_node_set(
    g: &SimpleGraph,
    node_set: &[NodeId],
    kind: ContextualizerKind,
    tag: Option<&str>,
) -> Result<String> {
    if node_set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut parts = node_set
        .iter()
        .map(|&v| base_identity(g, v, kind))
        .collect::<Result<Vec<_>>>()?;
    parts.sort_unstable();
    let joined = parts.join("|");
    Ok(match tag {
        Some(tag) => format!("{tag}{{{joined}}}"),
        None => joined,
    })
}

/// Orderless context of the pair of identities: escaped, sorted, `-`-joined.
pub fn pair_context(a: &str, b: &str) -> String {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let mut out = escape(lo);
    out.push(EDGE_SEPARATOR);
    out.push_str(&escape(hi));
    out
}

/// Context string of hyper-edge `(j, k)` in `tg`.
pub fn edge_context(tg: &TokenizedGraph, j: usize, k: usize) -> Result<String> {
    if !tg.has_edge(j, k) {
        return Err(Error::NotAnEdge(j, k));
    }
    let hn = tg.hypernodes();
    Ok(pair_context(hn[j].identity(), hn[k].identity()))
}
