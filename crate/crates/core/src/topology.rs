//! Locating node sets with a given topology (fused ring systems, cliques)
//! and contracting them before tokenization starts.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::{base_identities, context_node_set, ContextualizerKind};
use crate::error::{Error, Result};
use crate::graph::{components, NodeId, SimpleGraph, TokenizedGraph};

pub const DEFAULT_MIN_CLIQUE_SIZE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    None,
    Ring,
    Clique,
}

impl TopologyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::None => "none",
            TopologyKind::Ring => "ring",
            TopologyKind::Clique => "clique",
        }
    }

    /// Tag wrapped around the identity of a contracted node set.
    pub fn tag(self) -> Option<&'static str> {
        match self {
            TopologyKind::None => None,
            TopologyKind::Ring => Some("RING"),
            TopologyKind::Clique => Some("CLIQUE"),
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TopologyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "none" => Ok(TopologyKind::None),
            "ring" => Ok(TopologyKind::Ring),
            "clique" => Ok(TopologyKind::Clique),
            other => Err(format!(
                "unknown topology {other:?} (expected none, ring or clique)"
            )),
        }
    }
}

/// The structure contracted during preprocessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Topology {
    pub kind: TopologyKind,
    pub min_clique_size: usize,
}

impl Topology {
    pub fn none() -> Self {
        Self {
            kind: TopologyKind::None,
            min_clique_size: DEFAULT_MIN_CLIQUE_SIZE,
        }
    }

    pub fn ring() -> Self {
        Self {
            kind: TopologyKind::Ring,
            min_clique_size: DEFAULT_MIN_CLIQUE_SIZE,
        }
    }

    pub fn clique(min_size: usize) -> Result<Self> {
        let topo = Self {
            kind: TopologyKind::Clique,
            min_clique_size: min_size,
        };
        topo.validate()?;
        Ok(topo)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == TopologyKind::Clique && self.min_clique_size < 3 {
            return Err(Error::InvalidTopology(format!(
                "min_clique_size must be at least 3, got {}",
                self.min_clique_size
            )));
        }
        Ok(())
    }

    /// Node sets of this topology in `g`; empty for [`TopologyKind::None`].
    pub fn find(&self, g: &SimpleGraph) -> Vec<Vec<NodeId>> {
        match self.kind {
            TopologyKind::None => Vec::new(),
            TopologyKind::Ring => find_ring_systems(g),
            TopologyKind::Clique => find_cliques(g, self.min_clique_size),
        }
    }
}

impl Default for Topology {
    fn default() -> Self {
        Self::none()
    }
}

/// Bridges of `g` as normalized `(u, v)` pairs, ascending.
pub fn bridges(g: &SimpleGraph) -> Vec<(NodeId, NodeId)> {
    let n = g.node_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut clock = 0;
    let mut out = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        // (node, parent, next neighbor position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(frame) = stack.last_mut() {
            let (v, parent, pos) = *frame;
            if let Some(&w) = g.neighbors(v).get(pos) {
                frame.2 += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        out.push((parent.min(v), parent.max(v)));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Fused ring systems: connected components of the subgraph formed by the
/// non-bridge edges, ordered by smallest member.
pub fn find_ring_systems(g: &SimpleGraph) -> Vec<Vec<NodeId>> {
    let bridge_set = bridges(g);
    let cyclic: Vec<(NodeId, NodeId)> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| bridge_set.binary_search(e).is_err())
        .collect();
    components(g.node_count(), &cyclic)
        .into_iter()
        .filter(|c| c.len() > 1)
        .collect()
}

/// Every maximal clique of `g`, each sorted, in no particular order.
pub fn maximal_cliques(g: &SimpleGraph) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let candidates: Vec<NodeId> = (0..g.node_count()).collect();
    bron_kerbosch(g, &mut current, candidates, Vec::new(), &mut out);
    for clique in &mut out {
        clique.sort_unstable();
    }
    out
}

fn intersect_sorted(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

// Candidate and excluded sets are kept sorted so intersections stay linear.
fn bron_kerbosch(
    g: &SimpleGraph,
    current: &mut Vec<NodeId>,
    mut candidates: Vec<NodeId>,
    mut excluded: Vec<NodeId>,
    out: &mut Vec<Vec<NodeId>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    // Pivot on the vertex covering the most candidates.
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .copied()
        .max_by_key(|&u| {
            (
                intersect_sorted(&candidates, g.neighbors(u)).len(),
                usize::MAX - u,
            )
        })
        .expect("non-empty candidates");
    let skip = g.neighbors(pivot);
    let branch: Vec<NodeId> = candidates
        .iter()
        .copied()
        .filter(|v| skip.binary_search(v).is_err())
        .collect();
    for v in branch {
        let around = g.neighbors(v);
        current.push(v);
        bron_kerbosch(
            g,
            current,
            intersect_sorted(&candidates, around),
            intersect_sorted(&excluded, around),
            out,
        );
        current.pop();
        candidates.retain(|&c| c != v);
        let at = excluded.partition_point(|&x| x < v);
        excluded.insert(at, v);
    }
}

/// Greedy disjoint selection of maximal cliques with at least `min_size`
/// nodes: largest first, ties by lexicographic node list. The accepted
/// cliques are returned ordered by smallest member.
pub fn find_cliques(g: &SimpleGraph, min_size: usize) -> Vec<Vec<NodeId>> {
    let mut cliques: Vec<Vec<NodeId>> = maximal_cliques(g)
        .into_iter()
        .filter(|c| c.len() >= min_size.max(1))
        .collect();
    cliques.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut taken = vec![false; g.node_count()];
    let mut accepted = Vec::new();
    for clique in cliques {
        if clique.iter().any(|&v| taken[v]) {
            continue;
        }
        for &v in &clique {
            taken[v] = true;
        }
        accepted.push(clique);
    }
    accepted.sort_unstable();
    accepted
}

/// Singleton tokenization of `g` followed by contraction of every node set
/// of the requested topology.
pub fn preprocess(
    g: Arc<SimpleGraph>,
    topo: Topology,
    kind: ContextualizerKind,
) -> Result<TokenizedGraph> {
    topo.validate()?;
    let identities = base_identities(&g, kind);
    let sets = topo.find(&g);
    let tg = TokenizedGraph::singletons(Arc::clone(&g), identities)?;
    if sets.is_empty() {
        return Ok(tg);
    }
    let names = sets
        .iter()
        .map(|set| context_node_set(&g, set, kind, topo.kind.tag()))
        .collect::<Result<Vec<_>>>()?;
    // Singleton hypernode i holds original node i, so node sets double as
    // hypernode index groups.
    tg.contract(&sets, names)
}
