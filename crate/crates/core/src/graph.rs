//! Simple labeled graphs, their tokenized (hypernode) views, and contraction.

use std::sync::Arc;

use crate::error::{Error, Result};

/// 0-based index of an original node.
pub type NodeId = usize;

/// An undirected, node-labeled simple graph.
///
/// Edges are stored once each, smaller endpoint first, in ascending order.
/// Adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    labels: Vec<String>,
    edges: Vec<(NodeId, NodeId)>,
    adjacency: Vec<Vec<NodeId>>,
    name: Option<String>,
}

impl SimpleGraph {
    /// Builds a graph, normalizing and deduplicating the edge list.
    pub fn new<L, E>(labels: L, edges: E) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::EndpointOutOfRange {
                    u,
                    v,
                    node_count: n,
                });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();

        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        Ok(Self {
            labels,
            edges: normalized,
            adjacency,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels.get(v).map(String::as_str)
    }

    /// Normalized edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Sorted neighbors of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Components by reachability, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        components(self.node_count(), &self.edges)
    }
}

/// A hypernode: a set of original nodes carrying an identifiable string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypernode {
    nodes: Vec<NodeId>,
    identity: String,
}

impl Hypernode {
    /// Sorted original node ids.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn identity(&self) -> &str {
        &self.identity
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Smallest original node id contained in this hypernode.
    pub fn anchor(&self) -> NodeId {
        self.nodes[0]
    }
}

/// A partition of a base graph's nodes into hypernodes, with an edge between
/// two hypernodes whenever some original edge crosses between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedGraph {
    base: Arc<SimpleGraph>,
    hypernodes: Vec<Hypernode>,
    edges: Vec<(usize, usize)>,
    owner: Vec<usize>,
}

impl TokenizedGraph {
    /// Every original node becomes its own hypernode.
    pub fn singletons(base: Arc<SimpleGraph>, identities: Vec<String>) -> Result<Self> {
        if identities.len() != base.node_count() {
            return Err(Error::LengthMismatch {
                expected: base.node_count(),
                actual: identities.len(),
            });
        }
        if identities.iter().any(String::is_empty) {
            return Err(Error::EmptyIdentity);
        }
        let hypernodes = identities
            .into_iter()
            .enumerate()
            .map(|(v, identity)| Hypernode {
                nodes: vec![v],
                identity,
            })
            .collect();
        let owner = (0..base.node_count()).collect();
        let edges = base.edges().to_vec();
        Ok(Self {
            base,
            hypernodes,
            edges,
            owner,
        })
    }

    pub fn base(&self) -> &Arc<SimpleGraph> {
        &self.base
    }

    pub fn hypernodes(&self) -> &[Hypernode] {
        &self.hypernodes
    }

    pub fn hypernode(&self, index: usize) -> Option<&Hypernode> {
        self.hypernodes.get(index)
    }

    pub fn len(&self) -> usize {
        self.hypernodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypernodes.is_empty()
    }

    /// Hyper-edges `(j, k)` with `j < k`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, j: usize, k: usize) -> bool {
        self.edges.binary_search(&(j.min(k), j.max(k))).is_ok()
    }

    /// Index of the hypernode containing original node `v`.
    pub fn owner_of(&self, v: NodeId) -> Option<usize> {
        self.owner.get(v).copied()
    }

    /// Contracts each group of hypernodes into one hypernode.
    ///
    /// Groups must be pairwise disjoint and have at least two members. A
    /// contracted group takes the position of its smallest member index;
    /// every other hypernode keeps its relative order.
    pub fn contract(&self, groups: &[Vec<usize>], identities: Vec<String>) -> Result<Self> {
        if groups.len() != identities.len() {
            return Err(Error::LengthMismatch {
                expected: groups.len(),
                actual: identities.len(),
            });
        }
        let n = self.hypernodes.len();
        let mut group_of: Vec<Option<usize>> = vec![None; n];
        let mut leaders = Vec::with_capacity(groups.len());
        for (g, members) in groups.iter().enumerate() {
            if members.len() < 2 {
                return Err(Error::GroupTooSmall(g));
            }
            let mut leader = usize::MAX;
            for &h in members {
                if h >= n {
                    return Err(Error::IndexOutOfRange { index: h, len: n });
                }
                if group_of[h].is_some() {
                    return Err(Error::OverlappingGroups(h));
                }
                group_of[h] = Some(g);
                leader = leader.min(h);
            }
            if identities[g].is_empty() {
                return Err(Error::EmptyIdentity);
            }
            leaders.push(leader);
        }

        let mut identities: Vec<Option<String>> = identities.into_iter().map(Some).collect();
        let mut remap = vec![0usize; n];
        let mut hypernodes = Vec::with_capacity(n);
        for h in 0..n {
            match group_of[h] {
                None => {
                    remap[h] = hypernodes.len();
                    hypernodes.push(self.hypernodes[h].clone());
                }
                Some(g) if leaders[g] == h => {
                    let members = &groups[g];
                    let new_index = hypernodes.len();
                    let mut nodes = Vec::new();
                    for &m in members {
                        remap[m] = new_index;
                        nodes.extend_from_slice(&self.hypernodes[m].nodes);
                    }
                    nodes.sort_unstable();
                    hypernodes.push(Hypernode {
                        nodes,
                        identity: identities[g].take().unwrap_or_default(),
                    });
                }
                // Non-leader members are remapped when their leader is reached.
                Some(_) => {}
            }
        }

        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|&(j, k)| {
                let (a, b) = (remap[j], remap[k]);
                (a != b).then(|| (a.min(b), a.max(b)))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();

        let mut owner = vec![0usize; self.base.node_count()];
        for (index, hn) in hypernodes.iter().enumerate() {
            for &v in &hn.nodes {
                owner[v] = index;
            }
        }

        Ok(Self {
            base: Arc::clone(&self.base),
            hypernodes,
            edges,
            owner,
        })
    }

    /// Components over hypernode indices.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        components(self.hypernodes.len(), &self.edges)
    }
}

/// Partition of `0..n` by reachability over `edges`.
///
/// Members are sorted and components are ordered by smallest member.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            // Smaller root wins so the root is always the component minimum.
            let (lo, hi) = (ru.min(rv), ru.max(rv));
            parent[hi] = lo;
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let root = find(&mut parent, v);
        if slot[root] == usize::MAX {
            slot[root] = out.len();
            out.push(Vec::new());
        }
        out[slot[root]].push(v);
    }
    out
}
