//! Hypergraph views over original nodes and their sparse incidence form.

use crate::graph::{NodeId, SimpleGraph, TokenizedGraph};

/// Hyperedges over `0..num_vertices` with a positive weight each.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    num_vertices: usize,
    hyperedges: Vec<Vec<NodeId>>,
    weights: Vec<f64>,
}

impl Hypergraph {
    /// Unit-weight hypergraph. Each hyperedge is sorted and must be a
    /// non-empty subset of `0..num_vertices`.
    pub fn new(num_vertices: usize, hyperedges: Vec<Vec<NodeId>>) -> Self {
        let weights = vec![1.0; hyperedges.len()];
        Self::with_weights(num_vertices, hyperedges, weights)
    }

    pub fn with_weights(
        num_vertices: usize,
        mut hyperedges: Vec<Vec<NodeId>>,
        weights: Vec<f64>,
    ) -> Self {
        assert_eq!(hyperedges.len(), weights.len(), "one weight per hyperedge");
        assert!(weights.iter().all(|&w| w > 0.0), "weights must be positive");
        for edge in &mut hyperedges {
            edge.sort_unstable();
            edge.dedup();
            assert!(!edge.is_empty(), "hyperedges must be non-empty");
            assert!(
                edge.iter().all(|&v| v < num_vertices),
                "hyperedge member out of range"
            );
        }
        Self {
            num_vertices,
            hyperedges,
            weights,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_hyperedges(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn hyperedges(&self) -> &[Vec<NodeId>] {
        &self.hyperedges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Non-zero entries of the vertex-by-hyperedge incidence matrix.
    pub fn incidence(&self) -> Incidence {
        let mut entries: Vec<(usize, usize)> = self
            .hyperedges
            .iter()
            .enumerate()
            .flat_map(|(m, edge)| edge.iter().map(move |&n| (n, m)))
            .collect();
        entries.sort_unstable();
        Incidence {
            rows: self.num_vertices,
            cols: self.hyperedges.len(),
            entries,
        }
    }
}

/// Sparse 0/1 incidence matrix: `(n, m)` is present iff vertex `n` belongs
/// to hyperedge `m`. Entries are sorted by row, then column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incidence {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize)>,
}

impl Incidence {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

/// Hypergraph induced by a tokenization: every multi-node hypernode is a
/// hyperedge, and every original edge touching a singleton hypernode is a
/// two-node hyperedge. Duplicates are removed; the list is sorted.
pub fn to_hypergraph(tg: &TokenizedGraph) -> Hypergraph {
    let base = tg.base();
    let mut edges: Vec<Vec<NodeId>> = Vec::new();
    for hn in tg.hypernodes() {
        if hn.len() >= 2 {
            edges.push(hn.nodes().to_vec());
        } else {
            let v = hn.anchor();
            for &u in base.neighbors(v) {
                edges.push(vec![u.min(v), u.max(v)]);
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Hypergraph::new(base.node_count(), edges)
}

/// One hyperedge per vertex: the vertex together with its 1-hop neighbors.
pub fn centroid_hypergraph(g: &SimpleGraph) -> Hypergraph {
    let edges = (0..g.node_count())
        .map(|v| {
            let mut edge = g.neighbors(v).to_vec();
            edge.push(v);
            edge.sort_unstable();
            edge
        })
        .collect();
    Hypergraph::new(g.node_count(), edges)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn path3() -> Arc<SimpleGraph> {
        Arc::new(SimpleGraph::new(["a", "b", "c"], [(0, 1), (1, 2)]).unwrap())
    }

    fn singletons(g: &Arc<SimpleGraph>) -> TokenizedGraph {
        TokenizedGraph::singletons(Arc::clone(g), g.labels().to_vec()).unwrap()
    }

    #[test]
    fn graphbpe_view_of_partially_merged_path() {
        let tg = singletons(&path3())
            .contract(&[vec![0, 1]], vec!["a-b".into()])
            .unwrap();
        let hg = to_hypergraph(&tg);
        assert_eq!(hg.hyperedges(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(hg.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn untokenized_view_is_edge_set() {
        let g = Arc::new(
            SimpleGraph::new(vec!["c"; 5], [(0, 1), (1, 2), (2, 0), (3, 4), (1, 3)]).unwrap(),
        );
        let hg = to_hypergraph(&singletons(&g));
        let want: Vec<Vec<usize>> = g.edges().iter().map(|&(u, v)| vec![u, v]).collect();
        assert_eq!(hg.hyperedges(), want.as_slice());
    }

    #[test]
    fn contracted_ring_is_one_hyperedge() {
        let g = Arc::new(SimpleGraph::new(vec!["c"; 6], (0..6).map(|i| (i, (i + 1) % 6))).unwrap());
        let tg = singletons(&g)
            .contract(&[(0..6).collect()], vec!["RING".into()])
            .unwrap();
        assert_eq!(to_hypergraph(&tg).hyperedges(), &[vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn isolated_vertex_yields_no_hyperedge() {
        let g = Arc::new(SimpleGraph::new(["a", "b", "z"], [(0, 1)]).unwrap());
        let hg = to_hypergraph(&singletons(&g));
        assert_eq!(hg.num_vertices(), 3);
        assert_eq!(hg.hyperedges(), &[vec![0, 1]]);
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(
            centroid_hypergraph(&path3()).hyperedges(),
            &[vec![0, 1], vec![0, 1, 2], vec![1, 2]]
        );
        let k3 = SimpleGraph::new(["a", "b", "c"], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            centroid_hypergraph(&k3).hyperedges(),
            vec![vec![0, 1, 2]; 3].as_slice()
        );
        let lone = SimpleGraph::new(["a"], []).unwrap();
        assert_eq!(centroid_hypergraph(&lone).hyperedges(), &[vec![0]]);
    }

    #[test]
    fn incidence_examples() {
        let hg = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]]);
        let inc = hg.incidence();
        assert_eq!(inc.shape(), (3, 2));
        assert_eq!(inc.entries, vec![(0, 0), (1, 0), (1, 1), (2, 1)]);

        let empty = Hypergraph::new(4, vec![]);
        assert_eq!(empty.incidence().shape(), (4, 0));
        assert!(empty.incidence().entries.is_empty());

        let full = Hypergraph::new(4, vec![vec![0, 1, 2, 3]]);
        assert_eq!(
            full.incidence().entries,
            vec![(0, 0), (1, 0), (2, 0), (3, 0)]
        );
    }

    #[test]
    #[should_panic(expected = "weights must be positive")]
    fn rejects_non_positive_weight() {
        Hypergraph::with_weights(2, vec![vec![0, 1]], vec![0.0]);
    }
}
