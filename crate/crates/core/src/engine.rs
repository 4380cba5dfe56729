//! Count-and-merge training over a corpus of tokenized graphs, and replay of
//! the recorded merge rules on unseen graphs.
//!
//! One iteration contextualizes every hyper-edge of every graph, picks the
//! most frequent context (ties go to the lexicographically smallest string),
//! and contracts the matching edges in every graph at once. Within a graph a
//! context may match overlapping edges; those are thinned to a disjoint
//! subset, scanning candidates by the smallest original node id on each side.
//!
//! Counting and merging run per graph on a rayon pool and are combined in
//! corpus order, so the result does not depend on the number of workers.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::{pair_context, ContextualizerKind};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, TokenizedGraph};
use crate::topology::{preprocess, Topology};

pub const VOCAB_FORMAT_VERSION: u64 = 1;

/// A hyper-edge as a `(j, k)` hypernode index pair with `j < k`.
pub type HyperEdge = (usize, usize);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Tally {
    count: usize,
    by_graph: BTreeMap<usize, Vec<HyperEdge>>,
}

/// Frequency of every edge context in a corpus, with the edges that produced
/// each count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCounter {
    tallies: BTreeMap<String, Tally>,
}

impl PairCounter {
    pub fn is_empty(&self) -> bool {
        self.tallies.is_empty()
    }

    /// Number of distinct contexts.
    pub fn len(&self) -> usize {
        self.tallies.len()
    }

    pub fn count(&self, context: &str) -> usize {
        self.tallies.get(context).map_or(0, |t| t.count)
    }

    /// `(context, count)` in ascending context order.
    pub fn counts(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.tallies.iter().map(|(s, t)| (s.as_str(), t.count))
    }

    /// Matching edges of `context` in graph `graph`, ascending.
    pub fn occurrences(&self, context: &str, graph: usize) -> &[HyperEdge] {
        self.tallies
            .get(context)
            .and_then(|t| t.by_graph.get(&graph))
            .map_or(&[], Vec::as_slice)
    }

    /// Graph indices with at least one occurrence of `context`.
    pub fn graphs_with(&self, context: &str) -> impl Iterator<Item = usize> + '_ {
        self.tallies
            .get(context)
            .into_iter()
            .flat_map(|t| t.by_graph.keys().copied())
    }

    fn add_graph(&mut self, graph: usize, local: Vec<(String, Vec<HyperEdge>)>) {
        for (context, edges) in local {
            let tally = self.tallies.entry(context).or_default();
            tally.count += edges.len();
            tally.by_graph.insert(graph, edges);
        }
    }
}

/// Contexts of every hyper-edge of one graph, grouped by context.
fn graph_contexts(tg: &TokenizedGraph) -> Vec<(String, Vec<HyperEdge>)> {
    let hn = tg.hypernodes();
    let mut local: BTreeMap<String, Vec<HyperEdge>> = BTreeMap::new();
    for &(j, k) in tg.edges() {
        let context = pair_context(hn[j].identity(), hn[k].identity());
        local.entry(context).or_default().push((j, k));
    }
    local.into_iter().collect()
}

/// Tallies every hyper-edge context across the corpus.
pub fn count_pairs(corpus: &[TokenizedGraph]) -> PairCounter {
    let per_graph: Vec<_> = corpus.par_iter().map(graph_contexts).collect();
    let mut counter = PairCounter::default();
    for (i, local) in per_graph.into_iter().enumerate() {
        counter.add_graph(i, local);
    }
    counter
}

/// One recorded merge: the selected context and how often it occurred.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeRule {
    pub step: usize,
    pub context: String,
    pub frequency: usize,
}

/// The most frequent context, ties broken by the smallest string.
pub fn select_best(pc: &PairCounter, step: usize) -> Option<MergeRule> {
    let mut best: Option<(&str, usize)> = None;
    for (context, count) in pc.counts() {
        // Ascending iteration: only a strictly larger count displaces.
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((context, count));
        }
    }
    best.map(|(context, frequency)| MergeRule {
        step,
        context: context.to_string(),
        frequency,
    })
}

/// Edges of `tg` whose context equals `context`, ascending.
pub fn occurrences_of(tg: &TokenizedGraph, context: &str) -> Vec<HyperEdge> {
    let hn = tg.hypernodes();
    tg.edges()
        .iter()
        .copied()
        .filter(|&(j, k)| pair_context(hn[j].identity(), hn[k].identity()) == context)
        .collect()
}

/// Contracts a disjoint subset of `candidates` into hypernodes named
/// `context`. Returns the graph unchanged when nothing matches.
pub fn merge_graph(
    tg: &TokenizedGraph,
    context: &str,
    candidates: &[HyperEdge],
) -> Result<TokenizedGraph> {
    if candidates.is_empty() {
        return Ok(tg.clone());
    }
    let hn = tg.hypernodes();
    let mut ordered: Vec<((usize, usize), HyperEdge)> = candidates
        .iter()
        .map(|&(j, k)| {
            let (a, b) = (hn[j].anchor(), hn[k].anchor());
            ((a.min(b), a.max(b)), (j, k))
        })
        .collect();
    ordered.sort_unstable();

    let mut used = vec![false; tg.len()];
    let mut groups = Vec::new();
    for (_, (j, k)) in ordered {
        if used[j] || used[k] {
            continue;
        }
        used[j] = true;
        used[k] = true;
        groups.push(vec![j, k]);
    }
    let names = vec![context.to_string(); groups.len()];
    tg.contract(&groups, names)
}

/// Applies `rule` to every graph using the occurrences recorded in `pc`.
pub fn merge_step(
    corpus: &[TokenizedGraph],
    rule: &MergeRule,
    pc: &PairCounter,
) -> Result<Vec<TokenizedGraph>> {
    corpus
        .par_iter()
        .enumerate()
        .map(|(i, tg)| merge_graph(tg, &rule.context, pc.occurrences(&rule.context, i)))
        .collect()
}

/// Everything needed to replay a training run on new graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub format_version: u64,
    pub contextualizer: ContextualizerKind,
    pub topology: Topology,
    pub rules: Vec<MergeRule>,
}

impl Vocabulary {
    pub fn new(contextualizer: ContextualizerKind, topology: Topology) -> Self {
        Self {
            format_version: VOCAB_FORMAT_VERSION,
            contextualizer,
            topology,
            rules: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != VOCAB_FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: self.format_version,
                expected: VOCAB_FORMAT_VERSION,
            });
        }
        self.topology
            .validate()
            .map_err(|e| Error::schema("topology", e.to_string()))?;
        for (i, rule) in self.rules.iter().enumerate() {
            let path = format!("rules[{i}]");
            if rule.step != i + 1 {
                return Err(Error::schema(
                    format!("{path}.step"),
                    format!("expected step {}, found {}", i + 1, rule.step),
                ));
            }
            if rule.context.is_empty() {
                return Err(Error::schema(format!("{path}.context"), "empty context"));
            }
            if rule.frequency == 0 {
                return Err(Error::schema(
                    format!("{path}.frequency"),
                    "frequency must be at least 1",
                ));
            }
        }
        Ok(())
    }

    /// Preprocesses `g` and replays every rule in order.
    pub fn apply(&self, g: Arc<SimpleGraph>) -> Result<TokenizedGraph> {
        self.validate()?;
        let mut tg = preprocess(g, self.topology, self.contextualizer)?;
        for rule in &self.rules {
            tg = apply_rule(&tg, &rule.context)?;
        }
        Ok(tg)
    }

    /// Replays the vocabulary over a whole corpus, returning the state after
    /// preprocessing followed by the state after each rule.
    pub fn replay(&self, corpus: &[Arc<SimpleGraph>]) -> Result<Vec<Vec<TokenizedGraph>>> {
        self.validate()?;
        let mut current = preprocess_corpus(corpus, self.topology, self.contextualizer)?;
        let mut snapshots = Vec::with_capacity(self.rules.len() + 1);
        for rule in &self.rules {
            let next = current
                .par_iter()
                .map(|tg| apply_rule(tg, &rule.context))
                .collect::<Result<Vec<_>>>()?;
            snapshots.push(std::mem::replace(&mut current, next));
        }
        snapshots.push(current);
        Ok(snapshots)
    }
}

fn apply_rule(tg: &TokenizedGraph, context: &str) -> Result<TokenizedGraph> {
    let found = occurrences_of(tg, context);
    merge_graph(tg, context, &found)
}

fn preprocess_corpus(
    corpus: &[Arc<SimpleGraph>],
    topology: Topology,
    contextualizer: ContextualizerKind,
) -> Result<Vec<TokenizedGraph>> {
    corpus
        .par_iter()
        .map(|g| preprocess(Arc::clone(g), topology, contextualizer))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainOptions {
    pub steps: usize,
    pub topology: Topology,
    pub contextualizer: ContextualizerKind,
    /// Keep every intermediate corpus state, not just the last one.
    pub emit_snapshots: bool,
    /// Size of the worker pool; 0 uses rayon's default.
    pub workers: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            steps: 100,
            topology: Topology::none(),
            contextualizer: ContextualizerKind::Neighborhood,
            emit_snapshots: false,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Training {
    pub vocabulary: Vocabulary,
    /// States after preprocessing and after each recorded rule; empty unless
    /// snapshots were requested.
    pub snapshots: Vec<Vec<TokenizedGraph>>,
    pub final_corpus: Vec<TokenizedGraph>,
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global
/// pool when `workers` is 0.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        // Thread spawn failure: counting is schedule-independent, so the
        // caller's thread is an equivalent fallback.
        Err(_) => f(),
    }
}

/// Learns up to `opts.steps` merge rules from `corpus`. Stops early once no
/// hyper-edge remains anywhere in the corpus.
pub fn train(corpus: &[Arc<SimpleGraph>], opts: &TrainOptions) -> Result<Training> {
    opts.topology.validate()?;
    with_workers(opts.workers, || train_inner(corpus, opts))
}

fn train_inner(corpus: &[Arc<SimpleGraph>], opts: &TrainOptions) -> Result<Training> {
    let mut vocabulary = Vocabulary::new(opts.contextualizer, opts.topology);
    let mut current = preprocess_corpus(corpus, opts.topology, opts.contextualizer)?;
    let mut snapshots = Vec::new();

    for step in 1..=opts.steps {
        let counter = count_pairs(&current);
        let Some(rule) = select_best(&counter, step) else {
            break;
        };
        let next = merge_step(&current, &rule, &counter)?;
        vocabulary.rules.push(rule);
        let previous = std::mem::replace(&mut current, next);
        if opts.emit_snapshots {
            snapshots.push(previous);
        }
    }
    if opts.emit_snapshots {
        snapshots.push(current.clone());
    }

    Ok(Training {
        vocabulary,
        snapshots,
        final_corpus: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(w: &str) -> Arc<SimpleGraph> {
        let labels: Vec<String> = w.chars().map(String::from).collect();
        let n = labels.len();
        Arc::new(SimpleGraph::new(labels, (1..n).map(|i| (i - 1, i))).unwrap())
    }

    fn pse(g: &Arc<SimpleGraph>) -> TokenizedGraph {
        preprocess(Arc::clone(g), Topology::none(), ContextualizerKind::Pse).unwrap()
    }

    fn words_corpus() -> Vec<TokenizedGraph> {
        ["low", "low", "lowest", "widest"]
            .iter()
            .map(|w| pse(&word(w)))
            .collect()
    }

    #[test]
    fn counts_first_iteration() {
        let pc = count_pairs(&words_corpus());
        let got: Vec<(&str, usize)> = pc.counts().collect();
        let mut want = vec![
            ("l-o", 3),
            ("o-w", 3),
            ("e-s", 2),
            ("s-t", 2),
            ("e-w", 1),
            ("i-w", 1),
            ("d-i", 1),
            ("d-e", 1),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(pc.occurrences("l-o", 2), &[(0, 1)]);
        assert_eq!(pc.graphs_with("e-s").collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn count_trivial_corpora() {
        assert!(count_pairs(&[]).is_empty());
        let pc = count_pairs(&[pse(&word("ab"))]);
        assert_eq!(pc.counts().collect::<Vec<_>>(), vec![("a-b", 1)]);
    }

    #[test]
    fn select_breaks_ties_lexicographically() {
        let rule = select_best(&count_pairs(&words_corpus()), 1).unwrap();
        assert_eq!(rule.context, "l-o");
        assert_eq!(rule.frequency, 3);
        assert!(select_best(&PairCounter::default(), 1).is_none());

        let corpus = vec![pse(&word("xyxy")), pse(&word("abab"))];
        let pc = count_pairs(&corpus);
        assert_eq!(pc.count("x-y"), 3);
        assert_eq!(pc.count("a-b"), 3);
        assert_eq!(select_best(&pc, 1).unwrap().context, "a-b");
    }

    #[test]
    fn merge_low() {
        let corpus = words_corpus();
        let pc = count_pairs(&corpus);
        let rule = select_best(&pc, 1).unwrap();
        let next = merge_step(&corpus, &rule, &pc).unwrap();
        let low = &next[0];
        assert_eq!(low.len(), 2);
        assert_eq!(low.hypernodes()[0].nodes(), &[0, 1]);
        assert_eq!(low.hypernodes()[0].identity(), "l-o");
        assert_eq!(low.hypernodes()[1].nodes(), &[2]);
        assert_eq!(next[3], corpus[3]);
    }

    #[test]
    fn merge_overlapping_occurrences_greedily() {
        let tg = pse(&word("aba"));
        let found = occurrences_of(&tg, "a-b");
        assert_eq!(found, vec![(0, 1), (1, 2)]);
        let out = merge_graph(&tg, "a-b", &found).unwrap();
        let sets: Vec<_> = out
            .hypernodes()
            .iter()
            .map(|h| h.nodes().to_vec())
            .collect();
        assert_eq!(sets, vec![vec![0, 1], vec![2]]);
        assert_eq!(out.edges(), &[(0, 1)]);
    }

    #[test]
    fn merge_orders_candidates_by_original_ids() {
        // Path b-a-b-a: all three edges match; the middle one overlaps both others.
        let g = Arc::new(SimpleGraph::new(["b", "a", "b", "a"], [(0, 1), (1, 2), (2, 3)]).unwrap());
        let tg = pse(&g);
        let out = merge_graph(&tg, "a-b", &occurrences_of(&tg, "a-b")).unwrap();
        let sets: Vec<_> = out
            .hypernodes()
            .iter()
            .map(|h| h.nodes().to_vec())
            .collect();
        assert_eq!(sets, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn no_match_leaves_graph_unchanged() {
        let tg = pse(&word("xyz"));
        assert_eq!(merge_graph(&tg, "a-b", &[]).unwrap(), tg);
    }

    #[test]
    fn train_zero_steps() {
        let opts = TrainOptions {
            steps: 0,
            contextualizer: ContextualizerKind::Pse,
            emit_snapshots: true,
            ..TrainOptions::default()
        };
        let out = train(&[word("low")], &opts).unwrap();
        assert!(out.vocabulary.rules.is_empty());
        assert_eq!(out.snapshots.len(), 1);
    }

    #[test]
    fn train_single_nodes_records_nothing() {
        let opts = TrainOptions {
            steps: 5,
            ..TrainOptions::default()
        };
        let out = train(&[word("a"), word("b")], &opts).unwrap();
        assert!(out.vocabulary.rules.is_empty());
        assert_eq!(out.final_corpus.len(), 2);
    }

    #[test]
    fn vocabulary_validation() {
        let mut v = Vocabulary::new(ContextualizerKind::Pse, Topology::none());
        v.rules.push(MergeRule {
            step: 2,
            context: "a-b".into(),
            frequency: 1,
        });
        assert!(matches!(v.validate(), Err(Error::SchemaViolation { .. })));
        v.rules[0].step = 1;
        assert!(v.validate().is_ok());
        v.format_version = 99;
        assert!(matches!(
            v.apply(word("ab")),
            Err(Error::VersionMismatch { found: 99, .. })
        ));
    }

    #[test]
    fn apply_skips_unknown_rules_and_still_preprocesses() {
        let opts = TrainOptions {
            steps: 100,
            contextualizer: ContextualizerKind::Pse,
            ..TrainOptions::default()
        };
        let corpus: Vec<_> = ["low", "low", "lowest", "widest"]
            .iter()
            .map(|w| word(w))
            .collect();
        let out = train(&corpus, &opts).unwrap();
        assert_eq!(
            out.vocabulary.apply(Arc::clone(&corpus[0])).unwrap(),
            out.final_corpus[0]
        );
        let unseen = word("qr");
        assert_eq!(
            out.vocabulary.apply(Arc::clone(&unseen)).unwrap(),
            pse(&unseen)
        );

        let ring = Vocabulary::new(ContextualizerKind::Pse, Topology::ring());
        let benzene =
            Arc::new(SimpleGraph::new(vec!["c"; 6], (0..6).map(|i| (i, (i + 1) % 6))).unwrap());
        assert_eq!(ring.apply(benzene).unwrap().len(), 1);
    }

    #[test]
    fn replay_matches_training_snapshots() {
        let corpus: Vec<_> = ["low", "low", "lowest", "widest"]
            .iter()
            .map(|w| word(w))
            .collect();
        let opts = TrainOptions {
            steps: 100,
            contextualizer: ContextualizerKind::Pse,
            emit_snapshots: true,
            ..TrainOptions::default()
        };
        let out = train(&corpus, &opts).unwrap();
        assert_eq!(out.vocabulary.replay(&corpus).unwrap(), out.snapshots);
    }
}
