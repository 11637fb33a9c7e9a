//! Undirected simple graph with dense node ids and optional external labels.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Dense node index in `0..n`.
pub type NodeId = usize;

/// An immutable undirected simple graph.
///
/// Adjacency lists are sorted ascending, so `neighbors` doubles as a
/// membership index via binary search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    m: usize,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
}

/// Counts of input edges that were discarded while building a graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Incremental construction of a [`Graph`]. Self-loops and repeated edges
/// (in either direction) are dropped and counted.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    pairs: Vec<(NodeId, NodeId)>,
    self_loops: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder pre-populated with `n` nodes labelled `"0"`..`"n-1"`.
    pub fn with_nodes(n: usize) -> Self {
        let mut b = Self::default();
        for i in 0..n {
            b.node(&i.to_string());
        }
        b
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Id for `label`, inserting a new node on first sight.
    pub fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    /// Adds an undirected edge between existing nodes.
    ///
    /// Panics if either id is out of range.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) {
        let n = self.labels.len();
        assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
        if u == v {
            self.self_loops += 1;
        } else {
            self.pairs.push((u.min(v), u.max(v)));
        }
    }

    pub fn add_labeled_edge(&mut self, a: &str, b: &str) {
        let u = self.node(a);
        let v = self.node(b);
        self.add_edge(u, v);
    }

    pub fn build(mut self) -> (Graph, BuildReport) {
        let before = self.pairs.len();
        self.pairs.sort_unstable();
        self.pairs.dedup();
        let report = BuildReport {
            self_loops: self.self_loops,
            duplicates: before - self.pairs.len(),
        };
        let n = self.labels.len();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.pairs {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let graph = Graph {
            adj,
            m: self.pairs.len(),
            labels: self.labels,
            index: self.index,
        };
        (graph, report)
    }
}

/// An induced subgraph together with the map from its dense ids back to the
/// parent graph. `to_parent` is ascending, so relative node order is kept.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Graph,
    pub to_parent: Vec<NodeId>,
}

impl Graph {
    /// Graph on `n` nodes labelled by their ids. Duplicate edges and
    /// self-loops are ignored; panics on out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
        let mut b = GraphBuilder::with_nodes(n);
        for &(u, v) in edges {
            b.add_edge(u, v);
        }
        b.build().0
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Star with node 0 as the center and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.adj.len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// `2m / (n(n-1))`.
    pub fn density(&self) -> Result<f64> {
        let n = self.node_count();
        if n < 2 {
            return Err(Error::UndefinedDensity(n));
        }
        Ok(2.0 * self.m as f64 / (n as f64 * (n as f64 - 1.0)))
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `nodes` (treated as a set).
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Result<Subgraph> {
        let n = self.node_count();
        let mut to_parent = nodes.to_vec();
        to_parent.sort_unstable();
        to_parent.dedup();
        if let Some(&bad) = to_parent.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidNode { node: bad, n });
        }
        let mut local = vec![usize::MAX; n];
        for (i, &v) in to_parent.iter().enumerate() {
            local[v] = i;
        }
        let mut adj = Vec::with_capacity(to_parent.len());
        let mut twice_m = 0;
        for &v in &to_parent {
            // parent adjacency is sorted and `local` is monotone, so this stays sorted
            let list: Vec<NodeId> = self.adj[v]
                .iter()
                .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                .collect();
            twice_m += list.len();
            adj.push(list);
        }
        let labels: Vec<String> = to_parent.iter().map(|&v| self.labels[v].clone()).collect();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(Subgraph {
            graph: Graph {
                adj,
                m: twice_m / 2,
                labels,
                index,
            },
            to_parent,
        })
    }

    /// Copy with node `v` renamed to `perm[v]`; labels travel with their nodes.
    ///
    /// Panics unless `perm` is a permutation of `0..n`.
    pub fn permuted(&self, perm: &[NodeId]) -> Graph {
        let n = self.node_count();
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut labels = vec![String::new(); n];
        let mut hit = vec![false; n];
        for (v, &p) in perm.iter().enumerate() {
            assert!(p < n && !hit[p], "not a permutation");
            hit[p] = true;
            labels[p] = self.labels[v].clone();
        }
        let mut b = GraphBuilder::new();
        for l in &labels {
            b.node(l);
        }
        for (u, v) in self.edges() {
            b.add_edge(perm[u], perm[v]);
        }
        b.build().0
    }

    /// Removes edge `{u, v}` if present.
    pub(crate) fn remove_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        match self.adj[u].binary_search(&v) {
            Ok(i) => {
                self.adj[u].remove(i);
                let j = self.adj[v].binary_search(&u).expect("adjacency is symmetric");
                self.adj[v].remove(j);
                self.m -= 1;
                true
            }
            Err(_) => false,
        }
    }
}
