//! Degree, closeness and betweenness centrality, plus edge betweenness.
//!
//! Node scores are normalized to `[0, 1]` so they can be averaged together.
//! Betweenness uses Brandes' single-source dependency accumulation and counts
//! every shortest path.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::Error;
use crate::graph::{Graph, NodeId};

/// Sources per parallel work unit. Fixed so summation order, and therefore
/// every floating-point result, does not depend on the thread count.
const SOURCE_CHUNK: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CentralityKind {
    Degree,
    Closeness,
    Betweenness,
}

impl CentralityKind {
    pub fn name(self) -> &'static str {
        match self {
            CentralityKind::Degree => "degree",
            CentralityKind::Closeness => "closeness",
            CentralityKind::Betweenness => "betweenness",
        }
    }
}

impl fmt::Display for CentralityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CentralityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "degree" => Ok(CentralityKind::Degree),
            "closeness" => Ok(CentralityKind::Closeness),
            "betweenness" => Ok(CentralityKind::Betweenness),
            _ => Err(Error::UnknownName {
                kind: "centrality",
                value: s.to_owned(),
            }),
        }
    }
}

/// One normalized score per node.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralityScores {
    pub kind: CentralityKind,
    pub values: Vec<f64>,
}

impl CentralityScores {
    pub fn get(&self, v: NodeId) -> f64 {
        self.values[v]
    }
}

/// Edge betweenness in [`Graph::edges`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeScores {
    pub edges: Vec<(NodeId, NodeId)>,
    pub scores: Vec<f64>,
}

pub fn centrality(g: &Graph, kind: CentralityKind) -> CentralityScores {
    match kind {
        CentralityKind::Degree => degree_centrality(g),
        CentralityKind::Closeness => closeness_centrality(g),
        CentralityKind::Betweenness => betweenness_centrality(g),
    }
}

/// `deg(v) / (n - 1)`; all zeros when `n < 2`.
pub fn degree_centrality(g: &Graph) -> CentralityScores {
    let n = g.node_count();
    let values = if n < 2 {
        vec![0.0; n]
    } else {
        let denom = (n - 1) as f64;
        g.nodes().map(|v| g.degree(v) as f64 / denom).collect()
    };
    CentralityScores {
        kind: CentralityKind::Degree,
        values,
    }
}

/// Closeness scaled by component size (Wasserman–Faust):
/// `((r-1)/(n-1)) * ((r-1)/sum_dist)` where `r` is the size of `v`'s
/// component. Isolated nodes score 0.
pub fn closeness_centrality(g: &Graph) -> CentralityScores {
    let n = g.node_count();
    let csr = Csr::new(g);
    let values = if n < 2 {
        vec![0.0; n]
    } else {
        (0..n)
            .into_par_iter()
            .map_init(
                || (vec![u32::MAX; n], Vec::with_capacity(n)),
                |(dist, order), v| {
                    let total = csr.bfs(v, dist, order);
                    let reached = order.len();
                    for &u in order.iter() {
                        dist[u] = u32::MAX;
                    }
                    if total == 0 {
                        return 0.0;
                    }
                    let r1 = (reached - 1) as f64;
                    (r1 / (n - 1) as f64) * (r1 / total as f64)
                },
            )
            .collect()
    };
    CentralityScores {
        kind: CentralityKind::Closeness,
        values,
    }
}

/// Betweenness normalized by the `(n-1)(n-2)/2` unordered pairs that exclude
/// the node; all zeros when `n < 3`.
pub fn betweenness_centrality(g: &Graph) -> CentralityScores {
    let n = g.node_count();
    let csr = Csr::new(g);
    let sources: Vec<NodeId> = g.nodes().collect();
    let acc = csr.brandes(&sources, false);
    let values = if n < 3 {
        vec![0.0; n]
    } else {
        // each unordered pair is seen from both endpoints
        let norm = ((n - 1) * (n - 2)) as f64;
        acc.node.iter().map(|&b| b / norm).collect()
    };
    CentralityScores {
        kind: CentralityKind::Betweenness,
        values,
    }
}

/// Raw edge betweenness: the sum over unordered pairs `{s, t}` of the
/// fraction of shortest `s`–`t` paths that use the edge.
pub fn edge_betweenness(g: &Graph) -> EdgeScores {
    let csr = Csr::new(g);
    let sources: Vec<NodeId> = g.nodes().collect();
    let acc = csr.brandes(&sources, true);
    EdgeScores {
        edges: csr.edges,
        scores: acc.edge.iter().map(|&b| b / 2.0).collect(),
    }
}

/// Compressed adjacency with an edge id per slot.
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    slot_edge: Vec<usize>,
    edges: Vec<(NodeId, NodeId)>,
}

struct Accum {
    node: Vec<f64>,
    edge: Vec<f64>,
}

impl Accum {
    fn zeros(n: usize, m: usize) -> Self {
        Accum {
            node: vec![0.0; n],
            edge: vec![0.0; m],
        }
    }

    fn add(&mut self, other: &Accum) {
        for (a, b) in self.node.iter_mut().zip(&other.node) {
            *a += b;
        }
        for (a, b) in self.edge.iter_mut().zip(&other.edge) {
            *a += b;
        }
    }
}

impl Csr {
    fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(2 * g.edge_count());
        for v in g.nodes() {
            targets.extend_from_slice(g.neighbors(v));
            offsets.push(targets.len());
        }
        let mut slot_edge = vec![usize::MAX; targets.len()];
        let mut edges = Vec::with_capacity(g.edge_count());
        for u in 0..n {
            for slot in offsets[u]..offsets[u + 1] {
                let v = targets[slot];
                if u < v {
                    slot_edge[slot] = edges.len();
                    edges.push((u, v));
                } else {
                    let back = offsets[v] + g.neighbors(v).binary_search(&u).expect("symmetric");
                    slot_edge[slot] = slot_edge[back];
                }
            }
        }
        Csr {
            offsets,
            targets,
            slot_edge,
            edges,
        }
    }

    fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    fn slots(&self, v: NodeId) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// BFS from `s`, filling `dist` and the visit `order`; returns the sum of
    /// distances to reached nodes. `dist` must be all `u32::MAX` on entry.
    fn bfs(&self, s: NodeId, dist: &mut [u32], order: &mut Vec<NodeId>) -> u64 {
        order.clear();
        dist[s] = 0;
        order.push(s);
        let mut head = 0;
        let mut total = 0u64;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let dv = dist[v];
            total += dv as u64;
            for slot in self.slots(v) {
                let w = self.targets[slot];
                if dist[w] == u32::MAX {
                    dist[w] = dv + 1;
                    order.push(w);
                }
            }
        }
        total
    }

    /// Sums single-source dependencies over `sources`, in fixed chunks.
    fn brandes(&self, sources: &[NodeId], with_edges: bool) -> Accum {
        let n = self.n();
        let m = if with_edges { self.edges.len() } else { 0 };
        let dense = BitRows::worthwhile(n, self.targets.len()).then(|| BitRows::new(self));
        let partials: Vec<Accum> = sources
            .par_chunks(SOURCE_CHUNK)
            .map(|chunk| {
                let mut acc = Accum::zeros(n, m);
                let mut sigma = vec![0.0f64; n];
                let mut delta = vec![0.0f64; n];
                match &dense {
                    Some(rows) => {
                        let mut scratch = DenseScratch::new(n, rows.words);
                        for &s in chunk {
                            rows.single_source(s, &mut acc, &mut sigma, &mut delta, &mut scratch, with_edges);
                        }
                    }
                    None => {
                        let mut dist = vec![u32::MAX; n];
                        let mut order = Vec::with_capacity(n);
                        for &s in chunk {
                            self.single_source(s, &mut acc, &mut dist, &mut sigma, &mut delta, &mut order, with_edges);
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = Accum::zeros(n, m);
        for p in &partials {
            total.add(p);
        }
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn single_source(
        &self,
        s: NodeId,
        acc: &mut Accum,
        dist: &mut [u32],
        sigma: &mut [f64],
        delta: &mut [f64],
        order: &mut Vec<NodeId>,
        with_edges: bool,
    ) {
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push(s);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let next = dist[v] + 1;
            for slot in self.slots(v) {
                let w = self.targets[slot];
                if dist[w] == u32::MAX {
                    dist[w] = next;
                    order.push(w);
                }
                if dist[w] == next {
                    sigma[w] += sigma[v];
                }
            }
        }
        // predecessors of w are exactly the neighbors one step closer to s
        for &w in order.iter().rev() {
            let dw = dist[w];
            let coeff = (1.0 + delta[w]) / sigma[w];
            for slot in self.slots(w) {
                let v = self.targets[slot];
                if dist[v] + 1 == dw {
                    let c = sigma[v] * coeff;
                    delta[v] += c;
                    if with_edges {
                        acc.edge[self.slot_edge[slot]] += c;
                    }
                }
            }
            if w != s {
                acc.node[w] += delta[w];
            }
        }
        for &v in order.iter() {
            dist[v] = u32::MAX;
            sigma[v] = 0.0;
            delta[v] = 0.0;
        }
    }
}

/// Adjacency rows as bitsets plus a dense edge-id table. On dense graphs a
/// BFS level can be expanded a word at a time, and only shortest-path DAG
/// arcs are ever touched individually.
struct BitRows {
    words: usize,
    rows: Vec<u64>,
    edge_id: Vec<u32>,
}

struct DenseScratch {
    visited: Vec<u64>,
    next: Vec<u64>,
    frontier: Vec<NodeId>,
    reached: Vec<NodeId>,
    /// `(v, w, edge)` for every DAG arc, in BFS level order.
    dag: Vec<(u32, u32, u32)>,
}

impl DenseScratch {
    fn new(n: usize, words: usize) -> Self {
        DenseScratch {
            visited: vec![0; words],
            next: vec![0; words],
            frontier: Vec::with_capacity(n),
            reached: Vec::with_capacity(n),
            dag: Vec::new(),
        }
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &word)| {
        let mut w = word;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + b
            })
        })
    })
}

impl BitRows {
    const MAX_NODES: usize = 2048;

    /// Average degree of at least `n / 16` makes word-wise expansion cheaper
    /// than scanning every arc.
    fn worthwhile(n: usize, arcs: usize) -> bool {
        (64..=Self::MAX_NODES).contains(&n) && arcs * 16 >= n * n
    }

    fn new(csr: &Csr) -> Self {
        let n = csr.n();
        let words = n.div_ceil(64);
        let mut rows = vec![0u64; n * words];
        let mut edge_id = vec![u32::MAX; n * n];
        for v in 0..n {
            for slot in csr.slots(v) {
                let w = csr.targets[slot];
                rows[v * words + w / 64] |= 1 << (w % 64);
                edge_id[v * n + w] = csr.slot_edge[slot] as u32;
            }
        }
        BitRows { words, rows, edge_id }
    }

    fn row(&self, v: NodeId) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    fn single_source(
        &self,
        s: NodeId,
        acc: &mut Accum,
        sigma: &mut [f64],
        delta: &mut [f64],
        sc: &mut DenseScratch,
        with_edges: bool,
    ) {
        let n = sigma.len();
        sc.visited.fill(0);
        sc.visited[s / 64] |= 1 << (s % 64);
        sc.frontier.clear();
        sc.frontier.push(s);
        sc.reached.clear();
        sc.reached.push(s);
        sc.dag.clear();
        sigma[s] = 1.0;
        loop {
            sc.next.fill(0);
            for &v in &sc.frontier {
                for (x, r) in sc.next.iter_mut().zip(self.row(v)) {
                    *x |= r;
                }
            }
            let mut any = 0;
            for (x, seen) in sc.next.iter_mut().zip(sc.visited.iter_mut()) {
                *x &= !*seen;
                *seen |= *x;
                any |= *x;
            }
            if any == 0 {
                break;
            }
            for &v in &sc.frontier {
                let row = self.row(v);
                for (i, (&r, &x)) in row.iter().zip(&sc.next).enumerate() {
                    let mut word = r & x;
                    while word != 0 {
                        let w = i * 64 + word.trailing_zeros() as usize;
                        word &= word - 1;
                        sigma[w] += sigma[v];
                        sc.dag.push((v as u32, w as u32, self.edge_id[v * n + w]));
                    }
                }
            }
            sc.frontier.clear();
            sc.frontier.extend(bits(&sc.next));
            sc.reached.extend_from_slice(&sc.frontier);
        }
        // arcs out of deeper levels come later, so reverse order sees each
        // delta[w] complete before it is used
        for &(v, w, e) in sc.dag.iter().rev() {
            let (v, w) = (v as usize, w as usize);
            let c = sigma[v] * (1.0 + delta[w]) / sigma[w];
            delta[v] += c;
            if with_edges {
                acc.edge[e as usize] += c;
            }
        }
        for &v in &sc.reached {
            if v != s {
                acc.node[v] += delta[v];
            }
            sigma[v] = 0.0;
            delta[v] = 0.0;
        }
    }
}
