//! Girvan–Newman community detection and partition quality.

use std::collections::{BTreeMap, VecDeque};

use crate::centrality::edge_betweenness;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Disjoint communities covering every node of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    communities: Vec<Vec<NodeId>>,
    membership: Vec<usize>,
    per_community_density: Vec<f64>,
    modularity: f64,
}

impl Partition {
    /// Validates that `communities` partition `g` into nonempty sets. Members
    /// are sorted; community order is kept as given.
    pub fn new(g: &Graph, mut communities: Vec<Vec<NodeId>>) -> Result<Partition> {
        let n = g.node_count();
        let mut membership = vec![usize::MAX; n];
        for (c, members) in communities.iter_mut().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidPartition(format!("community {c} is empty")));
            }
            members.sort_unstable();
            for &v in members.iter() {
                if v >= n {
                    return Err(Error::InvalidNode { node: v, n });
                }
                if membership[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "node {} is in communities {} and {c}",
                        g.label(v),
                        membership[v]
                    )));
                }
                membership[v] = c;
            }
        }
        if let Some(v) = membership.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {} has no community", g.label(v))));
        }
        Ok(Self::from_parts(g, communities, membership))
    }

    /// Partition from a community label per node. Communities are numbered
    /// by first appearance of their label.
    pub fn from_membership(g: &Graph, labels: &[usize]) -> Result<Partition> {
        if labels.len() != g.node_count() {
            return Err(Error::InvalidPartition(format!(
                "{} labels for {} nodes",
                labels.len(),
                g.node_count()
            )));
        }
        let mut index = BTreeMap::new();
        let mut communities: Vec<Vec<NodeId>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let c = *index.entry(l).or_insert_with(|| {
                communities.push(Vec::new());
                communities.len() - 1
            });
            communities[c].push(v);
        }
        Partition::new(g, communities)
    }

    /// Every node in one community.
    pub fn whole(g: &Graph) -> Partition {
        Partition::new(g, vec![g.nodes().collect()]).expect("valid")
    }

    pub fn singletons(g: &Graph) -> Partition {
        Partition::new(g, g.nodes().map(|v| vec![v]).collect()).expect("valid")
    }

    fn from_parts(g: &Graph, communities: Vec<Vec<NodeId>>, membership: Vec<usize>) -> Partition {
        let mut intra = vec![0usize; communities.len()];
        for (u, v) in g.edges() {
            if membership[u] == membership[v] {
                intra[membership[u]] += 1;
            }
        }
        let per_community_density = communities
            .iter()
            .zip(&intra)
            .map(|(c, &e)| {
                let s = c.len() as f64;
                if c.len() < 2 {
                    0.0
                } else {
                    2.0 * e as f64 / (s * (s - 1.0))
                }
            })
            .collect();
        let modularity = modularity_of(g, &membership, communities.len()).unwrap_or(0.0);
        Partition {
            communities,
            membership,
            per_community_density,
            modularity,
        }
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn communities(&self) -> &[Vec<NodeId>] {
        &self.communities
    }

    pub fn community_of(&self, v: NodeId) -> usize {
        self.membership[v]
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn per_community_density(&self) -> &[f64] {
        &self.per_community_density
    }

    /// Modularity against the graph the partition was built for; 0 for a
    /// graph without edges.
    pub fn modularity(&self) -> f64 {
        self.modularity
    }

    /// Mean and population standard deviation of community densities.
    pub fn average_community_density(&self) -> (f64, f64) {
        mean_sd(&self.per_community_density)
    }
}

pub(crate) fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// `Q = sum_c [ m_c/m - (d_c/2m)^2 ]`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.membership.len() != g.node_count() {
        return Err(Error::InconsistentInput("partition does not match graph".into()));
    }
    modularity_of(g, &p.membership, p.len())
}

fn modularity_of(g: &Graph, membership: &[usize], k: usize) -> Result<f64> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::UndefinedModularity);
    }
    let mut intra = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for v in g.nodes() {
        degree[membership[v]] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if membership[u] == membership[v] {
            intra[membership[u]] += 1;
        }
    }
    let m = m as f64;
    Ok(intra
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| {
            let share = d as f64 / (2.0 * m);
            e as f64 / m - share * share
        })
        .sum())
}

/// One recorded dendrogram level: the component structure after
/// `removed_edges` removals, taken each time the component count grows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub communities: usize,
    pub modularity: f64,
    pub removed_edges: usize,
}

/// The sequence of removed edges and the levels recorded along the way.
#[derive(Clone, Debug)]
pub struct Dendrogram {
    pub removed: Vec<(NodeId, NodeId)>,
    pub levels: Vec<Level>,
}

impl Dendrogram {
    /// Level with the highest modularity; the earliest wins ties.
    pub fn best_level(&self) -> usize {
        let mut best = 0;
        for (i, l) in self.levels.iter().enumerate() {
            if l.modularity > self.levels[best].modularity {
                best = i;
            }
        }
        best
    }

    pub fn level_with(&self, communities: usize) -> Option<usize> {
        self.levels.iter().position(|l| l.communities == communities)
    }

    /// Rebuilds the partition at `level` by replaying the removals.
    pub fn partition_at(&self, g: &Graph, level: usize) -> Partition {
        let mut work = g.clone();
        for &(u, v) in &self.removed[..self.levels[level].removed_edges] {
            work.remove_edge(u, v);
        }
        Partition::new(g, work.connected_components()).expect("components partition the graph")
    }
}

/// Score within this relative distance of the maximum counts as a tie.
const TIE_TOLERANCE: f64 = 1e-9;

/// Removes edges in order of highest betweenness (recomputed after every
/// removal, within the affected component only) until `stop_at` components
/// exist or no edges remain. Ties go to the smallest `(min, max)` endpoint
/// pair.
pub fn girvan_newman_dendrogram(g: &Graph, stop_at: Option<usize>) -> Dendrogram {
    let n = g.node_count();
    let mut work = g.clone();
    let mut membership = vec![0usize; n];
    let components = g.connected_components();
    for (c, members) in components.iter().enumerate() {
        for &v in members {
            membership[v] = c;
        }
    }
    let mut count = components.len();
    let level_mod = |membership: &[usize], count: usize| modularity_of(g, membership, count).unwrap_or(0.0);
    let mut levels = vec![Level {
        communities: count,
        modularity: level_mod(&membership, count),
        removed_edges: 0,
    }];
    let mut removed = Vec::new();

    let mut scores: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
    let eb = edge_betweenness(g);
    scores.extend(eb.edges.into_iter().zip(eb.scores));

    let mut seen = vec![false; n];
    while !scores.is_empty() && stop_at.is_none_or(|k| count < k) {
        let max = scores.values().copied().fold(f64::NEG_INFINITY, f64::max);
        let floor = max - TIE_TOLERANCE * max.abs().max(1.0);
        let (&(u, v), _) = scores.iter().find(|(_, &s)| s >= floor).expect("nonempty");
        scores.remove(&(u, v));
        work.remove_edge(u, v);
        removed.push((u, v));

        let side_u = reach(&work, u, &mut seen);
        let split = !side_u.contains(&v);
        let mut touched = vec![side_u];
        if split {
            let side_v = reach(&work, v, &mut seen);
            for &w in &side_v {
                membership[w] = count;
            }
            count += 1;
            touched.push(side_v);
            levels.push(Level {
                communities: count,
                modularity: level_mod(&membership, count),
                removed_edges: removed.len(),
            });
        }
        for comp in &touched {
            rescore(&work, comp, &mut scores);
        }
    }
    Dendrogram { removed, levels }
}

fn reach(g: &Graph, start: NodeId, seen: &mut [bool]) -> Vec<NodeId> {
    let mut out = vec![start];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    for &w in &out {
        seen[w] = false;
    }
    out
}

fn rescore(work: &Graph, comp: &[NodeId], scores: &mut BTreeMap<(NodeId, NodeId), f64>) {
    if comp.len() < 2 {
        return;
    }
    let sub = work.induced_subgraph(comp).expect("component nodes are in range");
    let eb = edge_betweenness(&sub.graph);
    for ((a, b), s) in eb.edges.into_iter().zip(eb.scores) {
        let (pa, pb) = (sub.to_parent[a], sub.to_parent[b]);
        scores.insert((pa.min(pb), pa.max(pb)), s);
    }
}

/// Girvan–Newman partition: the first level with exactly `target`
/// communities when given, otherwise the maximum-modularity level.
pub fn girvan_newman(g: &Graph, target: Option<usize>) -> Result<Partition> {
    let n = g.node_count();
    if let Some(k) = target {
        if k == 0 || k > n {
            return Err(Error::InvalidTarget {
                target: k,
                reason: format!("graph has {n} nodes"),
            });
        }
        let initial = g.connected_components().len();
        if k < initial {
            return Err(Error::InvalidTarget {
                target: k,
                reason: format!("graph already has {initial} components"),
            });
        }
    }
    let dendrogram = girvan_newman_dendrogram(g, target);
    let level = match target {
        Some(k) => dendrogram.level_with(k).ok_or_else(|| Error::InvalidTarget {
            target: k,
            reason: "level never recorded".into(),
        })?,
        None => dendrogram.best_level(),
    };
    Ok(dendrogram.partition_at(g, level))
}
