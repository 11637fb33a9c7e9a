//! Brute-force reference implementations shared by the integration tests.
//! Everything here is exponential and only meant for graphs of a dozen nodes.

#![allow(dead_code)]

use driverseed::graph::{Graph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) from the test's own generator, independent of the library's.
pub fn gnp(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Every simple path from `s` to `t`, as node sequences.
pub fn simple_paths(adj: &[Vec<bool>], s: NodeId, t: NodeId) -> Vec<Vec<NodeId>> {
    fn walk(adj: &[Vec<bool>], t: NodeId, path: &mut Vec<NodeId>, on: &mut [bool], out: &mut Vec<Vec<NodeId>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for w in 0..adj.len() {
            if adj[v][w] && !on[w] {
                on[w] = true;
                path.push(w);
                walk(adj, t, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut on = vec![false; adj.len()];
    on[s] = true;
    let mut out = Vec::new();
    walk(adj, t, &mut vec![s], &mut on, &mut out);
    out
}

/// The shortest of all simple `s`–`t` paths (empty when disconnected).
pub fn shortest_paths(adj: &[Vec<bool>], s: NodeId, t: NodeId) -> Vec<Vec<NodeId>> {
    let all = simple_paths(adj, s, t);
    let Some(best) = all.iter().map(Vec::len).min() else {
        return Vec::new();
    };
    all.into_iter().filter(|p| p.len() == best).collect()
}

pub struct OracleScores {
    pub degree: Vec<f64>,
    pub closeness: Vec<f64>,
    pub betweenness: Vec<f64>,
    /// Keyed like [`Graph::edges`]: `(u, v)` with `u < v`.
    pub edge: Vec<((NodeId, NodeId), f64)>,
}

/// Centralities from explicit shortest-path enumeration.
pub fn oracle_scores(g: &Graph) -> OracleScores {
    let n = g.node_count();
    let adj = adjacency(g);
    let mut between = vec![0.0; n];
    let mut edge: Vec<((NodeId, NodeId), f64)> = g.edges().map(|e| (e, 0.0)).collect();
    let mut dist_sum = vec![0usize; n];
    let mut reach = vec![1usize; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = shortest_paths(&adj, s, t);
            if paths.is_empty() {
                continue;
            }
            let len = paths[0].len() - 1;
            dist_sum[s] += len;
            dist_sum[t] += len;
            reach[s] += 1;
            reach[t] += 1;
            let total = paths.len() as f64;
            for (v, b) in between.iter_mut().enumerate() {
                if v != s && v != t {
                    *b += paths.iter().filter(|p| p.contains(&v)).count() as f64 / total;
                }
            }
            for ((a, b), score) in edge.iter_mut() {
                let uses = |p: &Vec<NodeId>| {
                    p.windows(2)
                        .any(|w| (w[0], w[1]) == (*a, *b) || (w[1], w[0]) == (*a, *b))
                };
                *score += paths.iter().filter(|p| uses(p)).count() as f64 / total;
            }
        }
    }
    let degree = (0..n)
        .map(|v| {
            if n < 2 {
                0.0
            } else {
                adj[v].iter().filter(|&&x| x).count() as f64 / (n - 1) as f64
            }
        })
        .collect();
    let closeness = (0..n)
        .map(|v| {
            if dist_sum[v] == 0 {
                0.0
            } else {
                let r = (reach[v] - 1) as f64;
                (r / (n - 1) as f64) * (r / dist_sum[v] as f64)
            }
        })
        .collect();
    let betweenness = if n < 3 {
        vec![0.0; n]
    } else {
        let pairs = ((n - 1) * (n - 2) / 2) as f64;
        between.iter().map(|b| b / pairs).collect()
    };
    OracleScores {
        degree,
        closeness,
        betweenness,
        edge,
    }
}

/// Size of a minimum dominating set, by enumerating subsets in size order.
pub fn exact_mds_size(g: &Graph) -> usize {
    let n = g.node_count();
    assert!(n <= 20);
    let closed: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &u| m | (1 << u)))
        .collect();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    (0..=n)
        .find(|&k| {
            (0u32..=full)
                .filter(|s| s.count_ones() as usize == k)
                .any(|s| (0..n).filter(|v| s >> v & 1 == 1).fold(0, |m, v| m | closed[v]) == full)
        })
        .expect("the full vertex set dominates")
}

/// `H(k) = 1 + 1/2 + ... + 1/k`.
pub fn harmonic(k: usize) -> f64 {
    (1..=k).map(|i| 1.0 / i as f64).sum()
}

/// Nodes reachable from `start` by DFS over the adjacency matrix.
pub fn reachable(adj: &[Vec<bool>], start: NodeId, allowed: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for w in 0..adj.len() {
            if adj[v][w] && allowed[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}
