//! Seeded synthetic networks with an exact edge count.
//!
//! Each family builds its usual wiring and then adds or removes uniformly
//! random edges until the edge count matches the request:
//!
//! * `random`: `m` distinct pairs drawn uniformly.
//! * `small-world`: ring lattice of even degree `floor(2m/n)`, each lattice
//!   edge rewired with probability 0.1.
//! * `scale-free`: preferential attachment with `ceil(m/n)` links per new node.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub const REWIRE_PROBABILITY: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Random,
    SmallWorld,
    ScaleFree,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Random, Family::SmallWorld, Family::ScaleFree];

    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::SmallWorld => "small-world",
            Family::ScaleFree => "scale-free",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Family::Random),
            "small-world" => Ok(Family::SmallWorld),
            "scale-free" => Ok(Family::ScaleFree),
            _ => Err(Error::UnknownName {
                kind: "family",
                value: s.to_owned(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub rng_seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, m: usize, rng_seed: u64) -> Self {
        GeneratorSpec { family, n, m, rng_seed }
    }

    pub fn validate(&self) -> Result<()> {
        let max = max_edges(self.n);
        if self.m > max {
            return Err(Error::InfeasibleSpec(format!(
                "{} edges requested but {} nodes admit at most {max}",
                self.m, self.n
            )));
        }
        if self.family != Family::Random && self.n >= 1 && self.m < self.n - 1 {
            return Err(Error::InfeasibleSpec(format!(
                "{} needs at least n-1 = {} edges, got {}",
                self.family,
                self.n - 1,
                self.m
            )));
        }
        Ok(())
    }
}

fn max_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Builds the graph described by `spec`. Identical specs give identical graphs.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut edges = match spec.family {
        Family::Random => uniform_pairs(spec.n, spec.m, &mut rng),
        Family::SmallWorld => small_world(spec.n, spec.m, &mut rng),
        Family::ScaleFree => scale_free(spec.n, spec.m, &mut rng),
    };
    adjust_edge_count(&mut edges, spec.n, spec.m, &mut rng);
    debug_assert_eq!(edges.len(), spec.m);
    let list: Vec<_> = edges.into_iter().collect();
    Ok(Graph::from_edges(spec.n, &list))
}

type EdgeSet = BTreeSet<(NodeId, NodeId)>;

fn key(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    (u.min(v), u.max(v))
}

/// Maps `k` in `0..n(n-1)/2` to the k-th pair `(u, v)`, `u < v`, in
/// lexicographic order.
fn pair_at(n: usize, k: usize) -> (NodeId, NodeId) {
    // row u starts at u*n - u(u+1)/2
    let start = |u: usize| u * n - u * (u + 1) / 2;
    let (mut lo, mut hi) = (0, n - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if start(mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = lo;
    (u, u + 1 + (k - start(u)))
}

fn uniform_pairs(n: usize, m: usize, rng: &mut ChaCha8Rng) -> EdgeSet {
    if m == 0 {
        return EdgeSet::new();
    }
    index::sample(rng, max_edges(n), m)
        .into_iter()
        .map(|k| pair_at(n, k))
        .collect()
}

fn small_world(n: usize, m: usize, rng: &mut ChaCha8Rng) -> EdgeSet {
    if n == 0 {
        return EdgeSet::new();
    }
    let mut k = (2 * m / n.max(1)) & !1;
    if k >= n {
        k = (n - 1) & !1;
    }
    let mut edges = EdgeSet::new();
    for u in 0..n {
        for j in 1..=k / 2 {
            edges.insert(key(u, (u + j) % n));
        }
    }
    if n < 3 {
        return edges;
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !rng.gen_bool(REWIRE_PROBABILITY) {
                continue;
            }
            let w = rng.gen_range(0..n);
            if w == u || edges.contains(&key(u, w)) {
                continue;
            }
            if edges.remove(&key(u, v)) {
                edges.insert(key(u, w));
            }
        }
    }
    edges
}

fn scale_free(n: usize, m: usize, rng: &mut ChaCha8Rng) -> EdgeSet {
    let mut edges = EdgeSet::new();
    if n < 2 {
        return edges;
    }
    let links = m.div_ceil(n).clamp(1, n - 1);
    // seed star on links+1 nodes, then attach by degree
    let mut repeated: Vec<NodeId> = Vec::with_capacity(2 * links * n);
    for v in 1..=links {
        edges.insert((0, v));
        repeated.push(0);
        repeated.push(v);
    }
    for new in links + 1..n {
        let mut targets = BTreeSet::new();
        while targets.len() < links {
            targets.insert(repeated[rng.gen_range(0..repeated.len())]);
        }
        for t in targets {
            edges.insert(key(new, t));
            repeated.push(t);
            repeated.push(new);
        }
    }
    edges
}

/// Adds uniformly random non-edges or removes uniformly random edges until
/// exactly `m` remain.
fn adjust_edge_count(edges: &mut EdgeSet, n: usize, m: usize, rng: &mut ChaCha8Rng) {
    let max = max_edges(n);
    if edges.len() > m {
        let current: Vec<_> = edges.iter().copied().collect();
        for i in index::sample(rng, current.len(), current.len() - m) {
            edges.remove(&current[i]);
        }
    } else if edges.len() < m {
        let missing = m - edges.len();
        let free = max - edges.len();
        if 2 * missing < free {
            while edges.len() < m {
                let (u, v) = pair_at(n, rng.gen_range(0..max));
                edges.insert((u, v));
            }
        } else {
            let complement: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|e| !edges.contains(e))
                .collect();
            for i in index::sample(rng, complement.len(), missing) {
                edges.insert(complement[i]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 7;
        let expected: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let got: Vec<_> = (0..max_edges(n)).map(|k| pair_at(n, k)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn maximum_density_is_complete() {
        for family in Family::ALL {
            let g = generate(&GeneratorSpec::new(family, 100, 4950, 3)).unwrap();
            assert_eq!(g.edge_count(), 4950);
            assert_eq!(g.density().unwrap(), 1.0);
        }
    }

    #[test]
    fn table_row_density() {
        let g = generate(&GeneratorSpec::new(Family::Random, 100, 800, 11)).unwrap();
        assert_eq!(g.node_count(), 100);
        assert!((g.density().unwrap() - 800.0 / 4950.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_per_seed() {
        for family in Family::ALL {
            let spec = GeneratorSpec::new(family, 60, 300, 99);
            let a: Vec<_> = generate(&spec).unwrap().edges().collect();
            let b: Vec<_> = generate(&spec).unwrap().edges().collect();
            assert_eq!(a, b);
            let other: Vec<_> = generate(&GeneratorSpec { rng_seed: 100, ..spec })
                .unwrap()
                .edges()
                .collect();
            assert_ne!(a, other);
        }
    }

    #[test]
    fn infeasible_specs_rejected() {
        assert!(matches!(
            generate(&GeneratorSpec::new(Family::Random, 10, 46, 0)),
            Err(Error::InfeasibleSpec(_))
        ));
        assert!(matches!(
            generate(&GeneratorSpec::new(Family::SmallWorld, 10, 5, 0)),
            Err(Error::InfeasibleSpec(_))
        ));
        assert_eq!(
            generate(&GeneratorSpec::new(Family::Random, 10, 0, 0))
                .unwrap()
                .edge_count(),
            0
        );
    }

    #[test]
    fn scale_free_has_heavier_tail() {
        let mut sf = Vec::new();
        let mut er = Vec::new();
        for seed in 0..20 {
            sf.push(
                generate(&GeneratorSpec::new(Family::ScaleFree, 100, 800, seed))
                    .unwrap()
                    .max_degree(),
            );
            er.push(
                generate(&GeneratorSpec::new(Family::Random, 100, 800, seed))
                    .unwrap()
                    .max_degree(),
            );
        }
        sf.sort_unstable();
        er.sort_unstable();
        assert!(
            sf[10] > er[10],
            "scale-free median max degree {} vs random {}",
            sf[10],
            er[10]
        );
    }

    proptest::proptest! {
        #[test]
        fn exact_edge_count(n in 2usize..40, frac in 0.0f64..=1.0, fam in 0usize..3, seed in 0u64..1000) {
            let family = Family::ALL[fam];
            let max = max_edges(n);
            let lo = if family == Family::Random { 0 } else { n - 1 };
            let m = lo + ((max - lo) as f64 * frac) as usize;
            let g = generate(&GeneratorSpec::new(family, n, m, seed)).unwrap();
            proptest::prop_assert_eq!(g.node_count(), n);
            proptest::prop_assert_eq!(g.edge_count(), m);
        }
    }
}
