//! Ranking driver nodes and turning rankings into seed sets.
//!
//! A [`SeedMethod`] pairs a ranking base with a scope. Global methods rank
//! the whole-graph driver set and take a prefix. Community methods rank each
//! community's drivers on its induced subgraph and pick across communities in
//! rounds: round `r` offers every community's `r`-th driver, and candidates
//! within a round are taken by descending degree in the full graph.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::centrality::{betweenness_centrality, closeness_centrality, degree_centrality};
use crate::community::Partition;
use crate::diffusion::{ltm_run, LtmConfig};
use crate::drivers::{community_drivers, community_seed, greedy_mds, DriverScope, DriverSet, TieBreak};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankBase {
    Random,
    Degree,
    Closeness,
    Betweenness,
    Kempe,
    /// Mean of normalized degree, closeness and betweenness.
    Dcb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Global,
    Community,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedMethod {
    pub base: RankBase,
    pub scope: Scope,
}

impl SeedMethod {
    pub const fn new(base: RankBase, scope: Scope) -> Self {
        SeedMethod { base, scope }
    }

    /// DR, DD, DC, DB, DK, DDCB, then the community variants.
    pub const ALL: [SeedMethod; 12] = {
        use RankBase::*;
        use Scope::*;
        [
            SeedMethod::new(Random, Global),
            SeedMethod::new(Degree, Global),
            SeedMethod::new(Closeness, Global),
            SeedMethod::new(Betweenness, Global),
            SeedMethod::new(Kempe, Global),
            SeedMethod::new(Dcb, Global),
            SeedMethod::new(Random, Community),
            SeedMethod::new(Degree, Community),
            SeedMethod::new(Closeness, Community),
            SeedMethod::new(Betweenness, Community),
            SeedMethod::new(Kempe, Community),
            SeedMethod::new(Dcb, Community),
        ]
    };

    pub const DDCBC: SeedMethod = SeedMethod::new(RankBase::Dcb, Scope::Community);

    /// Short code, e.g. `dd` or `ddcbc`.
    pub fn code(self) -> &'static str {
        let i = SeedMethod::ALL.iter().position(|&m| m == self).expect("listed");
        CODES[i]
    }
}

const CODES: [&str; 12] = [
    "dr", "dd", "dc", "db", "dk", "ddcb", "drc", "ddc", "dcc", "dbc", "dkc", "ddcbc",
];

impl fmt::Display for SeedMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code().to_uppercase())
    }
}

impl FromStr for SeedMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        CODES
            .iter()
            .position(|&c| c == lower)
            .map(|i| SeedMethod::ALL[i])
            .ok_or_else(|| Error::UnknownName {
                kind: "seed method",
                value: s.to_owned(),
            })
    }
}

/// What a seed percentage is taken of.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BudgetBasis {
    #[default]
    DriverPool,
    AllNodes,
}

impl BudgetBasis {
    pub fn name(self) -> &'static str {
        match self {
            BudgetBasis::DriverPool => "driver-pool",
            BudgetBasis::AllNodes => "all-nodes",
        }
    }
}

impl fmt::Display for BudgetBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BudgetBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "driver-pool" => Ok(BudgetBasis::DriverPool),
            "all-nodes" => Ok(BudgetBasis::AllNodes),
            _ => Err(Error::UnknownName {
                kind: "budget basis",
                value: s.to_owned(),
            }),
        }
    }
}

/// Drivers with scores, best first. Ties are ordered by ascending node id.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedDrivers {
    pub entries: Vec<(NodeId, f64)>,
    pub scope: DriverScope,
}

impl RankedDrivers {
    pub fn from_scores(mut entries: Vec<(NodeId, f64)>, scope: DriverScope) -> Self {
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        RankedDrivers { entries, scope }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSet {
    /// In selection order.
    pub nodes: Vec<NodeId>,
    pub basis: BudgetBasis,
    pub percent: u32,
}

/// `max(1, round_half_up(percent% of basis_size))`.
pub fn seed_budget(percent: u32, basis_size: usize) -> Result<usize> {
    if !(1..=100).contains(&percent) {
        return Err(Error::InvalidPercent(percent));
    }
    Ok(((percent as usize * basis_size + 50) / 100).max(1))
}

/// Scores `drivers` on `g` with the given base. `rng_seed` only affects
/// [`RankBase::Random`]; `ltm` only affects [`RankBase::Kempe`].
pub fn rank_drivers(
    g: &Graph,
    drivers: &[NodeId],
    base: RankBase,
    rng_seed: u64,
    ltm: &LtmConfig,
    scope: DriverScope,
) -> Result<RankedDrivers> {
    let scores: Vec<f64> = match base {
        RankBase::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            drivers.iter().map(|_| rng.gen::<f64>()).collect()
        }
        RankBase::Degree => {
            let c = degree_centrality(g);
            drivers.iter().map(|&v| c.get(v)).collect()
        }
        RankBase::Closeness => {
            let c = closeness_centrality(g);
            drivers.iter().map(|&v| c.get(v)).collect()
        }
        RankBase::Betweenness => {
            let c = betweenness_centrality(g);
            drivers.iter().map(|&v| c.get(v)).collect()
        }
        RankBase::Kempe => return rank_kempe(g, drivers, ltm, scope),
        RankBase::Dcb => {
            let d = degree_centrality(g);
            let c = closeness_centrality(g);
            let b = betweenness_centrality(g);
            drivers
                .iter()
                .map(|&v| dcb_score(d.get(v), c.get(v), b.get(v)))
                .collect()
        }
    };
    Ok(RankedDrivers::from_scores(
        drivers.iter().copied().zip(scores).collect(),
        scope,
    ))
}

pub fn dcb_score(degree: f64, closeness: f64, betweenness: f64) -> f64 {
    (degree + closeness + betweenness) / 3.0
}

/// Scores each driver by the final size of a threshold cascade started from
/// that driver alone, run to convergence.
pub fn rank_kempe(g: &Graph, drivers: &[NodeId], ltm: &LtmConfig, scope: DriverScope) -> Result<RankedDrivers> {
    // a cascade on n nodes settles within n rounds
    let ltm = &LtmConfig {
        max_iterations: g.node_count().max(1),
        ..*ltm
    };
    let scores = drivers
        .par_iter()
        .map(|&v| Ok((v, ltm_run(g, &[v], ltm)?.final_count() as f64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RankedDrivers::from_scores(scores, scope))
}

/// Top `k = seed_budget(percent, basis_size)` prefix, capped at the ranking length.
pub fn select_global(r: &RankedDrivers, percent: u32, basis_size: usize, basis: BudgetBasis) -> Result<SeedSet> {
    let k = seed_budget(percent, basis_size)?.min(r.len());
    Ok(SeedSet {
        nodes: r.nodes().take(k).collect(),
        basis,
        percent,
    })
}

/// Picks `k` nodes round by round across community rankings. Each round
/// offers every community's next driver; offered candidates are taken by
/// descending `degree`, then ascending id, until `k` are chosen.
pub fn select_multiround(
    rankings: &[RankedDrivers],
    k: usize,
    degree: impl Fn(NodeId) -> usize,
) -> Result<Vec<NodeId>> {
    if k == 0 {
        return Err(Error::InvalidBudget(k));
    }
    let longest = rankings.iter().map(RankedDrivers::len).max().unwrap_or(0);
    let mut chosen = Vec::with_capacity(k);
    for round in 0..longest {
        let mut offered: Vec<NodeId> = rankings
            .iter()
            .filter_map(|r| r.entries.get(round).map(|e| e.0))
            .collect();
        offered.sort_by(|&a, &b| match degree(b).cmp(&degree(a)) {
            Ordering::Equal => a.cmp(&b),
            o => o,
        });
        for v in offered {
            if chosen.len() == k {
                return Ok(chosen);
            }
            chosen.push(v);
        }
    }
    Ok(chosen)
}

/// Knobs shared by every method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedOptions {
    pub percent: u32,
    pub basis: BudgetBasis,
    pub ltm: LtmConfig,
    /// Seed for random rankings.
    pub rank_seed: u64,
    /// Tie-breaking for the global dominating set.
    pub global_tie: TieBreak,
    /// Tie-breaking for per-community dominating sets (shifted per community).
    pub community_tie: TieBreak,
}

impl SeedOptions {
    pub fn new(percent: u32, seed: u64) -> Self {
        SeedOptions {
            percent,
            basis: BudgetBasis::DriverPool,
            ltm: LtmConfig::default(),
            rank_seed: seed,
            global_tie: TieBreak::Seeded(seed),
            community_tie: TieBreak::Seeded(seed),
        }
    }
}

/// Driver sets shared by every method on one graph.
#[derive(Clone, Debug)]
pub struct DriverPools {
    pub global: DriverSet,
    /// Per-community sets, present when a partition was supplied.
    pub community: Option<Vec<DriverSet>>,
}

impl DriverPools {
    pub fn new(
        g: &Graph,
        partition: Option<&Partition>,
        global_tie: TieBreak,
        community_tie: TieBreak,
    ) -> Result<Self> {
        Ok(DriverPools {
            global: greedy_mds(g, global_tie),
            community: partition.map(|p| community_drivers(g, p, community_tie)).transpose()?,
        })
    }
}

/// A method's rankings, ready to be cut at any percentage.
#[derive(Clone, Debug)]
pub struct MethodRanking {
    pub method: SeedMethod,
    /// One ranking for global scope, one per community otherwise.
    pub rankings: Vec<RankedDrivers>,
}

impl MethodRanking {
    pub fn pool_size(&self) -> usize {
        self.rankings.iter().map(RankedDrivers::len).sum()
    }

    pub fn select(&self, g: &Graph, percent: u32, basis: BudgetBasis) -> Result<SeedSet> {
        let basis_size = match basis {
            BudgetBasis::DriverPool => self.pool_size(),
            BudgetBasis::AllNodes => g.node_count(),
        };
        match self.method.scope {
            Scope::Global => select_global(&self.rankings[0], percent, basis_size, basis),
            Scope::Community => {
                let k = seed_budget(percent, basis_size)?.min(self.pool_size());
                Ok(SeedSet {
                    nodes: select_multiround(&self.rankings, k, |v| g.degree(v))?,
                    basis,
                    percent,
                })
            }
        }
    }
}

/// Ranks the method's driver pool. Community methods score each community's
/// drivers on the community's induced subgraph, with the random-ranking seed
/// shifted per community.
pub fn rank_method(
    g: &Graph,
    partition: Option<&Partition>,
    pools: &DriverPools,
    method: SeedMethod,
    rank_seed: u64,
    ltm: &LtmConfig,
) -> Result<MethodRanking> {
    let rankings = match method.scope {
        Scope::Global => vec![rank_drivers(
            g,
            &pools.global.nodes,
            method.base,
            rank_seed,
            ltm,
            DriverScope::Global,
        )?],
        Scope::Community => {
            let missing = || Error::MissingPartition(method.to_string());
            let p = partition.ok_or_else(missing)?;
            let sets = pools.community.as_ref().ok_or_else(missing)?;
            sets.par_iter()
                .enumerate()
                .map(|(c, set)| {
                    let sub = g.induced_subgraph(&p.communities()[c])?;
                    let local: Vec<NodeId> = set
                        .nodes
                        .iter()
                        .map(|&v| sub.to_parent.binary_search(&v).expect("driver inside its community"))
                        .collect();
                    let ranked = rank_drivers(
                        &sub.graph,
                        &local,
                        method.base,
                        community_seed(rank_seed, c),
                        ltm,
                        set.scope,
                    )?;
                    Ok(RankedDrivers {
                        entries: ranked.entries.iter().map(|&(v, s)| (sub.to_parent[v], s)).collect(),
                        scope: set.scope,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(MethodRanking { method, rankings })
}

/// Drivers, ranking and selection for one method.
pub fn select_seeds(
    g: &Graph,
    partition: Option<&Partition>,
    method: SeedMethod,
    opts: &SeedOptions,
) -> Result<SeedSet> {
    if method.scope == Scope::Community && partition.is_none() {
        return Err(Error::MissingPartition(method.to_string()));
    }
    let partition = partition.filter(|_| method.scope == Scope::Community);
    let pools = DriverPools::new(g, partition, opts.global_tie, opts.community_tie)?;
    rank_method(g, partition, &pools, method, opts.rank_seed, &opts.ltm)?.select(g, opts.percent, opts.basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drivers::DriverScope::Global;

    #[test]
    fn method_codes() {
        for m in SeedMethod::ALL {
            assert_eq!(m.code().parse::<SeedMethod>().unwrap(), m);
        }
        assert_eq!("DDCBC".parse::<SeedMethod>().unwrap(), SeedMethod::DDCBC);
        assert_eq!(SeedMethod::DDCBC.to_string(), "DDCBC");
        assert!("dpr".parse::<SeedMethod>().is_err());
    }

    #[test]
    fn dcb_is_the_mean() {
        assert!((dcb_score(0.9, 0.6, 0.3) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn degree_ties_break_by_id() {
        let g = Graph::path(5);
        let drivers = greedy_mds(&g, TieBreak::LowestId);
        assert_eq!(drivers.nodes, vec![1, 3]);
        let r = rank_drivers(&g, &[3, 1], RankBase::Degree, 0, &LtmConfig::default(), Global).unwrap();
        assert_eq!(r.entries, vec![(1, 0.5), (3, 0.5)]);
    }

    #[test]
    fn singleton_driver_ranks_first_for_every_base() {
        let g = Graph::star(5);
        for base in [
            RankBase::Random,
            RankBase::Degree,
            RankBase::Closeness,
            RankBase::Betweenness,
            RankBase::Kempe,
            RankBase::Dcb,
        ] {
            let r = rank_drivers(&g, &[0], base, 4, &LtmConfig::default(), Global).unwrap();
            assert_eq!(r.entries[0].0, 0);
        }
    }

    #[test]
    fn kempe_scores() {
        let cfg = LtmConfig::default();
        let k3 = rank_kempe(&Graph::complete(3), &[0, 1, 2], &cfg, Global).unwrap();
        assert!(k3.entries.iter().all(|e| e.1 == 3.0));
        let lone = rank_kempe(&Graph::from_edges(3, &[(0, 1)]), &[2], &cfg, Global).unwrap();
        assert_eq!(lone.entries, vec![(2, 1.0)]);
        let star = rank_kempe(&Graph::star(4), &[0], &cfg, Global).unwrap();
        assert_eq!(star.entries, vec![(0, 5.0)]);
    }

    fn ranking(ids: std::ops::Range<usize>) -> RankedDrivers {
        RankedDrivers::from_scores(ids.map(|v| (v, 1000.0 - v as f64)).collect(), Global)
    }

    #[test]
    fn global_selection_sizes() {
        assert_eq!(
            select_global(&ranking(0..100), 10, 100, BudgetBasis::DriverPool)
                .unwrap()
                .nodes,
            (0..10).collect::<Vec<_>>()
        );
        assert_eq!(
            select_global(&ranking(0..5), 1, 5, BudgetBasis::DriverPool)
                .unwrap()
                .nodes,
            vec![0]
        );
        assert_eq!(
            select_global(&ranking(0..40), 50, 40, BudgetBasis::DriverPool)
                .unwrap()
                .nodes
                .len(),
            20
        );
        assert_eq!(
            select_global(&ranking(0..3), 50, 100, BudgetBasis::AllNodes)
                .unwrap()
                .nodes
                .len(),
            3
        );
        assert!(select_global(&ranking(0..3), 0, 3, BudgetBasis::DriverPool).is_err());
    }

    #[test]
    fn budget_rounding() {
        assert_eq!(seed_budget(1, 5).unwrap(), 1);
        assert_eq!(seed_budget(10, 25).unwrap(), 3); // 2.5 rounds up
        assert_eq!(seed_budget(10, 24).unwrap(), 2);
        assert_eq!(seed_budget(20, 34).unwrap(), 7);
    }

    #[test]
    fn multiround_six_communities() {
        // community c holds nodes 10c.., node degree = node id
        let rankings: Vec<_> = (0..6).map(|c| ranking(10 * c..10 * c + 3)).collect();
        let chosen = select_multiround(&rankings, 10, |v| v).unwrap();
        assert_eq!(&chosen[..6], &[50, 40, 30, 20, 10, 0]);
        assert_eq!(&chosen[6..], &[51, 41, 31, 21]);
    }

    #[test]
    fn multiround_budget_edges() {
        let rankings: Vec<_> = (0..3).map(|c| ranking(10 * c..10 * c + 3)).collect();
        let mut chosen = select_multiround(&rankings, 3, |v| v).unwrap();
        chosen.sort_unstable();
        assert_eq!(chosen, vec![0, 10, 20]);

        let four: Vec<_> = (0..4).map(|c| ranking(10 * c..10 * c + 3)).collect();
        assert_eq!(select_multiround(&four, 2, |v| v).unwrap(), vec![30, 20]);
        assert!(matches!(
            select_multiround(&four, 0, |v| v),
            Err(Error::InvalidBudget(0))
        ));
        assert_eq!(select_multiround(&four, 100, |v| v).unwrap().len(), 12);
    }

    #[test]
    fn star_methods_pick_center() {
        let g = Graph::star(6);
        let p = Partition::whole(&g);
        for percent in [1, 10, 50] {
            for m in SeedMethod::ALL {
                let s = select_seeds(&g, Some(&p), m, &SeedOptions::new(percent, 9)).unwrap();
                assert_eq!(s.nodes, vec![0], "{m} at {percent}%");
            }
        }
    }

    #[test]
    fn community_method_needs_partition() {
        let g = Graph::path(4);
        assert!(matches!(
            select_seeds(&g, None, SeedMethod::DDCBC, &SeedOptions::new(10, 0)),
            Err(Error::MissingPartition(_))
        ));
    }

    #[test]
    fn single_community_matches_global() {
        let g = crate::generators::generate(&crate::generators::GeneratorSpec::new(
            crate::generators::Family::SmallWorld,
            60,
            150,
            5,
        ))
        .unwrap();
        let p = Partition::whole(&g);
        let opts = SeedOptions::new(50, 21);
        let global = SeedMethod::new(RankBase::Dcb, Scope::Global);
        let a = select_seeds(&g, Some(&p), SeedMethod::DDCBC, &opts).unwrap();
        let b = select_seeds(&g, Some(&p), global, &opts).unwrap();
        assert_eq!(a.nodes, b.nodes);
    }
}
