//! Deterministic linear threshold model with a uniform threshold.
//!
//! Rounds are synchronous: every activation in round `t` is decided from the
//! active set at the end of round `t - 1`. Nodes without neighbors only
//! become active as seeds.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// How the active-neighbor fraction is compared against the threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ActivationRule {
    /// fraction >= theta
    #[default]
    AtLeast,
    /// fraction > theta
    StrictlyGreater,
}

impl ActivationRule {
    pub fn name(self) -> &'static str {
        match self {
            ActivationRule::AtLeast => "at-least",
            ActivationRule::StrictlyGreater => "strictly-greater",
        }
    }

    fn fires(self, fraction: f64, theta: f64) -> bool {
        match self {
            ActivationRule::AtLeast => fraction >= theta,
            ActivationRule::StrictlyGreater => fraction > theta,
        }
    }
}

impl fmt::Display for ActivationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ActivationRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "at-least" => Ok(ActivationRule::AtLeast),
            "strictly-greater" => Ok(ActivationRule::StrictlyGreater),
            _ => Err(Error::UnknownName {
                kind: "activation rule",
                value: s.to_owned(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LtmConfig {
    pub theta: f64,
    pub max_iterations: usize,
    pub rule: ActivationRule,
}

impl Default for LtmConfig {
    fn default() -> Self {
        LtmConfig {
            theta: 0.5,
            max_iterations: 20,
            rule: ActivationRule::AtLeast,
        }
    }
}

impl LtmConfig {
    pub fn with_iterations(max_iterations: usize) -> Self {
        LtmConfig {
            max_iterations,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub iteration: usize,
    pub newly_activated: Vec<NodeId>,
    pub cumulative: usize,
}

/// Per-round activation record. Step 0 holds the seeds; when the process
/// converges the final step is an empty round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffusionTrace {
    pub node_count: usize,
    pub steps: Vec<TraceStep>,
    pub converged: bool,
}

impl DiffusionTrace {
    pub fn final_count(&self) -> usize {
        self.steps.last().map_or(0, |s| s.cumulative)
    }

    /// Cumulative count after `iteration` rounds, or the final count when the
    /// trace ended earlier.
    pub fn cumulative_at(&self, iteration: usize) -> usize {
        let idx = iteration.min(self.steps.len() - 1);
        self.steps[idx].cumulative
    }

    /// Last round that activated anything.
    pub fn last_active_iteration(&self) -> usize {
        self.steps
            .iter()
            .rev()
            .find(|s| !s.newly_activated.is_empty())
            .map_or(0, |s| s.iteration)
    }

    pub fn cumulative_counts(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.cumulative).collect()
    }

    /// Every node that ended up active, ascending.
    pub fn activated(&self) -> Vec<NodeId> {
        let mut all: Vec<_> = self
            .steps
            .iter()
            .flat_map(|s| s.newly_activated.iter().copied())
            .collect();
        all.sort_unstable();
        all
    }

    /// Checks the trace invariants: contiguous iteration indices,
    /// nondecreasing cumulative counts bounded by `n`, disjoint rounds.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InconsistentInput(msg));
        let mut seen = vec![false; self.node_count];
        let mut total = 0;
        for (i, step) in self.steps.iter().enumerate() {
            if step.iteration != i {
                return bad(format!("step {i} labelled iteration {}", step.iteration));
            }
            for &v in &step.newly_activated {
                if v >= self.node_count || seen[v] {
                    return bad(format!("node {v} activated twice or out of range"));
                }
                seen[v] = true;
            }
            total += step.newly_activated.len();
            if step.cumulative != total || total > self.node_count {
                return bad(format!("cumulative count mismatch at iteration {i}"));
            }
        }
        Ok(())
    }
}

/// Runs the threshold process from `seeds` until no node activates or
/// `cfg.max_iterations` rounds have run.
pub fn ltm_run(g: &Graph, seeds: &[NodeId], cfg: &LtmConfig) -> Result<DiffusionTrace> {
    let n = g.node_count();
    if seeds.is_empty() {
        return Err(Error::EmptySeeds("no seeds"));
    }
    let mut active = vec![false; n];
    let mut initial = Vec::with_capacity(seeds.len());
    for &s in seeds {
        if s >= n {
            return Err(Error::InvalidSeed { node: s, n });
        }
        if !active[s] {
            active[s] = true;
            initial.push(s);
        }
    }
    initial.sort_unstable();
    let mut cumulative = initial.len();
    let mut steps = vec![TraceStep {
        iteration: 0,
        newly_activated: initial,
        cumulative,
    }];

    // active-neighbor counts, updated as nodes switch on
    let mut hits = vec![0usize; n];
    for &s in &steps[0].newly_activated {
        for &u in g.neighbors(s) {
            hits[u] += 1;
        }
    }
    let mut frontier: Vec<NodeId> = steps[0].newly_activated.clone();
    let mut converged = false;
    for iteration in 1..=cfg.max_iterations {
        let mut candidates: Vec<NodeId> = frontier
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&u| !active[u])
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let newly: Vec<NodeId> = candidates
            .into_iter()
            .filter(|&u| {
                let fraction = hits[u] as f64 / g.degree(u) as f64;
                cfg.rule.fires(fraction, cfg.theta)
            })
            .collect();
        for &u in &newly {
            active[u] = true;
        }
        for &u in &newly {
            for &w in g.neighbors(u) {
                hits[w] += 1;
            }
        }
        cumulative += newly.len();
        let done = newly.is_empty();
        frontier = newly.clone();
        steps.push(TraceStep {
            iteration,
            newly_activated: newly,
            cumulative,
        });
        if done {
            converged = true;
            break;
        }
    }
    Ok(DiffusionTrace {
        node_count: n,
        steps,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_seeds_converge_immediately() {
        let g = Graph::path(4);
        let t = ltm_run(&g, &[0, 1, 2, 3], &LtmConfig::default()).unwrap();
        assert!(t.converged);
        assert_eq!(t.final_count(), 4);
        assert_eq!(t.last_active_iteration(), 0);
        assert_eq!(t.cumulative_counts(), vec![4, 4]);
    }

    #[test]
    fn path_at_least_rule() {
        let t = ltm_run(&Graph::path(3), &[0], &LtmConfig::default()).unwrap();
        assert_eq!(t.cumulative_counts()[..3], [1, 2, 3]);
        assert_eq!(t.steps[1].newly_activated, vec![1]);
        assert_eq!(t.steps[2].newly_activated, vec![2]);
        assert!(t.converged);
        assert!(t.steps.last().unwrap().newly_activated.is_empty());
    }

    #[test]
    fn path_strict_rule_blocks() {
        let cfg = LtmConfig {
            rule: ActivationRule::StrictlyGreater,
            ..LtmConfig::default()
        };
        let t = ltm_run(&Graph::path(3), &[0], &cfg).unwrap();
        assert_eq!(t.final_count(), 1);
        assert!(t.converged);
    }

    #[test]
    fn iteration_cap() {
        let cfg = LtmConfig::with_iterations(2);
        let t = ltm_run(&Graph::path(6), &[0], &cfg).unwrap();
        assert!(!t.converged);
        assert_eq!(t.cumulative_counts(), vec![1, 2, 3]);
        assert_eq!(t.cumulative_at(20), 3);
    }

    #[test]
    fn isolated_nodes_stay_inactive() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let t = ltm_run(&g, &[0], &LtmConfig::default()).unwrap();
        assert_eq!(t.activated(), vec![0, 1]);
    }

    #[test]
    fn complete_graph_threshold() {
        // K9: each non-seed has 8 neighbors, needs ceil(0.5 * 8) = 4 active
        let g = Graph::complete(9);
        let t = ltm_run(&g, &[0, 1, 2, 3], &LtmConfig::default()).unwrap();
        assert_eq!(t.cumulative_counts(), vec![4, 9, 9]);
        let t = ltm_run(&g, &[0, 1, 2], &LtmConfig::default()).unwrap();
        assert_eq!(t.final_count(), 3);
    }

    #[test]
    fn seed_errors() {
        let g = Graph::path(3);
        assert!(matches!(
            ltm_run(&g, &[5], &LtmConfig::default()),
            Err(Error::InvalidSeed { node: 5, n: 3 })
        ));
        assert!(ltm_run(&g, &[], &LtmConfig::default()).is_err());
    }

    #[test]
    fn traces_validate() {
        let g = Graph::star(5);
        let t = ltm_run(&g, &[0], &LtmConfig::default()).unwrap();
        t.validate().unwrap();
        let mut broken = t.clone();
        broken.steps[1].cumulative += 1;
        assert!(broken.validate().is_err());
    }
}
