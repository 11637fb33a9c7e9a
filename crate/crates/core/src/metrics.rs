//! Percent gain of one seeding method over another.

use crate::diffusion::DiffusionTrace;
use crate::error::{Error, Result};
use crate::seeding::SeedMethod;

/// `(a - b) / n * 100`, with `a` and `b` influenced-node counts.
pub fn percent_gain(influenced_a: usize, influenced_b: usize, n: usize) -> Result<f64> {
    for count in [influenced_a, influenced_b] {
        if count > n {
            return Err(Error::InvalidCount { count, n });
        }
    }
    if n == 0 {
        return Err(Error::InvalidCount { count: 0, n });
    }
    Ok((influenced_a as f64 - influenced_b as f64) / n as f64 * 100.0)
}

/// Influenced counts per method at one iteration, and the antisymmetric gain
/// matrix `gains[a][b] = percent_gain(count[a], count[b], n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GainReport {
    pub network_id: String,
    pub n: usize,
    pub iteration: usize,
    pub percent: u32,
    pub methods: Vec<SeedMethod>,
    pub counts: Vec<usize>,
    pub gains: Vec<Vec<f64>>,
}

impl GainReport {
    pub fn gain(&self, a: SeedMethod, b: SeedMethod) -> Option<f64> {
        let i = self.methods.iter().position(|&m| m == a)?;
        let j = self.methods.iter().position(|&m| m == b)?;
        Some(self.gains[i][j])
    }
}

/// Reads each trace at `at_iteration` (final count for shorter traces).
pub fn gain_table(
    network_id: &str,
    traces: &[(SeedMethod, &DiffusionTrace)],
    n: usize,
    at_iteration: usize,
    percent: u32,
) -> Result<GainReport> {
    if let Some((m, t)) = traces.iter().find(|(_, t)| t.node_count != n) {
        return Err(Error::InconsistentInput(format!(
            "trace for {m} covers {} nodes, expected {n}",
            t.node_count
        )));
    }
    let counts: Vec<usize> = traces.iter().map(|(_, t)| t.cumulative_at(at_iteration)).collect();
    let gains = counts
        .iter()
        .map(|&a| {
            counts
                .iter()
                .map(|&b| percent_gain(a, b, n))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GainReport {
        network_id: network_id.to_owned(),
        n,
        iteration: at_iteration,
        percent,
        methods: traces.iter().map(|(m, _)| *m).collect(),
        counts,
        gains,
    })
}
