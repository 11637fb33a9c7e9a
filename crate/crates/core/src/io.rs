//! Edge-list and CSV readers/writers.
//!
//! Edge lists are SNAP-style: one edge per line as two whitespace-separated
//! labels, `#` comment lines and blank lines skipped. Directed inputs are
//! symmetrized; self-loops and repeats are dropped and counted.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use log::info;

use crate::centrality::CentralityScores;
use crate::community::Partition;
use crate::diffusion::{DiffusionTrace, TraceStep};
use crate::error::{Error, Result};
use crate::graph::{BuildReport, Graph, GraphBuilder, NodeId};

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Loads an edge-list file. Node ids follow first appearance of each label.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<(Graph, BuildReport)> {
    let path = path.as_ref();
    let (g, report) = parse_edge_list(open(path)?, path)?;
    if report.self_loops + report.duplicates > 0 {
        info!(
            "{}: dropped {} self-loop(s) and {} duplicate edge(s)",
            path.display(),
            report.self_loops,
            report.duplicates
        );
    }
    Ok((g, report))
}

/// Parses edge-list text; `origin` names the source in error messages.
pub fn parse_edge_list(reader: impl Read, origin: &Path) -> Result<(Graph, BuildReport)> {
    let mut b = GraphBuilder::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split_whitespace();
        match (fields.next(), fields.next()) {
            (Some(a), Some(bl)) => b.add_labeled_edge(a, bl),
            _ => {
                return Err(Error::parse(
                    origin,
                    i + 1,
                    format!("expected two node labels, got `{text}`"),
                ))
            }
        }
    }
    Ok(b.build())
}

/// Writes `g` as an edge list. Isolated nodes have no line of their own.
pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = format!("# Nodes: {} Edges: {}\n", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(g.label(u));
        out.push('\t');
        out.push_str(g.label(v));
        out.push('\n');
    }
    write_file(path, &out)
}

/// Non-comment CSV rows split on commas, with the header row removed when
/// its first cell equals `header`.
fn csv_rows(path: &Path, header: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut rows = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let cells: Vec<String> = text.split(',').map(|c| c.trim().to_owned()).collect();
        if rows.is_empty() && i == 0 && cells[0] == header {
            continue;
        }
        rows.push((i + 1, cells));
    }
    Ok(rows)
}

fn lookup(g: &Graph, label: &str, path: &Path, line: usize) -> Result<NodeId> {
    g.node_by_label(label)
        .ok_or_else(|| Error::parse(path, line, format!("unknown node label `{label}`")))
}

pub fn partition_csv(g: &Graph, p: &Partition) -> String {
    let mut out = String::from("node_label,community_index\n");
    for v in g.nodes() {
        out.push_str(&format!("{},{}\n", g.label(v), p.community_of(v)));
    }
    out
}

pub fn write_partition(g: &Graph, p: &Partition, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &partition_csv(g, p))
}

/// Reads a `node_label,community_index` file; every node must appear once.
pub fn read_partition(g: &Graph, path: impl AsRef<Path>) -> Result<Partition> {
    let path = path.as_ref();
    let mut labels = vec![None; g.node_count()];
    for (line, cells) in csv_rows(path, "node_label")? {
        if cells.len() < 2 {
            return Err(Error::parse(path, line, "expected node_label,community_index"));
        }
        let v = lookup(g, &cells[0], path, line)?;
        let c: usize = cells[1]
            .parse()
            .map_err(|_| Error::parse(path, line, format!("bad community index `{}`", cells[1])))?;
        if labels[v].replace(c).is_some() {
            return Err(Error::parse(path, line, format!("node `{}` listed twice", cells[0])));
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::InvalidPartition(format!("node `{}` missing", g.label(v)))))
        .collect::<Result<Vec<_>>>()?;
    Partition::from_membership(g, &labels)
}

pub fn write_centrality(g: &Graph, scores: &CentralityScores, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("node_label,score\n");
    for v in g.nodes() {
        out.push_str(&format!("{},{}\n", g.label(v), scores.get(v)));
    }
    write_file(path.as_ref(), &out)
}

/// Reads node labels from the first column of a seed file.
pub fn read_seeds(g: &Graph, path: impl AsRef<Path>) -> Result<Vec<NodeId>> {
    let path = path.as_ref();
    csv_rows(path, "node_label")?
        .iter()
        .map(|(line, cells)| lookup(g, &cells[0], path, *line))
        .collect()
}

pub fn write_seeds(g: &Graph, seeds: &[NodeId], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("node_label,order\n");
    for (i, &v) in seeds.iter().enumerate() {
        out.push_str(&format!("{},{}\n", g.label(v), i + 1));
    }
    write_file(path.as_ref(), &out)
}

/// `iteration,newly_activated,cumulative` with counts per round.
pub fn trace_csv(t: &DiffusionTrace) -> String {
    let mut out = String::from("iteration,newly_activated,cumulative\n");
    for s in &t.steps {
        out.push_str(&format!(
            "{},{},{}\n",
            s.iteration,
            s.newly_activated.len(),
            s.cumulative
        ));
    }
    out
}

/// Per-round counts read back from a trace file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceCounts {
    pub newly: Vec<usize>,
    pub cumulative: Vec<usize>,
}

impl TraceCounts {
    pub fn cumulative_at(&self, iteration: usize) -> usize {
        self.cumulative[iteration.min(self.cumulative.len() - 1)]
    }

    /// Rebuilds a trace with placeholder node ids so it can feed
    /// [`crate::metrics::gain_table`]; only the counts are meaningful.
    pub fn to_trace(&self, node_count: usize) -> DiffusionTrace {
        let mut next = 0;
        let steps = self
            .newly
            .iter()
            .zip(&self.cumulative)
            .enumerate()
            .map(|(i, (&k, &c))| {
                let ids = (next..next + k).collect();
                next += k;
                TraceStep {
                    iteration: i,
                    newly_activated: ids,
                    cumulative: c,
                }
            })
            .collect::<Vec<_>>();
        let converged = self.newly.len() > 1 && self.newly.last() == Some(&0);
        DiffusionTrace {
            node_count,
            steps,
            converged,
        }
    }
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<TraceCounts> {
    let path = path.as_ref();
    let mut newly = Vec::new();
    let mut cumulative = Vec::new();
    for (line, cells) in csv_rows(path, "iteration")? {
        let nums = cells
            .iter()
            .map(|c| c.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(path, line, "expected integers"))?;
        if nums.len() != 3 || nums[0] != newly.len() {
            return Err(Error::parse(
                path,
                line,
                "expected iteration,newly_activated,cumulative in order",
            ));
        }
        newly.push(nums[1]);
        cumulative.push(nums[2]);
    }
    if cumulative.is_empty() {
        return Err(Error::parse(path, 1, "empty trace"));
    }
    Ok(TraceCounts { newly, cumulative })
}
