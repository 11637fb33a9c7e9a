//! Configuration-driven experiment runner.
//!
//! A run expands `networks x repetitions` into cells. Each cell builds (or
//! loads) its graph, detects communities, finds drivers, and then for every
//! method and percent selects seeds, simulates the threshold model and
//! writes a trace. Gains are tabulated per cell and summarized across
//! repetitions.
//!
//! Randomness flows from the single top-level `seed`. Cell `i` (network
//! index times repetitions plus repetition) receives
//! `cell_seed(seed, i) = splitmix64(seed ^ splitmix64(i))`, and the cell's
//! generator, tie-break and random-ranking streams are
//! `splitmix64(cell_seed ^ k)` for `k` = 1, 2, 3.
//!
//! Config files are plain `key = value` lines; `#` starts a comment and
//! `network` may repeat:
//!
//! ```text
//! preset = table1-synthetic
//! output = runs/t1
//! seed = 42
//! percents = 1, 10
//! network = random 100 800 target=6
//! network = file data/karate.txt target=2 id=zkc
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;

use crate::community::{girvan_newman, mean_sd, Partition};
use crate::diffusion::{ltm_run, ActivationRule, LtmConfig};
use crate::drivers::{DriverStats, TieBreak};
use crate::error::{Error, Result};
use crate::generators::{generate, Family, GeneratorSpec};
use crate::graph::Graph;
use crate::io::{load_edge_list, partition_csv, read_partition, trace_csv, write_file};
use crate::metrics::gain_table;
use crate::seeding::{rank_method, BudgetBasis, DriverPools, Scope, SeedMethod};

pub const DEFAULT_GN_NODE_LIMIT: usize = 10_000;

/// `(n, m, communities)` rows of the synthetic sweep.
/// `(400, 98000)` exceeds the 79800 possible edges and fails per cell.
pub const TABLE1_ROWS: [(usize, usize, usize); 46] = [
    (100, 800, 6),
    (100, 1600, 5),
    (100, 2400, 4),
    (100, 3200, 3),
    (100, 4000, 2),
    (100, 4800, 1),
    (100, 4950, 1),
    (200, 2400, 5),
    (200, 4800, 4),
    (200, 7200, 4),
    (200, 9600, 4),
    (200, 12000, 3),
    (200, 14400, 2),
    (200, 16800, 1),
    (200, 19200, 1),
    (200, 19900, 1),
    (300, 12800, 5),
    (300, 19200, 5),
    (300, 22400, 4),
    (300, 25600, 4),
    (300, 28800, 3),
    (300, 32000, 2),
    (300, 35200, 1),
    (300, 38400, 1),
    (300, 41600, 1),
    (300, 44850, 1),
    (400, 40000, 4),
    (400, 44000, 4),
    (400, 48000, 4),
    (400, 52000, 4),
    (400, 60000, 3),
    (400, 64000, 2),
    (400, 68000, 1),
    (400, 72000, 1),
    (400, 76000, 1),
    (400, 98000, 1),
    (500, 72000, 4),
    (500, 76800, 3),
    (500, 81600, 4),
    (500, 86400, 3),
    (500, 91200, 3),
    (500, 96000, 3),
    (500, 100800, 1),
    (500, 105200, 1),
    (500, 110000, 2),
    (500, 124750, 2),
];

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn cell_seed(seed: u64, cell: u64) -> u64 {
    splitmix64(seed ^ splitmix64(cell))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Table1Synthetic,
    Table2Real,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1-synthetic" => Ok(Preset::Table1Synthetic),
            "table2-real" => Ok(Preset::Table2Real),
            _ => Err(Error::UnknownName {
                kind: "preset",
                value: s.to_owned(),
            }),
        }
    }
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1Synthetic => "table1-synthetic",
            Preset::Table2Real => "table2-real",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetworkSource {
    Generated { family: Family, n: usize, m: usize },
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkEntry {
    pub source: NetworkSource,
    pub target_communities: Option<usize>,
    pub partition: Option<PathBuf>,
    pub id: Option<String>,
}

impl NetworkEntry {
    pub fn generated(family: Family, n: usize, m: usize, target: Option<usize>) -> Self {
        NetworkEntry {
            source: NetworkSource::Generated { family, n, m },
            target_communities: target,
            partition: None,
            id: None,
        }
    }

    pub fn file(path: impl Into<PathBuf>, target: Option<usize>) -> Self {
        NetworkEntry {
            source: NetworkSource::File { path: path.into() },
            target_communities: target,
            partition: None,
            id: None,
        }
    }

    /// Directory-safe identifier, unique within a sane config.
    pub fn id(&self) -> String {
        if let Some(id) = &self.id {
            return id.clone();
        }
        match &self.source {
            NetworkSource::Generated { family, n, m } => format!("{family}-{n}-{m}"),
            NetworkSource::File { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "network".into()),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match &self.source {
            NetworkSource::Generated { family, .. } => family.name(),
            NetworkSource::File { .. } => "file",
        }
    }

    fn parse(value: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Config(format!("network `{value}`: {msg}"));
        let mut words = value.split_whitespace();
        let kind = words.next().ok_or_else(|| bad("empty"))?;
        let mut entry = if kind == "file" {
            let path = words.next().ok_or_else(|| bad("missing path"))?;
            NetworkEntry::file(path, None)
        } else {
            let family: Family = kind.parse()?;
            let mut num = || -> Result<usize> {
                words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| bad("expected `<family> <nodes> <edges>`"))
            };
            let (n, m) = (num()?, num()?);
            NetworkEntry::generated(family, n, m, None)
        };
        for opt in words {
            let (k, v) = opt.split_once('=').ok_or_else(|| bad("options are key=value"))?;
            match k {
                "target" => entry.target_communities = Some(v.parse().map_err(|_| bad("bad target"))?),
                "partition" => entry.partition = Some(PathBuf::from(v)),
                "id" => entry.id = Some(v.to_owned()),
                _ => return Err(bad(&format!("unknown option `{k}`"))),
            }
        }
        Ok(entry)
    }

    fn render(&self) -> String {
        let mut s = match &self.source {
            NetworkSource::Generated { family, n, m } => format!("{family} {n} {m}"),
            NetworkSource::File { path } => format!("file {}", path.display()),
        };
        if let Some(t) = self.target_communities {
            write!(s, " target={t}").unwrap();
        }
        if let Some(p) = &self.partition {
            write!(s, " partition={}", p.display()).unwrap();
        }
        if let Some(id) = &self.id {
            write!(s, " id={id}").unwrap();
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub networks: Vec<NetworkEntry>,
    pub methods: Vec<SeedMethod>,
    pub percents: Vec<u32>,
    pub theta: f64,
    pub rule: ActivationRule,
    pub iterations: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub basis: BudgetBasis,
    pub output_dir: PathBuf,
    /// Graphs above this size need a target count or a partition file.
    pub gn_node_limit: usize,
    /// Wall-clock budget per network, across its repetitions.
    pub timeout: Option<Duration>,
    /// Lowest-id tie-breaking in the dominating-set greedy.
    pub deterministic: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            networks: Vec::new(),
            methods: SeedMethod::ALL.to_vec(),
            percents: vec![1, 10, 20, 30, 40, 50],
            theta: 0.5,
            rule: ActivationRule::AtLeast,
            iterations: 20,
            repetitions: 10,
            seed: 0,
            basis: BudgetBasis::DriverPool,
            output_dir: PathBuf::from("out"),
            gn_node_limit: DEFAULT_GN_NODE_LIMIT,
            timeout: None,
            deterministic: false,
        }
    }
}

fn parse_list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, T::Err> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

impl ExperimentConfig {
    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Table1Synthetic => ExperimentConfig {
                networks: Family::ALL
                    .iter()
                    .flat_map(|&f| {
                        TABLE1_ROWS
                            .iter()
                            .map(move |&(n, m, c)| NetworkEntry::generated(f, n, m, Some(c)))
                    })
                    .collect(),
                iterations: 20,
                ..Self::default()
            },
            Preset::Table2Real => ExperimentConfig {
                percents: vec![20],
                iterations: 100,
                ..Self::default()
            },
        }
    }

    /// Keeps only generated networks with `n` nodes.
    pub fn restrict_nodes(&mut self, n: usize) {
        self.networks
            .retain(|e| matches!(e.source, NetworkSource::Generated { n: k, .. } if k == n));
    }

    pub fn ltm(&self) -> LtmConfig {
        LtmConfig {
            theta: self.theta,
            max_iterations: self.iterations,
            rule: self.rule,
        }
    }

    /// Parses config text. A `preset` line supplies defaults wherever it
    /// appears; `network` lines replace the preset's networks. Keys of the
    /// form `cell.*` / `status.*` (as written to manifests) are ignored.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected `key = value`"))?;
            entries.push((i + 1, k.trim().to_owned(), v.trim().to_owned()));
        }
        let mut cfg = match entries.iter().find(|e| e.1 == "preset") {
            Some((_, _, v)) => ExperimentConfig::preset(v.parse()?),
            None => ExperimentConfig::default(),
        };
        let mut saw_network = false;
        for (line, key, value) in entries {
            let err = |msg: String| Error::parse(origin, line, msg);
            let bad = || err(format!("bad value `{value}` for `{key}`"));
            match key.as_str() {
                "preset" => {}
                "network" => {
                    if !saw_network {
                        cfg.networks.clear();
                        saw_network = true;
                    }
                    cfg.networks
                        .push(NetworkEntry::parse(&value).map_err(|e| err(e.to_string()))?);
                }
                "methods" => cfg.methods = parse_list(&value).map_err(|e: Error| err(e.to_string()))?,
                "percents" => cfg.percents = parse_list(&value).map_err(|_| bad())?,
                "theta" => cfg.theta = value.parse().map_err(|_| bad())?,
                "rule" => cfg.rule = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "iterations" => cfg.iterations = value.parse().map_err(|_| bad())?,
                "repetitions" => cfg.repetitions = value.parse().map_err(|_| bad())?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
                "basis" => cfg.basis = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "output" => cfg.output_dir = PathBuf::from(&value),
                "gn_node_limit" => cfg.gn_node_limit = value.parse().map_err(|_| bad())?,
                "timeout_secs" => cfg.timeout = Some(Duration::from_secs(value.parse().map_err(|_| bad())?)),
                "deterministic" => cfg.deterministic = value.parse().map_err(|_| bad())?,
                k if k.starts_with("cell.") || k.starts_with("status.") => {}
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.networks.is_empty() {
            return Err(Error::Config("no networks".into()));
        }
        if self.methods.is_empty() || self.percents.is_empty() {
            return Err(Error::Config("methods and percents must be nonempty".into()));
        }
        if let Some(&p) = self.percents.iter().find(|p| !(1..=100).contains(*p)) {
            return Err(Error::InvalidPercent(p));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::Config(format!("theta must be in (0, 1], got {}", self.theta)));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be positive".into()));
        }
        Ok(())
    }

    /// Config text that parses back to `self`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let codes: Vec<&str> = self.methods.iter().map(|m| m.code()).collect();
        let percents: Vec<String> = self.percents.iter().map(u32::to_string).collect();
        writeln!(s, "output = {}", self.output_dir.display()).unwrap();
        writeln!(s, "seed = {}", self.seed).unwrap();
        writeln!(s, "theta = {}", self.theta).unwrap();
        writeln!(s, "rule = {}", self.rule).unwrap();
        writeln!(s, "iterations = {}", self.iterations).unwrap();
        writeln!(s, "repetitions = {}", self.repetitions).unwrap();
        writeln!(s, "basis = {}", self.basis).unwrap();
        writeln!(s, "methods = {}", codes.join(", ")).unwrap();
        writeln!(s, "percents = {}", percents.join(", ")).unwrap();
        writeln!(s, "gn_node_limit = {}", self.gn_node_limit).unwrap();
        if let Some(t) = self.timeout {
            writeln!(s, "timeout_secs = {}", t.as_secs()).unwrap();
        }
        writeln!(s, "deterministic = {}", self.deterministic).unwrap();
        for n in &self.networks {
            writeln!(s, "network = {}", n.render()).unwrap();
        }
        s
    }

    fn cell_index(&self, network: usize, rep: usize) -> u64 {
        (network * self.repetitions + rep) as u64
    }
}

/// Mean and spread of one gain over a network's completed repetitions.
#[derive(Clone, Debug, PartialEq)]
pub struct GainSummary {
    pub network_id: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub communities: f64,
    pub cd_mean: f64,
    pub cd_sd: f64,
    pub method_a: SeedMethod,
    pub method_b: SeedMethod,
    pub percent: u32,
    pub iteration: usize,
    pub gain: f64,
    pub gain_sd: f64,
    pub repetitions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    TimedOut,
    Failed(String),
}

impl CellStatus {
    fn render(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::TimedOut => "timed_out".into(),
            CellStatus::Failed(msg) => format!("error: {}", msg.replace('\n', " ")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub manifest: PathBuf,
    pub summaries: Vec<GainSummary>,
    /// `(network_id, repetition, status)` for every cell.
    pub cells: Vec<(String, usize, CellStatus)>,
}

impl ExperimentOutcome {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.2 != CellStatus::Ok).count()
    }

    pub fn summary(&self, network_id: &str, a: SeedMethod, b: SeedMethod, percent: u32) -> Option<&GainSummary> {
        self.summaries
            .iter()
            .find(|s| s.network_id == network_id && s.method_a == a && s.method_b == b && s.percent == percent)
    }
}

/// Everything one finished cell contributes to the network-level files.
struct CellResult {
    n: usize,
    m: usize,
    density: f64,
    partition: Option<Partition>,
    stats: Option<DriverStats>,
    /// Per percent: influenced counts per method at the gain iteration.
    counts: Vec<Vec<usize>>,
    /// Per method, per percent: cumulative trend-line.
    trends: Vec<Vec<Vec<usize>>>,
}

struct Cell<'a> {
    cfg: &'a ExperimentConfig,
    entry: &'a NetworkEntry,
    dir: PathBuf,
    rep: usize,
    seed: u64,
    started: Instant,
}

impl Cell<'_> {
    fn check_time(&self) -> std::result::Result<(), CellStatus> {
        match self.cfg.timeout {
            Some(limit) if self.started.elapsed() > limit => Err(CellStatus::TimedOut),
            _ => Ok(()),
        }
    }

    fn graph(&self) -> Result<Graph> {
        match &self.entry.source {
            NetworkSource::Generated { family, n, m } => {
                generate(&GeneratorSpec::new(*family, *n, *m, splitmix64(self.seed ^ 1)))
            }
            NetworkSource::File { path } => Ok(load_edge_list(path)?.0),
        }
    }

    fn partition(&self, g: &Graph) -> Result<Partition> {
        if let Some(path) = &self.entry.partition {
            return read_partition(g, path);
        }
        let target = self.entry.target_communities;
        if target.is_none() && g.node_count() > self.cfg.gn_node_limit {
            return Err(Error::Config(format!(
                "{} nodes exceed gn_node_limit {}; give target= or partition=",
                g.node_count(),
                self.cfg.gn_node_limit
            )));
        }
        girvan_newman(g, target)
    }

    fn run(&self) -> std::result::Result<CellResult, CellStatus> {
        let fail = |e: Error| CellStatus::Failed(e.to_string());
        let cfg = self.cfg;
        let g = self.graph().map_err(fail)?;
        let density = g.density().unwrap_or(0.0);
        self.check_time()?;

        let needs_partition = cfg.methods.iter().any(|m| m.scope == Scope::Community);
        let partition = if needs_partition || self.entry.partition.is_some() || self.entry.target_communities.is_some()
        {
            let p = self.partition(&g).map_err(fail)?;
            write_file(
                &self.dir.join(format!("partition_r{}.csv", self.rep)),
                &partition_csv(&g, &p),
            )
            .map_err(fail)?;
            Some(p)
        } else {
            None
        };
        self.check_time()?;

        let tie = if cfg.deterministic {
            TieBreak::LowestId
        } else {
            TieBreak::Seeded(splitmix64(self.seed ^ 2))
        };
        let pools = DriverPools::new(&g, partition.as_ref(), tie, tie).map_err(fail)?;
        let stats = pools.community.as_ref().map(|sets| {
            let ndnc: usize = sets.iter().map(|s| s.len()).sum();
            DriverStats {
                ndn: pools.global.len(),
                ndnc,
                diff: ndnc as i64 - pools.global.len() as i64,
            }
        });

        let ltm = cfg.ltm();
        let rank_seed = splitmix64(self.seed ^ 3);
        let mut traces = Vec::with_capacity(cfg.methods.len());
        for &method in &cfg.methods {
            self.check_time()?;
            let ranking = rank_method(&g, partition.as_ref(), &pools, method, rank_seed, &ltm).map_err(fail)?;
            let mut per_percent = Vec::with_capacity(cfg.percents.len());
            for &percent in &cfg.percents {
                let seeds = ranking.select(&g, percent, cfg.basis).map_err(fail)?;
                let trace = ltm_run(&g, &seeds.nodes, &ltm).map_err(fail)?;
                trace.validate().map_err(fail)?;
                let name = format!("{}_p{}_r{}.csv", method.code(), percent, self.rep);
                write_file(&self.dir.join("traces").join(name), &trace_csv(&trace)).map_err(fail)?;
                per_percent.push(trace);
            }
            traces.push(per_percent);
        }

        let n = g.node_count();
        let mut counts = Vec::with_capacity(cfg.percents.len());
        let mut gains_csv = String::from(GAIN_HEADER);
        let (communities, cd_mean, cd_sd) = partition_stats(partition.as_ref());
        for (pi, &percent) in cfg.percents.iter().enumerate() {
            let column: Vec<_> = cfg.methods.iter().zip(&traces).map(|(&m, t)| (m, &t[pi])).collect();
            let report = gain_table(&self.entry.id(), &column, n, cfg.iterations, percent).map_err(fail)?;
            for (i, &a) in report.methods.iter().enumerate() {
                for (j, &b) in report.methods.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    writeln!(
                        gains_csv,
                        "{},{},{},{},{},{},{},{},{},{},{},{}",
                        report.network_id,
                        self.entry.family_name(),
                        n,
                        g.edge_count(),
                        communities,
                        cd_mean,
                        cd_sd,
                        a.code(),
                        b.code(),
                        percent,
                        report.iteration,
                        report.gains[i][j]
                    )
                    .unwrap();
                }
            }
            counts.push(report.counts);
        }
        write_file(&self.dir.join(format!("gains_r{}.csv", self.rep)), &gains_csv).map_err(fail)?;

        let trends = traces
            .iter()
            .map(|per| per.iter().map(|t| t.cumulative_counts()).collect())
            .collect();
        Ok(CellResult {
            n,
            m: g.edge_count(),
            density,
            partition,
            stats,
            counts,
            trends,
        })
    }
}

const GAIN_HEADER: &str = "network_id,family,n,m,communities,cd_mean,cd_sd,method_a,method_b,percent,iteration,gain\n";

fn partition_stats(p: Option<&Partition>) -> (usize, f64, f64) {
    match p {
        Some(p) => {
            let (mean, sd) = p.average_community_density();
            (p.len(), mean, sd)
        }
        None => (0, 0.0, 0.0),
    }
}

/// Runs every cell, writes all CSVs and the manifest, and returns the
/// cross-repetition gain summaries. Failing cells are recorded and skipped.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let out = &cfg.output_dir;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut ids: Vec<String> = cfg.networks.iter().map(NetworkEntry::id).collect();
    {
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != ids.len() {
            // repeated ids get their index appended
            for (i, id) in ids.iter_mut().enumerate() {
                *id = format!("{id}-{i}");
            }
        }
    }

    let mut manifest = String::from("# experiment manifest; replay with `experiment --replay <this file>`\n");
    manifest.push_str(&cfg.render());
    let mut summary_csv = String::from(
        "network_id,family,n,m,communities,cd_mean,cd_sd,method_a,method_b,percent,iteration,gain,gain_sd,repetitions\n",
    );
    let mut summaries = Vec::new();
    let mut cells_out = Vec::new();

    for (ni, entry) in cfg.networks.iter().enumerate() {
        let id = &ids[ni];
        let entry = NetworkEntry {
            id: Some(id.clone()),
            ..entry.clone()
        };
        let dir = out.join(id);
        info!("network {id}: {} repetition(s)", cfg.repetitions);
        let started = Instant::now();
        let results: Vec<std::result::Result<CellResult, CellStatus>> = (0..cfg.repetitions)
            .into_par_iter()
            .map(|rep| {
                Cell {
                    cfg,
                    entry: &entry,
                    dir: dir.clone(),
                    rep,
                    seed: cell_seed(cfg.seed, cfg.cell_index(ni, rep)),
                    started,
                }
                .run()
            })
            .collect();

        let mut stats_csv =
            String::from("network_id,repetition,n,m,density,communities,cd_mean,cd_sd,modularity,ndn,ndnc,diff\n");
        let mut done = Vec::new();
        for (rep, r) in results.into_iter().enumerate() {
            let seed = cell_seed(cfg.seed, cfg.cell_index(ni, rep));
            writeln!(manifest, "cell.{id}.r{rep} = {seed}").unwrap();
            let status = match r {
                Ok(res) => {
                    let (c, cd_mean, cd_sd) = partition_stats(res.partition.as_ref());
                    let q = res.partition.as_ref().map_or(0.0, Partition::modularity);
                    let (ndn, ndnc, diff) = res.stats.map_or((String::new(), String::new(), String::new()), |s| {
                        (s.ndn.to_string(), s.ndnc.to_string(), s.diff.to_string())
                    });
                    writeln!(
                        stats_csv,
                        "{id},{rep},{},{},{},{c},{cd_mean},{cd_sd},{q},{ndn},{ndnc},{diff}",
                        res.n, res.m, res.density
                    )
                    .unwrap();
                    done.push(res);
                    CellStatus::Ok
                }
                Err(status) => {
                    warn!("network {id} repetition {rep}: {}", status.render());
                    status
                }
            };
            if status != CellStatus::Ok {
                writeln!(manifest, "status.{id}.r{rep} = {}", status.render()).unwrap();
            }
            cells_out.push((id.clone(), rep, status));
        }
        if done.is_empty() {
            continue;
        }
        write_file(&dir.join("driver_stats.csv"), &stats_csv)?;
        write_file(&dir.join("trendline.csv"), &trendline_csv(cfg, &done))?;

        let reps = done.len();
        let communities = done
            .iter()
            .map(|r| partition_stats(r.partition.as_ref()).0 as f64)
            .sum::<f64>()
            / reps as f64;
        let cd_means: Vec<f64> = done.iter().map(|r| partition_stats(r.partition.as_ref()).1).collect();
        let cd_sds: Vec<f64> = done.iter().map(|r| partition_stats(r.partition.as_ref()).2).collect();
        let cd_mean = mean_sd(&cd_means).0;
        let cd_sd = mean_sd(&cd_sds).0;
        for (pi, &percent) in cfg.percents.iter().enumerate() {
            for (i, &a) in cfg.methods.iter().enumerate() {
                for (j, &b) in cfg.methods.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let gains: Vec<f64> = done
                        .iter()
                        .map(|r| (r.counts[pi][i] as f64 - r.counts[pi][j] as f64) / r.n as f64 * 100.0)
                        .collect();
                    let (gain, gain_sd) = mean_sd(&gains);
                    let s = GainSummary {
                        network_id: id.clone(),
                        family: entry.family_name().to_owned(),
                        n: done[0].n,
                        m: done[0].m,
                        communities,
                        cd_mean,
                        cd_sd,
                        method_a: a,
                        method_b: b,
                        percent,
                        iteration: cfg.iterations,
                        gain,
                        gain_sd,
                        repetitions: reps,
                    };
                    writeln!(
                        summary_csv,
                        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                        s.network_id,
                        s.family,
                        s.n,
                        s.m,
                        s.communities,
                        s.cd_mean,
                        s.cd_sd,
                        a.code(),
                        b.code(),
                        s.percent,
                        s.iteration,
                        s.gain,
                        s.gain_sd,
                        s.repetitions
                    )
                    .unwrap();
                    summaries.push(s);
                }
            }
        }
    }

    write_file(&out.join("gain_summary.csv"), &summary_csv)?;
    let manifest_path = out.join("manifest.txt");
    write_file(&manifest_path, &manifest)?;
    Ok(ExperimentOutcome {
        manifest: manifest_path,
        summaries,
        cells: cells_out,
    })
}

/// Mean cumulative count per method, percent and iteration over repetitions.
fn trendline_csv(cfg: &ExperimentConfig, done: &[CellResult]) -> String {
    let mut s = String::from("method,percent,iteration,mean_cumulative\n");
    for (mi, m) in cfg.methods.iter().enumerate() {
        for (pi, &percent) in cfg.percents.iter().enumerate() {
            for it in 0..=cfg.iterations {
                let total: usize = done
                    .iter()
                    .map(|r| {
                        let t = &r.trends[mi][pi];
                        t[it.min(t.len() - 1)]
                    })
                    .sum();
                writeln!(s, "{},{percent},{it},{}", m.code(), total as f64 / done.len() as f64).unwrap();
            }
        }
    }
    s
}

/// Reruns the configuration stored in a manifest after checking that its
/// recorded cell seeds match the seed-splitting rule.
pub fn replay(manifest: impl AsRef<Path>, output_dir: Option<PathBuf>) -> Result<ExperimentOutcome> {
    let path = manifest.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = ExperimentConfig::parse(&text, path)?;
    let ids: Vec<String> = cfg.networks.iter().map(NetworkEntry::id).collect();
    for line in text.lines() {
        let Some((key, value)) = line.split_once('=') else {
            continue;
        };
        let Some(cell) = key.trim().strip_prefix("cell.") else {
            continue;
        };
        let (id, rep) = cell
            .rsplit_once(".r")
            .ok_or_else(|| Error::Config(format!("bad cell key `{cell}`")))?;
        let rep: usize = rep
            .parse()
            .map_err(|_| Error::Config(format!("bad cell key `{cell}`")))?;
        let ni = ids
            .iter()
            .position(|i| i == id)
            .or_else(|| id.rsplit_once('-').and_then(|(_, i)| i.parse().ok()))
            .ok_or_else(|| Error::Config(format!("manifest cell `{cell}` names no network")))?;
        let recorded: u64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad seed for `{cell}`")))?;
        if recorded != cell_seed(cfg.seed, cfg.cell_index(ni, rep)) {
            return Err(Error::Config(format!(
                "seed for `{cell}` does not match the manifest's top-level seed"
            )));
        }
    }
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    run_experiment(&cfg)
}
