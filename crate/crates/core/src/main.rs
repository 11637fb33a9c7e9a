use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use driverseed::centrality::{centrality, CentralityKind};
use driverseed::community::{girvan_newman, Partition};
use driverseed::diffusion::{ltm_run, ActivationRule, LtmConfig};
use driverseed::drivers::{community_drivers, greedy_mds, TieBreak};
use driverseed::experiment::{replay, run_experiment, ExperimentConfig, Preset};
use driverseed::generators::{generate, Family, GeneratorSpec};
use driverseed::io::{
    load_edge_list, read_partition, read_seeds, read_trace, trace_csv, write_centrality, write_edge_list, write_file,
    write_partition, write_seeds,
};
use driverseed::metrics::gain_table;
use driverseed::seeding::{select_seeds, BudgetBasis, Scope, SeedMethod, SeedOptions};
use driverseed::{Error, Graph, Result};

#[derive(Parser)]
#[command(
    name = "driverseed",
    version,
    about = "Driver-node seed selection and threshold-model spread"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random, small-world or scale-free graph.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-node degree, closeness or betweenness centrality.
    Centrality {
        #[arg(long)]
        kind: CentralityKind,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Girvan-Newman communities.
    Communities {
        #[arg(long)]
        graph: PathBuf,
        /// Stop at this many communities instead of the modularity peak.
        #[arg(long, alias = "target-communities")]
        target: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Driver nodes of the whole graph, or of each community.
    Drivers {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[command(flatten)]
        ties: Ties,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select a seed set with one of the twelve methods.
    Seed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        method: SeedMethod,
        #[arg(long)]
        percent: u32,
        /// Community file; detected with Girvan-Newman when omitted.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long, alias = "target-communities")]
        target: Option<usize>,
        #[arg(long, default_value_t = BudgetBasis::DriverPool)]
        basis: BudgetBasis,
        #[command(flatten)]
        ties: Ties,
        #[command(flatten)]
        ltm: Ltm,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the linear threshold model from a seed file.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
        #[command(flatten)]
        ltm: Ltm,
        #[arg(long)]
        out: PathBuf,
    },
    /// Percent-gain table from trace files of one graph.
    Gain {
        #[arg(long)]
        graph: PathBuf,
        /// `METHOD=FILE`, repeated once per method.
        #[arg(long = "trace", value_parser = parse_trace_arg, required = true)]
        traces: Vec<(SeedMethod, PathBuf)>,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        iteration: usize,
        #[arg(long, default_value_t = 1)]
        percent: u32,
        #[arg(long)]
        network_id: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a configured experiment, or replay one from its manifest.
    Experiment {
        #[arg(long, conflicts_with = "replay")]
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "replay")]
        preset: Option<Preset>,
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Keep only generated networks with this many nodes.
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Ties {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Break dominating-set ties by lowest node id.
    #[arg(long)]
    deterministic: bool,
}

impl Ties {
    fn tie(&self) -> TieBreak {
        if self.deterministic {
            TieBreak::LowestId
        } else {
            TieBreak::Seeded(self.seed)
        }
    }
}

#[derive(Args)]
struct Ltm {
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long, default_value_t = ActivationRule::AtLeast)]
    rule: ActivationRule,
}

impl Ltm {
    fn config(&self) -> LtmConfig {
        LtmConfig {
            theta: self.theta,
            max_iterations: self.iters,
            rule: self.rule,
        }
    }
}

fn parse_trace_arg(s: &str) -> std::result::Result<(SeedMethod, PathBuf), String> {
    let (method, path) = s.split_once('=').ok_or("expected METHOD=FILE")?;
    let method = method.parse().map_err(|e: Error| e.to_string())?;
    Ok((method, PathBuf::from(path)))
}

fn load(path: &Path) -> Result<Graph> {
    Ok(load_edge_list(path)?.0)
}

fn partition_for(g: &Graph, file: Option<&Path>, target: Option<usize>) -> Result<Partition> {
    match file {
        Some(path) => read_partition(g, path),
        None => girvan_newman(g, target),
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Generate {
            family,
            nodes,
            edges,
            seed,
            out,
        } => {
            let g = generate(&GeneratorSpec::new(family, nodes, edges, seed))?;
            write_edge_list(&g, out)
        }
        Command::Centrality { kind, graph, out } => {
            let g = load(&graph)?;
            write_centrality(&g, &centrality(&g, kind), out)
        }
        Command::Communities { graph, target, out } => {
            let g = load(&graph)?;
            let p = girvan_newman(&g, target)?;
            log::info!("{} communities, modularity {:.4}", p.len(), p.modularity());
            write_partition(&g, &p, out)
        }
        Command::Drivers {
            graph,
            partition,
            ties,
            out,
        } => {
            let g = load(&graph)?;
            let sets = match partition {
                Some(path) => community_drivers(&g, &read_partition(&g, path)?, ties.tie())?,
                None => vec![greedy_mds(&g, ties.tie())],
            };
            let mut csv = String::from("node_label,scope\n");
            for set in &sets {
                for &v in &set.nodes {
                    writeln!(csv, "{},{}", g.label(v), set.scope).unwrap();
                }
            }
            write_file(&out, &csv)
        }
        Command::Seed {
            graph,
            method,
            percent,
            partition,
            target,
            basis,
            ties,
            ltm,
            out,
        } => {
            let g = load(&graph)?;
            let p = match (method.scope, &partition) {
                (Scope::Community, _) | (_, Some(_)) => Some(partition_for(&g, partition.as_deref(), target)?),
                _ => None,
            };
            let opts = SeedOptions {
                percent,
                basis,
                ltm: ltm.config(),
                rank_seed: ties.seed,
                global_tie: ties.tie(),
                community_tie: ties.tie(),
            };
            let seeds = select_seeds(&g, p.as_ref(), method, &opts)?;
            write_seeds(&g, &seeds.nodes, out)
        }
        Command::Simulate { graph, seeds, ltm, out } => {
            let g = load(&graph)?;
            let seeds = read_seeds(&g, seeds)?;
            let trace = ltm_run(&g, &seeds, &ltm.config())?;
            log::info!("{} of {} nodes active", trace.final_count(), g.node_count());
            write_file(&out, &trace_csv(&trace))
        }
        Command::Gain {
            graph,
            traces,
            partition,
            iteration,
            percent,
            network_id,
            out,
        } => {
            let g = load(&graph)?;
            let n = g.node_count();
            let (communities, cd_mean, cd_sd) = match &partition {
                Some(path) => {
                    let p = read_partition(&g, path)?;
                    let (mean, sd) = p.average_community_density();
                    (p.len().to_string(), mean.to_string(), sd.to_string())
                }
                None => Default::default(),
            };
            let loaded = traces
                .iter()
                .map(|(m, path)| Ok((*m, read_trace(path)?.to_trace(n))))
                .collect::<Result<Vec<_>>>()?;
            if let Some((m, t)) = loaded.iter().find(|(_, t)| t.final_count() > n) {
                return Err(Error::InconsistentInput(format!(
                    "trace for {m} reaches {} nodes but the graph has {n}",
                    t.final_count()
                )));
            }
            let refs: Vec<_> = loaded.iter().map(|(m, t)| (*m, t)).collect();
            let id = network_id.unwrap_or_else(|| {
                graph
                    .file_stem()
                    .map_or("network".into(), |s| s.to_string_lossy().into_owned())
            });
            let report = gain_table(&id, &refs, n, iteration, percent)?;
            let mut csv = String::from(
                "network_id,family,n,m,communities,cd_mean,cd_sd,method_a,method_b,percent,iteration,gain\n",
            );
            for (i, a) in report.methods.iter().enumerate() {
                for (j, b) in report.methods.iter().enumerate() {
                    if i != j {
                        writeln!(
                            csv,
                            "{id},file,{n},{},{communities},{cd_mean},{cd_sd},{},{},{percent},{iteration},{}",
                            g.edge_count(),
                            a.code(),
                            b.code(),
                            report.gains[i][j]
                        )
                        .unwrap();
                    }
                }
            }
            write_file(&out, &csv)
        }
        Command::Experiment {
            config,
            preset,
            replay: manifest,
            nodes,
            seed,
            out,
        } => {
            let outcome = if let Some(manifest) = manifest {
                replay(manifest, out)?
            } else {
                let mut cfg = match (config, preset) {
                    (Some(path), _) => ExperimentConfig::load(path)?,
                    (None, Some(p)) => ExperimentConfig::preset(p),
                    (None, None) => return Err(Error::Config("give --config, --preset or --replay".into())),
                };
                if let Some(n) = nodes {
                    cfg.restrict_nodes(n);
                }
                if let Some(s) = seed {
                    cfg.seed = s;
                }
                if let Some(dir) = out {
                    cfg.output_dir = dir;
                }
                cfg.validate()?;
                run_experiment(&cfg)?
            };
            let failed = outcome.failures();
            eprintln!(
                "{} cell(s), {} failed; manifest at {}",
                outcome.cells.len(),
                failed,
                outcome.manifest.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
