use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sbm_svd::clustering::{cluster_detailed, compare_partitions, ClusterOptions, KMode, Variant};
use sbm_svd::experiments::{phase_diagram, run_sweep, verify, write_csv, CheckKind, SweepConfig, TrialConfig};
use sbm_svd::graph_model::io::{read_graph, read_partition, write_graph, write_partition};
use sbm_svd::graph_model::{AdjacencyOptions, SsbmInstance, SsbmParams};
use sbm_svd::linalg::EigOptions;
use sbm_svd::{Error, Result};

#[derive(Parser)]
#[command(name = "sbm-svd", version, about = "Vanilla spectral clustering of stochastic block models")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Mst,
    Threshold,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph and its hidden partition.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        zero_diagonal: bool,
        /// Edge-list output.
        #[arg(long)]
        graph: PathBuf,
        /// Ground-truth partition output (JSON).
        #[arg(long)]
        partition: PathBuf,
    },
    /// Cluster a graph file.
    Cluster {
        #[arg(long)]
        graph: PathBuf,
        /// Number of clusters, or `auto` to estimate it.
        #[arg(long, default_value = "auto")]
        k: String,
        /// Upper limit for `--k auto`.
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Mst)]
        variant: VariantArg,
        /// Threshold for `--variant threshold`; defaults to the model Δ.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Ground truth to score against; the report goes to stdout.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Run analysis checks on sampled instances.
    Verify {
        /// eig, poly, sandwich, decomp, fentry, norm, weyl, projconc or all;
        /// comma-separated lists are accepted.
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        zero_diagonal: bool,
        /// Report output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a sweep CSV as an SVG heatmap.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "recovery_rate")]
        metric: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn parse_checks(spec: &str) -> Result<Vec<CheckKind>> {
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim) {
        if name == "all" {
            out.extend(CheckKind::ALL);
        } else {
            out.push(CheckKind::from_name(name).ok_or_else(|| {
                Error::InvalidParameters(format!("unknown check {name:?}"))
            })?);
        }
    }
    Ok(out)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate {
            n,
            k,
            p,
            q,
            seed,
            zero_diagonal,
            graph,
            partition,
        } => {
            let params = SsbmParams::new(n, k, p, q, seed)?;
            let inst = SsbmInstance::sample(&params, AdjacencyOptions { zero_diagonal })?;
            let mut g = create(&graph)?;
            write_graph(&mut g, &params, &inst.adjacency)?;
            g.flush()?;
            let mut pf = create(&partition)?;
            write_partition(&mut pf, &inst.partition)?;
            pf.flush()?;
        }
        Command::Cluster {
            graph,
            k,
            k_max,
            variant,
            delta,
            seed,
            out,
            truth,
        } => {
            let (params, adjacency) = read_graph(open(&graph)?)?;
            let k_mode = if k == "auto" {
                KMode::Auto {
                    k_max: k_max.min(adjacency.n().saturating_sub(1)),
                }
            } else {
                KMode::Known(k.parse().map_err(|_| {
                    Error::InvalidParameters(format!("--k expects an integer or auto, got {k:?}"))
                })?)
            };
            let variant = match variant {
                VariantArg::Mst => Variant::Mst,
                VariantArg::Threshold => Variant::Threshold {
                    delta: match delta {
                        Some(d) => d,
                        None => {
                            params.require_separated()?;
                            params.delta()
                        }
                    },
                },
            };
            let opts = ClusterOptions::new(k_mode, variant).with_eig(EigOptions::with_seed(seed));
            let run = cluster_detailed(&adjacency, &opts)?;
            let mut w = create(&out)?;
            write_partition(&mut w, &run.partition)?;
            w.flush()?;
            eprintln!("clusters: {}", run.partition.k());
            if let Some(path) = truth {
                let truth = read_partition(open(&path)?)?;
                let report = compare_partitions(&truth, &run.partition)?;
                println!("{}", serde_json::to_string(&report)?);
            }
        }
        Command::Verify {
            check,
            n,
            k,
            p,
            q,
            trials,
            seed,
            zero_diagonal,
            out,
        } => {
            let checks = parse_checks(&check)?;
            let cell = SsbmParams::new(n, k, p, q, 0)?;
            let config = TrialConfig {
                zero_diagonal,
                ..TrialConfig::default()
            };
            let report = verify(&checks, &cell, trials, seed, &config)?;
            let text = serde_json::to_string_pretty(&report)?;
            match out {
                Some(path) => {
                    let mut w = create(&path)?;
                    writeln!(w, "{text}")?;
                    w.flush()?;
                }
                None => println!("{text}"),
            }
        }
        Command::Sweep { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let config = SweepConfig::from_json(&text)?;
            let result = run_sweep(&config)?;
            let mut w = create(&out)?;
            write_csv(&mut w, &result.rows)?;
            w.flush()?;
            let failed = result.trials.iter().filter(|t| t.error.is_some()).count();
            if failed > 0 {
                eprintln!("{failed} trial(s) recorded errors");
            }
        }
        Command::Plot {
            csv,
            x,
            y,
            metric,
            out,
        } => {
            let text = std::fs::read_to_string(&csv)?;
            let svg = phase_diagram(&text, &x, &y, &metric)?;
            std::fs::write(&out, svg)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
