use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use keygraph::analysis::summarize;
use keygraph::model::key_share_probability;
use keygraph::montecarlo::trial_rng;
use keygraph::oracle::{
    adjacency_masks, dfs_component_count, empirical_edge_freq, exhaustive_key_prob,
};
use keygraph::sampler::build_intersection;
use keygraph::scaling::{evaluate_conditions, example_family, AlphaMinRule, ScalingFamily};
use keygraph::ClassDistribution;

use crate::commands;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::{write_file, RunManifest};
use crate::presets;

#[derive(Debug, Parser)]
#[command(
    name = "keygraph",
    version,
    about = "Connectivity of random key graphs over on-off channels"
)]
pub struct Cli {
    /// Worker threads for Monte Carlo runs; results do not depend on it.
    #[arg(long, global = true, env = "KEYGRAPH_WORKERS", default_value_t = 1)]
    pub workers: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print p_ij, lambda_i, Lambda_i and the classes m, d, s.
    EdgeProb {
        #[arg(long)]
        config: PathBuf,
    },
    /// Smallest K1 with Lambda_m > log(n)/n.
    Threshold {
        #[arg(long)]
        config: PathBuf,
        /// Ring offsets K_j - K_1, comma separated; defaults to the config.
        #[arg(long, value_delimiter = ',')]
        offsets: Option<Vec<u64>>,
    },
    /// Run the sweep described in the config and write a CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate the CSVs of one of the four figure setups.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = presets::TRIALS)]
        trials: u64,
    },
    /// Evaluate the scaling diagnostics of a family over a grid of n.
    CheckScaling(ScalingArgs),
    #[command(hide = true, subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Fixed-parameter family from a config file instead of the two-class example.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    /// `log-power:E` for (log n)^-E, `power:E` for n^-E, `const:C`.
    #[arg(long, default_value = "log-power:2")]
    pub alpha_min: String,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.5")]
    pub mu: Vec<f64>,
    /// Values of n, comma separated; scientific notation is accepted.
    #[arg(long, value_delimiter = ',', default_value = "1e3,1e4,1e5,1e6")]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = keygraph::scaling::DEFAULT_TAU)]
    pub tau: f64,
    /// Write the report CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Closed form against exhaustive enumeration (P <= 12).
    KeyProb {
        #[arg(long)]
        ki: u64,
        #[arg(long)]
        kj: u64,
        #[arg(long)]
        pool: u64,
    },
    /// Empirical edge frequency between classes i and j (one-based).
    EdgeFreq {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Union-find against DFS on one sampled graph (n <= 64).
    Components {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn parse_alpha_min(spec: &str) -> CliResult<AlphaMinRule> {
    let bad = || {
        CliError::field(
            "alpha-min",
            format!("expected log-power:E, power:E or const:C, got {spec:?}"),
        )
    };
    let (kind, value) = spec.split_once(':').ok_or_else(bad)?;
    let value: f64 = value.trim().parse().map_err(|_| bad())?;
    match kind.trim() {
        "log-power" => Ok(AlphaMinRule::InverseLogPower(value)),
        "power" => Ok(AlphaMinRule::InversePower(value)),
        "const" => Ok(AlphaMinRule::Constant(value)),
        _ => Err(bad()),
    }
}

fn parse_grid(grid: &[f64]) -> CliResult<Vec<u64>> {
    grid.iter()
        .enumerate()
        .map(|(idx, &n)| {
            if n.is_finite() && n >= 0.0 && n.fract() == 0.0 && n < u64::MAX as f64 {
                Ok(n as u64)
            } else {
                Err(CliError::field(
                    format!("grid[{idx}]"),
                    format!("not a node count: {n}"),
                ))
            }
        })
        .collect()
}

fn write_csv_with_manifest(
    csv_path: &Path,
    csv: &str,
    argv: &[String],
    config_bytes: &[u8],
    seed: u64,
    started: Instant,
) -> CliResult<()> {
    write_file(csv_path, csv.as_bytes())?;
    let mut manifest = RunManifest::new(argv, config_bytes, seed, csv_path);
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    manifest.write_next_to(csv_path)?;
    Ok(())
}

/// Executes a parsed command line. `argv` is echoed into manifests.
pub fn run(cli: Cli, argv: &[String], out: &mut dyn Write) -> CliResult<()> {
    if cli.workers == 0 {
        return Err(CliError::field("workers", "must be at least 1"));
    }
    let workers = cli.workers;
    match cli.command {
        Command::EdgeProb { config } => {
            let (config, _) = RunConfig::load(&config)?;
            emit(out, &commands::edge_prob_report(&config)?)
        }
        Command::Threshold { config, offsets } => {
            let (config, _) = RunConfig::load(&config)?;
            let report = commands::threshold(&config, offsets.as_deref())?;
            emit(out, &report.render())
        }
        Command::Sweep {
            config,
            out: csv_path,
        } => {
            let started = Instant::now();
            let (config, bytes) = RunConfig::load(&config)?;
            let result = commands::sweep(&config, workers)?;
            let csv = commands::sweep_csv(&result);
            write_csv_with_manifest(
                &csv_path,
                &csv,
                argv,
                &bytes,
                config.seed.unwrap_or(0),
                started,
            )?;
            emit(out, &format!("wrote {}\n", csv_path.display()))
        }
        Command::Figure {
            id,
            out_dir,
            seed,
            trials,
        } => {
            let curves = presets::figure(id, trials, seed)?;
            std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
            for curve in curves {
                let started = Instant::now();
                let bytes = curve.config.to_bytes();
                let config_path = out_dir.join(format!("{}.config.json", curve.name));
                write_file(&config_path, &bytes)?;
                let result = commands::sweep(&curve.config, workers)?;
                let csv_path = out_dir.join(format!("{}.csv", curve.name));
                write_csv_with_manifest(
                    &csv_path,
                    &commands::sweep_csv(&result),
                    argv,
                    &bytes,
                    seed,
                    started,
                )?;
                let k1 = match commands::threshold(&curve.config, None) {
                    Ok(report) => format!("K1*={}", report.k1),
                    Err(CliError::NoSolution(_)) => "K1*=none".to_string(),
                    Err(e) => return Err(e),
                };
                emit(
                    out,
                    &format!(
                        "wrote {} ({k1} at the base ring offsets)\n",
                        csv_path.display()
                    ),
                )?;
            }
            Ok(())
        }
        Command::CheckScaling(args) => check_scaling(args, argv, out),
        Command::Oracle(cmd) => oracle(cmd, out),
    }
}

fn check_scaling(args: ScalingArgs, argv: &[String], out: &mut dyn Write) -> CliResult<()> {
    let started = Instant::now();
    let grid = parse_grid(&args.grid)?;
    let (family, bytes) = match &args.config {
        Some(path) => {
            let (config, bytes) = RunConfig::load(path)?;
            (ScalingFamily::fixed(config.params()?), bytes)
        }
        None => {
            let mu = ClassDistribution::new(args.mu.clone()).map_err(CliError::from)?;
            let family = example_family(args.epsilon, mu, parse_alpha_min(&args.alpha_min)?)?;
            (family, argv.join(" ").into_bytes())
        }
    };
    let report = evaluate_conditions(&family, &grid, args.tau)?;
    let csv = commands::scaling_csv(&report);
    let trends = commands::scaling_trends(&report);
    match &args.out {
        Some(path) => {
            write_csv_with_manifest(path, &csv, argv, &bytes, 0, started)?;
            emit(out, &trends)
        }
        None => {
            eprint!("{trends}");
            emit(out, &csv)
        }
    }
}

fn oracle(cmd: OracleCommand, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        OracleCommand::KeyProb { ki, kj, pool } => {
            let formula = key_share_probability(ki, kj, pool)?;
            let brute = exhaustive_key_prob(ki, kj, pool)?;
            emit(
                out,
                &format!(
                    "formula={formula:.15} exhaustive={brute:.15} diff={:.3e}\n",
                    (formula - brute).abs()
                ),
            )
        }
        OracleCommand::EdgeFreq {
            config,
            i,
            j,
            samples,
            seed,
        } => {
            let (config, _) = RunConfig::load(&config)?;
            let params = config.params()?;
            let r = params.classes();
            for (name, c) in [("i", i), ("j", j)] {
                if !(1..=r).contains(&c) {
                    return Err(CliError::field(name, format!("class {c} outside 1..={r}")));
                }
            }
            let expected = params.channel().get(i - 1, j - 1)
                * key_share_probability(
                    params.keys().ring_size(i - 1),
                    params.keys().ring_size(j - 1),
                    params.keys().pool_size(),
                )?;
            let mut rng = trial_rng(seed, 0);
            let freq = empirical_edge_freq(&params, i - 1, j - 1, samples, &mut rng)?;
            let sigma = (expected * (1.0 - expected) / samples as f64).sqrt();
            emit(
                out,
                &format!("empirical={freq:.6e} expected={expected:.6e} sigma={sigma:.3e}\n"),
            )
        }
        OracleCommand::Components { config, seed } => {
            let (config, _) = RunConfig::load(&config)?;
            let params = config.params()?;
            let n = config.require_n()?;
            let (_, graph) = build_intersection(n, &params, &mut trial_rng(seed, 0))?;
            let dfs = dfs_component_count(&adjacency_masks(&graph)?)?;
            let summary = summarize(&graph);
            emit(
                out,
                &format!(
                    "union_find={} dfs={} isolated={} largest={}\n",
                    summary.component_count, dfs, summary.isolated_count, summary.largest_component
                ),
            )
        }
    }
}
