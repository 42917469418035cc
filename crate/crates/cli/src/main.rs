use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use acsfa_core::bench::{self, Algorithm, ExperimentConfig};
use acsfa_core::firefly::PARAM_NAMES;
use acsfa_core::oracle::{brute_force, held_karp, BRUTE_FORCE_MAX_N, HELD_KARP_MAX_N};
use acsfa_core::parse_instance;
use acsfa_core::stats::{error_matrix, parse_optima, rcbd_anova, tukey_hsd, ResponseMatrix};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "acsfa",
    version,
    about = "Ant colony TSP solver with firefly parameter tuning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Acs,
    Acsfa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Response {
    Best,
    Error,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one TSPLIB instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "acsfa")]
        algo: Algo,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 10)]
        ants: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the per-iteration parameter trace (hybrid only) to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run an experiment described by a config file and export CSV results.
    Bench {
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ANOVA and Tukey grouping over an algorithms x instances matrix.
    Stats {
        matrix: PathBuf,
        #[arg(long, default_value_t = 0.90)]
        confidence: f64,
        #[arg(long, value_enum, default_value = "best")]
        response: Response,
        /// `instance,optimum` lines with known optimal lengths; needed for `--response error`.
        #[arg(long)]
        optima: Option<PathBuf>,
    },
    /// Exact optimum of a small instance.
    Exact { instance: PathBuf },
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            instance,
            algo,
            iterations,
            ants,
            seed,
            trace,
        } => {
            let inst = parse_instance(&read(&instance)?)
                .with_context(|| format!("in {}", instance.display()))?;
            let cfg = ExperimentConfig {
                iterations,
                ants,
                ..ExperimentConfig::default()
            };
            let alg = match algo {
                Algo::Acs => Algorithm::Acs,
                Algo::Acsfa => Algorithm::Acsfa,
            };
            if trace.is_some() && matches!(algo, Algo::Acs) {
                bail!("--trace is only available with --algo acsfa");
            }
            let (rec, tr) = bench::solve(alg, &inst, &cfg, seed)?;
            println!("instance {}", bench::instance_label(&instance));
            println!("algorithm {alg}");
            println!("seed {seed}");
            println!("length {}", rec.best.length());
            println!("time_s {:.2}", rec.elapsed.as_secs_f64());
            if let Some(p) = &rec.best_params {
                for (name, v) in PARAM_NAMES.iter().zip(p.as_array()) {
                    println!("{name} {v:.6}");
                }
            }
            let tour: Vec<String> = rec
                .best
                .order()
                .iter()
                .map(|c| (c + 1).to_string())
                .collect();
            println!("tour {}", tour.join(" "));
            if let (Some(path), Some(tr)) = (trace, tr) {
                fs::write(&path, bench::trace_csv(&tr))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
        }
        Command::Bench { config, out } => {
            let cfg = bench::load_config(&config)?;
            let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
            let exp = bench::run_experiment(&cfg)?;
            let files = bench::export(&exp, &cfg, &dir)?;
            print!("{}", bench::summary_csv(&exp.summary));
            for (inst, err) in &exp.summary.failures {
                eprintln!("failed: {inst}: {err}");
            }
            eprintln!("results written to {}", dir.display());
            log::info!("{} trace files", files.traces.len());
            if !exp.summary.failures.is_empty() {
                bail!("{} instance(s) failed", exp.summary.failures.len());
            }
        }
        Command::Stats {
            matrix,
            confidence,
            response,
            optima,
        } => {
            let mut m = ResponseMatrix::from_csv(&read(&matrix)?)?;
            if let Response::Error = response {
                let Some(optima) = optima else {
                    bail!("--response error requires --optima");
                };
                m = error_matrix(&m, &parse_optima(&read(&optima)?)?)?;
            }
            println!("{}", rcbd_anova(&m));
            println!();
            println!("{}", tukey_hsd(&m, confidence)?);
        }
        Command::Exact { instance } => {
            let inst = parse_instance(&read(&instance)?)
                .with_context(|| format!("in {}", instance.display()))?;
            let n = inst.dimension();
            if n <= BRUTE_FORCE_MAX_N {
                let t = brute_force(&inst)?;
                let tour: Vec<String> = t.order().iter().map(|c| (c + 1).to_string()).collect();
                println!("length {}", t.length());
                println!("tour {}", tour.join(" "));
            } else if n <= HELD_KARP_MAX_N {
                println!("length {}", held_karp(&inst)?);
            } else {
                bail!("instance has {n} cities; exact solving supports at most {HELD_KARP_MAX_N}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
