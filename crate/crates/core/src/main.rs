use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stable_qubo::dimacs::serialize_dimacs;
use stable_qubo::harness::fetch::default_cache_dir;
use stable_qubo::harness::{
    emit_report, erdos_renyi, fetch_instances, load_instance, paley, partition_cost_row,
    run_experiment, ExperimentSpec, HarnessError, Manifest, ReportFormat,
};
use stable_qubo::partition::{solve_with_partitioning, PartitionSolveConfig};
use stable_qubo::postprocess::{beta_post_for, post_process, post_process_concurrent};
use stable_qubo::qubo::Penalty;
use stable_qubo::samplers::{SamplerConfig, SamplerKind};

#[derive(Parser)]
#[command(name = "stable-qubo", version, about = "Maximum stable set through QUBO sampling")]
struct Cli {
    /// Instance cache directory (defaults to $STABLEQUBO_CACHE).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one instance at one β and post-process.
    Solve(SolveArgs),
    /// Run an experiment spec (JSON) and print the report.
    Sweep {
        spec: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare regular and simple partition costs.
    PartitionCost {
        instances: Vec<String>,
        #[arg(long)]
        complement: bool,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Solve through simple CH-partitioning.
    PartitionSolve(SolveArgs),
    /// Download or generate the instances of a manifest into the cache.
    Fetch {
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        offline: bool,
    },
    /// Write a generated graph in DIMACS format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Paley {
        #[arg(long)]
        q: usize,
    },
}

#[derive(Args)]
struct SolveArgs {
    /// File path, built-in name or cached name.
    #[arg(long)]
    instance: String,
    #[arg(long)]
    complement: bool,
    #[arg(long, default_value = "1/2")]
    beta: Penalty,
    /// Defaults to max(β, 1/2).
    #[arg(long)]
    beta_post: Option<Penalty>,
    /// sa, random, exact or external:<command>
    #[arg(long, default_value = "sa")]
    sampler: SamplerKind,
    #[arg(long, default_value = "sa")]
    post_sampler: SamplerKind,
    #[arg(long, default_value_t = 1000)]
    reads: usize,
    #[arg(long, default_value_t = 100)]
    post_reads: usize,
    #[arg(long, default_value_t = 64)]
    sweeps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    concurrent: bool,
}

impl SolveArgs {
    fn configs(&self) -> (SamplerConfig, SamplerConfig) {
        let base = SamplerConfig {
            sweeps: self.sweeps,
            seed: self.seed,
            ..SamplerConfig::default()
        };
        let post = SamplerConfig {
            seed: self.seed.wrapping_add(1),
            ..base.clone()
        };
        (base.with_reads(self.reads), post.with_reads(self.post_reads))
    }
}

enum Failure {
    Invalid(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::InvalidSpec(_) | HarnessError::UnknownFormat(_) => Failure::Invalid(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn write_out(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(runtime),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(runtime),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

/// Ok(true) on full success, Ok(false) on partial failure.
fn run(cli: Cli) -> Result<bool, Failure> {
    let cache = cli.cache.unwrap_or_else(default_cache_dir);
    match cli.command {
        Command::Solve(args) => {
            let inst = load_instance(&args.instance, args.complement, &cache)?;
            let (config, post) = args.configs();
            let samples = args.sampler.build().sample(&inst.graph, args.beta, &config).map_err(runtime)?;
            let beta_post = args.beta_post.unwrap_or_else(|| beta_post_for(args.beta));
            let post_sampler = args.post_sampler.build();
            let report = if args.concurrent {
                post_process_concurrent(&inst.graph, &samples, beta_post, post_sampler.as_ref(), &post)
            } else {
                post_process(&inst.graph, &samples, beta_post, post_sampler.as_ref(), &post)
            }
            .map_err(runtime)?;
            write_out(&json(&report), None)?;
            Ok(report.verify(&inst.graph))
        }
        Command::PartitionSolve(args) => {
            let inst = load_instance(&args.instance, args.complement, &cache)?;
            let (sample, post) = args.configs();
            let config = PartitionSolveConfig {
                sample,
                post,
                ordering: None,
                concurrent: args.concurrent,
            };
            let beta_post = args.beta_post.unwrap_or_else(|| beta_post_for(args.beta));
            let report = solve_with_partitioning(
                &inst.graph,
                args.beta,
                beta_post,
                args.sampler.build().as_ref(),
                args.post_sampler.build().as_ref(),
                &config,
            )
            .map_err(runtime)?;
            write_out(&json(&report), None)?;
            Ok(report.verify(&inst.graph))
        }
        Command::Sweep { spec, format, output } => {
            let format: ReportFormat = format.parse()?;
            let text = fs::read_to_string(&spec).map_err(|e| Failure::Invalid(format!("{}: {e}", spec.display())))?;
            let spec = ExperimentSpec::from_json(&text)?;
            let outcome = run_experiment(&spec, &cache)?;
            for failure in &outcome.failures {
                eprintln!("error: {}: {}", failure.instance, failure.error);
            }
            write_out(&emit_report(&outcome.rows, format)?, output.as_ref())?;
            Ok(!outcome.has_failures())
        }
        Command::PartitionCost {
            instances,
            complement,
            format,
        } => {
            let format: ReportFormat = format.parse()?;
            if instances.is_empty() {
                return Err(Failure::Invalid("no instances given".into()));
            }
            let mut rows = Vec::new();
            let mut ok = true;
            for name in &instances {
                match load_instance(name, complement, &cache) {
                    Ok(inst) => rows.push(partition_cost_row(&inst.name, &inst.graph)),
                    Err(e) => {
                        eprintln!("error: {e}");
                        ok = false;
                    }
                }
            }
            write_out(&emit_report(&rows, format)?, None)?;
            Ok(ok)
        }
        Command::Fetch { manifest, offline } => {
            let manifest = match manifest {
                Some(path) => Manifest::load(&path)?,
                None => Manifest::shipped(),
            };
            let records = fetch_instances(&manifest, &cache, offline);
            write_out(&json(&records), None)?;
            Ok(records.iter().all(|r| r.status.is_ok()))
        }
        Command::Gen { kind, output } => {
            let g = match kind {
                GenKind::Random { n, p, seed } => erdos_renyi(n, p, seed),
                GenKind::Paley { q } => paley(q),
            }
            .map_err(|e| Failure::Invalid(e.to_string()))?;
            write_out(&serialize_dimacs(&g), output.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
