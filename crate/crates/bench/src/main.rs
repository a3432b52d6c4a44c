use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mmga_bench::experiment::{parse_operators, parse_pool, OUT_DIR_ENV};
use mmga_bench::report::{
    load_runs, rank_csv, rank_table, selection_csv, summarize, summary_csv, timing_csv,
    timing_report, write_artifacts,
};
use mmga_bench::{run_experiment, SpecOverrides};
use mmga_core::strategy::OperatorPool;
use mmga_core::MutationKind;

#[derive(Parser)]
#[command(
    name = "mmga",
    version,
    about = "Mutation-only GA benchmarks on TSPLIB instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write CSV artifacts.
    Run(RunArgs),
    /// Print tables rebuilt from a previous run's output directory.
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// TSPLIB file (repeatable).
    #[arg(long = "instance", value_name = "PATH")]
    instances: Vec<PathBuf>,
    /// Comma-separated operator names, or `all`.
    #[arg(long, value_parser = |s: &str| parse_operators(s).map(OperatorList))]
    operators: Option<OperatorList>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (the MMGA_OUT environment variable takes precedence).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Operator pool for SBM and SAM.
    #[arg(long, value_parser = parse_pool, value_name = "strict10|full12")]
    pool: Option<OperatorPool>,
    /// Eil51, berlin52 and ch130 with 10 replicates.
    #[arg(long)]
    desk: bool,
    /// Where benchmark instances are looked up by name.
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

#[derive(Clone)]
struct OperatorList(Vec<MutationKind>);

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    from: PathBuf,
    /// Any of summary, ranks, timing, selection.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "summary,ranks,timing,selection"
    )]
    tables: Vec<String>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run_sweep(args),
        Command::Report(args) => print_report(args),
    }
}

fn run_sweep(args: RunArgs) -> Result<()> {
    let from_file = match &args.spec {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            SpecOverrides::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => SpecOverrides::default(),
    };
    let flags = SpecOverrides {
        instances: args.instances,
        operators: args.operators.map(|o| o.0),
        replicates: args.replicates,
        generations: args.generations,
        population: args.population,
        seed: args.seed,
        out: args.out,
        pool: args.pool,
        desk: args.desk,
        data_dir: args.data_dir,
    };
    let env_out = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let spec = from_file.merged(flags).into_spec(env_out)?;

    eprintln!(
        "{} instance(s) x {} operator(s) x {} replicate(s), {} generations",
        spec.instances.len(),
        spec.operators.len(),
        spec.replicates,
        spec.ga.generations
    );
    let result = run_experiment(&spec)?;
    write_artifacts(&result, &spec.out_dir)
        .with_context(|| format!("writing to {}", spec.out_dir.display()))?;
    eprintln!("wrote {}", spec.out_dir.display());
    Ok(())
}

fn print_report(args: ReportArgs) -> Result<()> {
    let records = load_runs(&args.from)
        .with_context(|| format!("loading runs from {}", args.from.display()))?;
    let summary = summarize(&records)?;
    for table in &args.tables {
        match table.trim() {
            "summary" => print!("{}", summary_csv(&summary)),
            "ranks" => {
                let ranks = rank_table(&summary.means);
                if !ranks.unknown_optimum.is_empty() {
                    eprintln!(
                        "warning: no known optimum for {}; ranked without it",
                        ranks.unknown_optimum.join(", ")
                    );
                }
                print!("{}", rank_csv(&ranks))
            }
            "timing" => print!("{}", timing_csv(&timing_report(&records))),
            "selection" => print!("{}", selection_csv(&records)),
            other => {
                bail!("unknown table `{other}` (expected summary, ranks, timing or selection)")
            }
        }
        println!();
    }
    Ok(())
}
