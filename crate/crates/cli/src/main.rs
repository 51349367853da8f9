use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use sclub_cli::bench::{bench, format_table, Family};
use sclub_cli::formats::{write_graph, write_partition, write_td};
use sclub_cli::{generate_planted, run_cli_observed, Mode, OutputFormat, RunConfig};
use sclub_core::oracle::DEFAULT_LIMIT;

#[derive(Parser)]
#[command(name = "sclub", version, about = "Exact s-club edge deletion on graphs of bounded treewidth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve, brute-force or check an instance.
    Run(RunArgs),
    /// Write a planted instance (.gr, .td and .partition files).
    Generate(GenerateArgs),
    /// Time the solver on an instance family.
    Bench(BenchArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Graph in .gr format.
    graph: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    optimize: bool,
    /// Tree decomposition in .td format; a min-fill heuristic is used otherwise.
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Partition file for check mode.
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long)]
    certificate: bool,
    #[arg(long)]
    shadow: bool,
    #[arg(long, env = "SCLUB_THREADS", default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[arg(long, env = "SCLUB_ORACLE_LIMIT", default_value_t = DEFAULT_LIMIT)]
    oracle_limit: usize,
    /// Stream one JSON line per processed bag to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    /// Number of planted clusters.
    #[arg(long)]
    d: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    noise: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes PREFIX.gr, PREFIX.td and PREFIX.partition.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// path, cycle, ktree or planted.
    #[arg(long, default_value = "path")]
    family: String,
    /// Width for the ktree family.
    #[arg(long, default_value_t = 2)]
    width: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [100, 500, 1000])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [3])]
    s: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "SCLUB_THREADS", default_value_t = 1)]
    threads: usize,
    /// Print JSON lines instead of a table.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => return run(args),
        Command::Generate(args) => generate(args),
        Command::Bench(args) => bench_cmd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(args: RunArgs) -> ExitCode {
    let config = RunConfig {
        graph: args.graph,
        td: args.td,
        partition: args.partition,
        s: args.s,
        k: args.k,
        optimize: args.optimize,
        mode: args.mode,
        certificate: args.certificate,
        shadow: args.shadow,
        threads: args.threads,
        seed: args.seed,
        format: if args.json { OutputFormat::Json } else { OutputFormat::Text },
        oracle_limit: args.oracle_limit,
    };
    let trace = args.trace;
    let mut stderr = std::io::stderr().lock();
    let outcome = run_cli_observed(&config, |stat| {
        if trace {
            let _ = writeln!(
                stderr,
                "{{\"node\":{},\"kind\":\"{}\",\"solutions\":{},\"elapsed_us\":{}}}",
                stat.node,
                stat.kind.label(),
                stat.solutions,
                stat.elapsed.as_micros()
            );
        }
    });
    if outcome.exit_code == 2 {
        eprintln!("{}", outcome.output);
    } else {
        println!("{}", outcome.output.trim_end());
    }
    ExitCode::from(outcome.exit_code as u8)
}

fn generate(args: GenerateArgs) -> Result<()> {
    let inst = generate_planted(args.n, args.d, args.s, args.noise, args.seed)?;
    let with_ext = |ext: &str| {
        let mut p = args.out.clone().into_os_string();
        p.push(ext);
        PathBuf::from(p)
    };
    std::fs::write(with_ext(".gr"), write_graph(&inst.graph))?;
    std::fs::write(with_ext(".td"), write_td(&inst.decomposition, args.n))?;
    std::fs::write(with_ext(".partition"), write_partition(&inst.planted))?;
    println!("n={} m={} noise={} width={}", args.n, inst.graph.m(), inst.noise, inst.decomposition.width());
    Ok(())
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let family = match args.family.as_str() {
        "path" => Family::Path,
        "cycle" => Family::Cycle,
        "ktree" => Family::KTree { k: args.width },
        "planted" => Family::Planted { block: 6, noise: 3 },
        other => anyhow::bail!("unknown family `{other}`"),
    };
    let rows = bench(family, &args.n, &args.s, args.seed, args.threads)?;
    if args.json {
        for r in &rows {
            println!("{}", r.json_line());
        }
    } else {
        print!("{}", format_table(&rows));
    }
    Ok(())
}
