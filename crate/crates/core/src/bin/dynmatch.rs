use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dynmatch::harness::{
    compare, gen_conclusion_adversary, gen_deletion_heavy, gen_random_stream, replay, ReplayConfig,
    UpdateStream,
};
use dynmatch::Algorithm;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Workload {
    Random,
    Adversary,
    DeletionHeavy,
}

/// Replays an edge update stream against a dynamic maximal matching.
///
/// Prints a JSON report on stdout and a summary on stderr. Exits nonzero on
/// any audit or oracle failure.
#[derive(Debug, Parser)]
#[command(name = "dynmatch", version)]
struct Cli {
    /// trivial, two-level or multilevel.
    #[arg(long, default_value = "multilevel")]
    algo: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stream file: header `n t`, then `I u v` / `D u v` lines.
    #[arg(long, conflicts_with = "gen")]
    stream: Option<PathBuf>,
    /// Generate the stream instead of reading one.
    #[arg(long, value_enum)]
    gen: Option<Workload>,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    t: usize,
    /// Insertion probability for generated streams.
    #[arg(long, default_value_t = 0.5)]
    bias: f64,
    /// Clique size for the adversary workload.
    #[arg(long, default_value_t = 16)]
    per_side: usize,
    /// Seed for the generator; defaults to --seed.
    #[arg(long)]
    gen_seed: Option<u64>,
    /// Audit every K updates; 0 audits only at the end.
    #[arg(long, default_value_t = 0)]
    verify_every: usize,
    /// Compare the final matching against an exact maximum matching.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    epoch_stats: bool,
    /// Run all three algorithms on the stream.
    #[arg(long)]
    compare: bool,
    /// Save the stream that was replayed.
    #[arg(long)]
    write_stream: Option<PathBuf>,
}

fn load(cli: &Cli) -> Result<UpdateStream, String> {
    let gen_seed = cli.gen_seed.unwrap_or(cli.seed);
    let stream = match (&cli.stream, cli.gen) {
        (Some(path), _) => UpdateStream::read_file(path),
        (None, Some(Workload::Random)) => gen_random_stream(cli.n, cli.t, cli.bias, gen_seed),
        (None, Some(Workload::DeletionHeavy)) => gen_deletion_heavy(cli.n, cli.t, gen_seed),
        (None, Some(Workload::Adversary)) => gen_conclusion_adversary(cli.per_side),
        (None, None) => return Err("one of --stream or --gen is required".into()),
    };
    stream.map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<(), String> {
    let stream = load(cli)?;
    if let Some(path) = &cli.write_stream {
        stream.write_file(path).map_err(|e| e.to_string())?;
    }
    if cli.compare {
        let report =
            compare(&stream, cli.seed, cli.verify_every, cli.oracle).map_err(|e| e.to_string())?;
        println!("{}", report.to_json());
        for r in &report.runs {
            eprintln!("{}", r.summary());
        }
        if !report.sizes_within_factor_two {
            return Err("final matching sizes differ by more than a factor of two".into());
        }
        return Ok(());
    }
    let cfg = ReplayConfig::new(cli.algo, cli.seed)
        .verify_every(cli.verify_every)
        .oracle(cli.oracle)
        .epoch_stats(cli.epoch_stats);
    let report = replay(&stream, &cfg).map_err(|e| e.to_string())?;
    println!("{}", report.to_json());
    eprintln!("{}", report.summary());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dynmatch: {e}");
            ExitCode::FAILURE
        }
    }
}
