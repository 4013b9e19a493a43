use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod render;

use commands::{Outcome, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "galmub", version, about = "Exact MUB-cyclers, g-unitaries and MUB-balanced states")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Bits of precision for decimal renderings and entropy enclosures.
    #[arg(long, global = true, default_value_t = 128)]
    precision: u32,

    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = galmub_core::acceptance::DEFAULT_SEED)]
    seed: u64,

    /// Largest dimension accepted.
    #[arg(long, global = true, default_value_t = 32)]
    max_dim: u64,

    /// Largest dimension for the polytope tables and the stabilizer census.
    #[arg(long, global = true, default_value_t = galmub_core::acceptance::HEAVY_LIMIT as u64)]
    heavy_limit: u64,
}

#[derive(Args, Debug, Clone, Copy)]
struct Dim {
    /// Odd prime p.
    #[arg(long)]
    p: u64,
    /// Exponent n, d = p^n.
    #[arg(long, default_value_t = 1)]
    n: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modulus, primitive element, quadratic residues and the order of η.
    FieldInfo(Dim),
    /// The d+1 mutually unbiased bases, with every overlap checked.
    Mub(Dim),
    /// The MUB-cyclers among the powers of G_0.
    Cyclers(Dim),
    /// The invariant vector of U_{G_0} and its MUB statistics.
    Balanced(Dim),
    /// Phase-point and line operators, Wigner functions, the census.
    Polytope(Dim),
    /// Every acceptance check that applies to this dimension.
    VerifyAll(Dim),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, dim) = match &cli.command {
        Command::FieldInfo(d) => ("field-info", *d),
        Command::Mub(d) => ("mub", *d),
        Command::Cyclers(d) => ("cyclers", *d),
        Command::Balanced(d) => ("balanced", *d),
        Command::Polytope(d) => ("polytope", *d),
        Command::VerifyAll(d) => ("verify-all", *d),
    };
    let cfg = RunConfig {
        p: dim.p,
        n: dim.n,
        precision: cli.precision,
        seed: cli.seed,
        max_dim: cli.max_dim,
        heavy_limit: cli.heavy_limit as usize,
    };
    let result = cfg.validate().and_then(|space| match name {
        "field-info" => commands::field_info(&cfg, &space),
        "mub" => commands::mub(&cfg, &space),
        "cyclers" => commands::cyclers(&cfg, &space),
        "balanced" => commands::balanced(&cfg, &space),
        "polytope" => commands::polytope(&cfg, &space),
        _ => commands::verify_all(&cfg, &space),
    });
    match result {
        Ok(Outcome { json, text, ok }) => {
            let rendered = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if cli.json {
                print!("{rendered}");
            } else {
                print!("{text}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
