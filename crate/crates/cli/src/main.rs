use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use lct_cli::commands::{self, Format, Options, Outcome, EXIT_OTHER};
use lct_cli::suite::RandomSpec;
use lct_core::oracle::OracleConfig;
use lct_core::{parse_rational, InvariantConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "lct", version, about = "Exact thresholds and mixed multiplicities of monomial singularities")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,
    /// Relative tolerance for the counting oracle, as p/q.
    #[arg(long, global = true, default_value = "1/10")]
    oracle_tolerance: String,
    /// Largest regularization parameter N tried before giving up.
    #[arg(long, global = true)]
    nmax_regularization: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report invariants, bounds and equality diagnosis for an instance file.
    Analyze { file: PathBuf },
    /// Generate a seeded corpus and run the property suite over it.
    Random {
        #[arg(long)]
        n: usize,
        /// Maximum number of generators per instance.
        #[arg(long, default_value_t = 4)]
        gens: usize,
        #[arg(long, default_value_t = 6)]
        max_exp: i64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Plant s * Delta_J structures and perturbed negatives.
        #[arg(long)]
        planted: bool,
        /// Skip the counting oracle.
        #[arg(long)]
        skip_oracle: bool,
    },
    /// Compare exact values with the brute-force oracle.
    Compare { file: PathBuf },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let tolerance = parse_rational(&cli.oracle_tolerance)?;
    let opts = Options {
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        },
        invariants: InvariantConfig {
            n_max: cli.nmax_regularization,
        },
        oracle: OracleConfig::with_tolerance(tolerance)?,
    };
    let outcome = match &cli.command {
        Command::Analyze { file } => commands::analyze(file, &opts),
        Command::Compare { file } => commands::compare(file, &opts),
        Command::Random {
            n,
            gens,
            max_exp,
            count,
            seed,
            planted,
            skip_oracle,
        } => {
            let plan = RandomSpec {
                n: *n,
                max_gens: *gens,
                max_exp: *max_exp,
                count: *count,
                seed: *seed,
                planted: *planted,
            };
            commands::random(&plan, &opts, !skip_oracle)
        }
    };
    if let Some(path) = &cli.out {
        std::fs::write(path, &outcome.output).with_context(|| format!("writing {}", path.display()))?;
    } else {
        print!("{}", outcome.output);
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            if let Some(m) = &outcome.message {
                eprintln!("lct: {m}");
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("lct: {e:#}");
            ExitCode::from(EXIT_OTHER as u8)
        }
    }
}
