use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use powerfree_cli::commands::parse_count;
use powerfree_cli::{
    cmd_alpha_table, cmd_count, cmd_eval, cmd_verify, EvalArgs, OutputFormat, RunConfig, SetArgs,
    VerifyArgs, EXIT_ERROR, THREADS_ENV,
};

#[derive(Parser, Debug)]
#[command(
    name = "powerfree",
    version,
    about = "Powerfree integers in digit-defined sets"
)]
struct Cli {
    /// key = value file overriding the run defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exponents from the Perron eigenvalue of the missing-digit matrix.
    AlphaTable {
        #[arg(long, default_value_t = 3)]
        b_min: u64,
        #[arg(long, default_value_t = 9)]
        b_max: u64,
    },
    /// Count k-th powerfree members of a set and compare with the predicted density.
    Count {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Check one of the analytic hypotheses numerically.
    Verify(VerifyArgs),
    /// Evaluate an exponential sum at one point.
    Eval(EvalArgs),
}

fn run(cli: Cli) -> Result<i32> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .with_context(|| format!("{THREADS_ENV} must be a positive integer"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let outcome = match &cli.command {
        Command::AlphaTable { b_min, b_max } => cmd_alpha_table(&cfg, *b_min, *b_max)?,
        Command::Count { set, x, k } => cmd_count(&cfg, set, *x, *k)?,
        Command::Verify(a) => cmd_verify(&cfg, a)?,
        Command::Eval(a) => cmd_eval(&cfg, a)?,
    };
    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    outcome.table.write(&cfg, &mut out)?;
    out.flush()?;
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
