//! `unichan`: bound curves, exhaustive verification, zero-error LPs and
//! session traces from the command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 counterexample found,
//! 3 verification inconclusive.

mod campaign;
mod jobs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jobs::{JobOutput, StrategySpec, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(
    name = "unichan",
    version,
    about = "Feedback coding over q-ary Z, inverse-Z and unidirectional channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelName {
    Z,
    Invz,
    Sym,
    Star,
}

impl ChannelName {
    fn as_str(self) -> &'static str {
        match self {
            ChannelName::Z => "z",
            ChannelName::Invz => "invz",
            ChannelName::Sym => "sym",
            ChannelName::Star => "star",
        }
    }
}

#[derive(clap::Args)]
struct StrategyArgs {
    /// identity, zero-error, rubber, rubber-invz or uni-rubber
    #[arg(long)]
    strategy: String,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    /// Errors per block.
    #[arg(long)]
    t: usize,
    /// Rubber run length (default 2).
    #[arg(long)]
    r: Option<usize>,
}

impl StrategyArgs {
    fn spec(&self, messages: Option<num_bigint::BigUint>) -> StrategySpec {
        StrategySpec {
            name: self.strategy.clone(),
            q: self.q,
            n: self.n,
            t: self.t,
            r: self.r,
            messages,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the bound curves for one alphabet size as CSV.
    Curves {
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustively verify a strategy against every admissible adversary.
    Verify {
        #[command(flatten)]
        strategy: StrategyArgs,
        /// Message count for the identity code (default q^n).
        #[arg(long)]
        messages: Option<String>,
        /// Node budget; running out makes the result inconclusive.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the zero-error LP of a channel graph.
    Zcap {
        #[arg(long, value_enum)]
        channel: ChannelName,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one block against an adversary and print the transcript.
    Session {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long)]
        message: String,
        /// greedy, passive or path:<comma-separated offsets>
        #[arg(long, default_value = "greedy")]
        adversary: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every job of a TOML campaign file.
    Campaign {
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Sidecar log with timings (default: <config>.log).
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

fn emit(output: JobOutput, out: Option<&PathBuf>) -> Result<i32, String> {
    match out {
        Some(path) => {
            jobs::write_artifact(path, &output.artifact)?;
            println!("{}", output.summary);
        }
        None => print!("{}", output.artifact),
    }
    Ok(output.status.exit_code())
}

fn run(command: Command) -> Result<i32, String> {
    match command {
        Command::Curves { q, step, out } => emit(jobs::curves(q, step)?, Some(&out)),
        Command::Verify {
            strategy,
            messages,
            budget,
            out,
        } => {
            let messages = messages.as_deref().map(jobs::parse_message).transpose()?;
            if budget == 0 {
                return Err("--budget must be positive".into());
            }
            emit(
                jobs::verify(&strategy.spec(messages), budget, true)?,
                Some(&out),
            )
        }
        Command::Zcap { channel, q, out } => emit(jobs::zcap(channel.as_str(), q)?, out.as_ref()),
        Command::Session {
            strategy,
            message,
            adversary,
            out,
        } => {
            let message = jobs::parse_message(&message)?;
            emit(
                jobs::session(&strategy.spec(None), &message, &adversary)?,
                out.as_ref(),
            )
        }
        Command::Campaign {
            config,
            workers,
            log,
        } => {
            if workers == 0 {
                return Err("--workers must be positive".into());
            }
            campaign::run(&config, workers, log.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
