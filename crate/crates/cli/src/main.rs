use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fss_cli::{cmd_decompose, cmd_from_permutation_group, cmd_verify, report_json, CliError, RunConfig, TerminalDimMode};
use fss_core::fss::{TransversalStrategy, VerifyMode};
use fss_core::FieldSpec;

#[derive(Parser)]
#[command(name = "fss", version, about = "Exact Frobenius-Schreier-Sims decomposition of matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Verify {
    Full,
    Fast,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Transversal {
    SpinWords,
    Frame,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the algebra described by an input document.
    Decompose {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        max_levels: usize,
        #[arg(long, default_value_t = 32)]
        budget: usize,
        #[arg(long, value_enum, default_value = "full")]
        verify: Verify,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "oracle")]
        terminal_dim: TerminalDimMode,
        #[arg(long, value_enum, default_value = "spin-words")]
        transversal: Transversal,
        /// Include wall-clock timings (the report is then no longer byte-stable).
        #[arg(long)]
        timings: bool,
    },
    /// Write an input document for a permutation group given in cycle notation.
    FromPerm {
        /// Generators such as "(1,2,3,4)(1,3)" or "[(1,2)(3,4)] (1,3)".
        generators: String,
        #[arg(long)]
        out: PathBuf,
        /// A prime p for GF(p); the rationals when omitted.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Re-run a decomposition and compare it with a saved report.
    Verify { report: PathBuf, input: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose { input, seed, max_levels, budget, verify, report, terminal_dim, transversal, timings } => {
            let config = RunConfig {
                seed,
                max_levels,
                budget,
                verify: match verify {
                    Verify::Full => VerifyMode::Full,
                    Verify::Fast => VerifyMode::Fast,
                },
                terminal_dim,
                transversal: match transversal {
                    Transversal::SpinWords => TransversalStrategy::SpinWords,
                    Transversal::Frame => TransversalStrategy::Frame,
                },
            };
            let r = cmd_decompose(&input, &config, report.as_deref(), timings)?;
            if report.is_some() {
                eprint!("{}", r.summary());
            } else {
                print!("{}", report_json(&r));
            }
            Ok(())
        }
        Command::FromPerm { generators, out, prime } => {
            let field = match prime {
                Some(p) => FieldSpec::prime(p)?,
                None => FieldSpec::Rational,
            };
            cmd_from_permutation_group(&generators, field, &out)?;
            Ok(())
        }
        Command::Verify { report, input } => {
            cmd_verify(&report, &input)?;
            eprintln!("report verified");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
