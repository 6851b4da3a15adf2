mod bench;
mod compute;
mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sixvertex::oracles::{run_suite, to_json_lines, SuiteName, SuiteOptions, Tally};

use crate::compute::{report_error, Overrides, EXIT_INPUT, EXIT_OK};
use crate::config::{MethodChoice, Mode};

#[derive(Parser)]
#[command(name = "sixvertex", version, about = "Partition functions of the rational six-vertex model with rank-1 boundary twists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the partition function described by a JSON job file.
    Compute {
        config: PathBuf,
        /// One method name, or `all`.
        #[arg(long, value_parser = clap::value_parser!(MethodChoiceArg))]
        method: Option<MethodChoiceArg>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite and stream JSON-line reports.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: SuiteName,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Time methods over a range of square lattice sizes; CSV on stdout.
    Bench {
        /// `A..B`, `N`, or `N1,N2,...`.
        #[arg(long, allow_hyphen_values = true)]
        sizes: String,
        /// Comma-separated method names.
        #[arg(long)]
        methods: String,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone)]
struct MethodChoiceArg(MethodChoice);

impl std::str::FromStr for MethodChoiceArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(MethodChoiceArg)
    }
}

fn parse_suite(s: &str) -> Result<SuiteName, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = SuiteName::ALL.iter().map(|n| n.name()).collect();
        format!("unknown suite '{s}', expected one of {}", names.join(", "))
    })
}

fn verify(suite: SuiteName, seed: u64, opts: SuiteOptions) -> u8 {
    let reports = match run_suite(suite, seed, &opts) {
        Ok(r) => r,
        Err(e) => return report_error(&e).min(EXIT_INPUT),
    };
    print!("{}", to_json_lines(&reports));
    let tally = Tally::of(&reports);
    eprintln!("{suite}: {} pass, {} fail, {} skipped-degenerate", tally.pass, tally.fail, tally.skipped);
    if tally.all_pass() {
        EXIT_OK
    } else {
        EXIT_INPUT
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Compute { config, method, mode, output } => match config::load(&config) {
            Ok(job) => compute::run(job, Overrides { method: method.map(|m| m.0), mode, output }),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        },
        Command::Verify { suite, seed, max_size, instances } => {
            verify(suite, seed, SuiteOptions { max_size, instances })
        }
        Command::Bench { sizes, methods, mode, seed } => {
            match (bench::parse_sizes(&sizes), bench::parse_methods(&methods)) {
                (Ok(sizes), Ok(methods)) => bench::run(&sizes, &methods, mode, seed),
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("error: {e}");
                    EXIT_INPUT
                }
            }
        }
    };
    ExitCode::from(code)
}
