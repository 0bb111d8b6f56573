use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use blowup_cli::commands::{self, CliError, Report};
use blowup_core::algebra::TransitionMatrix2;
use blowup_core::moduli::PqAssignment;

/// Canonical forms, splitting types and moduli of rank-2 bundles on the
/// blow-up of the plane.
#[derive(Parser)]
#[command(name = "blowup", version)]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Compact JSON (the default).
    #[arg(long, global = true, conflicts_with_all = ["pretty", "summary"])]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true, conflicts_with = "summary")]
    pretty: bool,
    /// Human-readable summary instead of JSON.
    #[arg(long, global = true)]
    summary: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PqArg {
    SplitIsP,
    SplitIsQ,
}

impl From<PqArg> for PqAssignment {
    fn from(p: PqArg) -> Self {
        match p {
            PqArg::SplitIsP => PqAssignment::SplitIsP,
            PqArg::SplitIsQ => PqAssignment::SplitIsQ,
        }
    }
}

/// `--depth`: a positive level or `split`.
#[derive(Clone, Copy)]
struct Depth(Option<u32>);

fn parse_depth(s: &str) -> Result<Depth, String> {
    commands::parse_depth(s).map(Depth)
}

#[derive(Subcommand)]
enum Command {
    /// Reduce each input to canonical form, with the gauge pair.
    Canonicalize {
        /// Bundle documents; `-` reads standard input.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Override the truncation order of the inputs.
        #[arg(long)]
        trunc: Option<u32>,
    },
    /// Splitting type of the restriction to the exceptional divisor.
    SplittingType {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Decide equivalence of two bundles; exits 1 when not equivalent.
    Equivalent {
        a: PathBuf,
        b: PathBuf,
        /// Order to decide at; defaults to the smaller input truncation.
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        trunc: Option<u32>,
        /// Degree width of the witness search; defaults to a width that
        /// always suffices.
        #[arg(long)]
        width: Option<i64>,
    },
    /// Moduli stratum of each input (and its M2 point when j = 2).
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        trunc: Option<u32>,
        /// Which special point of M2 is the split bundle.
        #[arg(long, value_enum, default_value = "split-is-p")]
        p_q_assignment: PqArg,
    },
    /// Random canonical forms, deterministic in the seed.
    Sample {
        #[arg(long)]
        j: u32,
        /// Depth of the first nonzero level, or `split`.
        #[arg(long, default_value = "1", value_parser = parse_depth)]
        depth: Depth,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        trunc: Option<u32>,
    },
    /// Run the randomized self-checks.
    OracleCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|s| text = s)
    };
    res.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn load(path: &Path, trunc: Option<u32>) -> Result<TransitionMatrix2, CliError> {
    commands::load(&read_input(path)?, trunc).map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Run `f` on every file concurrently; results keep the input order.
fn batch<F>(files: &[PathBuf], trunc: Option<u32>, f: F) -> Result<Report, CliError>
where
    F: Fn(&TransitionMatrix2) -> Result<Report, CliError> + Sync,
{
    let results: Vec<Result<Report, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|p| s.spawn(|| f(&load(p, trunc)?))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    if files.len() == 1 {
        return results.into_iter().next().unwrap();
    }
    let mut values = Vec::new();
    let mut lines = Vec::new();
    let mut exit = 0;
    for (path, r) in files.iter().zip(results) {
        let r = r?;
        exit = exit.max(r.exit);
        lines.push(format!("{}: {}", path.display(), r.summary));
        values.push(r.value);
    }
    Ok(Report { value: Value::Array(values), summary: lines.join("\n"), exit })
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Canonicalize { files, trunc } => batch(files, *trunc, commands::canonicalize_cmd),
        Command::SplittingType { files } => batch(files, None, commands::splitting_type_cmd),
        Command::Equivalent { a, b, order, trunc, width } => {
            commands::equivalent_cmd(&load(a, *trunc)?, &load(b, *trunc)?, *order, *width)
        }
        Command::Classify { files, trunc, p_q_assignment } => {
            let pq = PqAssignment::from(*p_q_assignment);
            batch(files, *trunc, |t| commands::classify_cmd(t, pq))
        }
        Command::Sample { j, depth, seed, count, trunc } => commands::sample_cmd(*j, depth.0, *seed, *count, *trunc),
        Command::OracleCheck { seed, count } => commands::oracle_check_cmd(*seed, *count),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = if cli.output.summary {
                report.summary
            } else if cli.output.pretty {
                serde_json::to_string_pretty(&report.value).expect("json values serialize")
            } else {
                serde_json::to_string(&report.value).expect("json values serialize")
            };
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(report.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
