//! `cellnet` command-line tool.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cellnet", version, about = "Coupled cell network analysis")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "CELLNET_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network file.
    Validate { network: PathBuf },
    /// List balanced partitions.
    Synchronies {
        network: PathBuf,
        /// Partition to test, e.g. "{v1 v2 | v3}".
        #[arg(long)]
        check: Option<String>,
    },
    /// Quotient network by a balanced partition.
    Quotient { network: PathBuf, partition: String },
    /// Semigroup table and fundamental network.
    Fundamental {
        network: PathBuf,
        /// Restrict to one cell color (nonhomogeneous networks).
        #[arg(long)]
        color: Option<String>,
        #[arg(long)]
        check_double: bool,
    },
    /// Graph fibrations between two networks.
    Fibrations {
        source: PathBuf,
        target: Option<PathBuf>,
        /// Self-fibrations of the source.
        #[arg(long = "self")]
        self_maps: bool,
    },
    /// Integrate the admissible system.
    Simulate {
        network: PathBuf,
        response: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Vec<f64>,
        #[arg(long = "T", default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
    },
    /// Jacobian, spectrum and generalized eigenspaces.
    Linearize {
        network: PathBuf,
        response: PathBuf,
        /// State, as one value for every coordinate or a full list.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        at: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
    },
    /// Steady-state branches near the trivial solution.
    Branches(BranchArgs),
    /// Interior symmetries over a set of cells.
    Interior {
        network: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<String>,
        /// Print the connected-sum network instead.
        #[arg(long)]
        sum: bool,
    },
}

#[derive(Args)]
struct BranchArgs {
    network: PathBuf,
    /// One-parameter response; defaults to the built-in quadratic.
    #[arg(long)]
    resp: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-2)]
    lmax: f64,
    #[arg(long, default_value_t = 1e-5)]
    lmin: f64,
    #[arg(long, default_value_t = 16)]
    points: usize,
    #[arg(long, default_value_t = 200)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn dispatch(cli: &Cli) -> commands::Result<commands::Report> {
    use commands as c;
    match &cli.command {
        Command::Validate { network } => c::validate(network),
        Command::Synchronies { network, check } => c::synchronies(network, check.as_deref()),
        Command::Quotient { network, partition } => c::quotient(network, partition),
        Command::Fundamental { network, color, check_double } => {
            c::fundamental(network, color.as_deref(), *check_double)
        }
        Command::Fibrations { source, target, self_maps } => c::fibrations(source, target.as_deref(), *self_maps),
        Command::Simulate { network, response, x0, t_end, dt, lambda } => {
            c::simulate(network, response, x0, *t_end, *dt, lambda)
        }
        Command::Linearize { network, response, at, lambda } => c::linearize(network, response, at, lambda),
        Command::Branches(a) => c::branches(&c::BranchOptions {
            network: &a.network,
            response: a.resp.as_deref(),
            lambda_max: a.lmax,
            lambda_min: a.lmin,
            points: a.points,
            starts: a.starts,
            seed: a.seed,
        }),
        Command::Interior { network, subset, sum } => c::interior(network, subset, *sum),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(report) => {
            let out = if cli.json {
                serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n"
            } else {
                report.text
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
