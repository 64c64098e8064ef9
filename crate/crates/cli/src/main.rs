use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lspline_cli::literal::parse_real_list;
use lspline_cli::{run, CliError, Command, EvalGrid, JobConfig};
use lspline_core::kernel::DEFAULT_SAMPLES;

/// Natural L-spline interpolation for fourth-order operators with constant
/// complex coefficients.
///
/// Exit status: 0 success, 1 I/O error, 2 malformed input, 3 knot step not
/// below delta, 4 solver failure, 5 selftest failure. Set LSPLINE_LOG to
/// error, warn, info or debug for diagnostics on stderr.
#[derive(Parser)]
#[command(name = "lspline", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Lambda {
    /// Four complex frequencies, e.g. "0,0,1i,-1i"
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

#[derive(Subcommand)]
enum Sub {
    /// Fit the natural L-spline to a `t,value` CSV file and evaluate it
    Interp {
        #[command(flatten)]
        lambda: Lambda,
        #[arg(long)]
        input: PathBuf,
        /// Number of uniform evaluation points
        #[arg(long, conflicts_with = "at")]
        grid: Option<usize>,
        /// Explicit evaluation points, comma separated
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the step bound, tau expansion, dominance constant and symmetry
    Diag {
        #[command(flatten)]
        lambda: Lambda,
        /// Half-width of the sampled window (defaults to delta)
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the tridiagonal R and banded Q for a knot vector
    Matrices {
        #[command(flatten)]
        lambda: Lambda,
        /// Knots, comma separated
        #[arg(long, allow_hyphen_values = true, required_unless_present = "input")]
        knots: Option<String>,
        /// Take the knots from the first column of a CSV file
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in checks and print a pass/fail table
    Selftest,
}

fn config(sub: Sub) -> Result<JobConfig, CliError> {
    Ok(match sub {
        Sub::Interp { lambda, input, grid, at, out } => JobConfig {
            input_path: Some(input),
            eval_grid: match (grid, at) {
                (_, Some(list)) => Some(EvalGrid::Points(parse_real_list(&list)?)),
                (Some(n), None) => Some(EvalGrid::Count(n)),
                (None, None) => None,
            },
            output_path: out,
            ..JobConfig::new(Command::Interp, lambda.lambda)
        },
        Sub::Diag { lambda, delta, samples, out } => JobConfig {
            delta_override: delta,
            samples,
            output_path: out,
            ..JobConfig::new(Command::Diag, lambda.lambda)
        },
        Sub::Matrices { lambda, knots, input, out } => JobConfig {
            knots: knots.as_deref().map(parse_real_list).transpose()?,
            input_path: input,
            output_path: out,
            ..JobConfig::new(Command::Matrices, lambda.lambda)
        },
        Sub::Selftest => JobConfig::new(Command::Selftest, ""),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LSPLINE_LOG", "warn")).init();
    let cli = Cli::parse();
    match config(cli.command).and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lspline: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
