//! `lfmo`: sampling, exact formulas, limit laws and experiments for
//! Lévy-frailty Marshall–Olkin distributions.
//!
//! Times are in subordinator time units. The dimension is given either
//! exactly (`--n`) or as `--log10n`.

mod commands;
mod model;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "lfmo", version, about = "Lévy-frailty Marshall–Olkin toolkit", propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed; every run with a fixed seed is deterministic
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct DimensionArg {
    /// Exact number of components n
    #[arg(long)]
    pub n: Option<u64>,
    /// Dimension on log scale: n = 10^LOG10N (sampling only; exact formulas refuse it)
    #[arg(long = "log10n")]
    pub log10n: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArg {
    /// Subordinator: JSON (e.g. '{"kind":"cpp","lambda":1,"step":{"kind":"pareto","alpha":2.5}}'),
    /// @FILE holding such JSON, or shorthand 'pareto:LAMBDA:ALPHA' / 'drift:C'
    #[arg(long)]
    pub model: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample the top order statistics T_{n:n} >= T_{n-1:n} >= ... (times in subordinator units)
    Sample {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        dim: DimensionArg,
        /// Number of top order statistics per draw
        #[arg(long, default_value_t = 1)]
        top: usize,
        /// Number of independent draws
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact P(T_{m:n} > t) on a grid of times t (subordinator units, n <= 30)
    Tail {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        dim: DimensionArg,
        /// Order index m in [1, n]
        #[arg(long)]
        m: u64,
        /// Comma-separated times t >= 0
        #[arg(long = "t-grid", value_delimiter = ',', required = true)]
        t_grid: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact E T_{n:n} in subordinator time units (n <= 30)
    MeanLast {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        dim: DimensionArg,
        #[command(flatten)]
        common: Common,
    },
    /// Marshall-Olkin shock rates lambda_(v), v = 1..n, per unit subordinator time (n <= 30)
    ShockRates {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        dim: DimensionArg,
        #[command(flatten)]
        common: Common,
    },
    /// Print the large-n limit law and its normalization constants as JSON
    Limit {
        #[command(flatten)]
        model: ModelArg,
        /// Part-2 divisor exponent (defaults to alpha)
        #[arg(long)]
        part2_exponent: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo experiment from a JSON config; writes CSV (and SVG) outputs
    Experiment {
        /// Experiment config file (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Directory for samples.csv, summary.csv and ecdf.svg (overrides paths in the config)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; results do not depend on this
        #[arg(long, env = "LFMO_THREADS")]
        workers: Option<usize>,
        /// Override the config seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the lemma suite, the proof decomposition and the MO-equivalence checks
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Paths per decomposition estimate
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        /// Draws per side for the MO-equivalence check
        #[arg(long, default_value_t = 1_000_000)]
        mo_runs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert stable parameters between conventions (whitt451, nolan1, nolan0)
    ConvertStableParams {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Sup-distance between the law of (max of n Exp(1)) - log n and the standard Gumbel law
    GumbelBound {
        /// Exact n >= 2
        #[arg(long)]
        n: u64,
    },
    /// Recompute summary statistics of a `sample --format json` file
    Summarize {
        /// JSON file written by `sample --format json`
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
