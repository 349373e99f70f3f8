//! `csub`: generate words, autocorrelations, verdicts, spectra and Delone
//! audits for substitutions on compact alphabets.
//!
//! Exit codes: 0 success, 1 hypothesis violation, 2 usage or config error,
//! 3 failed self-test criteria, 4 other runtime errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "csub", version, about = "Substitutions on compact alphabets")]
pub struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Embedded rule: rho1, rho2, spin, extnat, cyclic(n), c2xs1.
    #[arg(long, conflicts_with = "config")]
    pub builtin: Option<String>,

    /// Rule file.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Character: an integer, `trivial`, or comma-separated indices for products.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<String>,

    /// Value of φ; a float, or `p/q` / an exact decimal with --rational.
    #[arg(long)]
    pub phi: Option<String>,

    /// Treat φ as irrational (default).
    #[arg(long, conflicts_with = "rational")]
    pub irrational: bool,

    /// Treat φ as an exact rational.
    #[arg(long)]
    pub rational: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMethod {
    /// Exact recurrence for translation rules, coincidence scaling for
    /// rules with constant columns, empirical averages otherwise.
    Auto,
    Exact,
    Empirical,
    Coincidence,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a rule or a window of its generated word.
    Orbit {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
        /// Print the rule in multiplicative notation and exit.
        #[arg(long)]
        show_rule: bool,
        /// Half-width of the pseudo-fixed window.
        #[arg(long, default_value_t = 32)]
        radius: u64,
        /// Iterations for spin and ℕ₀∪{∞} rules.
        #[arg(long, default_value_t = 6)]
        iterations: u32,
        /// Seed letter of the pseudo-fixed word (identity by default).
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
    },
    /// Autocorrelation coefficients η(m).
    Eta {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = 64)]
        max_lag: usize,
        #[arg(long, value_enum, default_value_t = EtaMethod::Auto)]
        method: EtaMethod,
        /// Averaging half-width N for empirical values.
        #[arg(long, default_value_t = 1 << 16)]
        radius: usize,
        /// Also print negative lags.
        #[arg(long)]
        symmetric: bool,
        /// Report the ε-almost periods in [-max-lag, max-lag] as JSON instead.
        #[arg(long)]
        almost_periods: Option<f64>,
    },
    /// Spectral verdict for a character, as JSON.
    Classify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Fejér-smoothed diffraction density on a grid.
    Spectrum {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
        /// Fejér order K.
        #[arg(long, default_value_t = 1024)]
        k: usize,
        /// Grid size G (power of two, at least 2K).
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = EtaMethod::Auto)]
        method: EtaMethod,
        #[arg(long, default_value_t = 1 << 16)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Partial Riesz product Π_{m<M} (1 + cos 2π(a + 2^m t)).
    Riesz {
        #[command(flatten)]
        output: Output,
        /// Shift a, e.g. `2phi` or `1/3`.
        #[arg(long, allow_hyphen_values = true)]
        angle: String,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        rational: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Length operator of the ℕ₀∪{∞} example.
    Geometry {
        #[command(subcommand)]
        action: GeometryCommand,
    },
    /// Delone set of the ℕ₀∪{∞} example.
    Delone {
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = 6)]
        iters: usize,
        /// Keep only this many tiles left of 0.
        #[arg(long)]
        left: Option<usize>,
        /// Keep only this many tiles right of 0.
        #[arg(long)]
        right: Option<usize>,
        /// Write the JSON audit report instead of the point list.
        #[arg(long)]
        audit: bool,
        /// With --audit, also write the point list here.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Selftest {
        #[command(flatten)]
        output: Output,
        /// Run only these criteria.
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum GeometryCommand {
    /// Power iteration for the Perron eigenvalue and length function.
    Eig {
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = 40)]
        cap: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
    },
    /// Exact letter proportions in the image of 0 under a power of the rule.
    Freq {
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = 14)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("error: --threads must be positive");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(4);
    }
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
