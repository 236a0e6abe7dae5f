//! `qfunc`: command-line front end.
//!
//! Exit status is 0 on success, 1 when `verify` (or `report`) sees a failing
//! record, and 2 for usage, input or configuration errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qfunc::config::{AlgebraMode, QParam, Suite};

#[derive(Parser, Debug)]
#[command(name = "qfunc", version, about = "Quantized function algebras at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Entire,
    Taylor,
    Polydisk,
    Popescu,
    #[value(name = "1")]
    L1,
    #[value(name = "2")]
    L2,
    #[value(name = "inf")]
    Sup,
    Torus,
}

/// Flags shared by the algebra commands.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Number of generators.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Deformation parameter: `num/den` selects exact arithmetic, a decimal selects floats.
    #[arg(long, default_value = "0.5", value_parser = parse_q)]
    pub q: QParam,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal-order an expression in the quantum affine space or quantum torus.
    NormalOrder {
        /// Source algebra of the expression: `free` or `affine` words are
        /// reduced to `x^α`, `torus` allows inverse generators.
        #[arg(long, default_value = "free", value_parser = parse_mode)]
        mode: AlgebraMode,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Rewrite a star-word expression to the basis `z^α (z*)^β`.
    StarNormalOrder {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Strategy::Leftmost)]
        strategy: Strategy,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate one seminorm of an expression.
    Seminorm {
        #[arg(long, default_value = "free", value_parser = parse_mode)]
        mode: AlgebraMode,
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        rho2: Option<f64>,
        /// Radius of the ambient algebra (taylor, polydisk) or of the free ball (popescu).
        #[arg(long)]
        r: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Operator norm of an affine element in the truncated Fock representation.
    RepNorm {
        #[arg(long)]
        expr: String,
        /// Truncation degree.
        #[arg(long = "N")]
        cutoff: usize,
        /// Apply the scaling automorphism `z ↦ r z` first, giving the ball seminorm.
        #[arg(long)]
        r: Option<f64>,
        /// Write the represented matrix as `row col re im` triplets to this file.
        #[arg(long)]
        triplets: Option<PathBuf>,
        /// Largest Fock dimension to build.
        #[arg(long, default_value_t = 1 << 22)]
        budget: u128,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a series at a matrix tuple.
    Eval {
        /// Series JSON, inline or as a file path.
        #[arg(long)]
        series: String,
        /// Matrix tuple JSON, inline or as a file path.
        #[arg(long)]
        tuple: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Joint spectral radius bounds of a matrix tuple.
    Jsr {
        #[arg(long)]
        tuple: String,
        #[arg(long, default_value_t = 12)]
        kmax: usize,
        /// Largest number of products to enumerate.
        #[arg(long, default_value_t = 1 << 22)]
        budget: u128,
        /// Also decide strict `r`-contractivity.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Re-emit a saved JSON report in another format.
    Report {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Overrides of a suite's default configuration.
#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    pub suite: Suite,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = parse_q)]
    pub q: Option<QParam>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<AlgebraMode>,
    #[arg(long = "N")]
    pub cutoff: Option<usize>,
    /// Comma-separated list.
    #[arg(long)]
    pub rho: Option<String>,
    #[arg(long)]
    pub rho2: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub deg: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub budget: Option<u128>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_q(s: &str) -> Result<QParam, String> {
    s.parse().map_err(|e: qfunc::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<AlgebraMode, String> {
    s.parse().map_err(|e: qfunc::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: qfunc::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::NormalOrder { mode, expr, common } => commands::normal_order(mode, &expr, &common),
        Command::StarNormalOrder { expr, strategy, common } => commands::star_normal_order(&expr, strategy, &common),
        Command::Seminorm { mode, family, expr, rho, rho2, r, common } => {
            commands::seminorm(mode, family, &expr, commands::Radii { rho, rho2, r }, &common)
        }
        Command::RepNorm { expr, cutoff, r, triplets, budget, common } => {
            commands::rep_norm(&expr, cutoff, r, triplets.as_deref(), budget, &common)
        }
        Command::Eval { series, tuple, format, out } => {
            commands::eval(&series, &tuple, format).map(|s| commands::Outcome::ok(s, out))
        }
        Command::Jsr { tuple, kmax, budget, r, format, out } => {
            commands::jsr(&tuple, kmax, budget, r, format).map(|s| commands::Outcome::ok(s, out))
        }
        Command::Verify(args) => commands::verify(&args),
        Command::Report { input, format, out } => commands::report(&input, format, out),
    };
    match result.and_then(commands::Outcome::finish) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
