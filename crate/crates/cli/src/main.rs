//! Command-line front end for certified rectangle cubature.
//!
//! Subcommands: `integrate`, `bound`, `optimize`, `verify`, `convergence`.
//! Results go to stdout; diagnostics and warnings go to stderr. Exit codes:
//! 0 success, 2 input error, 3 verification failure, 4 numerical failure.

mod commands;
mod json;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ostrocube::{Error, QuadConfig};

use commands::CommandOutput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Midpoint,
    Trapezoid,
    Optimal,
    Custom,
}

impl Mode {
    fn as_str(&self) -> &'static str {
        match self {
            Mode::Midpoint => "midpoint",
            Mode::Trapezoid => "trapezoid",
            Mode::Optimal => "optimal",
            Mode::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct QuadOpts {
    /// Gauss-Legendre nodes per panel for line integrals
    #[arg(long, default_value_t = 16)]
    gauss_order: usize,

    /// Uniform panels per line integral
    #[arg(long, default_value_t = 4)]
    panels: usize,
}

impl QuadOpts {
    fn config(&self) -> Result<QuadConfig, Error> {
        QuadConfig::new(self.gauss_order, self.panels)
    }
}

/// Certified cubature over rectangles: rule values paired with closed-form
/// error ceilings.
///
/// Expression grammar: `+ - * / ^` with `^` right-associative and binding
/// tighter than unary minus (so `-x^2` is `-(x^2)`); functions sin, cos,
/// exp, log, sqrt, abs; identifiers x, y, pi, e; decimal literals.
/// A bound is a certificate only when --supnorm is supplied (the caller
/// asserts `|d²f/dxdy| <= M` on the rectangle); otherwise the sup-norm is
/// estimated by sampling and the bound is labelled an estimate.
#[derive(Debug, Parser)]
#[command(name = "ostrocube", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate an expression with a certified (or clearly-labelled
    /// estimated) error bound on a uniform composite grid
    Integrate {
        /// Expression in x and y, e.g. "x^2*y^2"
        expr: String,

        /// Rectangle limits a b c d for `[a,b] x [c,d]`
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, required = true)]
        rect: Vec<f64>,

        /// Per-cell parameter placement
        #[arg(long, value_enum, default_value_t = Mode::Optimal)]
        mode: Mode,

        /// Absolute parameters (alpha1 beta1 alpha2 beta2) on the whole
        /// rectangle; required for --mode custom, replayed per cell as
        /// fractions
        #[arg(long, num_args = 4, value_names = ["A1", "B1", "A2", "B2"], allow_negative_numbers = true)]
        theta: Option<Vec<f64>>,

        /// Composite grid m n
        #[arg(long, num_args = 2, value_names = ["M", "N"], default_values_t = [1u32, 1u32])]
        grid: Vec<u32>,

        /// Certified bound on |d²f/dxdy| over the rectangle
        #[arg(long, allow_negative_numbers = true)]
        supnorm: Option<f64>,

        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,

        /// Evaluate composite cells on a thread pool (bit-identical output)
        #[arg(long)]
        parallel: bool,

        #[command(flatten)]
        quad: QuadOpts,
    },

    /// Evaluate the closed-form error bound for explicit parameters
    Bound {
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, required = true)]
        rect: Vec<f64>,

        /// Parameters alpha1 beta1 alpha2 beta2
        #[arg(long, num_args = 4, value_names = ["A1", "B1", "A2", "B2"], allow_negative_numbers = true, required = true)]
        theta: Vec<f64>,

        /// Certified bound on |d²f/dxdy| over the rectangle
        #[arg(long, allow_negative_numbers = true, required = true)]
        supnorm: f64,

        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },

    /// Print the bound-minimising parameters and their improvement over the
    /// classical choices
    Optimize {
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, required = true)]
        rect: Vec<f64>,

        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },

    /// Check the rule's error representation and bound validity on random
    /// parameter draws
    Verify {
        /// Expression in x and y; must be symbolically differentiable
        expr: String,

        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, required = true)]
        rect: Vec<f64>,

        /// Number of random parameter draws
        #[arg(long, default_value_t = 20)]
        trials: u32,

        /// Seed for the parameter generator
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Largest acceptable identity residual
        #[arg(long, default_value_t = commands::VERIFY_RESIDUAL_THRESHOLD)]
        threshold: f64,

        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,

        #[command(flatten)]
        quad: QuadOpts,
    },

    /// Tabulate value, bound and true error over doubling grids
    /// (1x1, 2x2, 4x4, ...)
    Convergence {
        /// Expression in x and y
        expr: String,

        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, required = true)]
        rect: Vec<f64>,

        /// Number of doubling levels (1 to 8)
        #[arg(long, default_value_t = 5)]
        max_level: u32,

        #[arg(long, value_enum, default_value_t = Mode::Optimal)]
        mode: Mode,

        /// Absolute parameters for --mode custom
        #[arg(long, num_args = 4, value_names = ["A1", "B1", "A2", "B2"], allow_negative_numbers = true)]
        theta: Option<Vec<f64>>,

        /// Certified bound on |d²f/dxdy| over the rectangle
        #[arg(long, allow_negative_numbers = true)]
        supnorm: Option<f64>,

        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,

        #[command(flatten)]
        quad: QuadOpts,
    },
}

/// Exit code class of a library error: 2 input, 4 numerical.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidRectangle { .. }
        | Error::ParamOutOfRange { .. }
        | Error::OutOfDomain { .. }
        | Error::UnsupportedOrder { .. }
        | Error::InvalidConfig { .. }
        | Error::MissingMixedPartial
        | Error::ToleranceTooTight { .. }
        | Error::StencilOutOfDomain { .. }
        | Error::Parse { .. }
        | Error::UnsupportedDerivative { .. }
        | Error::InvalidInput(_) => 2,
        Error::QuadratureFailure { .. }
        | Error::NonFiniteEvaluation { .. }
        | Error::OracleNonConvergent { .. }
        | Error::EvalDomain { .. } => 4,
        Error::CellFailure { source, .. } => exit_code_for(source),
    }
}

fn emit(output: CommandOutput, format: Format) -> Result<u8, Error> {
    match format {
        Format::Json => {
            // warnings are embedded in the record itself
            println!("{}", output.json);
        }
        Format::Table => {
            print!("{}", output.table);
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
        }
        Format::Csv => {
            let csv = output.csv.ok_or_else(|| {
                Error::InvalidInput("--format csv is only available for convergence".into())
            })?;
            print!("{csv}");
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
        }
    }
    Ok(output.exit)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Integrate {
            expr,
            rect,
            mode,
            theta,
            grid,
            supnorm,
            format,
            parallel,
            quad,
        } => {
            let output = commands::cmd_integrate(
                &expr,
                &rect,
                mode.as_str(),
                theta.as_deref(),
                (grid[0], grid[1]),
                supnorm,
                quad.config()?,
                parallel,
            )?;
            emit(output, format)
        }
        Command::Bound {
            rect,
            theta,
            supnorm,
            format,
        } => emit(commands::cmd_bound(&rect, &theta, supnorm)?, format),
        Command::Optimize { rect, format } => emit(commands::cmd_optimize(&rect)?, format),
        Command::Verify {
            expr,
            rect,
            trials,
            seed,
            threshold,
            format,
            quad,
        } => emit(
            commands::cmd_verify(&expr, &rect, trials, seed, threshold, quad.config()?)?,
            format,
        ),
        Command::Convergence {
            expr,
            rect,
            max_level,
            mode,
            theta,
            supnorm,
            format,
            quad,
        } => emit(
            commands::cmd_convergence(
                &expr,
                &rect,
                max_level,
                mode.as_str(),
                theta.as_deref(),
                supnorm,
                quad.config()?,
            )?,
            format,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
