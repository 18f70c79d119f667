//! `lbcv`: classify, verify and tabulate Ricci solitons on the Lorentzian
//! Bianchi-Cartan-Vranceanu spaces.
//!
//! Exit codes: 0 success, 1 residual above tolerance, 2 usage or
//! precondition error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::OutputFormat;

#[derive(Debug, Parser)]
#[command(name = "lbcv", version, about = "Ricci solitons on Lorentzian BCV spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Which soliton type, if any, the space admits.
    Classify(ClassifyArgs),
    /// Check a catalog (or custom affine) field against the soliton equations.
    Verify(VerifyArgs),
    /// Ricci tensor, curvature components and brackets of the space.
    Geometry(GeometryArgs),
    /// Classify and verify over a grid of (lambda, mu).
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct SpaceArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// `xmin:xmax:n` for all axes, or three comma-separated triples.
    #[arg(long, allow_hyphen_values = true, default_value = "-0.9:0.9:5")]
    grid: String,
    /// Seeded random points added to the grid.
    #[arg(long, default_value_t = 100)]
    random_points: usize,
    #[arg(long, env = "BCV_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long = "tol", default_value_t = 1e-9)]
    tolerance: f64,
}

impl SampleArgs {
    fn config(&self, format: OutputFormat) -> Result<commands::RunConfig, commands::CliError> {
        commands::RunConfig::from_args(
            &self.grid,
            self.random_points,
            self.seed,
            self.tolerance,
            format,
        )
    }
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    #[value(name = "1a")]
    Case1a,
    #[value(name = "1b")]
    Case1b,
    #[value(name = "2")]
    Case2,
    #[value(name = "3")]
    Case3,
    /// Affine field from 12 coefficients (X1, X2, X3 each `c0,cx,cy,cz`).
    Custom,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long = "case", value_enum)]
    case: CaseArg,
    /// Family coefficients `a1,a2,...`; drawn from the seed when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<f64>>,
    /// Shift `a` of the case-2 field.
    #[arg(long = "a", allow_hyphen_values = true)]
    shift: Option<f64>,
    /// Soliton constant for case 3 and custom fields.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[command(flatten)]
    sample: SampleArgs,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct GeometryArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Reference point `x,y,z` for the bracket structure functions.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.25,-0.5,0")]
    point: Vec<f64>,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// `min:max:n` (n = 0 gives an empty sweep).
    #[arg(long, allow_hyphen_values = true, default_value = "0:2:3")]
    lambda_range: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-1:1:3")]
    mu_range: String,
    #[command(flatten)]
    sample: SampleArgs,
    #[command(flatten)]
    format: FormatArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = lbcv::geometry::check_conventions() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let outcome = match cli.command {
        Command::Classify(a) => commands::classify(a.space.lambda, a.space.mu, a.format.format),
        Command::Verify(a) => a.sample.config(a.format.format).and_then(|config| {
            let req = commands::VerifyRequest {
                lambda: a.space.lambda,
                mu: a.space.mu,
                case: a.case,
                coeffs: a.coeffs,
                shift: a.shift,
                gamma: a.gamma,
            };
            commands::verify(req, config)
        }),
        Command::Geometry(a) => {
            commands::geometry(a.space.lambda, a.space.mu, &a.point, a.format.format)
        }
        Command::Sweep(a) => a
            .sample
            .config(a.format.format)
            .and_then(|config| commands::sweep(&a.lambda_range, &a.mu_range, config)),
    };
    match outcome {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run `lbcv --help` for usage");
            ExitCode::from(2)
        }
    }
}
