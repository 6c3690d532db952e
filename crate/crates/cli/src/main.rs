//! `dunkl`: evaluate Bessel kernels and Hankel transforms, and run the
//! verification suites, printing versioned JSON reports or CSV curves.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dunkl_hankel::quadrature::QuadratureSpec;

#[derive(Parser, Debug)]
#[command(name = "dunkl", version, about = "Dunkl operators, Bessel kernels and Hankel transform checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// φ_λ(x) at a point, or along an x grid.
    EvalPhi(EvalArgs),
    /// ψ_λ(x) at a point, or along an x grid.
    EvalPsi(EvalArgs),
    /// ℱ(p e^{-x²})(λ) by quadrature against the exact oracle.
    Transform(TransformArgs),
    /// Nonsymmetric and symmetric master formulas at one point.
    VerifyMaster(MasterArgs),
    /// The six operator-transform identities.
    VerifyOperators(KArgs),
    /// Plancherel and adjointness for a pair of Gaussian polynomials.
    VerifyPlancherel(PlancherelArgs),
    /// Both inversion round trips on x^j e^{-x²}, j <= nmax.
    VerifyInversion(InversionArgs),
    /// Matrices, kernel and exact checks of the truncated module.
    TruncatedReport(TruncatedArgs),
    /// Every transform and truncated check at the default grids.
    FullSuite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file. Without it, output goes to `$DUNKL_OUT_DIR/<command>.<ext>` if set, else stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, env = "DUNKL_OUT_DIR", hide_env_values = true)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct QuadArgs {
    /// Relative tolerance of the quadrature refinement.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Truncation radius; derived from the tail bound when omitted.
    #[arg(long)]
    pub radius: Option<f64>,
}

impl QuadArgs {
    pub fn spec(&self) -> QuadratureSpec {
        let mut q = QuadratureSpec::default();
        if let Some(t) = self.rel_tol {
            q = q.with_rel_tol(t);
        }
        if let Some(r) = self.radius {
            q = q.with_radius(r);
        }
        q
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "grid")]
    pub x: Option<f64>,
    /// `start:stop:count`, evaluated instead of `--x`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "x")]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    /// Coefficients of p in ascending powers, comma separated.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub poly: String,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "grid")]
    pub lambda: Option<f64>,
    /// `start:stop:count` of λ values, used instead of `--lambda`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda")]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MasterArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct KArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PlancherelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    /// Coefficients of the first polynomial factor.
    #[arg(long, default_value = "1,0,1", allow_hyphen_values = true)]
    pub poly: String,
    /// Coefficients of the second polynomial factor.
    #[arg(long, default_value = "0,1,0,1", allow_hyphen_values = true)]
    pub poly2: String,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct InversionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub k: f64,
    /// Largest monomial degree.
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TruncatedArgs {
    /// Truncation index; k = -n - 1/2 is implied.
    #[arg(long, required_unless_present = "nmax")]
    pub n: Option<usize>,
    /// Report every n in 0..=nmax instead.
    #[arg(long, conflicts_with = "n")]
    pub nmax: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Restrict the numeric suites to one k (default: 0.25, 1, 2.5).
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Largest truncation index.
    #[arg(long, default_value_t = 10)]
    pub nmax: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, output, result) = match &cli.command {
        Command::EvalPhi(a) => ("eval-phi", &a.output, commands::eval(a, commands::Kernel::Phi)),
        Command::EvalPsi(a) => ("eval-psi", &a.output, commands::eval(a, commands::Kernel::Psi)),
        Command::Transform(a) => ("transform", &a.output, commands::transform(a)),
        Command::VerifyMaster(a) => ("verify-master", &a.output, commands::verify_master(a)),
        Command::VerifyOperators(a) => ("verify-operators", &a.output, commands::verify_operators(a)),
        Command::VerifyPlancherel(a) => ("verify-plancherel", &a.output, commands::verify_plancherel(a)),
        Command::VerifyInversion(a) => ("verify-inversion", &a.output, commands::verify_inversion(a)),
        Command::TruncatedReport(a) => ("truncated-report", &a.output, commands::truncated_report(a)),
        Command::FullSuite(a) => ("full-suite", &a.output, commands::full_suite(a)),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code);
        }
    };
    if let Err(msg) = commands::emit(name, output, &outcome.text) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
