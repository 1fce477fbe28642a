//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ineq_forge::families::FamilyId;
use ineq_forge::search::Problem;

#[derive(Debug, Parser)]
#[command(
    name = "ineq-forge",
    version,
    about = "Hölder- and Minkowski-type inequalities for signed weights"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for randomized commands; recorded in every manifest.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Absolute tolerance for `ratio <= bound + tol`.
    #[arg(
        long,
        global = true,
        default_value_t = 1e-9,
        allow_negative_numbers = true
    )]
    pub tol: f64,
    /// Directory for CSV, SVG and manifest files.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Format of the main result on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl Default for Global {
    fn default() -> Self {
        Global {
            seed: 0,
            tol: 1e-9,
            out_dir: None,
            format: Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one instance file against a theorem.
    Verify(VerifyArgs),
    /// Sweep an explicit family over a parameter grid.
    Family(FamilyArgs),
    /// Search for instances that push a ratio toward its bound.
    Search(SearchArgs),
    /// Evaluate the integral forms on a problem file or built-in demo.
    Integral(IntegralArgs),
    /// Re-render the SVG plot of a CSV table.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Holder,
    Cauchy,
    MultiHolder,
    Minkowski,
    Chebyshev,
    Superadditivity,
    JensenSteffensen,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Instance file (JSON).
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Theorem::Holder)]
    pub theorem: Theorem,
    /// Exponent `p`; the conjugate `q` is derived.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Upper bound `B` of `b` for the Chebyshev-type slack (default: max b).
    #[arg(long = "big-b")]
    pub big_b: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(alias = "holder_collapse")]
    HolderCollapse,
    #[value(alias = "holder_blowup")]
    HolderBlowup,
    #[value(alias = "minkowski_collapse")]
    MinkowskiCollapse,
    #[value(alias = "minkowski_sharp")]
    MinkowskiSharp,
}

impl From<FamilyArg> for FamilyId {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::HolderCollapse => FamilyId::HolderCollapse,
            FamilyArg::HolderBlowup => FamilyId::HolderBlowup,
            FamilyArg::MinkowskiCollapse => FamilyId::MinkowskiCollapse,
            FamilyArg::MinkowskiSharp => FamilyId::MinkowskiSharp,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// First grid value (family-specific default).
    #[arg(long)]
    pub from: Option<f64>,
    /// Last grid value (family-specific default).
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 8)]
    pub points_per_decade: usize,
    /// Explicit grid, comma separated; overrides --from/--to.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub values: Option<Vec<f64>>,
    /// Tail value of `b` for holder-blowup.
    #[arg(long, default_value_t = 1e-12)]
    pub b_tail: f64,
    /// Sequence length for minkowski-collapse.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Holder,
    Cauchy,
    MultiHolder,
    Minkowski,
    /// Every problem in turn.
    All,
}

impl ProblemArg {
    pub fn problems(self) -> Vec<Problem> {
        match self {
            ProblemArg::Holder => vec![Problem::Holder],
            ProblemArg::Cauchy => vec![Problem::Cauchy],
            ProblemArg::MultiHolder => vec![Problem::MultiHolder],
            ProblemArg::Minkowski => vec![Problem::Minkowski],
            ProblemArg::All => Problem::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value_t = ProblemArg::Minkowski)]
    pub problem: ProblemArg,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Lower end of the box (default 0 for minkowski, 0.1 otherwise, since
    /// the other bounds need positive sequences).
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub hi: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Number of sequences for multi-holder.
    #[arg(long, default_value_t = 3)]
    pub sequences: usize,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegralTheorem {
    Holder,
    Minkowski,
    Chebyshev,
}

#[derive(Debug, Clone, Args)]
pub struct IntegralArgs {
    /// Problem file (JSON) or a built-in name: sin, const, piecewise, sin-lemma.
    pub problem: String,
    #[arg(long, value_enum, default_value_t = IntegralTheorem::Minkowski)]
    pub theorem: IntegralTheorem,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Upper bound `B` of `g` for the Chebyshev-type slack (default: max g).
    #[arg(long = "big-b")]
    pub big_b: Option<f64>,
    /// Cell counts to evaluate, comma separated (default N/100, N/10, N).
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// CSV table written by another command.
    pub csv: PathBuf,
    /// Output path (default: the CSV path with an .svg extension).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
