use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "tregular",
    version,
    about = "Checks and tables for T-regular functions over hypercomplex subspaces",
    after_help = "Exit status: 0 when every check passes, 1 when a mathematical counterexample is found, 2 on usage errors."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Rational,
    Float64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Tk,
    Akbk,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Scalar field for the computation.
    #[arg(long, value_enum, default_value_t = BackendArg::Rational)]
    pub backend: BackendArg,
    /// Output format; each subcommand has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Float tolerance override (ignored by the rational backend).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for every randomized path.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficient tables of the T_k family or of A_k, B_k.
    Table {
        #[arg(long, value_enum, default_value_t = Family::Tk)]
        family: Family,
        #[arg(long, default_value_t = 3)]
        maxdeg: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Regularity (or slice preservation) of a polynomial map on a fan.
    Check {
        /// Fan name such as `H:(1,3)` or `Cl03:paravectors:(0,3)`.
        #[arg(long)]
        fan: String,
        /// PolyMap JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Density of the rational torus grid.
        #[arg(long, conflicts_with = "count")]
        grid: Option<usize>,
        /// Number of random torus points (uses --seed).
        #[arg(long)]
        count: Option<usize>,
        /// Skip the symbolic proof.
        #[arg(long)]
        no_symbolic: bool,
        /// Check slice preservation instead of regularity.
        #[arg(long)]
        slice_preserving: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Expansion of a (1,3)-regular polynomial in the T_k family.
    Expand {
        #[arg(long)]
        input: PathBuf,
        /// Center `a,b` meaning a + bi; rationals as `p/q`.
        #[arg(long, default_value = "0,0")]
        center: String,
        /// Highest degree; defaults to the degree of the input.
        #[arg(long)]
        maxdeg: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Verifies both representation formulas at random exact tuples.
    Represent {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Stem components of a (1,3)-regular polynomial on one slice.
    Stems {
        #[arg(long)]
        input: PathBuf,
        /// Slice unit `a,b` meaning aj + bk; must have norm one.
        #[arg(long, default_value = "1,0")]
        j: String,
        #[command(flatten)]
        common: Common,
    },
    /// Cauchy integral reconstruction error table (float64 only).
    CauchyDemo {
        /// PolyMap JSON file; defaults to a fixed combination of T_k.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of interior points.
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Quadrature orders, comma separated.
        #[arg(long, default_value = "8,16,32")]
        orders: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Interior points satisfy |x| <= this fraction of the radius.
        #[arg(long, default_value_t = 0.7)]
        spread: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Verifies a hypercomplex basis given as JSON or as the basis of a fan.
    BasisVerify {
        #[arg(long, required_unless_present = "fan")]
        input: Option<PathBuf>,
        #[arg(long)]
        fan: Option<String>,
        /// Also attempt the hat extension.
        #[arg(long)]
        hat: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Trace, norm and quadratic cone membership of one element.
    Cone {
        #[arg(long, default_value = "H")]
        algebra: String,
        /// Comma-separated coefficients.
        #[arg(long, required_unless_present = "input")]
        element: Option<String>,
        /// Element JSON file.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the acceptance suite and prints a pass/fail matrix.
    Selftest {
        /// Comma-separated criterion numbers.
        #[arg(long)]
        only: Option<String>,
        /// Extra algebra JSON whose table is put through the law checks.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}
