use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "heckespec", version, about = "Corner Hecke representations, chain Hamiltonians and their spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predicted and numeric spectrum of H_(k,l)(q) at each q.
    Spectrum(Common),
    /// Run identity checks over the q list.
    Verify(VerifyArgs),
    /// Print generator and Hamiltonian matrices.
    Dump(DumpArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub l: usize,
    /// Deformation parameter: `a/b`, an integer, or a decimal. Repeatable.
    #[arg(long = "q", required = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Vec<String>,
    /// Defaults to exact when every q is rational.
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "HECKESPEC_DIM_CAP")]
    pub dim_cap: Option<usize>,
    /// Pass threshold for floating point residuals.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Record wall-clock time per check (makes output nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated subset; defaults to every check valid for the shape.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<CheckKind>,
    /// Second parameter for the commuting-family check.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub common: Common,
    /// `sigma:P`, `hamiltonian` or `all`.
    #[arg(long, default_value = "all")]
    pub what: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Approximate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckKind {
    Relations,
    Trace,
    Conjugation,
    Intertwiner,
    Spectrum,
    Isospectral,
    Wedge,
    Prop41,
    Prop43,
    Commuting,
    Limit,
}

pub const ALL_CHECKS: [CheckKind; 11] = [
    CheckKind::Relations,
    CheckKind::Trace,
    CheckKind::Conjugation,
    CheckKind::Intertwiner,
    CheckKind::Spectrum,
    CheckKind::Isospectral,
    CheckKind::Wedge,
    CheckKind::Prop41,
    CheckKind::Prop43,
    CheckKind::Commuting,
    CheckKind::Limit,
];
