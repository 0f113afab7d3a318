use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use parity_bell::optimize::Plane;
use parity_bell::pseudospin::ProfilePreset;

#[derive(Parser, Debug)]
#[command(
    name = "parity-bell",
    version,
    about = "Parity pseudospin nonlocality checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the pseudospin commutation and anticommutation relations.
    AlgebraCheck(AlgebraArgs),
    /// Residuals of the GHZ eigenvalue relations and the Mermin eigenvalue.
    GhzEigen(GhzEigenArgs),
    /// Enumerate local assignments against the three-mode GHZ constraints.
    Paradox(ParadoxArgs),
    /// Quantum Mermin value against the enumerated local maximum.
    MerminGap(MerminGapArgs),
    /// Evaluate or optimize the Bell-CHSH expectation for a state.
    Chsh(ChshArgs),
    /// Optimized two-mode CHSH value of the NOPA state across squeezing.
    Sweep(SweepArgs),
    /// Spectral radius of the Bell operator against its quantum bound.
    Spectral(OperatorArgs),
    /// Residual of the decomposition of the squared Bell operator.
    SquareIdentity(OperatorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value file supplying defaults for any flag of this subcommand.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = Plane::None)]
    pub plane: Plane,
}

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    /// Truncation to check; all of 2, 4, 8, 16 when omitted.
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GhzEigenArgs {
    #[arg(long, default_value_t = 3)]
    pub modes: usize,
    #[arg(long, default_value_t = 16)]
    pub dim: usize,
    #[arg(long, default_value_t = ProfilePreset::Fock0)]
    pub profile: ProfilePreset,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ParadoxArgs {
    /// Only three modes are supported.
    #[arg(long, default_value_t = 3)]
    pub modes: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MerminGapArgs {
    #[arg(long, default_value_t = 3)]
    pub modes: usize,
    /// Also evaluate the Mermin operator on GHZ_N at this truncation.
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["optimize", "settings_file"])))]
pub struct ChshArgs {
    #[arg(long, default_value = "ghz")]
    pub state: String,
    /// Defaults to 3 for ghz, 2 for nopa.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Defaults to 16 for ghz, 32 for nopa.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = ProfilePreset::Fock0)]
    pub profile: ProfilePreset,
    /// Squeezing parameter of the nopa state.
    #[arg(long)]
    pub r: Option<f64>,
    /// Search for the settings maximizing |⟨B_N⟩|.
    #[arg(long)]
    pub optimize: bool,
    #[arg(long, default_value = "simplex")]
    pub strategy: String,
    /// Angular step of the grid strategy, degrees.
    #[arg(long, default_value_t = 5.0)]
    pub grid_step: f64,
    /// JSON list of 2N [x, y, z] vectors ordered a_1, a'_1, a_2, ….
    #[arg(long)]
    pub settings_file: Option<PathBuf>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value = "nopa")]
    pub state: String,
    #[arg(long, default_value_t = 32)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.1)]
    pub r_min: f64,
    #[arg(long, default_value_t = 1.2)]
    pub r_max: f64,
    #[arg(long, default_value_t = 23)]
    pub steps: usize,
    /// Largest acceptable truncation deficit at any sweep point.
    #[arg(long, default_value_t = 1e-8)]
    pub max_deficit: f64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct OperatorArgs {
    #[arg(long, default_value_t = 3)]
    pub modes: usize,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    /// Random settings drawn when no settings file is given.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// JSON list of 2N [x, y, z] vectors ordered a_1, a'_1, a_2, ….
    #[arg(long)]
    pub settings_file: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::AlgebraCheck(a) => &a.output,
            Command::GhzEigen(a) => &a.output,
            Command::Paradox(a) => &a.output,
            Command::MerminGap(a) => &a.output,
            Command::Chsh(a) => &a.output,
            Command::Sweep(a) => &a.output,
            Command::Spectral(a) | Command::SquareIdentity(a) => &a.output,
        }
    }
}
