use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use competing_exchange::{Boundary, LatticeSpec};

#[derive(Debug, Parser)]
#[command(
    name = "cxch",
    version,
    about = "Two-term competing exchange model: evaluation, sweeps and numerical cross-checks"
)]
pub struct Cli {
    /// key = value file; its entries fill flags not given on the command line.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Print the resolved configuration to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form model quantities.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Phase and energy table over an (a1, a2) grid.
    Sweep(SweepArgs),
    /// Exact diagonalization checks.
    #[command(subcommand)]
    Ed(EdCommand),
    /// Two-center integrals and the couplings assembled from them.
    Integrals(IntegralsArgs),
    /// Classical Metropolis annealing.
    Mc(McArgs),
    /// Canned verification battery.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Weights, energies and phase at one coupling point.
    Eval(ModelEvalArgs),
}

#[derive(Debug, Subcommand)]
pub enum EdCommand {
    /// Compare the ground state of a cluster with the model's trial state.
    Compare(EdCompareArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file. Defaults to stdout, or to a fixed name inside $HEXCH_OUT_DIR when set.
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ModelEvalArgs {
    #[arg(long)]
    pub a1: f64,
    #[arg(long)]
    pub a2: f64,
    /// Number of spins.
    #[arg(long, short = 'n')]
    pub n: u64,
    /// Coordination number.
    #[arg(long, short = 'z')]
    pub z: u64,
    /// Relative tolerance of the a1 = |a2| test.
    #[arg(long, default_value_t = competing_exchange::model::DEFAULT_SG_TOL)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    pub a1_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub a1_max: f64,
    #[arg(long, default_value_t = -2.0)]
    pub a2_min: f64,
    #[arg(long, default_value_t = 0.0)]
    pub a2_max: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    #[arg(long, short = 'n', default_value_t = 1)]
    pub n: u64,
    #[arg(long, short = 'z', default_value_t = 1)]
    pub z: u64,
    #[arg(long, default_value_t = competing_exchange::model::DEFAULT_SG_TOL)]
    pub tolerance: f64,
    /// Also write a phase map.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    /// Dense below the dense size limit, Lanczos above it.
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EdCompareArgs {
    /// ring:N, chain:N[:open|periodic] or square:WxH[:periodic|open].
    #[arg(long, default_value = "ring:4")]
    pub lattice: LatticeArg,
    #[arg(long)]
    pub a1: f64,
    #[arg(long)]
    pub a2: f64,
    #[arg(long, value_enum, default_value_t = SolveMethod::Auto)]
    pub method: SolveMethod,
    /// Seed of the Lanczos start vector.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExchangeScheme {
    MonteCarlo,
    ProductGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Attractive,
    Repulsive,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct IntegralsArgs {
    /// Exponent of the hydrogenic 1s orbital on both centres.
    #[arg(long, default_value_t = 1.0)]
    pub zeta: f64,
    /// Whitespace-separated `r value` table replacing the hydrogenic orbital.
    #[arg(long, value_name = "FILE")]
    pub orbital_table: Option<PathBuf>,
    /// Nuclear charge Z.
    #[arg(long = "charge", short = 'Z', default_value_t = 1.0)]
    pub charge: f64,
    /// Comma-separated separations in bohr.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2")]
    pub r_grid: Vec<f64>,
    /// Excitation energy in the denominator of Gamma (required).
    #[arg(long)]
    pub delta_e: Option<f64>,
    #[arg(long, value_enum, default_value_t = Sign::Attractive)]
    pub sign: Sign,
    /// Panels per coordinate for the one-electron integrals.
    #[arg(long, default_value_t = 8)]
    pub resolution: usize,
    /// Error limit of the one-electron integrals.
    #[arg(long, default_value_t = 1e-6)]
    pub one_electron_tolerance: f64,
    #[arg(long, value_enum, default_value_t = ExchangeScheme::MonteCarlo)]
    pub exchange_scheme: ExchangeScheme,
    /// Monte Carlo evaluations of the exchange integral.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Product-grid resolution of the exchange integral.
    #[arg(long, default_value_t = 2)]
    pub exchange_resolution: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Error limit of the exchange integral.
    #[arg(long, default_value_t = 1e-2)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Ising,
    Vector3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecayArg {
    Geometric,
    Linear,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct McArgs {
    #[arg(long, default_value = "square:4x4")]
    pub lattice: LatticeArg,
    #[arg(long)]
    pub a1: f64,
    #[arg(long)]
    pub a2: f64,
    #[arg(long, value_enum, default_value_t = ModelArg::Ising)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 5.0)]
    pub t_start: f64,
    #[arg(long, default_value_t = 0.01)]
    pub t_end: f64,
    #[arg(long, default_value_t = 100)]
    pub n_steps: usize,
    #[arg(long, value_enum, default_value_t = DecayArg::Geometric)]
    pub decay: DecayArg,
    #[arg(long, default_value_t = 20)]
    pub sweeps_per_step: usize,
    #[arg(long, default_value_t = 8)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Half-angle (rad) of the vector3 proposal cone.
    #[arg(long, default_value_t = competing_exchange::montecarlo::DEFAULT_CONE_HALF_ANGLE)]
    pub cone_half_angle: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory for report.txt and report.json. Defaults to $HEXCH_OUT_DIR, then `.`.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Seed of the annealing fixtures.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Lattice given on the command line as `kind:extent[:boundary]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeArg(pub LatticeSpec);

impl FromStr for LatticeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let (kind, extent, boundary) = match parts.as_slice() {
            [k, e] => (*k, *e, None),
            [k, e, b] => (*k, *e, Some(*b)),
            _ => return Err(format!("expected kind:extent[:boundary], got `{s}`")),
        };
        let boundary = match boundary {
            None => None,
            Some("open") => Some(Boundary::Open),
            Some("periodic") => Some(Boundary::Periodic),
            Some(b) => return Err(format!("unknown boundary `{b}`")),
        };
        let num = |x: &str| x.parse::<usize>().map_err(|_| format!("bad lattice extent `{x}`"));
        let spec = match kind {
            "ring" => {
                if boundary == Some(Boundary::Open) {
                    return Err("a ring is periodic; use chain:N:open".into());
                }
                LatticeSpec::ring(num(extent)?)
            }
            "chain" => LatticeSpec::chain(num(extent)?, boundary.unwrap_or(Boundary::Open)),
            "square" => {
                let (w, h) = extent
                    .split_once('x')
                    .ok_or_else(|| format!("square extent must be WxH, got `{extent}`"))?;
                LatticeSpec::square(num(w)?, num(h)?, boundary.unwrap_or(Boundary::Periodic))
            }
            _ => return Err(format!("unknown lattice kind `{kind}`")),
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(Self(spec))
    }
}

impl std::fmt::Display for LatticeArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = &self.0;
        let b = match s.boundary {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        };
        match s.extent.as_slice() {
            [w, h] => write!(f, "square:{w}x{h}:{b}"),
            [n] => match s.kind {
                competing_exchange::LatticeKind::Ring => write!(f, "ring:{n}"),
                _ => write!(f, "chain:{n}:{b}"),
            },
            _ => write!(f, "{s:?}"),
        }
    }
}
