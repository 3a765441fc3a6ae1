use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use platonic_cf::SolidKind;

#[derive(Debug, Parser)]
#[command(
    name = "platonic-cf",
    version,
    about = "Autocorrelation functions and scattering intensities of the tetrahedron and octahedron"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate γ(r), optionally with derivatives or Monte-Carlo estimates.
    Cf(CfArgs),
    /// Check the endpoint and moment constraints of an analytic CF.
    Validate(ValidateArgs),
    /// Scattering intensity I(q) for one or more solids.
    Intensity(IntensityArgs),
    /// Size-averaged intensity for a Poisson/Gamma size distribution.
    Polydisperse(PolydisperseArgs),
    /// CFs or intensities of all five reference solids at unit dmax.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solid {
    Tetrahedron,
    Octahedron,
    Sphere,
    Cube,
    Cylinder,
}

impl From<Solid> for SolidKind {
    fn from(s: Solid) -> Self {
        match s {
            Solid::Tetrahedron => SolidKind::Tetrahedron,
            Solid::Octahedron => SolidKind::Octahedron,
            Solid::Sphere => SolidKind::Sphere,
            Solid::Cube => SolidKind::Cube,
            Solid::Cylinder => SolidKind::Cylinder,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    /// Edge length (diameter for sphere and cylinder).
    #[arg(long, default_value_t = 1.0)]
    pub edge: f64,
    /// Rescale every solid to unit maximal chord.
    #[arg(long)]
    pub normalize_dmax: bool,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Monte-Carlo samples per grid point.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Required whenever a Monte-Carlo estimate is produced.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random streams; results depend on this and the seed only.
    #[arg(long, default_value_t = 8)]
    pub workers: u32,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CfArgs {
    #[arg(long, value_enum)]
    pub solid: Solid,
    /// Grid points.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub rmin: f64,
    /// Defaults to dmax.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Add dgamma and d2gamma columns.
    #[arg(long)]
    pub derivatives: bool,
    /// Estimate γ by Monte Carlo and add a stderr column.
    #[arg(long)]
    pub mc: bool,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub mc_args: McArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub solid: Solid,
    #[arg(long, default_value_t = 1.0)]
    pub edge: f64,
    #[arg(long)]
    pub tol_gamma0: Option<f64>,
    #[arg(long)]
    pub tol_slope0: Option<f64>,
    #[arg(long)]
    pub tol_gamma_dmax: Option<f64>,
    #[arg(long)]
    pub tol_slope_dmax: Option<f64>,
    /// Relative to the volume.
    #[arg(long)]
    pub tol_volume: Option<f64>,
    /// Relative to 2·rg2·V.
    #[arg(long)]
    pub tol_gyration: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QGridArgs {
    #[arg(long, default_value_t = 501)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub qmin: f64,
    #[arg(long, default_value_t = 100.0)]
    pub qmax: f64,
    /// Logarithmic spacing; needs qmin > 0.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CurveFlags {
    /// Add q⁴I columns.
    #[arg(long)]
    pub porod: bool,
    /// Add columns scaled to one at q = 0.
    #[arg(long)]
    pub scale_q0: bool,
}

#[derive(Debug, Args)]
pub struct IntensityArgs {
    /// Repeat for one value column per solid.
    #[arg(long, value_enum, required = true)]
    pub solid: Vec<Solid>,
    #[command(flatten)]
    pub grid: QGridArgs,
    #[command(flatten)]
    pub flags: CurveFlags,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[command(flatten)]
    pub mc_args: McArgs,
    /// Grid points of Monte-Carlo CF tables for cube and cylinder.
    #[arg(long, default_value_t = 101)]
    pub table_points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PolydisperseArgs {
    #[arg(long, value_enum)]
    pub solid: Solid,
    /// Size distribution, `poisson:n,lambda`.
    #[arg(long, default_value = "poisson:4,1")]
    pub dist: String,
    #[command(flatten)]
    pub grid: QGridArgs,
    #[command(flatten)]
    pub flags: CurveFlags,
    #[arg(long, default_value_t = 1.0)]
    pub edge: f64,
    /// Also write the density table `d,p` to this file.
    #[arg(long)]
    pub emit_density: Option<PathBuf>,
    #[arg(long, default_value_t = 4001)]
    pub density_points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareWhat {
    Cf,
    Intensity,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(value_enum)]
    pub what: CompareWhat,
    /// Grid points in r or q.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
    /// Upper end of the q grid.
    #[arg(long, default_value_t = 20.0)]
    pub qmax: f64,
    /// Add columns scaled to one at q = 0.
    #[arg(long)]
    pub scale_q0: bool,
    #[command(flatten)]
    pub mc_args: McArgs,
    #[arg(long, default_value_t = 101)]
    pub table_points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}
