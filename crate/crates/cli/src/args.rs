//! Command-line grammar.

use std::path::PathBuf;

use catoverlap::overlap::DeviationKind;
use catoverlap::{Execution, Normalization};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::error::CliError;
use crate::output::Format;
use crate::parse;

#[derive(Debug, Parser)]
#[command(name = "catoverlap", version, about = "Overlap, phase-space and distinguishability calculations for generalized cat states")]
pub struct Cli {
    /// Worker threads for scans and grids; 1 runs sequentially. Defaults to all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Overlap along a ray of displacements, with the Bessel reference.
    #[command(allow_negative_numbers = true)]
    OverlapScan(OverlapScanArgs),
    /// Overlap over a rectangular grid of complex displacements.
    #[command(allow_negative_numbers = true)]
    Surface(SurfaceArgs),
    /// Husimi Q function on a phase-space grid.
    #[command(allow_negative_numbers = true)]
    Qfunc(FieldArgs),
    /// Wigner function on a phase-space grid.
    #[command(allow_negative_numbers = true)]
    Wigner(FieldArgs),
    /// Distinguishability frontier for a list of component counts.
    #[command(allow_negative_numbers = true)]
    Table1(Table1Args),
    /// Ring-source mutual coherence, optionally next to the cat overlap.
    #[command(allow_negative_numbers = true)]
    Vcz(VczArgs),
    /// Two-component fringe formulas next to the exact overlap.
    #[command(allow_negative_numbers = true)]
    Fringe(FringeArgs),
    /// Literal pre-reduction double sum (diagnostic).
    #[command(allow_negative_numbers = true)]
    LiteralSum(LiteralSumArgs),
    /// Cross-checks between independent evaluation paths.
    Verify(VerifyArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Data file; stdout when omitted (no manifest is written then).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    Exact,
    Paper,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::Exact => Normalization::Exact,
            NormalizationArg::Paper => Normalization::PaperApprox,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeviationArg {
    Re,
    Abs,
    Sq,
}

impl From<DeviationArg> for DeviationKind {
    fn from(d: DeviationArg) -> Self {
        match d {
            DeviationArg::Re => DeviationKind::Re,
            DeviationArg::Abs => DeviationKind::Abs,
            DeviationArg::Sq => DeviationKind::Sq,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CatArgs {
    /// Number of components.
    #[arg(long)]
    pub n: usize,
    /// Amplitude as "mag:phase" (radians) or "re,im".
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub alpha: Complex64,
    #[arg(long, value_enum, default_value = "exact")]
    pub normalization: NormalizationArg,
}

#[derive(Debug, Clone, Args)]
pub struct OverlapScanArgs {
    #[command(flatten)]
    pub cat: CatArgs,
    /// Direction of the displacement ray (radians).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub direction: f64,
    #[arg(long, default_value_t = 0.4)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "re")]
    pub deviation_kind: DeviationArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub cat: CatArgs,
    /// Real-part range "lo:hi".
    #[arg(long, value_parser = parse::range, allow_hyphen_values = true, default_value = "-0.4:0.4")]
    pub re_range: (f64, f64),
    /// Imaginary-part range "lo:hi".
    #[arg(long, value_parser = parse::range, allow_hyphen_values = true, default_value = "-0.4:0.4")]
    pub im_range: (f64, f64),
    /// Nodes per axis.
    #[arg(long, default_value_t = 101)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value = "re")]
    pub deviation_kind: DeviationArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub n: usize,
    /// Amplitude as "mag:phase" or "re,im"; omit with --critical.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, required_unless_present = "critical", conflicts_with = "critical")]
    pub alpha: Option<Complex64>,
    /// Place the cat on the distinguishability frontier for this n.
    #[arg(long)]
    pub critical: bool,
    /// Chord threshold for --critical; the Table I fit when omitted.
    #[arg(long, requires = "critical")]
    pub tau: Option<f64>,
    /// "x0:x1:p0:p1:nx:np"; defaults to a 512×512 grid covering the components.
    #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
    pub grid: Option<parse::GridArg>,
    #[arg(long, value_enum, default_value = "exact")]
    pub normalization: NormalizationArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// Comma-separated component counts; the Table I list when omitted.
    #[arg(long, value_parser = parse::n_list)]
    pub n_list: Option<parse::NList>,
    /// Chord threshold; the Table I fit when omitted.
    #[arg(long, conflicts_with = "calibrate")]
    pub tau: Option<f64>,
    /// Fit the chord threshold to the built-in Table I pairs (the default).
    #[arg(long)]
    pub calibrate: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VczArgs {
    #[arg(long, required_unless_present = "from_cat", conflicts_with = "from_cat")]
    pub ring_radius: Option<f64>,
    #[arg(long, required_unless_present = "from_cat", conflicts_with = "from_cat")]
    pub wavelength: Option<f64>,
    #[arg(long, required_unless_present = "from_cat", conflicts_with = "from_cat")]
    pub screen_distance: Option<f64>,
    #[arg(long, default_value_t = 0.4)]
    pub separation_max: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Use a cat state as the source: ring radius |α|, wavelength π, distance 1.
    #[arg(long, requires_all = ["n", "alpha"])]
    pub from_cat: bool,
    #[arg(long, requires = "from_cat")]
    pub n: Option<usize>,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "from_cat")]
    pub alpha: Option<Complex64>,
    /// Displacement direction for the exact-overlap columns (radians).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub direction: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FringeKind {
    /// `|α⟩ + |−α⟩`.
    Plain,
    /// `|α⟩ + |αe^{iφ}⟩`.
    Rotated,
    /// `|α⟩ + e^{iφ}|−α⟩`.
    Shifted,
}

impl FringeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FringeKind::Plain => "plain",
            FringeKind::Rotated => "rotated",
            FringeKind::Shifted => "shifted",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FringeArgs {
    #[arg(long, value_enum, default_value = "plain")]
    pub kind: FringeKind,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    pub alpha: Complex64,
    /// Rotation angle or relative phase (radians).
    #[arg(long, default_value_t = std::f64::consts::PI, allow_hyphen_values = true)]
    pub phi: f64,
    /// Displacement direction; perpendicular to α when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Optical wavelength for the plain formula.
    #[arg(long)]
    pub wavelength: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LiteralSumArgs {
    #[command(flatten)]
    pub cat: CatArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub direction: f64,
    #[arg(long, default_value_t = 0.4)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Oracle,
    Quadrature,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Seed for the randomized instances.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Manifest written next to an earlier data file.
    pub manifest: PathBuf,
    /// Write to this path instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Maps `--jobs` onto an execution mode, sizing the global pool when asked.
pub fn execution(jobs: Option<usize>) -> Result<Execution, CliError> {
    match jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(k) => {
            // A second build in the same process (replay) keeps the first pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Execution::Sequential),
        None => Ok(Execution::default()),
    }
}
