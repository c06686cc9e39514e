use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hf_core::{ComplexVal, EntireMap, TransitionMatrix};

use crate::values::{self, List};

#[derive(Debug, Parser)]
#[command(name = "hf", version, about = "Topological-entropy lower bounds for entire maps", args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cache directory for certify and ladder results.
    #[arg(long, global = true, env = "HF_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// TOML key-value file; keys are flag names, flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value and derivative of a map at a point.
    Eval(EvalArgs),
    /// Entropy of a subshift of finite type.
    EntropySft(SftArgs),
    /// Separated-set entropy estimate on a sample set.
    Estimate(EstimateArgs),
    /// Simple islands over a target disk inside a source disk.
    Islands(IslandsArgs),
    /// Island digraph on a set of probe disks.
    Digraph(DigraphArgs),
    /// Inverse-branch horseshoe on one disk, verified against the full shift.
    Horseshoe(HorseshoeArgs),
    /// Polynomial-like restriction and its entropy certificate.
    Polylike(PolylikeArgs),
    /// Certified lower bound `log m` through the rescaled family.
    Certify(CertifyArgs),
    /// One certificate per target.
    Ladder(LadderArgs),
    /// Escape-time raster.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true)]
    pub z: ComplexVal,
}

#[derive(Debug, Args)]
pub struct SftArgs {
    /// JSON `{"n": N, "rows": ["0110", ...]}`.
    #[arg(long, value_parser = values::matrix)]
    pub matrix: TransitionMatrix,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SampleSet {
    Circle,
    Disk,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    #[arg(long, value_enum, default_value = "circle")]
    pub sample_set: SampleSet,
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true, default_value = "0")]
    pub center: ComplexVal,
    #[arg(long, value_parser = values::positive, default_value = "1")]
    pub radius: f64,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, value_parser = values::positive, default_value = "0.2")]
    pub epsilon: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct IslandsArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true)]
    pub source_center: ComplexVal,
    #[arg(long, value_parser = values::positive)]
    pub source_radius: f64,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true)]
    pub target_center: ComplexVal,
    #[arg(long, value_parser = values::positive)]
    pub target_radius: f64,
    #[arg(long, default_value_t = 24)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct DigraphArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    /// Probe centers separated by `;`.
    #[arg(long, value_parser = values::complex_list, allow_hyphen_values = true)]
    pub centers: List<ComplexVal>,
    #[arg(long, value_parser = values::positive)]
    pub gamma: f64,
    #[arg(long, value_parser = values::positive)]
    pub delta: f64,
    /// Also search for a two-cycle hub with this deficiency.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 24)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct HorseshoeArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true)]
    pub a: ComplexVal,
    #[arg(long, value_parser = values::positive)]
    pub delta: f64,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, value_parser = values::positive, default_value = "1e-9")]
    pub tolerance: f64,
    #[arg(long, default_value_t = 24)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct PolylikeArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true, default_value = "0")]
    pub v_center: ComplexVal,
    #[arg(long, value_parser = values::positive)]
    pub v_radius: f64,
    /// Defaults to the center of V.
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true)]
    pub d_center: Option<ComplexVal>,
    /// Defaults to the radius of V.
    #[arg(long, value_parser = values::positive)]
    pub d_radius: Option<f64>,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true, default_value = "0")]
    pub seed: ComplexVal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RouteArg {
    Auto,
    Zeros,
    Islands,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 40)]
    pub zero_steps: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub k_max: u64,
    #[arg(long, default_value_t = 1.25)]
    pub k_growth: f64,
    #[arg(long, default_value_t = 24)]
    pub grid: usize,
    #[arg(long, default_value_t = 16)]
    pub critical_grid: usize,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, value_parser = values::positive, default_value = "1e-9")]
    pub tolerance: f64,
    /// Island target radius (default: 0.45 × minimum probe distance).
    #[arg(long, value_parser = values::positive)]
    pub delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    #[arg(long)]
    pub target: u32,
    #[arg(long, value_enum, default_value = "auto")]
    pub route: RouteArg,
    /// Probe centers for the islands route, separated by `;`.
    #[arg(long, value_parser = values::complex_list, allow_hyphen_values = true)]
    pub probes: Option<List<ComplexVal>>,
    /// Certify `f(z + c) − d` instead of `f`.
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true, requires = "translate_d")]
    pub translate_c: Option<ComplexVal>,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true, requires = "translate_c")]
    pub translate_d: Option<ComplexVal>,
    #[command(flatten)]
    pub budgets: BudgetArgs,
    /// Attach issue time and tool version (outside the content hash).
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Args)]
pub struct LadderArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    /// Ascending targets, e.g. `2,4,8`.
    #[arg(long, value_parser = values::target_list)]
    pub targets: List<u32>,
    #[command(flatten)]
    pub budgets: BudgetArgs,
    /// PNG bar chart of the certified bounds.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long = "f", value_parser = values::function)]
    pub f: EntireMap,
    #[arg(long, value_parser = values::complex, allow_hyphen_values = true, default_value = "0")]
    pub center: ComplexVal,
    #[arg(long, value_parser = values::positive, default_value = "2")]
    pub half_width: f64,
    #[arg(long, default_value_t = 100)]
    pub iterations: u32,
    #[arg(long, value_parser = values::positive, default_value = "50")]
    pub escape_radius: f64,
    #[arg(long, default_value_t = 512)]
    pub width: usize,
    #[arg(long, default_value_t = 512)]
    pub height: usize,
    /// PNG output path.
    #[arg(long)]
    pub image: Option<PathBuf>,
}
