use clap::{Args, Parser, Subcommand, ValueEnum};
use homdens::drc::DEFAULT_ENUM_BUDGET;
use homdens::DEFAULT_VERTEX_BUDGET;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "homdens",
    version,
    about = "Exact homomorphism densities and Sidorenko-type checks"
)]
pub struct Cli {
    /// Seed for every random choice (generators, sampling, local search).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest graph a tensor power may materialize.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub budget_vertices: u64,
    /// Largest enumeration (sequences, maps) an exhaustive pass may run.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_BUDGET as u64)]
    pub budget_enum: u64,
    /// Relative C4 tolerance, as `a/b` or a decimal.
    #[arg(long, global = true)]
    pub tol_c4: Option<String>,
    /// Relative edge-density tolerance.
    #[arg(long, global = true)]
    pub tol_edge: Option<String>,
    /// `json` by default; `text` (edge list) is the default for `gen` and valid only there.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Refuse sampling; fail instead when an exhaustive pass is over budget.
    #[arg(long, global = true)]
    pub exhaustive: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Generate a graph from a named family.
    Gen(GenArgs),
    /// Homomorphism count h_H(G).
    Count(CountArgs),
    /// Homomorphism density t_H(G).
    Density(DensityArgs),
    #[command(subcommand)]
    Report(ReportCmd),
    /// Dependent random choice classification, optionally with the embedding bound.
    Drc(DrcArgs),
    #[command(subcommand)]
    Check(CheckCmd),
    #[command(subcommand)]
    Search(SearchCmd),
    /// Ramsey multiplicity scan over 2-colourings of K_N.
    Ramsey(RamseyArgs),
    /// Tensor power identity t_H(G^s) = t_H(G)^s.
    Tensor(TensorArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportCmd {
    /// Sidorenko, complete-side and width bounds for one pattern and host.
    Sidorenko(SidorenkoArgs),
    /// Quasirandomness battery, degree concentration and leaf extension.
    Forcing(ForcingArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckCmd {
    /// t_H against the product of the part densities.
    Correlation(CorrelationArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchCmd {
    /// Minimum-ratio search for the correlation inequality.
    Correlation(SearchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Gnp,
    RandomBipartite,
    Complete,
    CompleteBipartite,
    Path,
    Cycle,
    Star,
    Hypercube,
    Paley,
    TwoCliques,
    BlowUp,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability `a/b`.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub dim: Option<u32>,
    /// Base graph shorthand for blow-ups.
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineChoice {
    Auto,
    Brute,
    Treedp,
    Closed,
}

#[derive(Args, Debug, Serialize)]
pub struct CountArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
    pub engine: EngineChoice,
    /// Run every applicable engine and fail on disagreement.
    #[arg(long)]
    pub cross_check: bool,
    /// Count injective homomorphisms instead.
    #[arg(long)]
    pub injective: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long, required_unless_present = "kernel", conflicts_with = "kernel")]
    pub graph: Option<String>,
    /// Kernel file, or a single rational for a constant kernel.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Fraction of injective maps instead of all maps.
    #[arg(long)]
    pub injective: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SidorenkoArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long, required_unless_present = "kernel", conflicts_with = "kernel")]
    pub graph: Option<String>,
    #[arg(long)]
    pub kernel: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct ForcingArgs {
    /// Host graphs; each gets the quasirandomness battery.
    #[arg(long, required = true)]
    pub graph: Vec<String>,
    /// Reference density; `t_K2` of each graph when absent.
    #[arg(long)]
    pub p: Option<String>,
    /// Pattern for the forcing experiment and the leaf-extension identity.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Degree-deviation threshold.
    #[arg(long, default_value = "1/10")]
    pub eps: String,
}

#[derive(Args, Debug, Serialize)]
pub struct DrcArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Rarity constant; `(2n)^{-2n}` when absent.
    #[arg(long)]
    pub c: Option<String>,
    /// Sample this many sequences instead of enumerating.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Also run the constructive embedding bound for this pattern.
    #[arg(long)]
    pub pattern: Option<String>,
    /// List per-support classes in the report.
    #[arg(long)]
    pub classes: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CorrelationArgs {
    #[arg(long)]
    pub pattern: String,
    /// Parts separated by `/`, edges by `,`, endpoints by `-`: `0-1,1-2/2-3`.
    #[arg(long)]
    pub parts: String,
    #[arg(long, required_unless_present = "kernel", conflicts_with = "kernel")]
    pub graph: Option<String>,
    #[arg(long)]
    pub kernel: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceName {
    AllGraphs,
    KernelGrid,
    Constant,
    Local,
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub parts: String,
    #[arg(long, value_enum, default_value_t = SpaceName::AllGraphs)]
    pub space: SpaceName,
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    /// Kernel blocks.
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    #[arg(long, default_value_t = 2)]
    pub measure_levels: u32,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    /// Instances to evaluate before stopping.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct RamseyArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub n: usize,
    /// Random colourings to try when not exhaustive.
    #[arg(long)]
    pub samples: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct TensorArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 2)]
    pub s: u32,
}
