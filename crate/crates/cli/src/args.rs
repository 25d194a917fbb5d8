use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "qsep", version, about = "Reproducible experiments on the convex geometry of quantum states")]
pub struct Cli {
    #[command(subcommand)]
    pub top: Top,
}

#[derive(Subcommand, Debug)]
pub enum Top {
    /// Run one experiment and write its report.
    Run(RunArgs),
    /// Summarize report files or directories of reports.
    Report(ReportArgs),
    /// Re-run the invocation recorded in a report and compare byte for byte.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed, mandatory for stochastic commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for report files; the report goes to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Numerical tolerance, module default when absent.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Treat a not-falsified outcome as inconclusive (exit 2).
    #[arg(long, global = true)]
    pub require_certified: bool,
    /// File of key=value lines supplying any long flag; flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Report files, or directories scanned for them.
    pub paths: Vec<PathBuf>,
    /// Write the roll-up table here (`summary.json` / `summary.csv`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub report: PathBuf,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Greedy ε-separated net on S^{n−1}, or a projective net on C^m.
    Net(NetArgs),
    /// Net polytope approximating the states of C^m.
    ApproxD(ApproxDArgs),
    /// Product-net polytope approximating the separable states on C^d⊗C^d.
    ApproxSep(ApproxSepArgs),
    /// Random pure-state polytopes, single size or doubling sweep.
    RandomNet(RandomNetArgs),
    /// Cap weight α and the cap-average matrix.
    CapStats(CapStatsArgs),
    /// Scalar or matrix Hoeffding tails against their bounds.
    Hoeffding(HoeffdingArgs),
    /// Bounds on the verticial dimension of one body.
    Dims(DimsArgs),
    /// Lower-bound product table for a family of bodies.
    Flm(FlmArgs),
    /// Random k-dimensional sections of a gauge.
    Dvoretzky(DvoretzkyArgs),
    /// Entanglement witnesses and separability checks on two qubits.
    Witness(WitnessArgs),
    /// Inscribed and circumscribed Hilbert–Schmidt balls.
    Balls(BallsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Net(_) => "net",
            Command::ApproxD(_) => "approx-d",
            Command::ApproxSep(_) => "approx-sep",
            Command::RandomNet(_) => "random-net",
            Command::CapStats(_) => "cap-stats",
            Command::Hoeffding(_) => "hoeffding",
            Command::Dims(_) => "dims",
            Command::Flm(_) => "flm",
            Command::Dvoretzky(_) => "dvoretzky",
            Command::Witness(_) => "witness",
            Command::Balls(_) => "balls",
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NetArgs {
    /// Real dimension of the sphere's ambient space.
    #[arg(long)]
    pub n: Option<usize>,
    /// Complex dimension for a projective net.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub max_failures: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub coverage_samples: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxDArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 1000)]
    pub directions: usize,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1000)]
    pub test_states: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxSepArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 0.03125)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub directions: usize,
    #[arg(long, default_value_t = 16)]
    pub sep_restarts: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RandomNetArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Number of random vertices; required unless --sweep.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub eps: f64,
    /// Double N from d² until a net survives testing.
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, default_value_t = 16_384)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1000)]
    pub directions: usize,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1000)]
    pub test_states: usize,
    /// Also build a net leaning towards e₁ with this overlap threshold (d = 2).
    #[arg(long)]
    pub conspiracy: Option<f64>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CapStatsArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Angular radius; defaults to √(3/32).
    #[arg(long, default_value_t = 0.306_186_217_847_897_2)]
    pub theta: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailKind {
    Scalar,
    Matrix,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HoeffdingArgs {
    #[arg(long, value_enum, default_value_t = TailKind::Scalar)]
    pub kind: TailKind,
    #[arg(long = "N", default_value_t = 2000)]
    pub n: u64,
    #[arg(long, default_value_t = 0.05)]
    pub p: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 0.3)]
    pub theta: f64,
    /// Sample counts for the matrix tail; several values also check monotonicity.
    #[arg(long = "M", value_delimiter = ',', default_value = "500")]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 0.2)]
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BodyKind {
    D,
    Sep,
    Ball,
    Cube,
    Simplex,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimsArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub body: BodyKind,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "A", default_value_t = 4.0)]
    pub a: f64,
    /// Probe directions for the ball constructions.
    #[arg(long, default_value_t = 2000)]
    pub probes: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FlmArgs {
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
    #[arg(long = "A", default_value_t = 4.0)]
    pub a: f64,
    #[arg(long = "B", default_value_t = 4.0)]
    pub b: f64,
    /// Lower limit asserted for the ratio over the ball rows.
    #[arg(long, default_value_t = 0.2)]
    pub min_ratio: f64,
    /// Extra rows for the states of C^m.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Extra rows for the separable states on C^d⊗C^d.
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaugeKind {
    Ball,
    Cube,
    CrossPolytope,
    States,
    StatesPolar,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DvoretzkyArgs {
    #[arg(long, value_enum)]
    pub gauge: GaugeKind,
    #[arg(long)]
    pub n: Option<usize>,
    /// Matrix size for the state gauges.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCheck {
    Werner,
    Robust,
    Coverage,
    TraceBound,
    BulletIdentity,
    Preserve,
    VidalTarrach,
    GurvitsBarnum,
}

impl WitnessCheck {
    pub fn stochastic(self) -> bool {
        !matches!(self, WitnessCheck::Werner | WitnessCheck::Robust)
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub check: WitnessCheck,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Builtin maps: identity, transpose, reduction, choi-d3, random-unital-cp:<seed>.
    #[arg(long, value_delimiter = ',', default_value = "transpose")]
    pub maps: Vec<String>,
    /// Asserted family coverage for --check coverage.
    #[arg(long)]
    pub expect_coverage: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallBodyKind {
    D,
    Sep,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BallsArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub body: BallBodyKind,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}
