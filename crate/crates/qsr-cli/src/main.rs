//! `qsr` — experiment harness for the segment-routing toolkit.
//!
//! Subcommands load a topology (built-in by name or JSON file), load or
//! synthesize a request set, run one of the solvers, and emit JSON/CSV
//! artifacts with full provenance. All randomness derives from `--seed`,
//! so identical invocations produce identical artifacts apart from the
//! recorded wall times.

mod artifacts;
mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit codes: usage errors 2 (also used by argument parsing), file errors 3,
/// solver errors 4.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    File(String),
    Solver(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::File(_) => 3,
            CliError::Solver(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::File(m) => write!(f, "file: {m}"),
            CliError::Solver(m) => write!(f, "solver: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qsr",
    version,
    about = "Segment-routing traffic engineering: offline throughput, online admission, exact oracle"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Approximate the maximum concurrent throughput (primal-dual FPTAS)
    Offline(OfflineArgs),
    /// Admit a request trace online with primal-dual pricing
    Online(OnlineArgs),
    /// Solve a small instance exactly by enumeration + LP; prints throughput
    Oracle(OracleArgs),
    /// Run one solver across a parameter axis and tabulate the results
    Sweep(SweepArgs),
    /// Write a built-in or generated topology as a JSON file
    GenTopology(GenTopologyArgs),
    /// Write a seeded request/trace file for a topology
    GenRequests(GenRequestsArgs),
}

/// Topology selection shared by every subcommand.
#[derive(Args, Clone)]
pub struct TopoArgs {
    /// Built-in name (abilene | example1 | example2 | chains | ring) or a
    /// topology JSON file path
    #[arg(long)]
    pub topology: String,
    /// example2: weight of the direct links
    #[arg(long, default_value_t = 3)]
    pub w_direct: u32,
    /// chains: number of parallel chains
    #[arg(long, default_value_t = 5)]
    pub chains: usize,
    /// chains: interior nodes per chain
    #[arg(long, default_value_t = 7)]
    pub interior_hops: usize,
    /// chains / example2: link capacity
    #[arg(long, default_value_t = 100.0)]
    pub capacity: f64,
    /// ring: node count
    #[arg(long, default_value_t = 8)]
    pub nodes: usize,
    /// ring: extra chord links beyond the ring
    #[arg(long, default_value_t = 6)]
    pub chords: usize,
    /// ring: capacity range low end
    #[arg(long, default_value_t = 50.0)]
    pub cap_lo: f64,
    /// ring: capacity range high end
    #[arg(long, default_value_t = 150.0)]
    pub cap_hi: f64,
}

/// Request sourcing shared by the solver subcommands. Without `--requests`
/// a canonical deterministic set is synthesized (see the README).
#[derive(Args, Clone)]
pub struct RequestArgs {
    /// Request/trace JSON file; omit for the canonical synthesized set
    #[arg(long)]
    pub requests: Option<PathBuf>,
    /// Segment budget: overrides every request's q_max
    #[arg(long)]
    pub qr: Option<u32>,
    /// Candidate segment nodes for synthesized requests: "all", "none", or
    /// comma-separated node names
    #[arg(long, default_value = "all")]
    pub sr_nodes: String,
    /// Demand per synthesized request (defaults depend on the topology)
    #[arg(long)]
    pub demand: Option<f64>,
    /// Number of synthesized requests
    #[arg(long)]
    pub count: Option<usize>,
    /// Seed for all synthesized randomness
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Clone)]
pub struct OutArgs {
    /// Directory for artifacts; omitted → primary artifact on stdout
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Which artifacts to write under --out-dir
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
    /// Also write the per-pair ECMP split table (requires --out-dir)
    #[arg(long)]
    pub dump_intra: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
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

#[derive(Args)]
pub struct OfflineArgs {
    #[command(flatten)]
    pub topo: TopoArgs,
    #[command(flatten)]
    pub reqs: RequestArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Approximation accuracy ε ∈ (0, 1); default 0.1
    #[arg(long, conflicts_with = "omega")]
    pub epsilon: Option<f64>,
    /// Target ratio ω > 0: guarantees λ ≥ OPT/(1+ω)
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Args)]
pub struct OnlineArgs {
    #[command(flatten)]
    pub topo: TopoArgs,
    #[command(flatten)]
    pub reqs: RequestArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Reward/overload trade-off φ > 0
    #[arg(long, default_value_t = 10.0)]
    pub phi: f64,
}

#[derive(Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub topo: TopoArgs,
    #[command(flatten)]
    pub reqs: RequestArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Qr,
    Epsilon,
    Phi,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Offline,
    Online,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub topo: TopoArgs,
    #[command(flatten)]
    pub reqs: RequestArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Parameter to vary
    #[arg(long, value_enum)]
    pub axis: Axis,
    /// Comma-separated axis values, strictly monotone
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    /// Solver to run per value; defaults to offline (online for --axis phi)
    #[arg(long, value_enum)]
    pub mode: Option<SweepMode>,
    /// Axis value whose wall time normalizes the others; defaults to 0.1
    /// on the epsilon axis, else the first value
    #[arg(long)]
    pub baseline: Option<f64>,
    /// Fixed ε for sweeps over other axes
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fixed φ for sweeps over other axes
    #[arg(long, default_value_t = 10.0)]
    pub phi: f64,
}

#[derive(Args)]
pub struct GenTopologyArgs {
    #[command(flatten)]
    pub topo: TopoArgs,
    /// Seed for the ring generator
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file for the canonical topology JSON
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum GenMode {
    /// Uniform random distinct (src, dst) pairs
    RandomPairs,
    /// Every request between the same two nodes
    SinglePair,
    /// Sources cycle through all nodes; destinations drawn at random
    EachNode,
}

#[derive(Args)]
pub struct GenRequestsArgs {
    #[command(flatten)]
    pub topo: TopoArgs,
    #[arg(long, value_enum, default_value_t = GenMode::RandomPairs)]
    pub mode: GenMode,
    /// single-pair: source node name (defaults to "s" when present)
    #[arg(long)]
    pub src: Option<String>,
    /// single-pair: destination node name (defaults to "t" when present)
    #[arg(long)]
    pub dst: Option<String>,
    #[arg(long, default_value_t = 12)]
    pub count: usize,
    /// Demand per request (low end when --demand-hi is given)
    #[arg(long, default_value_t = 20.0)]
    pub demand: f64,
    /// High end of a uniform demand range
    #[arg(long)]
    pub demand_hi: Option<f64>,
    /// "all", "none", or comma-separated node names
    #[arg(long, default_value = "all")]
    pub sr_nodes: String,
    /// q_max written per request (clamped to the candidate count + 1)
    #[arg(long, default_value_t = 2)]
    pub qr: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file for the request JSON
    #[arg(long)]
    pub out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Offline(a) => commands::offline(a),
        Cmd::Online(a) => commands::online(a),
        Cmd::Oracle(a) => commands::oracle(a),
        Cmd::Sweep(a) => commands::sweep(a),
        Cmd::GenTopology(a) => commands::gen_topology(a),
        Cmd::GenRequests(a) => commands::gen_requests(a),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}
