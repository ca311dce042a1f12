use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use setjoin::{
    Algorithm, FreqSource, IntersectMethod, ItemOrder, LimitStrategy, Paradigm,
};

#[derive(Parser, Debug)]
#[command(name = "setjoin", version, about = "In-memory set containment join")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Join two transaction files, or one file with itself.
    Join(JoinCmd),
    /// Sweep one generator or limit parameter and append CSV rows.
    Bench(BenchCmd),
    /// Write a synthetic Zipfian transaction file.
    Generate(GenerateCmd),
    /// Print length statistics of a transaction file.
    Stats(StatsCmd),
    /// Print the limit chosen by every estimator, plus the FRQ trace.
    EstimateLimit(EstimateCmd),
    /// Fit cost constants on this host and write them as a key-value file.
    Calibrate(CalibrateCmd),
    /// Nested-loop reference join.
    Oracle(OracleCmd),
}

#[derive(Args, Debug, Clone)]
pub struct Inputs {
    /// Left collection R.
    pub left: PathBuf,
    /// Right collection S; omit with --self-join.
    pub right: Option<PathBuf>,
    /// Join the left file with itself.
    #[arg(long)]
    pub self_join: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Pretti,
    Limit,
    #[value(name = "limit_plus", alias = "limit-plus")]
    LimitPlus,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Pretti => Algorithm::Pretti,
            AlgorithmArg::Limit => Algorithm::Limit,
            AlgorithmArg::LimitPlus => Algorithm::LimitPlus,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParadigmArg {
    Bulk,
    Opj,
}

impl From<ParadigmArg> for Paradigm {
    fn from(p: ParadigmArg) -> Self {
        match p {
            ParadigmArg::Bulk => Paradigm::Bulk,
            ParadigmArg::Opj => Paradigm::Opj,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Increasing,
    Decreasing,
}

impl From<OrderingArg> for ItemOrder {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::Increasing => ItemOrder::Increasing,
            OrderingArg::Decreasing => ItemOrder::Decreasing,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FreqSourceArg {
    #[value(name = "left-only", alias = "left_only")]
    LeftOnly,
    Union,
}

impl From<FreqSourceArg> for FreqSource {
    fn from(f: FreqSourceArg) -> Self {
        match f {
            FreqSourceArg::LeftOnly => FreqSource::LeftOnly,
            FreqSourceArg::Union => FreqSource::Union,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum IntersectArg {
    Merge,
    Binary,
    Hybrid,
}

impl From<IntersectArg> for IntersectMethod {
    fn from(i: IntersectArg) -> Self {
        match i {
            IntersectArg::Merge => IntersectMethod::Merge,
            IntersectArg::Binary => IntersectMethod::Binary,
            IntersectArg::Hybrid => IntersectMethod::Hybrid,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Avg,
    Wavg,
    Mdn,
    Frq,
}

impl From<StrategyArg> for LimitStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Avg => LimitStrategy::Avg,
            StrategyArg::Wavg => LimitStrategy::Wavg,
            StrategyArg::Mdn => LimitStrategy::Mdn,
            StrategyArg::Frq => LimitStrategy::Frq,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Decreasing order, left-only frequencies, hybrid intersection, bulk PRETTI.
    OrgPretti,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

/// Join configuration flags. Unset flags take the preset's value, then the
/// defaults (limit_plus, opj, increasing, union, hybrid, frq).
#[derive(Args, Debug, Clone, Default)]
pub struct ConfigArgs {
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    pub algorithm: Option<AlgorithmArg>,
    #[arg(long, value_enum)]
    pub paradigm: Option<ParadigmArg>,
    #[arg(long, value_enum)]
    pub ordering: Option<OrderingArg>,
    #[arg(long, value_enum)]
    pub freq_source: Option<FreqSourceArg>,
    #[arg(long, value_enum)]
    pub intersect: Option<IntersectArg>,
    /// Explicit depth limit ℓ.
    #[arg(long)]
    pub limit: Option<u32>,
    /// Estimator for ℓ when --limit is not given.
    #[arg(long, value_enum)]
    pub limit_strategy: Option<StrategyArg>,
    /// Build the tree without a depth limit.
    #[arg(long)]
    pub unlimited: bool,
    /// Count every intersection, including those with the whole right
    /// collection, and never stop below an empty candidate list.
    #[arg(long)]
    pub faithful: bool,
    /// Join empty left objects with every right object.
    #[arg(long)]
    pub keep_empty: bool,
    /// Cost constants file (`name = value` lines) from `calibrate`.
    #[arg(long)]
    pub costs: Option<PathBuf>,
    /// Multiplies the verification side of the FRQ stop test.
    #[arg(long)]
    pub frq_threshold_scale: Option<f64>,
    /// Record LIMIT+ decisions in the report.
    #[arg(long)]
    pub trace_decisions: bool,
}

#[derive(Args, Debug)]
pub struct JoinCmd {
    #[command(flatten)]
    pub inputs: Inputs,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Count pairs without materializing them.
    #[arg(long)]
    pub count_only: bool,
    /// Write result pairs as `l_oid<TAB>r_oid` lines.
    #[arg(long)]
    pub emit_pairs: Option<PathBuf>,
    /// Write a run report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Compare the result with the nested-loop join; exit 3 on mismatch.
    #[arg(long)]
    pub check_oracle: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Limit,
    Cardinality,
    Domain,
    WavgLen,
    Zipf,
}

#[derive(Args, Debug)]
pub struct BenchCmd {
    #[arg(long, value_enum)]
    pub axis: Axis,
    /// Comma-separated, strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    /// CSV file to append rows to.
    #[arg(long)]
    pub csv: PathBuf,
    /// Self-join this file instead of generated data (limit axis only).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    pub cardinality: usize,
    #[arg(long, default_value_t = 10_000)]
    pub domain: usize,
    #[arg(long, default_value_t = 10.0)]
    pub wavg_len: f64,
    #[arg(long, default_value_t = 0.5)]
    pub zipf: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Args, Debug)]
pub struct GenerateCmd {
    #[arg(long)]
    pub cardinality: usize,
    #[arg(long)]
    pub domain: usize,
    #[arg(long)]
    pub wavg_len: f64,
    #[arg(long, default_value_t = 0.0)]
    pub zipf: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct StatsCmd {
    pub path: PathBuf,
}

#[derive(Args, Debug)]
pub struct EstimateCmd {
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long, value_enum)]
    pub ordering: Option<OrderingArg>,
    #[arg(long, value_enum)]
    pub freq_source: Option<FreqSourceArg>,
    #[arg(long)]
    pub costs: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub frq_threshold_scale: f64,
}

#[derive(Args, Debug)]
pub struct CalibrateCmd {
    /// Where to write the constants.
    #[arg(long)]
    pub out: PathBuf,
    /// Small grid, for smoke runs.
    #[arg(long)]
    pub quick: bool,
}

#[derive(Args, Debug)]
pub struct OracleCmd {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Write pairs here instead of stdout.
    #[arg(long)]
    pub emit_pairs: Option<PathBuf>,
}
