use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sinkhorn_core::StartSide;

/// Sinkhorn alternate scaling of positive matrices.
///
/// Matrices are given inline as `a,b;c,d` (rows split by `;`, entries by `,`,
/// rationals as `p/q`) or `[[a,b],[c,d]]`, or as a JSON file
/// `{"rows": [[...], ...]}` via `--input`.
#[derive(Debug, Parser)]
#[command(name = "sinkhorn", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scale a square matrix to doubly stochastic form.
    Scale(ScaleArgs),
    /// Scale a matrix to prescribed row and column sums.
    RcScale(RcScaleArgs),
    /// Evaluate a closed-form limit.
    Limit(LimitArgs),
    /// Decide whether exact 2x2 iteration terminates, and in how many steps.
    Classify(ClassifyArgs),
    /// Enumerate small integer matrices whose exact iteration terminates.
    Search(SearchArgs),
    /// Emit per-step margin errors as CSV.
    Trace(TraceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideChoice {
    ColumnFirst,
    RowFirst,
    Both,
}

#[derive(Debug, Args)]
pub struct MatrixInput {
    /// Inline matrix, e.g. `1,3;3,4` or `[[1,3],[3,4]]`.
    #[arg(value_name = "MATRIX", conflicts_with = "input")]
    pub matrix: Option<String>,

    /// JSON matrix file (`-` for standard input).
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunOptions {
    /// Exact rational arithmetic; decimals are expanded exactly (0.25 = 1/4).
    #[arg(long)]
    pub exact: bool,

    /// Start with row scaling instead of column scaling.
    #[arg(long)]
    pub row_first: bool,

    /// Half-step cap [default: 10000, or 64 with --exact].
    #[arg(long, value_name = "N")]
    pub max_steps: Option<usize>,

    /// Margin tolerance for approximate runs [default: $SINKHORN_TOL or 1e-12].
    #[arg(long, value_name = "TOL")]
    pub tol: Option<f64>,

    /// Exact runs: stop once an entry needs more than this many bits.
    #[arg(long, value_name = "BITS")]
    pub max_bits: Option<u64>,
}

impl RunOptions {
    pub fn start_side(&self) -> StartSide {
        if self.row_first {
            StartSide::RowFirst
        } else {
            StartSide::ColumnFirst
        }
    }
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    #[command(flatten)]
    pub input: MatrixInput,
    #[command(flatten)]
    pub run: RunOptions,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RcScaleArgs {
    #[command(flatten)]
    pub input: MatrixInput,
    /// Row targets, comma separated.
    #[arg(long, value_name = "R1,R2,..", allow_hyphen_values = true)]
    pub rows: String,
    /// Column targets, comma separated.
    #[arg(long, value_name = "C1,C2,..", allow_hyphen_values = true)]
    pub cols: String,
    #[command(flatten)]
    pub run: RunOptions,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub input: MatrixInput,
    /// Exact rational limit, or the reason it is irrational.
    #[arg(long)]
    pub exact: bool,
    /// Symmetric 2x2 form `(a b; b d)` with its symmetric scaling.
    #[arg(long, conflicts_with = "exact")]
    pub symmetric: bool,
    /// Bordered family: all ones with corner K, given as `n=3 K=2`.
    #[arg(long, num_args = 2, value_names = ["n=N", "K=K"], conflicts_with_all = ["exact", "symmetric", "triangular"])]
    pub bordered: Option<Vec<String>>,
    /// Bordered 3x3 family with triangular corner K = (k^2 + k) / 2; exact.
    #[arg(long, value_name = "k", conflicts_with_all = ["exact", "symmetric"])]
    pub triangular: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: MatrixInput,
    /// Classify for a run that starts with row scaling.
    #[arg(long, conflicts_with = "both_orders")]
    pub row_first: bool,
    /// Classify under both start orders and compare step counts.
    #[arg(long)]
    pub both_orders: bool,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Matrix dimension.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Largest integer entry.
    #[arg(long)]
    pub bound: u64,
    /// Row-normalize candidates and skip duplicates.
    #[arg(long)]
    pub normalize_rows: bool,
    /// Exact half-step cap per run.
    #[arg(long, default_value_t = 64)]
    pub max_steps: usize,
    /// Largest enumeration allowed.
    #[arg(long, default_value_t = 10_000_000)]
    pub cap: u128,
    /// Per-run entry-size budget in bits; larger runs count as non-terminating.
    #[arg(long, value_name = "BITS", default_value_t = sinkhorn_core::engine::DEFAULT_SEARCH_MAX_BITS)]
    pub max_bits: u64,
    #[arg(long, value_enum, default_value_t = SideChoice::Both)]
    pub side: SideChoice,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub input: MatrixInput,
    #[command(flatten)]
    pub run: RunOptions,
    /// Alias for --max-steps.
    #[arg(long, value_name = "N", conflicts_with = "max_steps")]
    pub steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
