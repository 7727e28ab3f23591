use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Minimal string rotation experiments with modeled quantum query costs.
#[derive(Parser, Debug)]
#[command(name = "lmsr", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smallest index of a minimal rotation
    Solve(SolveArgs),
    /// Whether rotation k is minimal
    Decide(DecideArgs),
    /// Deterministic samples
    #[command(subcommand)]
    Ds(DsCommand),
    /// Leftmost and rightmost occurrences of a pattern
    Match(MatchArgs),
    /// Scaling benchmarks
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Recurrence iteration and fits
    #[command(subcommand)]
    Recur(RecurCommand),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Input string, bytes taken verbatim
    #[arg(long)]
    pub text: Option<String>,
    /// File whose raw bytes form the input string
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostModelArg {
    Quantum,
    Classical,
    None,
}

#[derive(Args, Debug, Clone)]
pub struct CostArgs {
    #[arg(long, value_enum, default_value_t = CostModelArg::Quantum)]
    pub cost_model: CostModelArg,
    /// Grover search constant
    #[arg(long, default_value_t = 1.0)]
    pub cg: f64,
    /// Minimum finding constant
    #[arg(long, default_value_t = 1.0)]
    pub cm: f64,
    /// Deterministic sampling constant
    #[arg(long, default_value_t = 1.0)]
    pub cd: f64,
    /// Sample-based matching constant
    #[arg(long, default_value_t = 1.0)]
    pub cs: f64,
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Recursion constant
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    /// Block exponent constant, b(n) = 2^(d sqrt(log2 n))
    #[arg(long, default_value_t = 2.0)]
    pub d: f64,
    /// Base-case threshold
    #[arg(long, default_value_t = 64)]
    pub n0: usize,
    /// Comparator success probability, in [2/3, 1]
    #[arg(long, default_value_t = 1.0)]
    pub success: f64,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Print JSON instead of plain text
    #[arg(long)]
    pub json: bool,
    /// Also write the report as CSV to this path
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Booth,
    Brute,
    Dnc,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Algo::Dnc)]
    pub algo: Algo,
    #[command(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DecideArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Rotation index to test
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Algo::Dnc)]
    pub algo: Algo,
    #[command(flatten)]
    pub cost: CostArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Subcommand, Debug)]
pub enum DsCommand {
    /// Build a sample for the input pattern
    Build(DsBuildArgs),
    /// Check a sample against the input pattern
    Verify(DsVerifyArgs),
}

#[derive(Args, Debug)]
pub struct DsBuildArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub cost: CostArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SampleSource {
    /// Sample as JSON {"delta": .., "witnesses": [..]}
    #[arg(long)]
    pub sample: Option<String>,
    /// File holding the sample JSON (a `ds build --json` report also works)
    #[arg(long)]
    pub sample_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DsVerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sample: SampleSource,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MatchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub pattern: String,
    /// Use this sample of the pattern instead of building one
    #[arg(long)]
    pub sample: Option<String>,
    #[command(flatten)]
    pub cost: CostArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Subcommand, Debug)]
pub enum BenchCommand {
    /// Mean ledger charges over random strings of length 2^e
    Scaling(ScalingArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Solve,
    Decide,
}

#[derive(Args, Debug)]
pub struct ScalingArgs {
    #[arg(long, value_enum, default_value_t = Algo::Dnc)]
    pub algo: Algo,
    #[arg(long, value_enum, default_value_t = Problem::Solve)]
    pub problem: Problem,
    #[arg(long, default_value_t = 10)]
    pub min_exp: u32,
    #[arg(long, default_value_t = 14)]
    pub max_exp: u32,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub alphabet: u16,
    #[command(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Subcommand, Debug)]
pub enum RecurCommand {
    /// Master theorem class of T(n) = a T(n/b) + n^c log^p n
    Master(MasterArgs),
    /// Function-problem recurrence at n = 2^k
    Function(FunctionArgs),
    /// Decision-problem recurrences at n = 2^k
    Decision(DecisionArgs),
    /// Ratio sequence of the block-count limit
    Limit(LimitArgs),
    /// Fit log2(Q/sqrt n) against sqrt(log2 n) from a CSV of (n, Q)
    Fit(FitArgs),
}

#[derive(Args, Debug)]
pub struct MasterArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FunctionArgs {
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    #[arg(long, default_value_t = 2.0)]
    pub d: f64,
    #[arg(long, default_value_t = 64)]
    pub n0: usize,
    #[arg(long, default_value_t = 10)]
    pub min_exp: u32,
    #[arg(long, default_value_t = 40)]
    pub max_exp: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionKindArg {
    Plain,
    Preprocessed,
}

#[derive(Args, Debug)]
pub struct DecisionArgs {
    #[arg(long, value_enum, default_value_t = DecisionKindArg::Preprocessed)]
    pub kind: DecisionKindArg,
    #[arg(long, default_value_t = 10)]
    pub min_exp: u32,
    #[arg(long, default_value_t = 40)]
    pub max_exp: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    /// Defaults to 2 sqrt(log2 c)
    #[arg(long)]
    pub d: Option<f64>,
    /// Grid of powers of two, `2^LO..2^HI`
    #[arg(long, default_value = "2^20..2^40")]
    pub grid: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// CSV with a header; uses columns `n` and `total`, else the first two
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
