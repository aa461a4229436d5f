use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "biaspca", version, about = "Bias-trick PCA and exact robust PCA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Principal components, directly or through the bias trick
    Pca(PcaArgs),
    /// Bias-trick eigenvalue error over a grid of epsilon values
    BiasSweep(SweepArgs),
    /// Optimal outlier removal with centering through the bias trick
    Rpca(RpcaArgs),
    /// Score the optimal outlier set against baseline outlier sets
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    #[value(name = "rows", alias = "points_as_rows")]
    Rows,
    #[value(name = "columns", alias = "points_as_columns")]
    Columns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Built-in dataset (iris, wine, wdbc, synthetic) or path to a delimited text file
    #[arg(long)]
    pub dataset: String,
    /// Whether each line of the file is a point or a feature
    #[arg(long, value_enum, default_value = "rows")]
    pub orientation: OrientationArg,
    /// 1-based file columns to keep, e.g. `1-4` or `2,5,7-9`
    #[arg(long)]
    pub columns: Option<String>,
    /// The first line of the file is a header
    #[arg(long)]
    pub header: bool,
    /// Seed for the synthetic dataset and for random subsets
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Report path; without it the report goes to stdout and the summary to stderr
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BiasArgs {
    /// Accuracy parameter; sets b = sqrt(1 - eps^2) / eps * |mu|
    #[arg(long, conflicts_with = "bias")]
    pub epsilon: Option<f64>,
    /// Explicit bias magnitude
    #[arg(long)]
    pub bias: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PcaArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Use the bias trick with this epsilon or bias instead of explicit centering
    #[command(flatten)]
    pub bias: BiasArgs,
    /// Number of components (default: all)
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Number of components compared (default: all)
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.3,0.2,0.1,0.05,0.01")]
    pub epsilons: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Number of outliers
    #[arg(long)]
    pub k: usize,
    /// Rank of the fitted subspace
    #[arg(long)]
    pub r: usize,
    #[command(flatten)]
    pub bias: BiasArgs,
    /// Worker threads for the branch-and-bound search
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    /// Enumerate every subset instead of branch and bound
    #[arg(long)]
    pub oracle: bool,
    /// Also score this many random outlier sets drawn with --seed
    #[arg(long)]
    pub random_subsets: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RpcaArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Baseline outlier-set file, optionally named as NAME=PATH; repeatable
    #[arg(long)]
    pub baseline: Vec<String>,
}
