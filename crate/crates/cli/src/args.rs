use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Method, SyntheticArg};

#[derive(Debug, Parser)]
#[command(
    name = "genecluster",
    version,
    about = "Cluster gene-expression matrices with K-Means, ISODATA, AGMFI and EIAGMFI"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm repeatedly with seeds seed, seed+1, ...
    Run(RunArgs),
    /// Run several algorithms on the same data and seed schedule.
    Compare(CompareArgs),
    /// Show the CCIA seed groups and centroids for a matrix.
    SeedInspect(SeedInspectArgs),
    /// Write a synthetic Gaussian benchmark matrix.
    Generate(GenerateArgs),
    /// Drop incomplete rows and z-score every gene.
    Normalize(NormalizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Kmeans,
    Isodata,
    Agmfi,
    Eiagmfi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    Random,
    Ccia,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Delimited matrix file: label, then one value per condition.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Synthetic dataset, e.g. "k=5,points=60,dims=17,separation=8,spread=1,seed=0".
    /// Used when no --input is given; omitted keys take those defaults.
    #[arg(long)]
    pub synthetic: Vec<SyntheticArg>,
    /// Field delimiter; "\t" and "tab" mean a tab.
    #[arg(long, default_value = "\t", hide_default_value = true)]
    pub delimiter: String,
    /// Token marking a missing value (repeatable). Defaults to NA, N/A and
    /// the empty field.
    #[arg(long = "missing-token")]
    pub missing_tokens: Vec<String>,
    /// The first non-empty line is a header.
    #[arg(long)]
    pub header: bool,
    /// Z-score every gene (row) to mean 0 and population standard deviation 1.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Outer merge/split iterations of isodata and agmfi.
    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,
    /// Lloyd iterations per K-Means pass.
    #[arg(long, default_value_t = 100)]
    pub lloyd_max_iter: usize,
    /// K-Means stops once no centroid moves farther than this.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// isodata: discard clusters with fewer members.
    #[arg(long, default_value_t = 2)]
    pub theta_n: usize,
    /// isodata: split clusters whose per-dimension std exceeds this.
    #[arg(long, default_value_t = 1.0)]
    pub theta_s: f64,
    /// isodata: merge centroids closer than this.
    #[arg(long, default_value_t = 1.0)]
    pub theta_c: f64,
    /// agmfi: discard clusters with fewer members.
    #[arg(long, default_value_t = 2)]
    pub min_cluster_size: usize,
    /// agmfi: split when a cluster's std along a dimension exceeds this
    /// multiple of the dataset's std there.
    #[arg(long, default_value_t = 1.0)]
    pub split_factor: f64,
    /// agmfi: merge threshold as a multiple of the mean pairwise centroid
    /// distance.
    #[arg(long, default_value_t = 0.5)]
    pub merge_multiplier: f64,
    /// Initial centroids for --init file, in the input matrix format.
    #[arg(long)]
    pub init_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    /// Defaults to random, or ccia for eiagmfi.
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,
    /// Initial number of clusters.
    #[arg(long = "k", visible_alias = "k-init", default_value_t = 10)]
    pub k_init: usize,
    #[arg(long, default_value_t = 7)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Print the merge/split/discard log of each run to stderr.
    #[arg(long)]
    pub events: bool,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Comma-separated methods, each ALGORITHM[:INIT], e.g.
    /// "kmeans,kmeans:ccia,agmfi,eiagmfi".
    #[arg(long, value_delimiter = ',', required = true)]
    pub algorithms: Vec<Method>,
    /// Initial numbers of clusters (repeatable, one table row each).
    #[arg(long = "k", visible_alias = "k-init", default_values_t = [10])]
    pub k_init: Vec<usize>,
    #[arg(long, default_value_t = 7)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct SeedInspectArgs {
    #[arg(long = "k", visible_alias = "k-init")]
    pub k: usize,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long = "k", default_value_t = 5)]
    pub k: usize,
    /// Points per cluster.
    #[arg(long, default_value_t = 60)]
    pub points: usize,
    #[arg(long, default_value_t = 17)]
    pub dims: usize,
    /// Minimum distance between generating centers.
    #[arg(long, default_value_t = 8.0)]
    pub separation: f64,
    /// Per-coordinate standard deviation within a cluster.
    #[arg(long, default_value_t = 1.0)]
    pub spread: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Matrix destination; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write ground-truth cluster labels here.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value = "\t", hide_default_value = true)]
    pub delimiter: String,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Destination; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}
