use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "neocalc",
    version,
    about = "Fuzzy limits and fuzzy derivatives from the command line"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Tail envelopes, measure of convergence and r-limit sets of a sequence
    SeqAnalyze(SeqAnalyze),
    /// Whether given points are r-limits of a sequence
    SeqMember(SeqMember),
    /// Derivative envelopes, strong/weak r-derivative sets and classification at a point
    FnAnalyze(FnAnalyze),
    /// Centered strong r-derivative sets along a grid
    FnProfile(FnProfile),
    /// List the built-in functions
    GalleryList(GalleryList),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SeqAnalyze(_) => "seq-analyze",
            Command::SeqMember(_) => "seq-member",
            Command::FnAnalyze(_) => "fn-analyze",
            Command::FnProfile(_) => "fn-profile",
            Command::GalleryList(_) => "gallery-list",
        }
    }

    pub fn output(&self) -> &Output {
        match self {
            Command::SeqAnalyze(a) => &a.output,
            Command::SeqMember(a) => &a.output,
            Command::FnAnalyze(a) => &a.output,
            Command::FnProfile(a) => &a.output,
            Command::GalleryList(a) => &a.output,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct Output {
    /// Write the JSON report here instead of standard output
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TailArgs {
    /// Sequence CSV: one value per line, optional `value` header
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Index of the first value
    #[arg(long, default_value_t = 1)]
    pub start_index: usize,
    /// Share of the prefix used as the tail window
    #[arg(long, default_value_t = 0.25)]
    pub tail_fraction: f64,
    /// Relative stability tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Also run the literal definition checkers
    #[arg(long, hide = true)]
    pub oracle: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SeqAnalyze {
    #[command(flatten)]
    #[serde(flatten)]
    pub tail: TailArgs,
    /// Radius of a requested r-limit set (repeatable)
    #[arg(long = "r", value_name = "R")]
    pub radii: Vec<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct SeqMember {
    #[command(flatten)]
    #[serde(flatten)]
    pub tail: TailArgs,
    /// Candidate limit (repeatable)
    #[arg(
        long = "a",
        value_name = "A",
        required = true,
        allow_hyphen_values = true
    )]
    pub points: Vec<f64>,
    /// Radius (repeatable)
    #[arg(long = "r", value_name = "R", required = true)]
    pub radii: Vec<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct FunctionSource {
    /// Built-in function, e.g. `abs`, `skew_tent:0.5,0`, `vdw:8`
    #[arg(
        long,
        value_name = "SPEC",
        conflicts_with = "input",
        required_unless_present = "input"
    )]
    pub builtin: Option<String>,
    /// Function samples CSV: `x,y` rows sorted by x, optional header
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct LadderArgs {
    /// Largest step (default 0.1·max(1, |x|))
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder_base: Option<f64>,
    /// Number of halvings considered
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder_levels: Option<usize>,
    /// Smallest step relative to max(1, |x|)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder_floor: Option<f64>,
    /// Scales per band
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band_size: Option<usize>,
    /// Bands used for the envelopes
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fine_bands: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct FnAnalyze {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: FunctionSource,
    /// Point of analysis
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    /// Approach mode: centered, left, right, two-sided (repeatable; default all)
    #[arg(long = "mode", value_name = "MODE")]
    pub modes: Vec<String>,
    /// Radius of requested strong/weak sets (repeatable)
    #[arg(long = "r", value_name = "R")]
    pub radii: Vec<f64>,
    /// Value whose membership grade is reported (repeatable)
    #[arg(long = "z", value_name = "Z", allow_hyphen_values = true)]
    pub z: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ladder: LadderArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct FnProfile {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: FunctionSource,
    /// Grid `start:end:count`, endpoints included
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    /// Radius of the strong sets
    #[arg(long = "r", value_name = "R", default_value_t = 0.0)]
    pub r: f64,
    /// Also write tab-separated x, lo, hi, defect rows here
    #[arg(long, value_name = "PATH")]
    pub plot_data: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ladder: LadderArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Debug, Args, Serialize)]
pub struct GalleryList {
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}
