use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "manhattan",
    version,
    about = "Sample images on Manhattan grids and reconstruct them exactly"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closure, minimal form, density and atom volumes of a collection
    Info(ParamArgs),
    /// Write a synthetic test image
    Generate(GenerateArgs),
    /// Zero every DFT coefficient outside the Manhattan region
    Bandlimit(FilterArgs),
    /// Extract Manhattan samples into an MHS1 file
    Sample(SampleArgs),
    /// Rebuild an image from an MHS1 sample file
    Reconstruct(ReconstructArgs),
    /// Write the centered log-magnitude spectrum of an image
    Spectrum(SpectrumArgs),
    /// Export a frequency mask (region or a single atom)
    Mask(MaskArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Number of dimensions; inferred from --k when omitted
    #[arg(long)]
    pub dims: Option<usize>,
    /// Sampling factors, comma separated, each at least 2
    #[arg(long)]
    pub k: String,
    /// Dense spacings, comma separated integers or fractions (default all 1)
    #[arg(long)]
    pub lambda: Option<String>,
    /// Bi-step vectors, e.g. 100,010,001 (dimension 1 first)
    #[arg(long)]
    pub collection: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pgm,
    Mht1,
    Mhs1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Random,
    Impulse,
    Constant,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Extents, comma separated
    #[arg(long)]
    pub size: String,
    #[arg(long, value_enum, default_value = "random")]
    pub kind: Kind,
    /// Value for --kind constant
    #[arg(long, default_value_t = 0.0)]
    pub value: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub input: PathBuf,
    /// Destination MHS1 file
    #[arg(long)]
    pub samples: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// General onion peeling
    Onion,
    /// Dedicated two-dimensional procedure (B = 10,01 only)
    Fast,
    /// Least-squares oracle (tiny grids only)
    Oracle,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// MHS1 sample file
    #[arg(long)]
    pub samples: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum, default_value = "onion")]
    pub method: Method,
    /// Image to compare against; prints a PASS/FAIL line
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Relative max-error tolerance for --reference
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct MaskArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Extents, comma separated
    #[arg(long)]
    pub size: String,
    /// Export only this atom instead of the whole region
    #[arg(long)]
    pub atom: Option<String>,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}
