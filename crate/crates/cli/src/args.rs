use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "iconv-dft",
    version,
    about = "Invertible convolution of symmetrically padded signals: verification harness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward then inverse on random or file input; checks the reconstruction error.
    Roundtrip(Common),
    /// Checks every transition-table row against brute-force convolution.
    Table(Common),
    /// Per-frequency condition ratios of a kernel spectrum.
    Spectrum(Common),
    /// Single vs double precision roundtrip error over stack depth.
    Stack(Common),
    /// Converts between PGM and ICNV files.
    Convert(Common),
}

/// Flags shared by every subcommand. Unset values take per-command defaults.
#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Input padding mode per axis, e.g. `ws` or `wa,ws`.
    #[arg(long)]
    pub x_mode: Option<String>,
    /// Kernel padding mode per axis.
    #[arg(long)]
    pub w_mode: Option<String>,
    /// Signal length per axis (`16` or `16,12`); the period for `table` and `spectrum`.
    #[arg(long)]
    pub size: Option<String>,
    #[arg(long)]
    pub channels: Option<usize>,
    /// Kernel radius r (2r+1 taps per axis).
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `single` or `double`. ICNV to ICNV conversion keeps the input's unless given.
    #[arg(long)]
    pub precision: Option<String>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Table rows to run, e.g. `12,15`.
    #[arg(long)]
    pub rows: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Succeed only if the pair is not invertible and a forced inverse misses the tolerance.
    #[arg(long)]
    pub expect_failure: bool,
}
