//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "skinning-bounds",
    version,
    about = "Explicit contraction constants for Poincaré series operators"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Suppress the version banner on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, env = "SKINNING_BOUNDS_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

/// Free parameters shared by every bound evaluation.
#[derive(Clone, Copy, Debug, Args)]
pub struct Params {
    /// Thick-part scale in (0, arcsinh 1]; defaults to arcsinh 1.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Family parameter t >= 1.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contraction constant and intermediates for one surface.
    Bound {
        #[arg(short = 'g', long)]
        genus: u64,
        #[arg(short = 'n', long)]
        punctures: u64,
        #[arg(short = 'l', long)]
        systole: f64,
        #[command(flatten)]
        params: Params,
    },
    /// One row per (g, n, l) over ranges, in lexicographic order.
    Sweep {
        /// Genus range `a..b` (inclusive) or a single value.
        #[arg(short = 'g', long)]
        genus: String,
        /// Puncture range `a..b` (inclusive) or a single value.
        #[arg(short = 'n', long)]
        punctures: String,
        /// Systole values: `x`, `start:stop:step`, or `x,y,z`.
        #[arg(short = 'l', long)]
        systole: String,
        #[command(flatten)]
        params: Params,
        /// Write rows here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Universal constants with their closed forms.
    Constants,
    /// Constant identities and the numerical oracle suite.
    Verify {
        /// Scan resolution of the grid oracles (at least 1000).
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        /// Replace every tolerance (0 forces failures).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Ratio of log log(l/C) to its asymptotic expansion for growing genus.
    Asymptotic {
        /// Largest genus G >= 10; genera follow 10, 20, 50, 100, ...
        #[arg(long)]
        max_genus: u64,
        /// Systole; log log(l/C) does not depend on it.
        #[arg(short = 'l', long, default_value_t = 0.5)]
        systole: f64,
        #[command(flatten)]
        params: Params,
    },
    /// Contraction factor over a list of boundary components.
    Skinning {
        /// Components as `g,n,l;g,n,l;...`.
        #[arg(long)]
        boundary: String,
        #[command(flatten)]
        params: Params,
    },
}
