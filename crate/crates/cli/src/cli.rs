use std::path::PathBuf;

use bell_core::optimizer::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bell", version, about = "CHSH, local hidden variables and Bell-test networks")]
pub struct Cli {
    /// Report format. Text rounds to 7 decimals; JSON keeps full precision.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlators, S and bound verdicts for a behavior or model file.
    Chsh { file: PathBuf },
    /// The 16 deterministic strategies and their S values.
    Enumerate,
    /// Seesaw search for the settings maximizing |S| on a two-qubit state.
    Optimize {
        /// `singlet`, a basis keyword (`00`, `01`, `10`, `11`), or 4 real /
        /// 8 interleaved re,im amplitudes separated by commas.
        state: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Ancestral sampling of a network file; optional CSV dataset.
    Sample {
        file: PathBuf,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// CSV with header `lambda,x,y,A,B`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CHSH estimate from a dataset CSV written by `sample`.
    Estimate { file: PathBuf },
    /// Interpretations and the thesis each rejects; one record with a name.
    Taxonomy { name: Option<String> },
    /// S as Bob's pair rotates about z, starting from the reference settings.
    Sweep {
        #[arg(default_value = "singlet")]
        state: String,
        /// Number of angles, endpoints included.
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 360.0, allow_negative_numbers = true)]
        to: f64,
        /// CSV with header `theta_degrees,S`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a behavior file.
    Behavior {
        #[command(flatten)]
        source: BehaviorSource,
        #[arg(long)]
        out: PathBuf,
    },
    /// No-signaling check, local-polytope membership and a local decomposition.
    Local { file: PathBuf },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct BehaviorSource {
    /// Quantum behavior of this state at the reference settings.
    #[arg(long)]
    pub state: Option<String>,
    /// Behavior of a model or network file.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Uniform,
    PrBox,
}
