//! `betadim`: command-line access to beta-expansion counting, entropy
//! spectra, Erdős–Rényi traces and Moran constructions.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use betadim::expansion::{DEFAULT_DEPTH, DEFAULT_GUARD_BAND, DEFAULT_MAX_PRECISION_BITS};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod output;

use output::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "betadim", version, about = "Beta-expansion combinatorics and dimension spectra")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Base: a decimal literal or one of golden, tribonacci, plastic.
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Materialized digits of the expansion of one.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Distance to a branch point below which digits are certified exactly.
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD_BAND)]
    pub guard_band: f64,
    /// Cap on the bit size of exact orbit values.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PRECISION_BITS)]
    pub max_precision_bits: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for grid sweeps (output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// key=value config file; defaults to $BETADIM_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Greedy digits of a point.
    Expand {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long)]
        n: usize,
    },
    /// Expansion of one, Parry class and zero-run profile.
    One,
    /// Parry's criterion on a digit word.
    Admissible {
        /// Digits, comma separated or as a compact string.
        #[arg(long)]
        word: String,
    },
    /// Admissible words of length n, optionally with a digit-sum constraint.
    Count(CountArgs),
    /// The approximant root beta_m.
    BetaM {
        #[arg(long)]
        m: usize,
    },
    /// Entropy curve of digit frequencies.
    Entropy(EntropyArgs),
    /// Ergodic digit mean.
    AlphaStar(AlphaStarArgs),
    /// Maximal digit average.
    Lambda {
        #[arg(long, value_enum, default_value_t = LambdaMethodArg::Mmc)]
        method: LambdaMethodArg,
        /// Word length of the brute-force method.
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Erdős–Rényi dimension spectrum with both Besicovitch spectra.
    Spectrum(SpectrumArgs),
    /// Erdős–Rényi window averages of a digit stream.
    ErTrace(ErTraceArgs),
    /// Moran word-set levels, with sampled streams written to files.
    Moran(MoranArgs),
    /// Slowly-varying diagnostics of a window growth function.
    SvCheck {
        #[arg(long, value_enum, default_value_t = PhiArg::Log)]
        theta: PhiArg,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        nu: f64,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
    },
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub n: usize,
    /// Exact digit sum.
    #[arg(long, conflicts_with_all = ["sum_range", "above", "below"])]
    pub sum: Option<u64>,
    /// Digit-sum range P:Q, closed unless --open.
    #[arg(long, conflicts_with_all = ["above", "below"])]
    pub sum_range: Option<String>,
    #[arg(long, requires = "sum_range", conflicts_with = "closed")]
    pub open: bool,
    #[arg(long, requires = "sum_range")]
    pub closed: bool,
    /// Digit sum strictly above P.
    #[arg(long, conflicts_with = "below")]
    pub above: Option<u64>,
    /// Digit sum strictly below Q.
    #[arg(long)]
    pub below: Option<u64>,
    /// Count only words made full by M trailing zeros.
    #[arg(long)]
    pub full: bool,
    /// Zero padding of --full; defaults to the zero-run padding.
    #[arg(long = "M", requires = "full")]
    pub padding: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Default,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    TwoSided,
    Lower,
    Upper,
}

#[derive(Args, Debug, Clone)]
pub struct ScheduleArgs {
    /// A0:A1:STEP or a comma-separated list.
    #[arg(long, default_value = "0:1:0.05")]
    pub alpha_grid: String,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Default)]
    pub schedule: ScheduleArg,
    /// Word lengths of a custom schedule (one, or one per delta).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Window half-widths of a custom schedule.
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    /// Largest truncation index for non-Parry bases.
    #[arg(long, default_value_t = betadim::automaton::DEFAULT_TRUNCATION_DEPTH)]
    pub m_depth: usize,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[arg(long, value_enum, default_value_t = VariantArg::TwoSided)]
    pub variant: VariantArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphaMethodArg {
    Auto,
    Closed,
    Birkhoff,
    Density,
}

#[derive(Args, Debug, Clone)]
pub struct AlphaStarArgs {
    #[arg(long, value_enum, default_value_t = AlphaMethodArg::Auto)]
    pub method: AlphaMethodArg,
    /// Digits per Birkhoff run.
    #[arg(long, default_value_t = 1_000_000)]
    pub digits: usize,
    /// Orbit terms of the density quadrature.
    #[arg(long, default_value_t = 4096)]
    pub resolution: usize,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[command(flatten)]
    pub alpha_star: AlphaStarArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LambdaMethodArg {
    Mmc,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhiArg {
    Identity,
    Log,
    Loglog,
    Arctan,
    Explnnu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StreamVariantArg {
    Plus,
    Infinite,
}

#[derive(Args, Debug)]
pub struct ErTraceArgs {
    /// expand:X, moran:ALPHA,N[,M] or random.
    #[arg(long, default_value = "random")]
    pub source: String,
    #[arg(long, value_enum, default_value_t = PhiArg::Log)]
    pub phi: PhiArg,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    /// Last checkpoint.
    #[arg(long)]
    pub n: usize,
    /// Level of the Moran sandwich bounds added to each row (moran sources only).
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, value_enum, default_value_t = StreamVariantArg::Plus)]
    pub variant: StreamVariantArg,
}

#[derive(Args, Debug)]
pub struct MoranArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long = "N")]
    pub n_digits: usize,
    /// Zero padding; defaults to the zero-run padding.
    #[arg(long = "M")]
    pub padding: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    /// Streams to sample, seeded seed, seed+1, ...
    #[arg(long, default_value_t = 0)]
    pub sample: usize,
    /// Digits per sampled stream; defaults to the full stream over the levels.
    #[arg(long)]
    pub len: Option<usize>,
    /// Directory receiving manifest.json and the digit files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StreamVariantArg::Plus)]
    pub variant: StreamVariantArg,
}

fn run(args: Vec<String>) -> Result<output::Rendered, CliError> {
    let args = match config::locate(&args) {
        Some(path) => config::merge(args, &config::load(&path)?),
        None => args,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Some(t) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {t} threads: {e}")))?;
    }
    commands::dispatch(&cli)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(r) => {
            eprint!("{}", r.stderr);
            let mut out = std::io::stdout().lock();
            if out.write_all(r.stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(5);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("betadim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
