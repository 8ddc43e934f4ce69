//! Command-line front end for `adelic`.
//!
//! Every subcommand is a pure function of its flags: the same invocation always
//! prints the same bytes.

pub mod commands;
pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use report::{Format, RunConfig};

/// Errors of a CLI run, mapped to exit codes by [`CliError::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] adelic::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 3 for numeric non-convergence, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "adelic", version, about = "Green functions, heights and energies of rational maps over Q")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Working precision in bits.
    #[arg(long, global = true, env = "ADELIC_PREC", default_value_t = 256, value_parser = clap::value_parser!(u64).range(53..))]
    pub prec: u64,
    /// Target error for certified quantities.
    #[arg(long, global = true, env = "ADELIC_TOL", default_value_t = 1e-30)]
    pub tol: f64,
    /// Pullback depth for energy estimates.
    #[arg(long, global = true, env = "ADELIC_DEPTH", default_value_t = 9)]
    pub depth: usize,
    /// Seed for every random choice.
    #[arg(long, global = true, env = "ADELIC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores. Output does not depend on it.
    #[arg(long, global = true, env = "ADELIC_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, env = "ADELIC_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, env = "ADELIC_OUT")]
    pub out: Option<PathBuf>,
}

impl Global {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            precision: self.prec as usize,
            tol: self.tol,
            seed: self.seed,
            depth: self.depth,
        }
    }
}

/// A map as JSON, or `@path` to a JSON file.
#[derive(Debug, Clone, Args)]
pub struct MapArg {
    #[arg(long)]
    pub map: String,
}

#[derive(Debug, Clone, Args)]
pub struct MapPair {
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub map2: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact resultant and bad primes of a map.
    Resultant(MapArg),
    /// Local Green function at one point and place.
    Green {
        #[command(flatten)]
        map: MapArg,
        /// `p/q`, `inf`, or `re,im` (archimedean place only, evaluated in double precision).
        #[arg(long)]
        point: String,
        #[arg(long, default_value = "arch")]
        place: String,
    },
    /// Hölder certificates at the given places, or at every relevant place.
    HolderCert {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_delimiter = ',')]
        place: Vec<String>,
    },
    /// Samples point pairs and checks a certificate against them.
    HolderVerify {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, default_value = "arch")]
        place: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Divide the certified constant by this factor before checking.
        #[arg(long)]
        corrupt: Option<f64>,
    },
    /// Canonical height of a rational point.
    Height {
        #[command(flatten)]
        map: MapArg,
        #[arg(long)]
        point: String,
    },
    /// Height of the map itself.
    Hrat(MapArg),
    /// Rational preperiodic points of bounded naive height.
    Preper {
        #[command(flatten)]
        map: MapArg,
        /// Naive height bound; a number or `log(x)`.
        #[arg(long, default_value = "log(10)")]
        bound: String,
    },
    /// Common preperiodic points of two maps.
    CommonPreper {
        #[command(flatten)]
        maps: MapPair,
        #[arg(long, default_value = "log(10)")]
        bound: String,
        /// Also match numeric complex spectra.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 2)]
        max_m: usize,
        #[arg(long, default_value_t = 2)]
        max_period: usize,
        #[arg(long, default_value_t = 1e-20)]
        match_tol: f64,
    },
    /// Archimedean mutual energy of the two equilibrium measures.
    PairingEnergy {
        #[command(flatten)]
        maps: MapPair,
        /// Kernel floor; defaults to 1e-9.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Regularized energy of a finite set of rational points.
    SetEnergy {
        /// JSON array of points.
        #[arg(long)]
        set: String,
        /// JSON object from places to radii.
        #[arg(long, default_value = "{}")]
        epsilon: String,
    },
    /// Upper bound for the pairing from Hölder certificates and heights of a set.
    BoundSplit {
        #[command(flatten)]
        maps: MapPair,
        #[arg(long, default_value = r#"["0"]"#)]
        set: String,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
    },
    /// The potential U over a grid of parameters.
    Uscan {
        /// JSON family with coefficients affine in `t`.
        #[arg(long)]
        family: String,
        /// `start:stop:count` for the real part.
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        im: String,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Size of the small-height set implied by two height inequalities.
    UniformN {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        c_prime: f64,
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        c2: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        deg: u64,
    },
    /// Product-formula residuals of given or random rationals.
    ProductCheck {
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Number of random rationals to draw instead.
        #[arg(long)]
        random: Option<usize>,
        /// Decimal digits of random numerators and denominators.
        #[arg(long, default_value_t = 18)]
        digits: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Resultant(_) => "resultant",
            Command::Green { .. } => "green",
            Command::HolderCert { .. } => "holder-cert",
            Command::HolderVerify { .. } => "holder-verify",
            Command::Height { .. } => "height",
            Command::Hrat(_) => "hrat",
            Command::Preper { .. } => "preper",
            Command::CommonPreper { .. } => "common-preper",
            Command::PairingEnergy { .. } => "pairing-energy",
            Command::SetEnergy { .. } => "set-energy",
            Command::BoundSplit { .. } => "bound-split",
            Command::Uscan { .. } => "uscan",
            Command::UniformN { .. } => "uniform-n",
            Command::ProductCheck { .. } => "product-check",
        }
    }
}

/// Runs one parsed invocation and writes its report.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    if !(g.tol > 0.0) {
        return Err(CliError::Input("--tol must be positive".into()));
    }
    if g.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(g.threads).build_global();
    }
    let text = commands::dispatch(&cli.command, g)?;
    report::emit(&text, g.out.as_deref())
}
