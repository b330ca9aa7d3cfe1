//! `pentalab`: iterate higher pentagram maps, export integrals, run the
//! verification suites and render pictures.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input or
//! configuration, 3 singular orbit or degenerate geometry.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "pentalab",
    version,
    about = "Higher pentagram maps: orbits, integrals, checks and pictures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Iterate the map on a state and write the orbit as CSV.
    Iterate(IterateArgs),
    /// Write the integrals I_ij of a state as CSV.
    Integrals(IntegralsArgs),
    /// Run randomized verification suites.
    Verify(VerifyArgs),
    /// Render polygons with their diagonals, or one leapfrog circle construction, as SVG.
    Render(RenderArgs),
    /// Convert a state between coordinate systems.
    Convert(ConvertArgs),
    /// Export a leapfrog orbit as a lattice field, extended by the cross-ratio equation.
    Lattice(LatticeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Rational,
    Float,
    Complex,
}

/// Where the input state comes from: a file, or a seeded random draw.
#[derive(Args, Debug, Clone)]
pub struct StateSource {
    /// State or polygon JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Span of a random state (used without --state).
    #[arg(long)]
    pub k: Option<usize>,
    /// Period of a random state (used without --state).
    #[arg(long)]
    pub n: Option<usize>,
    /// Seed for random states.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Chart of a random state.
    #[arg(long, default_value = "xy")]
    pub coords: String,
    #[arg(long, value_enum, default_value_t = Backend::Rational)]
    pub backend: Backend,
}

#[derive(Args, Debug)]
pub struct IterateArgs {
    #[command(flatten)]
    pub source: StateSource,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    /// Iterate the inverse map.
    #[arg(long)]
    pub inverse: bool,
    /// Add approximate decimal columns next to exact values.
    #[arg(long)]
    pub decimal: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IntegralsArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Value of x_1 when lifting a (p, q) state.
    #[arg(long, default_value = "1")]
    pub x1: String,
    #[arg(long)]
    pub decimal: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 7)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Flip one sign of the Poisson tensor (negative control).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: StateSource,
    #[arg(long, default_value_t = 0)]
    pub steps: usize,
    /// Site of the leapfrog construction (1-based).
    #[arg(long, default_value_t = 1)]
    pub site: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Xy,
    Pq,
    Corner,
    /// Corrugated polygon in k-1 dimensions.
    Polygon,
    /// Polygon in the plane (k = 3 only).
    Plane,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub source: StateSource,
    #[arg(long, value_enum)]
    pub to: Target,
    #[arg(long, default_value = "1")]
    pub x1: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    /// Leapfrog state (`"coords": "spair"`).
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = 6)]
    pub size: usize,
    /// Cross-ratio constant, e.g. `2.5` or `{"re":0.3,"im":0.8}`.
    #[arg(long, default_value = "2.5")]
    pub q: String,
    /// Value at the odd site (0, 1).
    #[arg(long, default_value = "{\"re\":0.37,\"im\":-1.1}")]
    pub z01: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Iterate(a) => commands::iterate(&a),
        Command::Integrals(a) => commands::integrals(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Render(a) => commands::render(&a),
        Command::Convert(a) => commands::convert(&a),
        Command::Lattice(a) => commands::lattice(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
