//! `nilbohr` command-line front end.

mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilbohr::verify::DEFAULT_SEED;
use nilbohr::{Arith, TieGuard};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "nilbohr", version, about = "Bohr sets, nilrotation return times and sets with gaps")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Arithmetic: exact (big rationals) or float (f64 with tie guards).
    #[arg(long, global = true, value_enum)]
    arith: Option<ArithArg>,
    /// Window of integers scanned, inclusive.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Distance to a half-integer treated as an unresolved tie in float mode.
    #[arg(long, global = true, default_value_t = nilbohr::scalar::DEFAULT_TIE_GUARD)]
    tie_guard: f64,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ArithArg {
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a generalized polynomial at every n in the window.
    GpEval(commands::GpEvalArgs),
    /// Bohr set {n : ‖p_j(n)‖ < ε_j for all j} on the window.
    Bohr(commands::BohrArgs),
    /// Return times of the superdiagonal nilrotation to an η-box.
    NilReturn(commands::NilReturnArgs),
    /// Top-right reduced coordinate z_1^d(n) over the window.
    Z1d(commands::Z1dArgs),
    /// Sums with gaps of length less than d.
    Sgd(commands::SgdArgs),
    /// Finite sums of a sequence.
    Fs(commands::FsArgs),
    /// Common-difference set of order d.
    Cdiff(commands::CdiffArgs),
    /// Gap test for syndeticity on the window.
    Syndetic(commands::SyndeticArgs),
    /// Windowed upper Banach density.
    Density(commands::DensityArgs),
    /// Bounded search for an intersectivity witness.
    Intersect(commands::IntersectArgs),
    /// Partition of SG_2 of a lacunary sequence and star-pattern search.
    RamseyCheck(commands::RamseyArgs),
    /// Return times of the affine torus map to a box.
    TorusReturn(commands::TorusReturnArgs),
    /// Multiple return times n with x, T^n x, ..., T^{dn} x all in a box.
    MultiReturn(commands::MultiReturnArgs),
    /// Integer weights for the Vandermonde moment identity.
    Lambda(commands::LambdaArgs),
    /// Run an acceptance suite by name or number, or `all`.
    Verify(commands::VerifyArgs),
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub arith: Option<Arith>,
    pub window: Option<(i64, i64)>,
    pub seed: u64,
    pub format: Format,
    pub guard: TieGuard,
}

impl RunConfig {
    fn from_args(g: &GlobalArgs) -> Result<Self, String> {
        let window = g.window.as_ref().map(|w| (w[0], w[1]));
        if let Some((lo, hi)) = window {
            if lo > hi {
                return Err(format!("empty window [{lo}, {hi}]"));
            }
        }
        if !(g.tie_guard > 0.0 && g.tie_guard.is_finite()) {
            return Err(format!("tie guard must be positive, got {}", g.tie_guard));
        }
        Ok(RunConfig {
            arith: g.arith.map(|a| match a {
                ArithArg::Exact => Arith::Exact,
                ArithArg::Float => Arith::Float,
            }),
            window,
            seed: g.seed,
            format: g.format,
            guard: TieGuard(g.tie_guard),
        })
    }

    pub fn arith_or(&self, default: Arith) -> Arith {
        self.arith.unwrap_or(default)
    }

    pub fn window_or(&self, lo: i64, hi: i64) -> (i64, i64) {
        self.window.unwrap_or((lo, hi))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_args(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let threads = cli
        .global
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli.command, &cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
