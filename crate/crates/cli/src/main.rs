//! `rosen`: expansions, domain dumps, spectrum tables and simulations.

mod commands;
mod expr;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rosen_core::montecarlo::{DistributionConfig, SimConfig, Threshold};
use rosen_core::{Precision, TiePolicy};

use commands::{CliError, Context, Outcome, Simulation};

#[derive(Debug, Parser)]
#[command(name = "rosen", version, about = "Rosen continued fractions and the Tong spectrum")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "ROSEN_PRECISION_BITS", default_value_t = Precision::DEFAULT_BITS)]
    precision_bits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Fail with exit code 3 when a digit sits on a boundary instead of
    /// taking the half-open convention.
    #[arg(long, global = true)]
    strict_ties: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Digits, convergents and approximation coefficients of x.
    Expand {
        #[arg(long)]
        q: u32,
        /// Decimal literal or expression in pi, lambda, sqrt(n), + - * / and parentheses.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Staircase, heights, R and C_q of the natural-extension domain.
    Domain {
        #[arg(long)]
        q: u32,
    },
    /// Sampled boundary curves of omega, D, A, B or C.
    Boundary {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        region: String,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Flushing thresholds, Tong constants and region measures.
    Spectrum {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
    },
    /// Monte Carlo checks; exit code 1 if any assertion fails.
    Simulate {
        #[command(subcommand)]
        sim: SimCommand,
    },
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long)]
    q: u32,
    /// Steps per orbit, burn-in included.
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    orbits: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Unrecorded leading steps of each orbit.
    #[arg(long)]
    burnin: Option<usize>,
}

impl SimArgs {
    fn config(&self, iters: usize, orbits: usize, burnin: usize) -> SimConfig {
        let iters = self.iters.unwrap_or(iters);
        SimConfig::new(self.q, iters, self.orbits.unwrap_or(orbits), self.seed)
            .with_burn_in(self.burnin.unwrap_or(burnin.min(iters.saturating_sub(1))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ThresholdArg {
    Half,
    Hq,
}

#[derive(Debug, Subcommand)]
enum SimCommand {
    /// Frequency of coefficient blocks flushed below the threshold.
    Blocks {
        #[command(flatten)]
        common: SimArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ThresholdArg::Half)]
        threshold: ThresholdArg,
    },
    /// Block minima against the Tong constants.
    Tong {
        #[command(flatten)]
        common: SimArgs,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Hits of coefficients below the Hurwitz constant.
    Borel {
        #[command(flatten)]
        common: SimArgs,
    },
    /// Chi-square test of orbit statistics against the invariant measure.
    Distribution {
        #[command(flatten)]
        common: SimArgs,
        #[arg(long, default_value_t = DistributionConfig::default().t_bins)]
        t_bins: usize,
        #[arg(long, default_value_t = DistributionConfig::default().grid_t)]
        grid_t: usize,
        #[arg(long, default_value_t = DistributionConfig::default().grid_v)]
        grid_v: usize,
        #[arg(long, default_value_t = DistributionConfig::default().stride)]
        stride: usize,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let precision = Precision::new(cli.precision_bits)?;
    let ctx = Context {
        precision,
        ties: if cli.strict_ties {
            TiePolicy::Strict
        } else {
            TiePolicy::HalfOpen
        },
    };
    match &cli.command {
        Command::Expand { q, x, n } => commands::expand(&ctx, *q, x, *n),
        Command::Domain { q } => commands::domain(&ctx, *q),
        Command::Boundary { q, region, points } => commands::boundary(&ctx, *q, region, *points),
        Command::Spectrum { q, kmax } => commands::spectrum(&ctx, *q, *kmax),
        Command::Simulate { sim } => {
            let (sim, cfg) = match sim {
                SimCommand::Blocks { common, k, threshold } => {
                    let threshold = match threshold {
                        ThresholdArg::Half => Threshold::Half,
                        ThresholdArg::Hq => Threshold::Hurwitz,
                    };
                    (
                        Simulation::Blocks { k: *k, threshold },
                        common.config(1_000_000, 1, 1000),
                    )
                }
                SimCommand::Tong { common, kmax } => (Simulation::Tong { k_max: *kmax }, common.config(10_000, 100, 0)),
                SimCommand::Borel { common } => (Simulation::Borel, common.config(10_000, 100, 0)),
                SimCommand::Distribution {
                    common,
                    t_bins,
                    grid_t,
                    grid_v,
                    stride,
                } => {
                    let dc = DistributionConfig {
                        t_bins: *t_bins,
                        grid_t: *grid_t,
                        grid_v: *grid_v,
                        stride: *stride,
                    };
                    (Simulation::Distribution(dc), common.config(1_000_000, 1, 1000))
                }
            };
            commands::simulate(&ctx, sim, cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let text = match cli.format {
        Format::Json => output::to_json(&outcome.record),
        Format::Csv => match output::to_csv(&outcome.record) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::FAILURE;
    }
    if !outcome.failures.is_empty() {
        eprintln!("assertion failed: {}", outcome.failures.join(", "));
    }
    ExitCode::from(assertion_code(&outcome.failures))
}

/// 0 when every assertion passed, 1 otherwise.
fn assertion_code(failures: &[String]) -> u8 {
    u8::from(!failures.is_empty())
}
