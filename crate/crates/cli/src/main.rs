mod commands;
mod config;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fstruct_core::classify::ClassTag;
use fstruct_core::curvature::Grid;
use fstruct_core::flagmetric::FStructure;
use num_complex::Complex64;
use num_rational::Rational64;

use config::{Format, Overrides};
use report::{Float, Report, Tolerances};

/// Invariant f-structures on SU(3)/T_max and canonical structures of
/// k-symmetric spaces.
#[derive(Debug, Parser)]
#[command(name = "fstruct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat `key = value` file with tol, seed, trials or format.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Numeric tolerance [default: 1e-9].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed of the random sampler [default: 42].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random draws per numeric check [default: 1000].
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,
    /// Output format [default: json].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact metric loci of the five classes with sampled witnesses.
    Classify {
        /// Restrict to one structure, e.g. `1,1,0` or `f1`.
        #[arg(long = "f", value_parser = input::structure)]
        f: Option<FStructure>,
        /// Restrict to one class: Kf, Kill, NKf, Hf or G1f.
        #[arg(long, value_parser = input::class)]
        class: Option<ClassTag>,
        /// Also test the metric `λ1,λ2,λ3` (rationals).
        #[arg(long, value_parser = input::metric)]
        metric: Option<[Rational64; 3]>,
    },
    /// Canonical structures of the automorphism `I(diag(s1, s2, s3))`.
    Canonical {
        #[arg(long)]
        order: u32,
        /// Diagonal entries, e.g. `i,-i,1` or `e5,e5^-1,1`.
        #[arg(long, value_parser = input::element)]
        element: [Complex64; 3],
    },
    /// Scan for Einstein metrics `(1, t, s)`.
    Einstein {
        /// `lo:hi:step` for both axes, or `lo:hi:step,lo:hi:step`.
        #[arg(long, value_parser = input::grid)]
        grid: Option<Grid>,
        /// Evaluate the Einstein residual of one metric `λ1,λ2,λ3`.
        #[arg(long, value_parser = input::metric)]
        probe: Option<[Rational64; 3]>,
    },
    /// Check one class condition for one structure and metric.
    Verify {
        #[arg(long = "f", value_parser = input::structure)]
        f: FStructure,
        #[arg(long, value_parser = input::class)]
        class: ClassTag,
        #[arg(long, value_parser = input::metric)]
        metric: [Rational64; 3],
    },
}

const EXIT_DISAGREEMENT: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => match config::load(path) {
            Ok(o) => o,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
        },
        None => Overrides::default(),
    };
    let flags = Overrides { tol: cli.tol, seed: cli.seed, trials: cli.trials.map(|t| t as usize), format: cli.format };
    let settings = flags.over(file).resolve();
    if !(settings.tol >= 0.0) {
        eprintln!("error: tolerance must be non-negative");
        return ExitCode::from(EXIT_INPUT);
    }

    let outcome = match cli.command {
        Command::Classify { f, class, metric } => Ok(commands::classify(f, class, metric, &settings)),
        Command::Canonical { order, element } => commands::canonical(order, element),
        Command::Einstein { grid, probe } => commands::einstein(grid.unwrap_or_default(), probe, &settings),
        Command::Verify { f, class, metric } => Ok(commands::verify(f, class, metric, &settings)),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };

    let command: Vec<String> = std::env::args().skip(1).collect();
    let report = Report {
        command: command.join(" "),
        seed: settings.seed,
        tolerances: Tolerances { tol: Float::new(settings.tol), trials: settings.trials },
        status: if outcome.agreed { "ok".into() } else { "disagreement".into() },
        result: outcome.body,
    };
    let text = match settings.format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown(),
    };
    print!("{text}");
    if outcome.agreed {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: an internal cross-check disagreed; see the report");
        ExitCode::from(EXIT_DISAGREEMENT)
    }
}
