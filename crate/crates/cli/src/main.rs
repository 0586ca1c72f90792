use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use radg_cli::{bench, load_scenario, simulate, solve, verify, CliError};
use radg_core::assignment::DEFAULT_BRUTE_FORCE_CAP;
use radg_core::sim::StrategyProfile;

/// Solve, simulate and benchmark multiplayer reach-avoid games.
#[derive(Parser)]
#[command(name = "radg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the game, find the optimal assignments and the value.
    Solve {
        file: PathBuf,
        /// Where to write the JSON report [default: <stem>.solution.json beside FILE].
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Play the game out and write the trajectory CSV and events sidecar.
    Simulate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Profile::Optimal)]
        profile: Profile,
        /// Integration step in seconds [default: 1e-3 · scene size / max speed].
        #[arg(long, value_parser = positive_step)]
        step: Option<f64>,
        /// Trajectory CSV path [default: <stem>.trajectory.csv beside FILE].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time brute-force enumeration against the assignment solver.
    Bench {
        /// Cells as "(n,m),(n,m),..." with n pursuers and m evaders.
        #[arg(long, value_parser = parse_sizes)]
        sizes: Option<Sizes>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest feasible-set size brute force will enumerate.
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: u128,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suites on a scenario file or on random scenarios.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    file: Option<PathBuf>,
    /// Random scenarios: pursuer count, evader count, trials, seed.
    #[arg(long, num_args = 4, value_names = ["N", "M", "TRIALS", "SEED"])]
    random: Option<Vec<u64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Optimal,
    StraightEvaders,
}

#[derive(Clone)]
struct Sizes(Vec<(usize, usize)>);

fn parse_sizes(text: &str) -> Result<Sizes, String> {
    bench::parse_sizes(text).map(Sizes)
}

fn positive_step(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(s) if s > 0.0 && s.is_finite() => Ok(s),
        Ok(s) => Err(format!("step must be positive and finite, got {s}")),
        Err(e) => Err(e.to_string()),
    }
}

fn run_verify(args: VerifyArgs) -> Result<(), CliError> {
    let reports = match (args.file, args.random) {
        (Some(path), _) => verify::check_scenario(&load_scenario(&path)?.1),
        (None, Some(r)) => {
            let (n, m) = (r[0] as usize, r[1] as usize);
            if m == 0 || n < m || r[2] == 0 {
                return Err(CliError::Usage(format!("--random needs n ≥ m ≥ 1 and trials ≥ 1, got {n} {m} {}", r[2])));
            }
            verify::check_random(n, m, r[2] as usize, r[3])
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    print!("{}", verify::render(&reports));
    match reports.iter().filter(|r| !r.passed).count() {
        0 => Ok(()),
        k => Err(CliError::PropertyFailure { count: k }),
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { file, report } => solve::run(&file, report.as_deref()).map(drop),
        Command::Simulate { file, profile, step, out } => {
            let profile = match profile {
                Profile::Optimal => StrategyProfile::optimal(),
                Profile::StraightEvaders => StrategyProfile::straight_evaders(),
            };
            simulate::run(&file, &profile, step, out.as_deref()).map(drop)
        }
        Command::Bench { sizes, trials, seed, cap, out } => {
            let sizes = sizes.map_or_else(|| bench::DEFAULT_SIZES.to_vec(), |s| s.0);
            let report = bench::run(&sizes, trials as usize, seed, cap);
            print!("{}", report.render());
            match out {
                Some(path) => write_json(&path, &report),
                None => Ok(()),
            }
        }
        Command::Verify(args) => run_verify(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
