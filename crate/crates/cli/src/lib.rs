//! Library side of the `radg` command-line tool: scenario files, reports and
//! the four subcommands.

pub mod bench;
pub mod scenario_file;
pub mod simulate;
pub mod solve;
pub mod verify;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use radg_core::{Scenario, Vec3};

pub use scenario_file::{load_scenario, ScenarioFile, ScenarioFileError};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;
pub const EXIT_PROPERTY: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] ScenarioFileError),
    #[error("{0}")]
    Runtime(String),
    #[error("{count} propert{} failed", if *.count == 1 { "y" } else { "ies" })]
    PropertyFailure { count: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::PropertyFailure { .. } => EXIT_PROPERTY,
        }
    }

    pub(crate) fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Random scenario: positions uniform in [−15, 15]³, pursuer speeds uniform in
/// [1.5, 2.5], evader speeds uniform in [0.8, 2.0].
pub fn random_scenario(rng: &mut impl Rng, n: usize, m: usize) -> Scenario {
    fn player(rng: &mut impl Rng, speed: (f64, f64)) -> (Vec3, f64) {
        let x = Vec3::new(rng.gen_range(-15.0..=15.0), rng.gen_range(-15.0..=15.0), rng.gen_range(-15.0..=15.0));
        (x, rng.gen_range(speed.0..=speed.1))
    }
    let pursuers: Vec<_> = (0..n).map(|_| player(rng, (1.5, 2.5))).collect();
    let evaders: Vec<_> = (0..m).map(|_| player(rng, (0.8, 2.0))).collect();
    Scenario::from_positions(&pursuers, &evaders, None).expect("random scenarios are valid")
}

/// Generator for trial `trial` of the `(n, m)` cell. Each trial has its own
/// stream, so results do not depend on how trials are scheduled.
pub fn trial_rng(seed: u64, n: usize, m: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 48) ^ ((m as u64) << 32) ^ trial as u64);
    rng
}
