//! Solver and simulator for multiplayer reach-avoid differential games in 3D.
//!
//! Evaders try to reach a target at the origin, pursuers try to capture them
//! first. Every player moves with simple constant-speed motion. The crate
//! classifies the winning team, computes the optimal pursuer-to-evader
//! assignment, evaluates the game value and simulates the closed-form
//! state-feedback optimal play.
//!
//! Module map:
//!
//! * [`model`]: players, scenarios, assignments and tolerances.
//! * [`geometry`]: Apollonius sphere / bisector plane and interception point.
//! * [`duel`]: the one-pursuer-one-evader game (barrier, value, gradients, controls).
//! * [`assignment`]: payoff and value matrices, assignment solver, optimal-set enumeration.
//! * [`game`]: team barrier, winner classification, multiplayer value, team controls.
//! * [`sim`]: event-driven trajectory simulation.
//! * [`verify`]: property checks shared by the test suites and the CLI.

pub mod assignment;
pub mod duel;
pub mod game;
pub mod geometry;
pub mod model;
pub mod presets;
pub mod sim;
pub mod vec3;
pub mod verify;

pub use model::{Assignment, Player, Role, Scenario, ScenarioConfig, SpeedRatio};
pub use vec3::Vec3;
