//! Reference scenarios with published positions and speeds.

use crate::model::Scenario;
use crate::vec3::Vec3;

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

/// Three pursuers against three evaders; the pursuers win.
pub fn three_on_three_pursuer_win() -> Scenario {
    Scenario::from_positions(
        &[(v(-6.77, -2.95, 0.01), 1.71), (v(-3.34, -3.96, -3.33), 2.23), (v(4.76, -13.35, -0.61), 2.28)],
        &[(v(4.92, -7.91, 4.43), 1.69), (v(-8.07, 2.73, -5.91), 1.01), (v(-6.73, -10.65, -12.49), 1.84)],
        None,
    )
    .expect("preset is valid")
}

/// Three pursuers against three evaders; the evaders win and the optimal set needs refinement.
pub fn three_on_three_evader_win() -> Scenario {
    Scenario::from_positions(
        &[(v(0.38, -7.06, 1.17), 2.09), (v(0.10, -7.45, -10.68), 1.65), (v(0.80, 3.98, -8.45), 1.69)],
        &[(v(-1.57, -6.23, 1.67), 1.41), (v(0.38, -11.65, 2.24), 1.75), (v(4.79, -4.71, 2.68), 1.83)],
        None,
    )
    .expect("preset is valid")
}

/// Symmetric three-pursuer, two-evader state with four equally optimal assignments.
pub fn dispersal_three_on_two() -> Scenario {
    Scenario::from_positions(
        &[(v(1.0, 0.0, 0.0), 1.0), (v(1.0, 0.0, 0.5), 1.0), (v(1.0, 0.0, -0.5), 1.0)],
        &[(v(0.75, 1.0, 0.0), 0.5), (v(0.75, -1.0, 0.0), 0.5)],
        None,
    )
    .expect("preset is valid")
}

/// Payoff matrix with two tied optimal assignments.
pub fn tied_payoff_rows() -> Vec<Vec<f64>> {
    vec![vec![3.23, 1.34, 2.21], vec![3.66, 1.77, 1.67], vec![2.89, 3.24, 9.56]]
}

/// All presets with short names.
pub fn all() -> Vec<(&'static str, Scenario)> {
    vec![
        ("three_on_three_pursuer_win", three_on_three_pursuer_win()),
        ("three_on_three_evader_win", three_on_three_evader_win()),
        ("dispersal_three_on_two", dispersal_three_on_two()),
    ]
}
