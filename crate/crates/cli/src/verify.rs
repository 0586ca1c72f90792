use std::fmt::Write as _;

use rayon::prelude::*;

use radg_core::game;
use radg_core::sim::{self, StrategyProfile};
use radg_core::verify::{scenario_suite, PropertyReport};
use radg_core::Scenario;

use crate::{random_scenario, trial_rng};

/// Chord deviation allowed for a player's optimal path.
pub const STRAIGHTNESS_TOLERANCE: f64 = 1e-6;

/// Players move along straight lines under optimal play.
pub fn straight_line_play(s: &Scenario) -> PropertyReport {
    let mut r = PropertyReport {
        name: "straight_line_play".into(),
        passed: true,
        checked: 0,
        skipped: 0,
        worst: 0.0,
        note: String::new(),
    };
    let sol = match game::solve(s) {
        Ok(sol) => sol,
        Err(e) => {
            r.skipped = 1;
            r.note = format!("degenerate geometry: {e}");
            return r;
        }
    };
    match sim::simulate(s, &sol.chosen, &StrategyProfile::optimal(), sim::default_step(s)) {
        Ok(traj) => {
            r.checked = 1;
            r.worst = sim::straightness_check(&traj).into_iter().fold(0.0, f64::max);
            if r.worst >= STRAIGHTNESS_TOLERANCE {
                r.passed = false;
                r.note = format!("chord deviation {:.3e} under optimal play", r.worst);
            }
        }
        Err(e) => {
            r.checked = 1;
            r.passed = false;
            r.note = format!("simulation failed: {e}");
        }
    }
    r
}

pub fn check_scenario(s: &Scenario) -> Vec<PropertyReport> {
    let mut reports = scenario_suite(s);
    reports.push(straight_line_play(s));
    reports
}

/// Runs [`check_scenario`] on `trials` random `(n, m)` scenarios and merges
/// the reports property by property. Only failure notes survive the merge.
pub fn check_random(n: usize, m: usize, trials: usize, seed: u64) -> Vec<PropertyReport> {
    let runs: Vec<Vec<PropertyReport>> =
        (0..trials).into_par_iter().map(|k| check_scenario(&random_scenario(&mut trial_rng(seed, n, m, k), n, m))).collect();
    let mut merged: Vec<PropertyReport> = Vec::new();
    for run in &runs {
        for r in run {
            match merged.iter_mut().find(|x| x.name == r.name) {
                Some(x) => x.absorb(r),
                None => merged.push(r.clone()),
            }
        }
    }
    for r in merged.iter_mut().filter(|r| r.passed) {
        r.note.clear();
    }
    merged
}

pub fn render(reports: &[PropertyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status} {:<34} checked={:<5} skipped={:<4} worst={:.3e}", r.name, r.checked, r.skipped, r.worst);
        if !r.note.is_empty() {
            let _ = write!(out, "  {}", r.note);
        }
        out.push('\n');
    }
    out
}
