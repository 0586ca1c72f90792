use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use radg_core::game;
use radg_core::sim::{self, EventKind, StrategyProfile, Trajectory};

use crate::solve::sibling;
use crate::{load_scenario, CliError};

/// One entry of the events sidecar. Indices are 1-based: `i` is the evader,
/// `j` the capturing pursuer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    #[serde(rename = "type")]
    pub kind: String,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 3]>,
}

pub fn event_records(traj: &Trajectory) -> Vec<EventRecord> {
    traj.events
        .iter()
        .map(|e| {
            let (kind, i, j, point) = match e.kind {
                EventKind::Capture { evader, pursuer, point } => ("capture", Some(evader + 1), Some(pursuer + 1), Some(point.to_array())),
                EventKind::Reach { evader } => ("reach", Some(evader + 1), None, None),
                EventKind::GameOver => ("game_over", None, None, None),
            };
            EventRecord { kind: kind.into(), t: e.t, i, j, point }
        })
        .collect()
}

pub fn csv_header(num_pursuers: usize, num_evaders: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for (tag, count) in [("P", num_pursuers), ("E", num_evaders)] {
        for k in 1..=count {
            h.extend(["x", "y", "z"].map(|c| format!("{tag}{k}.{c}")));
        }
    }
    h
}

pub fn write_csv(traj: &Trajectory, path: &Path) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    let players = traj.positions.first().map_or(0, Vec::len);
    w.write_record(csv_header(traj.num_pursuers, players - traj.num_pursuers))?;
    for (t, snap) in traj.times.iter().zip(&traj.positions) {
        let row = std::iter::once(*t).chain(snap.iter().flat_map(|x| x.to_array()));
        w.write_record(row.map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub struct SimulateOutput {
    pub trajectory: Trajectory,
    pub csv: PathBuf,
    pub events: PathBuf,
}

/// Simulates the chosen assignment of the scenario at `path` and writes the
/// trajectory CSV (default `<stem>.trajectory.csv`) and its events sidecar.
pub fn run(path: &Path, profile: &StrategyProfile, step: Option<f64>, out: Option<&Path>) -> Result<SimulateOutput, CliError> {
    let (_, s) = load_scenario(path)?;
    let sol = game::solve(&s).map_err(CliError::runtime)?;
    let step = step.unwrap_or_else(|| sim::default_step(&s));
    let traj = sim::simulate(&s, &sol.chosen, profile, step).map_err(|e| match e {
        sim::SimError::InvalidStep(_) => CliError::Usage(e.to_string()),
        e => CliError::runtime(e),
    })?;

    let csv_path = out.map_or_else(|| sibling(path, "trajectory.csv"), Path::to_path_buf);
    let events_path = csv_path.with_extension("events.json");
    let io_err = |p: &Path, e: &dyn std::fmt::Display| CliError::Runtime(format!("cannot write {}: {e}", p.display()));
    write_csv(&traj, &csv_path).map_err(|e| io_err(&csv_path, &e))?;
    let events = serde_json::to_string_pretty(&event_records(&traj)).map_err(CliError::runtime)?;
    fs::write(&events_path, events + "\n").map_err(|e| io_err(&events_path, &e))?;

    println!("assignment:      {}", sol.chosen);
    println!("step:            {step}");
    println!("captures:        {}", traj.captures());
    println!("reaches:         {}", traj.reaches());
    println!("realized payoff: {:.6}", traj.realized_payoff);
    println!("t_f:             {:.6}", traj.t_f);
    println!("trajectory:      {}", csv_path.display());
    println!("events:          {}", events_path.display());
    Ok(SimulateOutput { trajectory: traj, csv: csv_path, events: events_path })
}
