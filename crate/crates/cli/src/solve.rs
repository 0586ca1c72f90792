use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use radg_core::assignment::{OptimalAssignmentSet, PairError, PairKind};
use radg_core::game::{self, Team};
use radg_core::Scenario;

use crate::{load_scenario, CliError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    /// 1-based evader index.
    pub evader: usize,
    /// 1-based pursuer index.
    pub pursuer: usize,
    pub kind: PairKind,
    pub alpha: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub winner: Team,
    pub barrier_value: f64,
    pub gamma_star: Vec<String>,
    pub theta_star: Vec<String>,
    pub chosen: String,
    pub value: f64,
    pub certified: bool,
    pub dispersal: bool,
    #[serde(rename = "penalty_L")]
    pub penalty: f64,
    #[serde(rename = "L_star")]
    pub best_case_payoff: f64,
    #[serde(rename = "L_bar_star")]
    pub refinement_bound: f64,
    pub pairs: Vec<PairReport>,
}

fn labels(set: &OptimalAssignmentSet) -> Vec<String> {
    set.assignments.iter().map(ToString::to_string).collect()
}

impl SolutionReport {
    pub fn new(s: &Scenario) -> Result<Self, PairError> {
        let sol = game::solve(s)?;
        Ok(Self {
            winner: sol.winner,
            barrier_value: sol.barrier_value,
            gamma_star: labels(&sol.gamma_star),
            theta_star: labels(&sol.theta_star),
            chosen: sol.chosen.to_string(),
            value: sol.value,
            certified: sol.certified,
            dispersal: sol.on_dispersal_surface,
            penalty: sol.penalty,
            best_case_payoff: sol.best_case_payoff,
            refinement_bound: sol.refinement_bound,
            pairs: sol
                .per_pair
                .iter()
                .map(|p| PairReport { evader: p.evader + 1, pursuer: p.pursuer + 1, kind: p.kind, alpha: p.alpha, value: p.value })
                .collect(),
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "winner:         {:?}", self.winner);
        let _ = writeln!(out, "barrier value:  {:.6}", self.barrier_value);
        let _ = writeln!(out, "gamma*:         {}", self.gamma_star.join(" "));
        let _ = writeln!(out, "theta*:         {}", self.theta_star.join(" "));
        let _ = writeln!(out, "chosen:         {}", self.chosen);
        let _ = writeln!(out, "value:          {:.6}", self.value);
        let _ = writeln!(out, "dispersal:      {}", self.dispersal);
        let _ = writeln!(out, "certified:      {}", self.certified);
        let _ = writeln!(out, "penalty L:      {:.6} (L* = {:.6}, refinement bound = {:.6})", self.penalty, self.best_case_payoff, self.refinement_bound);
        for p in &self.pairs {
            let _ = writeln!(out, "  E{} <- P{}  {:?}  alpha = {:.4}  value = {:.6}", p.evader, p.pursuer, p.kind, p.alpha, p.value);
        }
        out
    }
}

/// `<dir>/<stem>.<suffix>` next to `input`.
pub(crate) fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned());
    input.with_file_name(format!("{stem}.{suffix}"))
}

/// Solves the scenario at `path`, prints the solution and writes the JSON
/// report to `report` (default `<stem>.solution.json` beside the input).
pub fn run(path: &Path, report: Option<&Path>) -> Result<SolutionReport, CliError> {
    let (_, s) = load_scenario(path)?;
    let r = SolutionReport::new(&s).map_err(CliError::runtime)?;
    print!("{}", r.render());
    let out = report.map_or_else(|| sibling(path, "solution.json"), Path::to_path_buf);
    let json = serde_json::to_string_pretty(&r).map_err(CliError::runtime)?;
    fs::write(&out, json + "\n").map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", out.display())))?;
    println!("report:         {}", out.display());
    Ok(r)
}
