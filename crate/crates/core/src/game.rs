//! The multiplayer game: team barrier, winner, value and team strategies.
//!
//! Every evader is matched to one pursuer. The team barrier of an assignment
//! is the smallest payoff entry among its pairs, so the pursuers win exactly
//! when each assigned pursuer wins its own duel. The value is the sum of the
//! pair values of an optimal assignment.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::{
    enumerate_optimal_set, refine_theta_star, OptimalAssignmentSet, PairError, PairKind, PairTable, PayoffMatrix,
};
use crate::duel::{self, Control, DuelError, DuelRegion, DuelState};
use crate::model::{Assignment, Scenario};
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Team {
    PursuerTeam,
    EvaderTeam,
}

/// One assigned pair of the chosen assignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    /// 0-based evader index.
    pub evader: usize,
    /// 0-based pursuer index.
    pub pursuer: usize,
    pub kind: PairKind,
    pub alpha: f64,
    /// Value-matrix entry of the pair.
    pub value: f64,
}

/// Winner only, without the value refinement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub winner: Team,
    pub barrier_value: f64,
    pub gamma_star: OptimalAssignmentSet,
    pub penalty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSolution {
    pub winner: Team,
    /// Team barrier of the members of `Γ*`.
    pub barrier_value: f64,
    pub gamma_star: OptimalAssignmentSet,
    pub theta_star: OptimalAssignmentSet,
    pub value: f64,
    /// `false` when the evaders win and the chosen assignment keeps an `α > 1` pair.
    pub certified: bool,
    pub on_dispersal_surface: bool,
    /// Lexicographically first member of `Θ*`.
    pub chosen: Assignment,
    pub per_pair: Vec<PairOutcome>,
    pub penalty: f64,
    pub best_case_payoff: f64,
    pub refinement_bound: f64,
}

/// Minimum payoff entry over the assigned pairs.
pub fn team_barrier(p: &PayoffMatrix, gamma: &Assignment) -> f64 {
    gamma.pairs().map(|(i, j)| p.get(i, j)).fold(f64::INFINITY, f64::min)
}

/// Team barrier of `gamma` for a scenario.
pub fn multiplayer_barrier(s: &Scenario, gamma: &Assignment) -> Result<f64, PairError> {
    let p = crate::assignment::build_payoff_matrix(s)?;
    Ok(team_barrier(&p, gamma))
}

fn winner_of(barrier: f64) -> Team {
    if barrier > 0.0 {
        Team::PursuerTeam
    } else {
        Team::EvaderTeam
    }
}

pub fn classify(s: &Scenario) -> Result<Classification, PairError> {
    let table = PairTable::build(s)?;
    let penalty = s.penalty().unwrap_or_else(|| table.default_penalty());
    let p = table.payoff_matrix(penalty);
    let gamma_star = enumerate_optimal_set(&p, s.tie_tolerance());
    let barrier_value = team_barrier(&p, gamma_star.first());
    Ok(Classification { winner: winner_of(barrier_value), barrier_value, gamma_star, penalty })
}

pub fn solve(s: &Scenario) -> Result<GameSolution, PairError> {
    let table = PairTable::build(s)?;
    let penalty = s.penalty().unwrap_or_else(|| table.default_penalty());
    let p = table.payoff_matrix(penalty);
    let v = table.value_matrix(penalty);
    let gamma_star = enumerate_optimal_set(&p, s.tie_tolerance());
    let barrier_value = team_barrier(&p, gamma_star.first());
    let winner = winner_of(barrier_value);
    let theta_star = refine_theta_star(&gamma_star, &v, s.tie_tolerance());
    let chosen = theta_star.first().clone();
    let per_pair: Vec<PairOutcome> = chosen
        .pairs()
        .map(|(i, j)| {
            let info = table.get(i, j);
            PairOutcome { evader: i, pursuer: j, kind: info.kind, alpha: info.alpha, value: v.get(i, j) }
        })
        .collect();
    let certified = winner == Team::PursuerTeam || v.unsupported_pairs(&chosen) == 0;
    let on_dispersal_surface = match winner {
        Team::PursuerTeam => gamma_star.len() > 1,
        Team::EvaderTeam => theta_star.len() > 1,
    };
    Ok(GameSolution {
        winner,
        barrier_value,
        value: theta_star.team_payoff,
        gamma_star,
        theta_star,
        certified,
        on_dispersal_surface,
        chosen,
        per_pair,
        penalty,
        best_case_payoff: table.best_case_payoff(),
        refinement_bound: table.refinement_bound(),
    })
}

/// Positions of every player, pursuers and evaders in scenario order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamState {
    pub pursuers: Vec<Vec3>,
    pub evaders: Vec<Vec3>,
}

impl TeamState {
    pub fn initial(s: &Scenario) -> Self {
        Self {
            pursuers: s.pursuers().iter().map(|p| p.position).collect(),
            evaders: s.evaders().iter().map(|e| e.position).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.pursuers.iter().chain(&self.evaders).all(|x| x.is_finite())
    }
}

/// Players that have stopped after their pair resolved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frozen {
    pub pursuers: Vec<bool>,
    pub evaders: Vec<bool>,
}

impl Frozen {
    pub fn none(s: &Scenario) -> Self {
        Self { pursuers: vec![false; s.num_pursuers()], evaders: vec![false; s.num_evaders()] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamControls {
    pub pursuers: Vec<Control>,
    pub evaders: Vec<Control>,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("pair (E{}, P{}): {source}", .evader + 1, .pursuer + 1)]
pub struct ControlError {
    pub evader: usize,
    pub pursuer: usize,
    pub source: DuelError,
}

/// Region label of each evader's pair, fixed when play starts; `None` for `α > 1` pairs.
pub fn pair_regions(s: &Scenario, chosen: &Assignment) -> Vec<Option<DuelRegion>> {
    chosen
        .pairs()
        .map(|(i, j)| {
            if !s.speed_ratio(i, j).is_supported() {
                return None;
            }
            let e = &s.evaders()[i];
            let p = &s.pursuers()[j];
            Some(duel::region(&DuelState::new(e.position, p.position, e.speed, p.speed)))
        })
        .collect()
}

fn toward_target(x: Vec3, speed: f64) -> Control {
    Control::along(-x, speed).unwrap_or_else(Control::zero)
}

/// Optimal controls for every player at `state`.
///
/// Capture pairs follow the duel feedback law under their initial region.
/// Escape pairs run for the target, which is also where the duel gradient
/// points; a player already on the target stops. Pairs with `α > 1` have no
/// duel solution and both players head for the target. Unmatched and frozen
/// players stand still.
pub fn team_controls(
    s: &Scenario,
    chosen: &Assignment,
    regions: &[Option<DuelRegion>],
    state: &TeamState,
    frozen: &Frozen,
) -> Result<TeamControls, ControlError> {
    let mut out = TeamControls {
        pursuers: vec![Control::zero(); s.num_pursuers()],
        evaders: vec![Control::zero(); s.num_evaders()],
    };
    for (i, j) in chosen.pairs() {
        let (u, v) = (s.evaders()[i].speed, s.pursuers()[j].speed);
        let (x_e, x_p) = (state.evaders[i], state.pursuers[j]);
        let (c_e, c_p) = match regions[i] {
            Some(DuelRegion::PursuerWins) => {
                let pair = DuelState::new(x_e, x_p, u, v);
                duel::controls_in_region(&pair, DuelRegion::PursuerWins)
                    .map_err(|source| ControlError { evader: i, pursuer: j, source })?
            }
            Some(DuelRegion::EvaderWins) | None => (toward_target(x_e, u), toward_target(x_p, v)),
        };
        if !frozen.evaders[i] {
            out.evaders[i] = c_e;
        }
        if !frozen.pursuers[j] {
            out.pursuers[j] = c_p;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminationEvent {
    Capture { evader: usize, pursuer: usize },
    Reach { evader: usize },
    GameOver,
}

/// Events at `state` for the evaders not yet in `resolved`.
///
/// Reaching the target takes precedence over a simultaneous capture.
/// `GameOver` is emitted once every evader is resolved, counting the new events.
pub fn termination_check(
    s: &Scenario,
    chosen: &Assignment,
    state: &TeamState,
    resolved: &[bool],
) -> Vec<TerminationEvent> {
    let mut events = Vec::new();
    let mut open = 0usize;
    for (i, j) in chosen.pairs() {
        if resolved[i] {
            continue;
        }
        let x_e = state.evaders[i];
        if x_e.norm() <= s.target_radius() {
            events.push(TerminationEvent::Reach { evader: i });
        } else if state.pursuers[j].distance(x_e) <= s.capture_radius() {
            events.push(TerminationEvent::Capture { evader: i, pursuer: j });
        } else {
            open += 1;
        }
    }
    if open == 0 && !events.is_empty() {
        events.push(TerminationEvent::GameOver);
    }
    events
}
