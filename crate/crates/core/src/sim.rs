//! Closed-loop simulation of simple-motion players.
//!
//! Controls are re-evaluated every step and integrated with forward Euler.
//! Distances along a step are convex in time, so the first capture or reach
//! inside a step is located by bisection and the step is cut there. A
//! resolved pair stops moving.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duel::{self, DuelRegion, DuelState};
use crate::game::{self, ControlError, Frozen, TeamState, TerminationEvent};
use crate::model::{Assignment, Scenario};
use crate::vec3::Vec3;

/// Relative slack allowed on a custom control's speed.
pub const SPEED_SLACK: f64 = 1e-9;
/// Event times are refined until the players move less than this fraction of the scale.
pub const EVENT_RESOLUTION: f64 = 1e-12;

/// Velocities for every player of one team, given the time and all positions.
pub type ControlHook = Arc<dyn Fn(f64, &TeamState) -> Vec<Vec3> + Send + Sync>;

#[derive(Clone)]
pub enum EvaderStrategy {
    Optimal,
    StraightToTarget,
    Custom(ControlHook),
}

#[derive(Clone)]
pub enum PursuerStrategy {
    Optimal,
    /// Keep the optimal velocity computed at the start of play.
    InitialHeading,
    Custom(ControlHook),
}

impl fmt::Debug for EvaderStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Optimal => f.write_str("Optimal"),
            Self::StraightToTarget => f.write_str("StraightToTarget"),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl fmt::Debug for PursuerStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Optimal => f.write_str("Optimal"),
            Self::InitialHeading => f.write_str("InitialHeading"),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StrategyProfile {
    pub evaders: EvaderStrategy,
    pub pursuers: PursuerStrategy,
}

impl StrategyProfile {
    pub fn optimal() -> Self {
        Self { evaders: EvaderStrategy::Optimal, pursuers: PursuerStrategy::Optimal }
    }

    /// Evaders run straight for the target against optimal pursuers.
    pub fn straight_evaders() -> Self {
        Self { evaders: EvaderStrategy::StraightToTarget, pursuers: PursuerStrategy::Optimal }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum EventKind {
    Capture { evader: usize, pursuer: usize, point: Vec3 },
    Reach { evader: usize },
    GameOver,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// One snapshot per time: pursuers first, then evaders.
    pub positions: Vec<Vec<Vec3>>,
    pub events: Vec<Event>,
    pub realized_payoff: f64,
    pub t_f: f64,
    pub num_pursuers: usize,
}

impl Trajectory {
    pub fn pursuer_path(&self, j: usize) -> impl Iterator<Item = Vec3> + '_ {
        self.positions.iter().map(move |snap| snap[j])
    }

    pub fn evader_path(&self, i: usize) -> impl Iterator<Item = Vec3> + '_ {
        let n = self.num_pursuers;
        self.positions.iter().map(move |snap| snap[n + i])
    }

    pub fn final_positions(&self) -> &[Vec3] {
        self.positions.last().expect("trajectory has an initial sample")
    }

    pub fn captures(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.kind, EventKind::Capture { .. })).count()
    }

    pub fn reaches(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.kind, EventKind::Reach { .. })).count()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("assignment is for {got_m} evaders and {got_n} pursuers, scenario has {m} and {n}")]
    AssignmentMismatch { m: usize, n: usize, got_m: usize, got_n: usize },
    #[error("state became non-finite at t = {t}")]
    Diverged { t: f64 },
    #[error("no termination before the time cap {t_max}")]
    NoTermination { t_max: f64 },
    #[error("custom {team} control {index} violates the speed bound ({speed} > {max})")]
    InadmissibleControl { team: &'static str, index: usize, speed: f64, max: f64 },
    #[error("custom {team} hook returned {got} controls, expected {expected}")]
    HookArity { team: &'static str, got: usize, expected: usize },
    #[error(transparent)]
    Control(#[from] ControlError),
}

fn max_speed(s: &Scenario) -> f64 {
    s.pursuers().iter().chain(s.evaders()).map(|p| p.speed).fold(0.0, f64::max)
}

fn min_speed(s: &Scenario) -> f64 {
    s.pursuers().iter().chain(s.evaders()).map(|p| p.speed).fold(f64::INFINITY, f64::min)
}

/// `10⁻³ · D / max speed`, with `D` the largest initial distance between players.
pub fn default_step(s: &Scenario) -> f64 {
    let d = if s.scale() > 0.0 { s.scale() } else { 1.0 };
    1e-3 * d / max_speed(s)
}

/// `10 · D / min speed`.
pub fn time_cap(s: &Scenario) -> f64 {
    let d = if s.scale() > 0.0 { s.scale() } else { 1.0 };
    10.0 * d / min_speed(s)
}

struct Velocities {
    pursuers: Vec<Vec3>,
    evaders: Vec<Vec3>,
}

fn checked_hook(
    hook: &ControlHook,
    team: &'static str,
    t: f64,
    state: &TeamState,
    speeds: impl Iterator<Item = f64>,
    expected: usize,
) -> Result<Vec<Vec3>, SimError> {
    let out = hook(t, state);
    if out.len() != expected {
        return Err(SimError::HookArity { team, got: out.len(), expected });
    }
    for (index, (v, max)) in out.iter().zip(speeds).enumerate() {
        let speed = v.norm();
        if speed.is_nan() || speed > max * (1.0 + SPEED_SLACK) {
            return Err(SimError::InadmissibleControl { team, index, speed, max });
        }
    }
    Ok(out)
}

struct Run<'a> {
    s: &'a Scenario,
    chosen: &'a Assignment,
    profile: &'a StrategyProfile,
    regions: Vec<Option<DuelRegion>>,
    initial_pursuers: Vec<Vec3>,
}

impl Run<'_> {
    fn velocities(&self, t: f64, state: &TeamState, frozen: &Frozen) -> Result<Velocities, SimError> {
        let s = self.s;
        let optimal = game::team_controls(s, self.chosen, &self.regions, state, frozen);
        let mut evaders = match &self.profile.evaders {
            EvaderStrategy::Optimal => optimal.clone()?.evaders.iter().map(|c| c.velocity()).collect(),
            EvaderStrategy::StraightToTarget => s
                .evaders()
                .iter()
                .zip(&state.evaders)
                .map(|(e, x)| (-*x).normalized().map_or(Vec3::ZERO, |d| d * e.speed))
                .collect(),
            EvaderStrategy::Custom(hook) => {
                checked_hook(hook, "evader", t, state, s.evaders().iter().map(|e| e.speed), s.num_evaders())?
            }
        };
        let mut pursuers = match &self.profile.pursuers {
            PursuerStrategy::Optimal => optimal?.pursuers.iter().map(|c| c.velocity()).collect(),
            PursuerStrategy::InitialHeading => self.initial_pursuers.clone(),
            PursuerStrategy::Custom(hook) => {
                checked_hook(hook, "pursuer", t, state, s.pursuers().iter().map(|p| p.speed), s.num_pursuers())?
            }
        };
        for (v, &f) in evaders.iter_mut().zip(&frozen.evaders) {
            if f {
                *v = Vec3::ZERO;
            }
        }
        for (v, &f) in pursuers.iter_mut().zip(&frozen.pursuers) {
            if f {
                *v = Vec3::ZERO;
            }
        }
        Ok(Velocities { pursuers, evaders })
    }
}

fn advance(state: &TeamState, vel: &Velocities, dt: f64) -> TeamState {
    TeamState {
        pursuers: state.pursuers.iter().zip(&vel.pursuers).map(|(x, v)| *x + *v * dt).collect(),
        evaders: state.evaders.iter().zip(&vel.evaders).map(|(x, v)| *x + *v * dt).collect(),
    }
}

/// Event functions that become non-positive at a capture or reach.
fn event_margin(s: &Scenario, chosen: &Assignment, state: &TeamState, resolved: &[bool]) -> f64 {
    chosen
        .pairs()
        .filter(|&(i, _)| !resolved[i])
        .map(|(i, j)| {
            let x_e = state.evaders[i];
            let reach = x_e.norm() - s.target_radius();
            let capture = state.pursuers[j].distance(x_e) - s.capture_radius();
            reach.min(capture)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Earliest `τ ∈ (0, dt]` at which some event function is non-positive, if any.
///
/// Each function is a distance along a straight segment minus a constant, hence
/// convex in `τ`; checking the segment minimum catches events that enter and
/// leave within one step.
fn first_event_time(run: &Run, state: &TeamState, vel: &Velocities, dt: f64, resolved: &[bool], speed: f64) -> Option<f64> {
    let s = run.s;
    let mut hit: Option<f64> = None;
    for (i, j) in run.chosen.pairs() {
        if resolved[i] {
            continue;
        }
        let segments = [
            (state.evaders[i], vel.evaders[i], s.target_radius()),
            (state.evaders[i] - state.pursuers[j], vel.evaders[i] - vel.pursuers[j], s.capture_radius()),
        ];
        for (a, b, radius) in segments {
            let bb = b.norm_squared();
            let tau_min = if bb > 0.0 { (-a.dot(b) / bb).clamp(0.0, dt) } else { 0.0 };
            let lowest = (a + b * tau_min).norm().min((a + b * dt).norm());
            if lowest <= radius {
                let t_hi = if (a + b * tau_min).norm() <= radius { tau_min } else { dt };
                hit = Some(hit.map_or(t_hi, |h: f64| h.min(t_hi)));
            }
        }
    }
    let mut hi = hit?;
    let mut lo = 0.0;
    let tol = EVENT_RESOLUTION * s.scale().max(f64::MIN_POSITIVE) / speed.max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let probe = advance(state, vel, mid);
        if event_margin(s, run.chosen, &probe, resolved) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Make sure the reported time satisfies an event condition exactly.
    while event_margin(s, run.chosen, &advance(state, vel, hi), resolved) > 0.0 && hi < dt {
        hi = (hi + tol).min(dt);
    }
    Some(hi)
}

/// Integrates the game from the scenario's initial positions until every
/// assigned evader is captured or home.
pub fn simulate(s: &Scenario, chosen: &Assignment, profile: &StrategyProfile, step: f64) -> Result<Trajectory, SimError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(SimError::InvalidStep(step));
    }
    let (m, n) = (s.num_evaders(), s.num_pursuers());
    if chosen.num_evaders() != m || chosen.num_pursuers() != n {
        return Err(SimError::AssignmentMismatch { m, n, got_m: chosen.num_evaders(), got_n: chosen.num_pursuers() });
    }
    let regions = game::pair_regions(s, chosen);
    let initial_pursuers = match profile.pursuers {
        PursuerStrategy::InitialHeading => {
            game::team_controls(s, chosen, &regions, &TeamState::initial(s), &Frozen::none(s))?
                .pursuers
                .iter()
                .map(|c| c.velocity())
                .collect()
        }
        _ => Vec::new(),
    };
    let run = Run { s, chosen, profile, regions, initial_pursuers };
    let t_max = time_cap(s);
    let speed = max_speed(s);

    let mut state = TeamState::initial(s);
    let mut frozen = Frozen::none(s);
    let mut resolved = vec![false; m];
    let mut captured = vec![false; m];
    let mut t = 0.0f64;
    let mut times = vec![0.0];
    let mut positions = vec![snapshot(&state)];
    let mut events = Vec::new();

    loop {
        let game_over = apply_events(
            s,
            chosen,
            &state,
            t,
            &mut resolved,
            &mut captured,
            &mut frozen,
            &mut events,
        );
        if game_over {
            break;
        }
        if t > t_max {
            return Err(SimError::NoTermination { t_max });
        }
        let vel = run.velocities(t, &state, &frozen)?;
        let h = approach_limited_step(s, chosen, &state, &resolved, step);
        let dt = first_event_time(&run, &state, &vel, h, &resolved, speed).unwrap_or(h);
        state = advance(&state, &vel, dt);
        if !state.is_finite() {
            return Err(SimError::Diverged { t: t + dt });
        }
        let t_next = t + dt;
        if t_next > t {
            t = t_next;
            times.push(t);
            positions.push(snapshot(&state));
        } else {
            *positions.last_mut().expect("non-empty") = snapshot(&state);
        }
    }

    let realized_payoff = realized_payoff(s, chosen, &state, &captured);
    Ok(Trajectory { times, positions, events, realized_payoff, t_f: t, num_pursuers: n })
}

/// Caps the step at half the time any live pair needs to close its gap, so a
/// pursuer cannot jump past an evader that is not moving along a straight line.
fn approach_limited_step(s: &Scenario, chosen: &Assignment, state: &TeamState, resolved: &[bool], step: f64) -> f64 {
    chosen
        .pairs()
        .filter(|&(i, _)| !resolved[i])
        .map(|(i, j)| {
            let gap = state.pursuers[j].distance(state.evaders[i]);
            0.5 * gap / (s.evaders()[i].speed + s.pursuers()[j].speed)
        })
        .fold(step, f64::min)
}

#[allow(clippy::too_many_arguments)]
fn apply_events(
    s: &Scenario,
    chosen: &Assignment,
    state: &TeamState,
    t: f64,
    resolved: &mut [bool],
    captured: &mut [bool],
    frozen: &mut Frozen,
    events: &mut Vec<Event>,
) -> bool {
    let mut over = false;
    for e in game::termination_check(s, chosen, state, resolved) {
        let kind = match e {
            TerminationEvent::Capture { evader, pursuer } => {
                captured[evader] = true;
                EventKind::Capture { evader, pursuer, point: state.evaders[evader] }
            }
            TerminationEvent::Reach { evader } => EventKind::Reach { evader },
            TerminationEvent::GameOver => {
                over = true;
                EventKind::GameOver
            }
        };
        if let EventKind::Capture { evader, .. } | EventKind::Reach { evader } = kind {
            resolved[evader] = true;
            frozen.evaders[evader] = true;
            frozen.pursuers[chosen.pursuer_of(evader)] = true;
        }
        events.push(Event { t, kind });
    }
    over
}

fn snapshot(state: &TeamState) -> Vec<Vec3> {
    state.pursuers.iter().chain(&state.evaders).copied().collect()
}

/// Terminal cost of the play.
///
/// When the chosen assignment is a pursuer win this is the sum of the
/// evaders' terminal distances from the target. Otherwise captured evaders
/// add their terminal distance and evaders that reached the target subtract
/// their pursuer's terminal distance.
fn realized_payoff(s: &Scenario, chosen: &Assignment, terminal: &TeamState, captured: &[bool]) -> f64 {
    let pursuer_region = chosen.pairs().all(|(i, j)| {
        let (e, p) = (&s.evaders()[i], &s.pursuers()[j]);
        let st = DuelState::new(e.position, p.position, e.speed, p.speed);
        st.is_supported() && duel::region(&st) == DuelRegion::PursuerWins
    });
    chosen.pairs().fold(0.0, |acc, (i, j)| {
        if pursuer_region || captured[i] {
            acc + terminal.evaders[i].norm()
        } else {
            acc - terminal.pursuers[j].norm()
        }
    })
}

/// Largest perpendicular distance of each player's samples from its start-to-end
/// chord, divided by the chord length. Pursuers first, then evaders; a player
/// that never moved scores 0.
pub fn straightness_check(traj: &Trajectory) -> Vec<f64> {
    let first = &traj.positions[0];
    let last = traj.final_positions();
    (0..first.len())
        .map(|k| {
            let (a, b) = (first[k], last[k]);
            let chord = b - a;
            let len = chord.norm();
            if len == 0.0 {
                return 0.0;
            }
            let dir = chord / len;
            traj.positions
                .iter()
                .map(|snap| {
                    let r = snap[k] - a;
                    (r - dir * r.dot(dir)).norm()
                })
                .fold(0.0, f64::max)
                / len
        })
        .collect()
}

/// Sum of the duel values of the chosen pairs at `state`, each pair under its
/// initial region label. Pairs without a duel solution are skipped.
pub fn assigned_value(s: &Scenario, chosen: &Assignment, regions: &[Option<DuelRegion>], state: &TeamState) -> Option<f64> {
    let mut total = 0.0;
    for (i, j) in chosen.pairs() {
        let Some(region) = regions[i] else { continue };
        let st = DuelState::new(state.evaders[i], state.pursuers[j], s.evaders()[i].speed, s.pursuers()[j].speed);
        let v = match duel::value_in_region(&st, region) {
            Ok(v) => v.value,
            Err(duel::DuelError::SingularGradient { value }) => value,
            Err(_) => return None,
        };
        total += v;
    }
    Some(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub max_drift: f64,
    pub initial_value: f64,
    pub samples: usize,
}

/// Largest change of the assigned value along optimal play.
pub fn value_conservation_check(s: &Scenario, chosen: &Assignment, step: f64) -> Result<DriftReport, SimError> {
    let traj = simulate(s, chosen, &StrategyProfile::optimal(), step)?;
    let regions = game::pair_regions(s, chosen);
    let n = s.num_pursuers();
    let at = |snap: &[Vec3]| TeamState { pursuers: snap[..n].to_vec(), evaders: snap[n..].to_vec() };
    let v0 = assigned_value(s, chosen, &regions, &at(&traj.positions[0])).unwrap_or(f64::NAN);
    let mut max_drift = 0.0f64;
    for snap in &traj.positions {
        let v = assigned_value(s, chosen, &regions, &at(snap)).unwrap_or(f64::NAN);
        let d = (v - v0).abs();
        max_drift = if d.is_nan() { f64::INFINITY } else { max_drift.max(d) };
    }
    Ok(DriftReport { max_drift, initial_value: v0, samples: traj.positions.len() })
}
