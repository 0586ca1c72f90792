//! Domain data model: players, scenarios, speed ratios and assignments.
//!
//! Player indices are 0-based in memory. Everything user-facing (ids,
//! `Display` of assignments) is 1-based, so `{12,21,33}` reads
//! "E1 chased by P2, E2 by P1, E3 by P3".

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vec3::Vec3;

/// Relative tolerance used when two team payoffs are compared for equality.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

/// Capture and target radii default to this fraction of the largest initial
/// pairwise distance.
pub const DEFAULT_RADIUS_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Pursuer,
    Evader,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Pursuer => f.write_str("pursuer"),
            Role::Evader => f.write_str("evader"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Player {
    /// 1-based identifier, unique within the role.
    pub id: u32,
    pub role: Role,
    pub position: Vec3,
    /// Constant speed in meters/second.
    pub speed: f64,
}

impl Player {
    pub fn pursuer(id: u32, position: Vec3, speed: f64) -> Self {
        Self { id, role: Role::Pursuer, position, speed }
    }

    pub fn evader(id: u32, position: Vec3, speed: f64) -> Self {
        Self { id, role: Role::Evader, position, speed }
    }
}

/// Evader speed over pursuer speed for one pairing.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SpeedRatio(f64);

impl SpeedRatio {
    pub fn new(alpha: f64) -> Result<Self, ScenarioIssue> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self(alpha))
        } else {
            Err(ScenarioIssue::InvalidSpeedRatio(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The pursuer is at least as fast as the evader.
    pub fn is_supported(self) -> bool {
        self.0 <= 1.0
    }
}

/// `U_i / V_j` for evader `evader` and pursuer `pursuer`.
pub fn speed_ratio(evader: &Player, pursuer: &Player) -> Result<SpeedRatio, ScenarioIssue> {
    for p in [evader, pursuer] {
        if !(p.speed.is_finite() && p.speed > 0.0) {
            return Err(ScenarioIssue::NonPositiveSpeed { role: p.role, id: p.id, speed: p.speed });
        }
    }
    SpeedRatio::new(evader.speed / pursuer.speed)
}

/// One violated scenario invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioIssue {
    #[error("at least one evader is required (m ≥ 1 violated)")]
    NoEvaders,
    #[error("n ≥ m violated: {pursuers} pursuers for {evaders} evaders")]
    TooFewPursuers { pursuers: usize, evaders: usize },
    #[error("speed must be positive: {role} {id} has speed {speed}")]
    NonPositiveSpeed { role: Role, id: u32, speed: f64 },
    #[error("position must be finite: {role} {id}")]
    NonFinitePosition { role: Role, id: u32 },
    #[error("player listed with the wrong role: {role} {id}")]
    WrongRole { role: Role, id: u32 },
    #[error("duplicate {role} id {id}")]
    DuplicateId { role: Role, id: u32 },
    #[error("penalty L must be positive and finite, got {0}")]
    NonPositivePenalty(f64),
    #[error("capture radius must be non-negative and finite, got {0}")]
    InvalidCaptureRadius(f64),
    #[error("target radius must be non-negative and finite, got {0}")]
    InvalidTargetRadius(f64),
    #[error("tie tolerance must be positive and finite, got {0}")]
    InvalidTieTolerance(f64),
    #[error("speed ratio must be positive and finite, got {0}")]
    InvalidSpeedRatio(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid scenario: {}", .issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidScenario {
    pub issues: Vec<ScenarioIssue>,
}

/// Optional numeric tolerances. Unset radii are derived from the scenario scale.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tolerances {
    pub capture_radius: Option<f64>,
    pub target_radius: Option<f64>,
    pub tie_tolerance: Option<f64>,
}

/// Unvalidated scenario description. Turn it into a [`Scenario`] with
/// [`Scenario::new`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub evaders: Vec<Player>,
    pub pursuers: Vec<Player>,
    /// Penalty for a pairing the pursuer cannot win. Derived when absent.
    pub penalty: Option<f64>,
    pub tolerances: Tolerances,
}

/// Checks every scenario invariant and reports all violations at once.
pub fn validate_scenario(cfg: &ScenarioConfig) -> Result<(), Vec<ScenarioIssue>> {
    let mut issues = Vec::new();
    let (m, n) = (cfg.evaders.len(), cfg.pursuers.len());
    if m == 0 {
        issues.push(ScenarioIssue::NoEvaders);
    }
    if n < m {
        issues.push(ScenarioIssue::TooFewPursuers { pursuers: n, evaders: m });
    }
    for (players, role) in [(&cfg.evaders, Role::Evader), (&cfg.pursuers, Role::Pursuer)] {
        let mut seen = std::collections::HashSet::new();
        for p in players {
            if p.role != role {
                issues.push(ScenarioIssue::WrongRole { role: p.role, id: p.id });
            }
            if !(p.speed.is_finite() && p.speed > 0.0) {
                issues.push(ScenarioIssue::NonPositiveSpeed { role, id: p.id, speed: p.speed });
            }
            if !p.position.is_finite() {
                issues.push(ScenarioIssue::NonFinitePosition { role, id: p.id });
            }
            if !seen.insert(p.id) {
                issues.push(ScenarioIssue::DuplicateId { role, id: p.id });
            }
        }
    }
    if let Some(l) = cfg.penalty {
        if !(l.is_finite() && l > 0.0) {
            issues.push(ScenarioIssue::NonPositivePenalty(l));
        }
    }
    let t = &cfg.tolerances;
    if let Some(r) = t.capture_radius {
        if !(r.is_finite() && r >= 0.0) {
            issues.push(ScenarioIssue::InvalidCaptureRadius(r));
        }
    }
    if let Some(r) = t.target_radius {
        if !(r.is_finite() && r >= 0.0) {
            issues.push(ScenarioIssue::InvalidTargetRadius(r));
        }
    }
    if let Some(tt) = t.tie_tolerance {
        if !(tt.is_finite() && tt > 0.0) {
            issues.push(ScenarioIssue::InvalidTieTolerance(tt));
        }
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(issues)
    }
}

/// A validated, immutable game instance. The target is the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    evaders: Vec<Player>,
    pursuers: Vec<Player>,
    penalty: Option<f64>,
    capture_radius: f64,
    target_radius: f64,
    tie_tolerance: f64,
    scale: f64,
}

impl Scenario {
    pub fn new(cfg: ScenarioConfig) -> Result<Self, InvalidScenario> {
        validate_scenario(&cfg).map_err(|issues| InvalidScenario { issues })?;
        let scale = max_pairwise_distance(cfg.evaders.iter().chain(&cfg.pursuers).map(|p| p.position));
        let default_radius = DEFAULT_RADIUS_FRACTION * scale;
        let capture_radius = cfg.tolerances.capture_radius.unwrap_or(default_radius);
        let target_radius = cfg.tolerances.target_radius.unwrap_or(capture_radius);
        Ok(Self {
            evaders: cfg.evaders,
            pursuers: cfg.pursuers,
            penalty: cfg.penalty,
            capture_radius,
            target_radius,
            tie_tolerance: cfg.tolerances.tie_tolerance.unwrap_or(DEFAULT_TIE_TOLERANCE),
            scale,
        })
    }

    /// Convenience constructor from bare `(position, speed)` lists; ids are 1-based list order.
    pub fn from_positions(
        pursuers: &[(Vec3, f64)],
        evaders: &[(Vec3, f64)],
        penalty: Option<f64>,
    ) -> Result<Self, InvalidScenario> {
        let cfg = ScenarioConfig {
            pursuers: pursuers
                .iter()
                .enumerate()
                .map(|(k, &(x, v))| Player::pursuer(k as u32 + 1, x, v))
                .collect(),
            evaders: evaders
                .iter()
                .enumerate()
                .map(|(k, &(x, u))| Player::evader(k as u32 + 1, x, u))
                .collect(),
            penalty,
            tolerances: Tolerances::default(),
        };
        Self::new(cfg)
    }

    pub fn evaders(&self) -> &[Player] {
        &self.evaders
    }

    pub fn pursuers(&self) -> &[Player] {
        &self.pursuers
    }

    /// Number of evaders (m).
    pub fn num_evaders(&self) -> usize {
        self.evaders.len()
    }

    /// Number of pursuers (n).
    pub fn num_pursuers(&self) -> usize {
        self.pursuers.len()
    }

    /// The penalty given in the scenario, if any. See
    /// [`crate::assignment::effective_penalty`] for the resolved value.
    pub fn penalty(&self) -> Option<f64> {
        self.penalty
    }

    pub fn capture_radius(&self) -> f64 {
        self.capture_radius
    }

    pub fn target_radius(&self) -> f64 {
        self.target_radius
    }

    pub fn tie_tolerance(&self) -> f64 {
        self.tie_tolerance
    }

    /// Largest initial distance between any two players.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn speed_ratio(&self, evader: usize, pursuer: usize) -> SpeedRatio {
        // Speeds were validated positive, so the ratio is always valid.
        SpeedRatio(self.evaders[evader].speed / self.pursuers[pursuer].speed)
    }

    /// Same scenario with a different penalty.
    pub fn with_penalty(&self, penalty: f64) -> Result<Self, InvalidScenario> {
        let mut cfg = self.to_config();
        cfg.penalty = Some(penalty);
        Self::new(cfg)
    }

    /// The configuration this scenario was built from, with derived radii made explicit.
    pub fn to_config(&self) -> ScenarioConfig {
        ScenarioConfig {
            evaders: self.evaders.clone(),
            pursuers: self.pursuers.clone(),
            penalty: self.penalty,
            tolerances: Tolerances {
                capture_radius: Some(self.capture_radius),
                target_radius: Some(self.target_radius),
                tie_tolerance: Some(self.tie_tolerance),
            },
        }
    }
}

fn max_pairwise_distance(points: impl Iterator<Item = Vec3>) -> f64 {
    let pts: Vec<Vec3> = points.collect();
    let mut best = 0.0f64;
    for (k, a) in pts.iter().enumerate() {
        for b in &pts[k + 1..] {
            best = best.max(a.distance(*b));
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("evader index {evader} has pursuer index {pursuer} out of range (n = {n})")]
    PursuerOutOfRange { evader: usize, pursuer: usize, n: usize },
    #[error("pursuer {0} is assigned to more than one evader")]
    PursuerReused(usize),
    #[error("evader {0} is assigned more than once")]
    EvaderReused(usize),
    #[error("evader {0} has no pursuer")]
    EvaderUnassigned(usize),
}

/// A feasible matching: every evader has exactly one pursuer and every
/// pursuer chases at most one evader.
///
/// Ordering is lexicographic on the pursuer list, which is the same as
/// lexicographic on the sorted `(evader, pursuer)` pair list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pursuer_of: Vec<usize>,
    num_pursuers: usize,
}

impl Assignment {
    /// `pursuer_of[i]` is the 0-based pursuer chasing evader `i`.
    pub fn new(pursuer_of: Vec<usize>, num_pursuers: usize) -> Result<Self, AssignmentError> {
        let mut used = vec![false; num_pursuers];
        for (i, &j) in pursuer_of.iter().enumerate() {
            if j >= num_pursuers {
                return Err(AssignmentError::PursuerOutOfRange { evader: i, pursuer: j, n: num_pursuers });
            }
            if std::mem::replace(&mut used[j], true) {
                return Err(AssignmentError::PursuerReused(j));
            }
        }
        Ok(Self { pursuer_of, num_pursuers })
    }

    /// Builds from 0-based `(evader, pursuer)` pairs in any order.
    pub fn from_pairs(pairs: &[(usize, usize)], m: usize, n: usize) -> Result<Self, AssignmentError> {
        let mut pursuer_of = vec![None; m];
        for &(i, j) in pairs {
            if i >= m {
                return Err(AssignmentError::EvaderUnassigned(i));
            }
            if pursuer_of[i].replace(j).is_some() {
                return Err(AssignmentError::EvaderReused(i));
            }
        }
        let pursuer_of = pursuer_of
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or(AssignmentError::EvaderUnassigned(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(pursuer_of, n)
    }

    /// Builds from 1-based pairs, as written in reports (`(1, 2)` is E1→P2).
    pub fn from_one_based(pairs: &[(usize, usize)], m: usize, n: usize) -> Result<Self, AssignmentError> {
        let zero: Vec<(usize, usize)> = pairs.iter().map(|&(i, j)| (i.wrapping_sub(1), j.wrapping_sub(1))).collect();
        Self::from_pairs(&zero, m, n)
    }

    pub fn num_evaders(&self) -> usize {
        self.pursuer_of.len()
    }

    pub fn num_pursuers(&self) -> usize {
        self.num_pursuers
    }

    pub fn pursuer_of(&self, evader: usize) -> usize {
        self.pursuer_of[evader]
    }

    /// The evader chased by `pursuer`, if any.
    pub fn evader_of(&self, pursuer: usize) -> Option<usize> {
        self.pursuer_of.iter().position(|&j| j == pursuer)
    }

    /// 0-based `(evader, pursuer)` pairs ordered by evader.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pursuer_of.iter().copied().enumerate()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.pursuer_of
    }

    /// 1-based pairs ordered by evader.
    pub fn one_based_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs().map(|(i, j)| (i + 1, j + 1)).collect()
    }
}

impl fmt::Display for Assignment {
    /// `{12,21,33}` when every index is a single digit, `{(10,12),...}` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.num_evaders() < 10 && self.num_pursuers < 10;
        let parts: Vec<String> = self
            .one_based_pairs()
            .into_iter()
            .map(|(i, j)| if compact { format!("{i}{j}") } else { format!("({i},{j})") })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
