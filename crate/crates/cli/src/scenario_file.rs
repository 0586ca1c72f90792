//! JSON scenario documents.
//!
//! ```json
//! {
//!   "pursuers": [{ "id": 1, "position": [1.0, 0.0, 0.0], "speed": 1.0 }],
//!   "evaders":  [{ "id": 1, "position": [0.75, 1.0, 0.0], "speed": 0.5 }],
//!   "penalty_L": 10.0,
//!   "tolerances": { "capture_radius": 1e-6 },
//!   "seed": 7
//! }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use radg_core::model::{InvalidScenario, Player, ScenarioConfig, Tolerances};
use radg_core::{Scenario, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerEntry {
    pub id: u32,
    pub position: [f64; 3],
    pub speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capture_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tie_tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub pursuers: Vec<PlayerEntry>,
    pub evaders: Vec<PlayerEntry>,
    #[serde(rename = "penalty_L", default, skip_serializing_if = "Option::is_none")]
    pub penalty_l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum ScenarioFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: at `{key}`: {message}")]
    Syntax { path: String, key: String, message: String },
    #[error("{path}: {source}")]
    Invalid { path: String, source: InvalidScenario },
}

impl ScenarioFile {
    /// Parses a document. `origin` labels diagnostics (usually the file path).
    pub fn parse(text: &str, origin: &str) -> Result<Self, ScenarioFileError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            ScenarioFileError::Syntax { path: origin.to_string(), key, message: e.into_inner().to_string() }
        })
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioFileError> {
        let origin = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| ScenarioFileError::Io { path: origin.clone(), source })?;
        Self::parse(&text, &origin)
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario documents always serialize")
    }

    pub fn to_config(&self) -> ScenarioConfig {
        let players = |list: &[PlayerEntry], make: fn(u32, Vec3, f64) -> Player| {
            list.iter().map(|p| make(p.id, Vec3::from_array(p.position), p.speed)).collect()
        };
        let t = self.tolerances.unwrap_or_default();
        ScenarioConfig {
            pursuers: players(&self.pursuers, Player::pursuer),
            evaders: players(&self.evaders, Player::evader),
            penalty: self.penalty_l,
            tolerances: Tolerances {
                capture_radius: t.capture_radius,
                target_radius: t.target_radius,
                tie_tolerance: t.tie_tolerance,
            },
        }
    }

    pub fn to_scenario(&self, origin: &str) -> Result<Scenario, ScenarioFileError> {
        Scenario::new(self.to_config()).map_err(|source| ScenarioFileError::Invalid { path: origin.to_string(), source })
    }

    /// Document describing `s`, with every tolerance written out.
    pub fn from_scenario(s: &Scenario, seed: Option<u64>) -> Self {
        let entries = |list: &[Player]| {
            list.iter().map(|p| PlayerEntry { id: p.id, position: p.position.to_array(), speed: p.speed }).collect()
        };
        Self {
            pursuers: entries(s.pursuers()),
            evaders: entries(s.evaders()),
            penalty_l: s.penalty(),
            tolerances: Some(ToleranceEntry {
                capture_radius: Some(s.capture_radius()),
                target_radius: Some(s.target_radius()),
                tie_tolerance: Some(s.tie_tolerance()),
            }),
            seed,
        }
    }
}

/// Loads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<(ScenarioFile, Scenario), ScenarioFileError> {
    let file = ScenarioFile::load(path)?;
    let s = file.to_scenario(&path.display().to_string())?;
    Ok((file, s))
}
