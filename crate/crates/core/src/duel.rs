//! The one-pursuer-one-evader reach-avoid game.
//!
//! The barrier `B = |x_E|² − α²|x_P|²` splits the state space: for `B > 0`
//! the pursuer intercepts the evader at the point of the Apollonius locus
//! closest to the target and the value is that point's distance from the
//! origin; for `B ≤ 0` the evader runs straight home and the value is minus
//! the pursuer's remaining distance from the target when it arrives.
//!
//! Optimal controls follow from the value gradient: the evader descends it,
//! the pursuer ascends it, both at full speed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{self, GeometryError, PLANE_SWITCHOVER};
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DuelRegion {
    PursuerWins,
    EvaderWins,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DuelError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("state is in the {actual:?} region (barrier = {barrier}), expected {expected:?}")]
    WrongRegion { expected: DuelRegion, actual: DuelRegion, barrier: f64 },
    #[error("pursuer at the target: value {value} has no gradient")]
    SingularGradient { value: f64 },
    #[error("value gradient vanishes for the {0}; no optimal heading")]
    SingularControl(&'static str),
}

/// Positions and speeds of one evader/pursuer pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuelState {
    pub evader: Vec3,
    pub pursuer: Vec3,
    pub evader_speed: f64,
    pub pursuer_speed: f64,
}

impl DuelState {
    pub fn new(evader: Vec3, pursuer: Vec3, evader_speed: f64, pursuer_speed: f64) -> Self {
        Self { evader, pursuer, evader_speed, pursuer_speed }
    }

    pub fn alpha(&self) -> f64 {
        self.evader_speed / self.pursuer_speed
    }

    pub fn is_supported(&self) -> bool {
        self.alpha() <= 1.0 + PLANE_SWITCHOVER
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuelValue {
    pub region: DuelRegion,
    pub value: f64,
    /// ∂V/∂x_E
    pub grad_evader: Vec3,
    /// ∂V/∂x_P
    pub grad_pursuer: Vec3,
}

impl DuelValue {
    /// `−α ρ_E + ρ_P`, which vanishes for a solution of the reduced HJI equation.
    pub fn hji_residual(&self, alpha: f64) -> f64 {
        -alpha * self.grad_evader.norm() + self.grad_pursuer.norm()
    }
}

/// A velocity whose norm is the player's speed (or zero once the player is frozen).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Control(Vec3);

impl Control {
    /// Full-speed motion along `direction`; `None` for a zero direction.
    pub fn along(direction: Vec3, speed: f64) -> Option<Self> {
        direction.normalized().map(|d| Self(d * speed))
    }

    pub fn zero() -> Self {
        Self(Vec3::ZERO)
    }

    /// Accepts an externally produced velocity if its norm matches `speed`.
    pub fn checked(velocity: Vec3, speed: f64, rel_tol: f64) -> Option<Self> {
        let n = velocity.norm();
        ((n - speed).abs() <= rel_tol * speed.max(f64::MIN_POSITIVE)).then_some(Self(velocity))
    }

    pub fn velocity(self) -> Vec3 {
        self.0
    }

    pub fn speed(self) -> f64 {
        self.0.norm()
    }
}

pub fn barrier_1v1(s: &DuelState) -> f64 {
    let a = s.alpha();
    s.evader.norm_squared() - a * a * s.pursuer.norm_squared()
}

/// `B ≤ 0` (including the boundary) is an evader win.
pub fn region(s: &DuelState) -> DuelRegion {
    if barrier_1v1(s) > 0.0 {
        DuelRegion::PursuerWins
    } else {
        DuelRegion::EvaderWins
    }
}

fn check_region(s: &DuelState, expected: DuelRegion) -> Result<(), DuelError> {
    let actual = region(s);
    if actual != expected {
        return Err(DuelError::WrongRegion { expected, actual, barrier: barrier_1v1(s) });
    }
    if !s.is_supported() {
        return Err(GeometryError::UnsupportedRegime(s.alpha()).into());
    }
    Ok(())
}

/// Value and gradients for a state in the pursuer winning region.
pub fn value_pursuer_region(s: &DuelState) -> Result<DuelValue, DuelError> {
    check_region(s, DuelRegion::PursuerWins)?;
    pursuer_formula(s)
}

/// Value and gradients for a state in the evader winning region.
pub fn value_evader_region(s: &DuelState) -> Result<DuelValue, DuelError> {
    check_region(s, DuelRegion::EvaderWins)?;
    evader_formula(s)
}

/// Dispatches on the barrier sign.
pub fn value(s: &DuelState) -> Result<DuelValue, DuelError> {
    match region(s) {
        DuelRegion::PursuerWins => value_pursuer_region(s),
        DuelRegion::EvaderWins => value_evader_region(s),
    }
}

/// Evaluates the given region's value formula without checking the barrier.
///
/// Used along simulated play where the region label is fixed at the start.
pub fn value_in_region(s: &DuelState, region: DuelRegion) -> Result<DuelValue, DuelError> {
    if !s.is_supported() {
        return Err(GeometryError::UnsupportedRegime(s.alpha()).into());
    }
    match region {
        DuelRegion::PursuerWins => pursuer_formula(s),
        DuelRegion::EvaderWins => evader_formula(s),
    }
}

fn pursuer_formula(s: &DuelState) -> Result<DuelValue, DuelError> {
    let a = s.alpha();
    let (x_e, x_p) = (s.evader, s.pursuer);
    if geometry::is_coincident(x_e, x_p) {
        return Err(GeometryError::Degenerate.into());
    }
    let w = x_e - x_p;
    if (1.0 - a).abs() < PLANE_SWITCHOVER {
        // Bisector plane: V = (|x_E|² − |x_P|²) / (2|x_E − x_P|).
        let d = w.norm();
        let num = x_e.norm_squared() - x_p.norm_squared();
        let value = num / (2.0 * d);
        let k = num / (2.0 * d * d * d);
        return Ok(DuelValue {
            region: DuelRegion::PursuerWins,
            value,
            grad_evader: x_e / d - w * k,
            grad_pursuer: -x_p / d + w * k,
        });
    }
    let a2 = a * a;
    let k = 1.0 - a2;
    let center = (x_e - a2 * x_p) / k;
    let radius = a * w.norm() / k;
    let center_norm = center.norm();
    if center_norm <= radius {
        return Err(GeometryError::RegionMismatch { center_norm, radius }.into());
    }
    let radial = center / center_norm;
    let separation = w / radius;
    Ok(DuelValue {
        region: DuelRegion::PursuerWins,
        value: center_norm - radius,
        grad_evader: radial / k - separation * (a2 / (k * k)),
        grad_pursuer: -radial * (a2 / k) + separation * (a2 / (k * k)),
    })
}

fn evader_formula(s: &DuelState) -> Result<DuelValue, DuelError> {
    let a = s.alpha();
    let r_e = s.evader.norm();
    let r_p = s.pursuer.norm();
    let value = -r_p + r_e / a;
    if r_p == 0.0 {
        return Err(DuelError::SingularGradient { value });
    }
    // An evader already on the target has no preferred heading.
    let grad_evader = if r_e > 0.0 { s.evader / (a * r_e) } else { Vec3::ZERO };
    Ok(DuelValue {
        region: DuelRegion::EvaderWins,
        value,
        grad_evader,
        grad_pursuer: -s.pursuer / r_p,
    })
}

/// Full-speed headings from a value gradient: the evader descends, the pursuer ascends.
pub fn controls_from_gradient(s: &DuelState, v: &DuelValue) -> Result<(Control, Control), DuelError> {
    let u = Control::along(-v.grad_evader, s.evader_speed).ok_or(DuelError::SingularControl("evader"))?;
    let p = Control::along(v.grad_pursuer, s.pursuer_speed).ok_or(DuelError::SingularControl("pursuer"))?;
    Ok((u, p))
}

/// Optimal state-feedback controls `(u_E, v_P)` for the region the state is in.
pub fn optimal_controls(s: &DuelState) -> Result<(Control, Control), DuelError> {
    let v = value(s)?;
    controls_from_gradient(s, &v)
}

/// Optimal controls under a region label fixed in advance.
pub fn controls_in_region(s: &DuelState, region: DuelRegion) -> Result<(Control, Control), DuelError> {
    let v = value_in_region(s, region)?;
    controls_from_gradient(s, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{apollonius_locus, closest_point_to_origin};
    use crate::model::SpeedRatio;

    fn st(e: [f64; 3], p: [f64; 3], u: f64, v: f64) -> DuelState {
        DuelState::new(Vec3::from_array(e), Vec3::from_array(p), u, v)
    }

    #[test]
    fn barrier_examples() {
        let b = barrier_1v1(&st([0.0, 0.0, 2.0], [0.0, 0.0, 1.0], 1.0, 1.0));
        assert_eq!(b, 3.0);
        let s = st([0.0; 3], [1.0, 2.0, 2.0], 0.5, 1.0);
        assert_eq!(barrier_1v1(&s), -0.25 * 9.0);
        assert_eq!(region(&s), DuelRegion::EvaderWins);
        assert_eq!(barrier_1v1(&st([0.0, 0.0, 1.0], [0.0, 0.0, 3.0], 0.5, 1.0)), -1.25);
    }

    #[test]
    fn boundary_is_evader_region() {
        // |x_E| = α|x_P| exactly.
        let s = st([0.0, 0.0, 1.0], [0.0, 0.0, 2.0], 0.5, 1.0);
        assert_eq!(barrier_1v1(&s), 0.0);
        assert_eq!(region(&s), DuelRegion::EvaderWins);
    }

    #[test]
    fn collinear_pursuer_region() {
        let s = st([0.0, 0.0, 1.0], [0.0, 0.0, -1.0], 0.5, 1.0);
        let v = value_pursuer_region(&s).unwrap();
        assert!((v.value - 1.0 / 3.0).abs() < 1e-15);
        assert!(v.hji_residual(0.5).abs() < 1e-12);
        let (u_e, v_p) = optimal_controls(&s).unwrap();
        assert!((u_e.velocity() - Vec3::new(0.0, 0.0, -0.5)).norm() < 1e-15);
        assert!((v_p.velocity() - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn pursuer_value_is_interception_distance() {
        let s = st([-8.07, 2.73, -5.91], [-6.77, -2.95, 0.01], 1.01, 1.71);
        let v = value_pursuer_region(&s).unwrap();
        let locus = apollonius_locus(s.evader, s.pursuer, SpeedRatio::new(s.alpha()).unwrap()).unwrap();
        let (point, dist) = closest_point_to_origin(&locus).unwrap();
        assert!(v.value > 0.0);
        assert!((v.value - dist).abs() < 1e-12);
        assert!((v.value - point.norm()).abs() < 1e-12);
    }

    #[test]
    fn equal_speed_value_is_plane_distance() {
        let s = st([0.0, 0.0, 2.0], [0.0, 0.0, 1.0], 1.3, 1.3);
        let v = value_pursuer_region(&s).unwrap();
        assert!((v.value - 1.5).abs() < 1e-15);
        assert!(v.hji_residual(1.0).abs() < 1e-12);
    }

    #[test]
    fn evader_region_examples() {
        let s = st([0.0, 0.0, 1.0], [0.0, 0.0, 3.0], 0.5, 1.0);
        let v = value_evader_region(&s).unwrap();
        assert_eq!(v.value, -1.0);
        let home = st([0.0; 3], [0.0, 4.0, 3.0], 0.5, 1.0);
        assert_eq!(value_evader_region(&home).unwrap().value, -5.0);
        let (u_e, v_p) = optimal_controls(&s).unwrap();
        assert!((u_e.velocity() - Vec3::new(0.0, 0.0, -0.5)).norm() < 1e-15);
        assert!((v_p.velocity() - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn evader_on_target_has_no_heading() {
        let home = st([0.0; 3], [0.0, 4.0, 3.0], 0.5, 1.0);
        assert_eq!(optimal_controls(&home), Err(DuelError::SingularControl("evader")));
    }

    #[test]
    fn error_paths() {
        let pursuer_side = st([0.0, 0.0, 2.0], [0.0, 0.0, 1.0], 0.5, 1.0);
        assert!(matches!(value_evader_region(&pursuer_side), Err(DuelError::WrongRegion { .. })));
        let evader_side = st([0.0, 0.0, 1.0], [0.0, 0.0, 3.0], 0.5, 1.0);
        assert!(matches!(value_pursuer_region(&evader_side), Err(DuelError::WrongRegion { .. })));
        let fast = st([0.0, 0.0, 5.0], [0.0, 0.0, 1.0], 2.0, 1.0);
        assert!(matches!(
            value_pursuer_region(&fast),
            Err(DuelError::Geometry(GeometryError::UnsupportedRegime(_)))
        ));
        let same = st([1.0, 1.0, 1.0], [1.0, 1.0, 1.0], 0.5, 1.0);
        assert_eq!(value_pursuer_region(&same), Err(DuelError::Geometry(GeometryError::Degenerate)));
        let p_home = st([0.0, 0.0, 1.0], [0.0; 3], 0.5, 1.0);
        assert_eq!(value_in_region(&p_home, DuelRegion::EvaderWins), Err(DuelError::SingularGradient { value: 2.0 }));
    }

    #[test]
    fn control_norms_equal_speeds() {
        let s = st([3.0, -1.0, 2.0], [-2.0, 4.0, 1.0], 0.7, 1.9);
        let (u, v) = optimal_controls(&s).unwrap();
        assert!((u.speed() - 0.7).abs() < 1e-12 * 0.7);
        assert!((v.speed() - 1.9).abs() < 1e-12 * 1.9);
        assert!(Control::checked(Vec3::new(0.0, 3.0, 4.0), 5.0, 1e-12).is_some());
        assert!(Control::checked(Vec3::new(0.0, 3.0, 4.0), 4.0, 1e-12).is_none());
    }
}
