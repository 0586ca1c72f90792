//! Apollonius locus of a pursuer/evader pair and its closest point to the target.
//!
//! The locus is the set of points both players reach at the same time. For a
//! slower evader (`alpha < 1`) it is a sphere enclosing the evader; at equal
//! speeds it degenerates to the perpendicular bisector plane.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::SpeedRatio;
use crate::vec3::Vec3;

/// `|1 - alpha|` below this switches to the bisector-plane representation.
pub const PLANE_SWITCHOVER: f64 = 1e-9;

/// Separation below `DEGENERATE_SEPARATION * max(1, |x_E|, |x_P|)` is treated as coincident.
pub const DEGENERATE_SEPARATION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("speed ratio {0} > 1 is not supported")]
    UnsupportedRegime(f64),
    #[error("evader and pursuer positions coincide")]
    Degenerate,
    #[error("target is not outside the Apollonius sphere (|center| = {center_norm}, radius = {radius})")]
    RegionMismatch { center_norm: f64, radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ApolloniusLocus {
    Sphere { center: Vec3, radius: f64 },
    /// Points `x` with `unit_normal · x = offset`. The normal points from the
    /// pursuer towards the evader.
    Plane { unit_normal: Vec3, offset: f64 },
}

impl ApolloniusLocus {
    /// Signed distance of `x` from the locus (positive outside the sphere /
    /// on the evader side of the plane).
    pub fn signed_distance(&self, x: Vec3) -> f64 {
        match *self {
            ApolloniusLocus::Sphere { center, radius } => (x - center).norm() - radius,
            ApolloniusLocus::Plane { unit_normal, offset } => unit_normal.dot(x) - offset,
        }
    }
}

pub(crate) fn is_coincident(a: Vec3, b: Vec3) -> bool {
    let scale = 1.0f64.max(a.norm()).max(b.norm());
    a.distance(b) <= DEGENERATE_SEPARATION * scale
}

/// Locus of points the evader at `x_e` and the pursuer at `x_p` reach simultaneously.
pub fn apollonius_locus(x_e: Vec3, x_p: Vec3, alpha: SpeedRatio) -> Result<ApolloniusLocus, GeometryError> {
    let a = alpha.value();
    if a > 1.0 + PLANE_SWITCHOVER {
        return Err(GeometryError::UnsupportedRegime(a));
    }
    if is_coincident(x_e, x_p) {
        return Err(GeometryError::Degenerate);
    }
    if (1.0 - a).abs() < PLANE_SWITCHOVER {
        let d = x_e - x_p;
        let sep = d.norm();
        let unit_normal = d / sep;
        let offset = (x_e.norm_squared() - x_p.norm_squared()) / (2.0 * sep);
        return Ok(ApolloniusLocus::Plane { unit_normal, offset });
    }
    let a2 = a * a;
    let k = 1.0 - a2;
    let center = (x_e - a2 * x_p) / k;
    let radius = a * x_p.distance(x_e) / k;
    Ok(ApolloniusLocus::Sphere { center, radius })
}

/// Point of the locus nearest the origin and its distance.
///
/// For a sphere this is `(1 - r/R) c` with `R = |c|`; the origin must lie
/// strictly outside the sphere.
pub fn closest_point_to_origin(locus: &ApolloniusLocus) -> Result<(Vec3, f64), GeometryError> {
    match *locus {
        ApolloniusLocus::Sphere { center, radius } => {
            let center_norm = center.norm();
            if center_norm <= radius {
                return Err(GeometryError::RegionMismatch { center_norm, radius });
            }
            let point = center * (1.0 - radius / center_norm);
            Ok((point, center_norm - radius))
        }
        ApolloniusLocus::Plane { unit_normal, offset } => Ok((unit_normal * offset, offset.abs())),
    }
}

/// `count` deterministic, nearly uniform unit vectors (Fibonacci lattice).
pub fn fibonacci_sphere(count: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..count)
        .map(|k| {
            let y = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let r = (1.0 - y * y).sqrt();
            let theta = golden * k as f64;
            Vec3::new(r * theta.cos(), y, r * theta.sin())
        })
        .collect()
}
