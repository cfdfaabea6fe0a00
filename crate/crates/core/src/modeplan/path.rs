use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Pose};

pub const MIN_SAMPLES_PER_SEGMENT: usize = 16;
pub const DEFAULT_SAMPLES_PER_SEGMENT: usize = 64;

/// Piecewise-linear path in `(x, y, phi)`; each segment turns the short way
/// round and receives an equal share of the parameter `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkspacePath {
    pub waypoints: Vec<Pose>,
    pub samples_per_segment: usize,
}

impl WorkspacePath {
    pub fn new(waypoints: Vec<Pose>, samples_per_segment: usize) -> Result<Self> {
        let path = Self { waypoints, samples_per_segment };
        path.check_shape()?;
        Ok(path)
    }

    fn check_shape(&self) -> Result<()> {
        if self.waypoints.len() < 2 {
            return Err(Error::InvalidPath(format!("need at least 2 waypoints, got {}", self.waypoints.len())));
        }
        if self.samples_per_segment < MIN_SAMPLES_PER_SEGMENT {
            return Err(Error::InvalidPath(format!(
                "samples_per_segment must be at least {MIN_SAMPLES_PER_SEGMENT}, got {}",
                self.samples_per_segment
            )));
        }
        let finite = self.waypoints.iter().all(|p| p.x.is_finite() && p.y.is_finite() && p.phi.is_finite());
        if !finite {
            return Err(Error::InvalidPath("non-finite waypoint".into()));
        }
        Ok(())
    }

    /// Full validation against the robot scale: consecutive waypoints must differ
    /// by more than `1e-9 * scale` in pose distance.
    pub fn validate(&self, scale: f64) -> Result<()> {
        self.check_shape()?;
        for (k, w) in self.waypoints.windows(2).enumerate() {
            if w[0].distance(&w[1], scale) <= 1e-9 * scale {
                return Err(Error::InvalidPath(format!("waypoints {k} and {} coincide", k + 1)));
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> usize {
        self.waypoints.len() - 1
    }

    pub fn pose_at(&self, t: f64) -> Pose {
        let n = self.segments();
        let s = (t.clamp(0.0, 1.0) * n as f64).min(n as f64);
        let k = (s.floor() as usize).min(n - 1);
        interpolate(&self.waypoints[k], &self.waypoints[k + 1], s - k as f64)
    }

    /// Uniform base schedule: `samples_per_segment` intervals per segment.
    pub fn base_samples(&self) -> Vec<f64> {
        let total = self.segments() * self.samples_per_segment;
        (0..=total).map(|k| k as f64 / total as f64).collect()
    }

    /// Same waypoints in reverse order.
    pub fn reversed(&self) -> Self {
        let mut waypoints = self.waypoints.clone();
        waypoints.reverse();
        Self { waypoints, samples_per_segment: self.samples_per_segment }
    }

    pub fn length(&self, scale: f64) -> f64 {
        self.waypoints.windows(2).map(|w| w[0].distance(&w[1], scale)).sum()
    }
}

/// Point at fraction `u` of the segment `a -> b`, turning the short way round.
pub fn interpolate(a: &Pose, b: &Pose, u: f64) -> Pose {
    let dphi = wrap_angle(b.phi - a.phi);
    Pose::new(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), a.phi + u * dphi)
}
