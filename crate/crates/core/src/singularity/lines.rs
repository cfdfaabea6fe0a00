use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cross, Pose, RobotGeometry, Vec2};

/// Leg lengths at or below this fraction of L leave the force line undefined.
pub const LEG_DEGENERATE_TOL: f64 = 1e-9;

/// Force line of one leg in Plücker form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegLine {
    /// Unit vector from the base joint towards the platform joint (zero if degenerate).
    pub direction: Vec2,
    /// `a_i × u_i`.
    pub moment: f64,
    pub degenerate: bool,
}

impl LegLine {
    /// Distance from `p` to the line through `origin` with this direction.
    pub fn distance_to(&self, p: &Vec2) -> f64 {
        // points q on the line satisfy q × u = moment
        (cross(p, &self.direction) - self.moment).abs()
    }
}

pub fn leg_lines(geom: &RobotGeometry, pose: &Pose) -> [LegLine; 3] {
    let tol = LEG_DEGENERATE_TOL * geom.characteristic_scale();
    let d = geom.leg_vectors(pose);
    [0, 1, 2].map(|i| {
        let n = d[i].norm();
        if n <= tol {
            LegLine { direction: Vec2::zeros(), moment: 0.0, degenerate: true }
        } else {
            let u = d[i] / n;
            LegLine { direction: u, moment: cross(&geom.base()[i], &u), degenerate: false }
        }
    })
}

/// Determinant of the unit-line matrix, in length units, and the same divided by L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelMeasure {
    pub value: f64,
    pub normalized: f64,
}

/// `det [u_i, a_i × u_i]` over the three legs. Zero iff the force lines are
/// concurrent or all parallel. Used as a proximity heuristic, not a metric.
pub fn parallel_singularity_measure(geom: &RobotGeometry, pose: &Pose) -> Result<ParallelMeasure> {
    let lines = leg_lines(geom, pose);
    if let Some(i) = lines.iter().position(|l| l.degenerate) {
        return Err(Error::SerialDegenerate { leg: i as u8 + 1 });
    }
    let m = Matrix3::from_fn(|r, c| match c {
        0 => lines[r].direction.x,
        1 => lines[r].direction.y,
        _ => lines[r].moment,
    });
    let value = m.determinant();
    Ok(ParallelMeasure { value, normalized: value / geom.characteristic_scale() })
}

/// `det [d_i, a_i × d_i]` with `d_i = B_i - a_i`; equals `|rho_1 rho_2 rho_3|`
/// times the measure and vanishes at serial singularities.
pub fn unnormalized_determinant(geom: &RobotGeometry, pose: &Pose) -> f64 {
    let d = geom.leg_vectors(pose);
    let a = geom.base();
    let rows = [0, 1, 2].map(|i| [d[i].x, d[i].y, cross(&a[i], &d[i])]);
    rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
}
