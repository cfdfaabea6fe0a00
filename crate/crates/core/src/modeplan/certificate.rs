use serde::{Deserialize, Serialize};

use super::continuation::{continue_joints_with, JointPath};
use super::crossings::{detect_crossings_with, CrossingEvent, CrossingKind};
use super::path::WorkspacePath;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::geometry::{Pose, RobotGeometry};
use crate::kinematics::inverse_kinematics;
use crate::singularity::unnormalized_determinant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ChangedWithoutParallel,
    ChangedWithParallel,
    NoChange,
    InvalidEndpoints,
}

/// Sampled joint trace as parallel arrays. `measure` is the normalized measure
/// signed by the directed leg lengths, `D~ / (rho1 rho2 rho3 L)`, which stays
/// away from zero through a passage; it is absent where a leg length vanishes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct JointTrace {
    pub t: Vec<f64>,
    pub measure: Vec<Option<f64>>,
    pub rho1: Vec<f64>,
    pub rho2: Vec<f64>,
    pub rho3: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeChangeCertificate {
    pub verdict: Verdict,
    pub path: WorkspacePath,
    pub start_pose: Pose,
    pub end_pose: Pose,
    pub start_joints_sq: [f64; 3],
    pub end_joints_sq: [f64; 3],
    /// Signed leg lengths at the end of the continuation.
    pub end_joints_signed: Option<[f64; 3]>,
    pub events: Vec<CrossingEvent>,
    /// Smallest |measure| over samples where every leg is longer than the passage window.
    pub min_measure_outside_passages: Option<f64>,
    pub joint_path: JointTrace,
    pub diagnostic: Option<String>,
}

impl ModeChangeCertificate {
    pub fn count(&self, kind: CrossingKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }
}

fn trace(geom: &RobotGeometry, jp: &JointPath) -> JointTrace {
    let l = geom.characteristic_scale();
    let mut out = JointTrace::default();
    for s in &jp.samples {
        let r = s.joints.rho;
        let prod = r[0] * r[1] * r[2];
        out.t.push(s.t);
        out.measure.push((prod != 0.0).then(|| unnormalized_determinant(geom, &s.pose) / prod / l));
        out.rho1.push(r[0]);
        out.rho2.push(r[1]);
        out.rho3.push(r[2]);
    }
    out
}

pub fn verify_mode_change(geom: &RobotGeometry, path: &WorkspacePath) -> Result<ModeChangeCertificate> {
    verify_mode_change_with(geom, path, &Tolerances::default())
}

/// Only malformed paths are errors; an ambiguous continuation yields the
/// verdict `invalid_endpoints` with a diagnostic.
pub fn verify_mode_change_with(geom: &RobotGeometry, path: &WorkspacePath, tol: &Tolerances) -> Result<ModeChangeCertificate> {
    let l = geom.characteristic_scale();
    path.validate(l)?;
    let start_pose = path.waypoints[0];
    let end_pose = *path.waypoints.last().unwrap();
    let start_joints_sq = inverse_kinematics(geom, &start_pose, None).squared();
    let end_joints_sq = inverse_kinematics(geom, &end_pose, None).squared();
    let events = detect_crossings_with(geom, path, tol);

    let mut diagnostic = None;
    let (joint_path, end_joints_signed, min_measure) = match continue_joints_with(geom, path, tol) {
        Ok(jp) => {
            let tr = trace(geom, &jp);
            let window = tol.eps_pass * l;
            let min = jp
                .samples
                .iter()
                .zip(&tr.measure)
                .filter(|(s, _)| s.joints.rho.iter().all(|r| r.abs() > window))
                .filter_map(|(_, m)| m.map(f64::abs))
                .min_by(f64::total_cmp);
            (tr, jp.samples.last().map(|s| s.joints.rho), min)
        }
        Err(e @ Error::AmbiguousContinuation { .. }) => {
            diagnostic = Some(e.to_string());
            (JointTrace::default(), None, None)
        }
        Err(e) => return Err(e),
    };

    let mismatch = (0..3).map(|i| (start_joints_sq[i] - end_joints_sq[i]).abs()).fold(0.0, f64::max);
    let verdict = if diagnostic.is_some() {
        Verdict::InvalidEndpoints
    } else if mismatch > tol.joint_match * l * l {
        diagnostic = Some(format!("endpoint squared leg lengths differ by {mismatch:e}"));
        Verdict::InvalidEndpoints
    } else if start_pose.distance(&end_pose, l) < tol.mode_change_distance * l {
        Verdict::NoChange
    } else if events.iter().any(|e| e.kind == CrossingKind::Parallel) {
        Verdict::ChangedWithParallel
    } else {
        Verdict::ChangedWithoutParallel
    };

    Ok(ModeChangeCertificate {
        verdict,
        path: path.clone(),
        start_pose,
        end_pose,
        start_joints_sq,
        end_joints_sq,
        end_joints_signed,
        events,
        min_measure_outside_passages: min_measure,
        joint_path,
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::reference;

    #[test]
    fn closed_loop_is_no_change() {
        let g = reference();
        let p = WorkspacePath::new(
            vec![Pose::new(0.0, 0.0, 0.0), Pose::new(1.0, 0.5, 0.2), Pose::new(0.0, 0.0, 0.0)],
            16,
        )
        .unwrap();
        let c = verify_mode_change(&g, &p).unwrap();
        assert_eq!(c.verdict, Verdict::NoChange);
    }

    #[test]
    fn unrelated_endpoints_are_invalid() {
        let g = reference();
        let p = WorkspacePath::new(vec![Pose::new(16.0, -0.5, 0.0), Pose::new(16.0, 0.5, 0.0)], 16).unwrap();
        let c = verify_mode_change(&g, &p).unwrap();
        assert_eq!(c.verdict, Verdict::InvalidEndpoints);
        assert_eq!(c.count(CrossingKind::Parallel), 1);
    }

    #[test]
    fn signed_measure_is_continuous_through_a_passage() {
        let g = reference();
        let p = WorkspacePath::new(vec![Pose::new(4.0, 2.0, 0.0), Pose::new(0.0, 0.0, 0.0)], 64).unwrap();
        let c = verify_mode_change(&g, &p).unwrap();
        let m: Vec<f64> = c.joint_path.measure.iter().flatten().copied().collect();
        assert!(m.iter().all(|v| v.signum() == m[0].signum()));
        assert_eq!(c.joint_path.measure.iter().filter(|v| v.is_none()).count(), 1);
    }
}
