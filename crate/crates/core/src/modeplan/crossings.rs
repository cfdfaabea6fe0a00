//! Sign changes of the unnormalized determinant along a path.

use serde::{Deserialize, Serialize};

use super::continuation::sample_path;
use super::path::WorkspacePath;
use crate::config::Tolerances;
use crate::geometry::{Pose, RobotGeometry};
use crate::singularity::{parallel_singularity_measure, serial_clearance, unnormalized_determinant};

/// `|D~| / L⁴` at or below this is treated as zero.
pub(crate) const DET_ZERO: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    Parallel,
    Passage,
    Grazing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub t: f64,
    pub kind: CrossingKind,
    /// 1-based leg whose serial point is passed (passages only).
    pub leg: Option<u8>,
    /// Normalized measure magnitude at the event; absent where a leg line is undefined.
    pub measure_at: Option<f64>,
    /// Serial clearance of `leg` (passages only).
    pub clearance_at: Option<f64>,
}

/// Sign of `D~`: `0` inside the zero band.
pub(crate) fn det_sign(geom: &RobotGeometry, pose: &Pose) -> i8 {
    let l4 = geom.characteristic_scale().powi(4);
    let d = unnormalized_determinant(geom, pose);
    if d.abs() <= DET_ZERO * l4 {
        0
    } else if d > 0.0 {
        1
    } else {
        -1
    }
}

fn bisect(geom: &RobotGeometry, path: &WorkspacePath, mut lo: f64, mut hi: f64, s_lo: i8, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match det_sign(geom, &path.pose_at(mid)) {
            0 => return mid,
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    0.5 * (lo + hi)
}

fn classify_event(geom: &RobotGeometry, pose: &Pose, t: f64, tol: &Tolerances) -> CrossingEvent {
    let l = geom.characteristic_scale();
    let d = geom.leg_vectors(pose);
    let leg = (0..3).min_by(|&a, &b| d[a].norm().total_cmp(&d[b].norm())).unwrap();
    let measure_at = parallel_singularity_measure(geom, pose).ok().map(|m| m.normalized.abs());
    if d[leg].norm() <= tol.eps_pass * l {
        let clearance = serial_clearance(geom, pose, &[leg]);
        if clearance > tol.clearance * l {
            return CrossingEvent {
                t,
                kind: CrossingKind::Passage,
                leg: Some(leg as u8 + 1),
                measure_at,
                clearance_at: Some(clearance),
            };
        }
    }
    CrossingEvent { t, kind: CrossingKind::Parallel, leg: None, measure_at, clearance_at: None }
}

pub fn detect_crossings(geom: &RobotGeometry, path: &WorkspacePath) -> Vec<CrossingEvent> {
    detect_crossings_with(geom, path, &Tolerances::default())
}

/// Events in increasing `t`. Every sign change between sampled nonzero values
/// is bisected and classified; a zero run flanked by equal signs is a graze.
pub fn detect_crossings_with(geom: &RobotGeometry, path: &WorkspacePath, tol: &Tolerances) -> Vec<CrossingEvent> {
    let times = sample_path(geom, path, tol).times;
    let signs: Vec<i8> = times.iter().map(|&t| det_sign(geom, &path.pose_at(t))).collect();
    let mut events = Vec::new();
    let mut last: Option<usize> = None;
    for k in 0..times.len() {
        if signs[k] == 0 {
            continue;
        }
        if let Some(j) = last {
            if signs[j] != signs[k] {
                let t = bisect(geom, path, times[j], times[k], signs[j], tol.crossing_bisection);
                events.push(classify_event(geom, &path.pose_at(t), t, tol));
            } else if k > j + 1 {
                let t = times[j + 1];
                let pose = path.pose_at(t);
                let measure_at = parallel_singularity_measure(geom, &pose).ok().map(|m| m.normalized.abs());
                events.push(CrossingEvent { t, kind: CrossingKind::Grazing, leg: None, measure_at, clearance_at: None });
            }
        }
        last = Some(k);
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::reference;

    #[test]
    fn passage_through_first_serial_point() {
        let g = reference();
        let p = WorkspacePath::new(vec![Pose::new(4.0, 2.0, 0.0), Pose::new(0.0, 0.0, 0.0)], 64).unwrap();
        let ev = detect_crossings(&g, &p);
        assert_eq!(ev.len(), 1, "{ev:?}");
        assert_eq!(ev[0].kind, CrossingKind::Passage);
        assert_eq!(ev[0].leg, Some(1));
        assert!((ev[0].t - 0.5).abs() < 1e-9);
        assert!((ev[0].clearance_at.unwrap() - 0.8).abs() < 1e-6);
    }

    #[test]
    fn region_interior_has_no_events() {
        let g = reference();
        let p = WorkspacePath::new(vec![Pose::new(0.0, 0.0, 0.0), Pose::new(-1.0, -1.0, -0.1)], 16).unwrap();
        assert!(detect_crossings(&g, &p).is_empty());
    }

    #[test]
    fn crossing_far_from_serial_points_is_parallel() {
        // at phi = 0 the locus is 2xy + 4y² - 2x - 36y + 32 = 0; along x = 16 it
        // reads 4y(y - 1), so the segment meets it only at (16, 0)
        let g = reference();
        let p = WorkspacePath::new(vec![Pose::new(16.0, -0.5, 0.0), Pose::new(16.0, 0.5, 0.0)], 16).unwrap();
        let ev = detect_crossings(&g, &p);
        assert_eq!(ev.len(), 1, "{ev:?}");
        assert_eq!(ev[0].kind, CrossingKind::Parallel);
        assert!(ev[0].measure_at.unwrap() < 1e-9);
    }
}
