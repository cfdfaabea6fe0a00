//! Pointwise classification of a configuration.

use serde::{Deserialize, Serialize};

use super::lines::{leg_lines, parallel_singularity_measure};
use crate::config::Tolerances;
use crate::geometry::{cross, Pose, RobotGeometry, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigurationKind {
    Regular,
    ParallelSingular,
    SerialSingular,
    SerialAndParallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationClass {
    pub kind: ConfigurationKind,
    /// 1-based indices of legs whose joints coincide.
    pub singular_legs: Vec<u8>,
    /// Normalized parallel-singularity measure; absent when a leg line is undefined.
    pub measure: Option<f64>,
    /// Serial clearance (length units); present only at serial configurations.
    pub clearance: Option<f64>,
}

/// Distance from the coinciding joints of the `singular` legs (0-based) to a
/// parallel singularity.
///
/// With one serial leg the wrench system loses rank iff the remaining two lines
/// meet at its base joint, so the clearance is the distance from that joint to
/// their intersection (the larger point-line distance when the lines are
/// parallel). With two or more serial legs every coinciding joint already
/// transmits any force through it, and the rank drops only if those joints
/// coincide; the clearance is then their largest pairwise distance.
pub fn serial_clearance(geom: &RobotGeometry, pose: &Pose, singular: &[usize]) -> f64 {
    let a = geom.base();
    match singular {
        [] => f64::INFINITY,
        [i] => {
            let lines = leg_lines(geom, pose);
            let others: Vec<usize> = (0..3).filter(|k| k != i).collect();
            let (lj, lk) = (lines[others[0]], lines[others[1]]);
            let p = a[*i];
            if lj.degenerate || lk.degenerate {
                return 0.0;
            }
            let det = cross(&lj.direction, &lk.direction);
            if det.abs() <= 1e-12 {
                return lj.distance_to(&p).max(lk.distance_to(&p));
            }
            // q × u = m  <=>  u.y q.x - u.x q.y = m
            let (uj, uk) = (lj.direction, lk.direction);
            let d = uj.y * (-uk.x) - (-uj.x) * uk.y;
            let q = Vec2::new((lj.moment * (-uk.x) - (-uj.x) * lk.moment) / d, (uj.y * lk.moment - lj.moment * uk.y) / d);
            (q - p).norm()
        }
        many => {
            let mut m = 0.0f64;
            for (x, &i) in many.iter().enumerate() {
                for &j in &many[x + 1..] {
                    m = m.max((a[i] - a[j]).norm());
                }
            }
            m
        }
    }
}

pub fn classify_configuration(geom: &RobotGeometry, pose: &Pose) -> ConfigurationClass {
    classify_configuration_with(geom, pose, &Tolerances::default())
}

pub fn classify_configuration_with(geom: &RobotGeometry, pose: &Pose, tol: &Tolerances) -> ConfigurationClass {
    let l = geom.characteristic_scale();
    let d = geom.leg_vectors(pose);
    let singular: Vec<usize> = (0..3).filter(|&i| d[i].norm() <= tol.serial_leg * l).collect();
    let measure = parallel_singularity_measure(geom, pose).ok().map(|m| m.normalized);
    let singular_legs = singular.iter().map(|&i| i as u8 + 1).collect();
    if singular.is_empty() {
        let m = measure.expect("no leg is shorter than the serial tolerance");
        let kind = if m.abs() <= tol.parallel_measure {
            ConfigurationKind::ParallelSingular
        } else {
            ConfigurationKind::Regular
        };
        return ConfigurationClass { kind, singular_legs, measure, clearance: None };
    }
    let clearance = serial_clearance(geom, pose, &singular);
    let kind = if clearance <= tol.clearance * l {
        ConfigurationKind::SerialAndParallel
    } else {
        ConfigurationKind::SerialSingular
    };
    ConfigurationClass { kind, singular_legs, measure, clearance: Some(clearance) }
}
