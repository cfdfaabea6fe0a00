//! Signed leg lengths carried along a workspace path.
//!
//! Signs start positive and flip only where a leg's joints pass through each
//! other: the leg vector `d_i = B_i - a_i` vanishes and comes back reversed.
//! A zero where `d_i` returns with the same direction is a tangential touch
//! and is reported instead of guessed.

use serde::{Deserialize, Serialize};

use super::path::WorkspacePath;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::geometry::{JointVector, Pose, RobotGeometry};

const REFINE_FACTOR: usize = 8;
/// Two parameters closer than this are the same sample.
const SAME_T: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointSample {
    pub t: f64,
    pub pose: Pose,
    pub joints: JointVector,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct JointPath {
    pub samples: Vec<JointSample>,
    /// `(leg, t)` for every sign flip, leg 1-based.
    pub flips: Vec<(u8, f64)>,
}

/// A parameter where one leg vector vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LegZero {
    pub leg: usize,
    pub t: f64,
}

fn leg_distance(geom: &RobotGeometry, path: &WorkspacePath, leg: usize, t: f64) -> f64 {
    geom.leg_vectors(&path.pose_at(t))[leg].norm()
}

fn min_leg_distance(geom: &RobotGeometry, pose: &Pose) -> f64 {
    geom.leg_vectors(pose).iter().map(|d| d.norm()).fold(f64::INFINITY, f64::min)
}

/// Base schedule with every interval that comes within `refine_radius` of a
/// serial point split `REFINE_FACTOR` times.
pub(crate) fn refined_schedule(geom: &RobotGeometry, path: &WorkspacePath, tol: &Tolerances) -> Vec<f64> {
    let radius = tol.refine_radius * geom.characteristic_scale();
    let base = path.base_samples();
    let near: Vec<bool> = base.iter().map(|&t| min_leg_distance(geom, &path.pose_at(t)) < radius).collect();
    let mut out = Vec::with_capacity(base.len());
    for k in 0..base.len() - 1 {
        out.push(base[k]);
        let (t0, t1) = (base[k], base[k + 1]);
        let mid_near = min_leg_distance(geom, &path.pose_at(0.5 * (t0 + t1))) < radius;
        if near[k] || near[k + 1] || mid_near {
            for j in 1..REFINE_FACTOR {
                out.push(t0 + (t1 - t0) * j as f64 / REFINE_FACTOR as f64);
            }
        }
    }
    out.push(*base.last().unwrap());
    out
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-15 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    let candidates = [(lo, f(lo)), (x1, f1), (x2, f2), (hi, f(hi))];
    candidates.into_iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap()
}

/// Zeros of the leg distances, located by minimizing around every sampled
/// local minimum that lies inside the refinement radius.
pub(crate) fn leg_zeros(geom: &RobotGeometry, path: &WorkspacePath, schedule: &[f64], tol: &Tolerances) -> Vec<LegZero> {
    let l = geom.characteristic_scale();
    let mut zeros: Vec<LegZero> = Vec::new();
    let n = schedule.len();
    for leg in 0..3 {
        let dist: Vec<f64> = schedule.iter().map(|&t| leg_distance(geom, path, leg, t)).collect();
        for k in 0..n {
            if dist[k] >= tol.refine_radius * l {
                continue;
            }
            let left_ok = k == 0 || dist[k] <= dist[k - 1];
            let right_ok = k == n - 1 || dist[k] <= dist[k + 1];
            if !(left_ok && right_ok) {
                continue;
            }
            let lo = schedule[k.saturating_sub(1)];
            let hi = schedule[(k + 1).min(n - 1)];
            let (t, d) = if dist[k] == 0.0 {
                (schedule[k], 0.0)
            } else {
                golden_min(|t| leg_distance(geom, path, leg, t), lo, hi)
            };
            if d <= tol.leg_degenerate * l && !zeros.iter().any(|z| z.leg == leg && (z.t - t).abs() <= 1e-9) {
                zeros.push(LegZero { leg, t });
            }
        }
    }
    zeros.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.leg.cmp(&b.leg)));
    zeros
}

/// Refined schedule with the leg zeros inserted (replacing samples they coincide with).
pub(crate) fn full_schedule(schedule: &[f64], zeros: &[LegZero]) -> Vec<f64> {
    let mut out: Vec<f64> = schedule
        .iter()
        .copied()
        .filter(|t| !zeros.iter().any(|z| (z.t - t).abs() <= SAME_T && z.t != *t))
        .collect();
    for z in zeros {
        if !out.iter().any(|t| (t - z.t).abs() <= SAME_T) {
            out.push(z.t);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Path sampling shared by continuation and crossing detection.
pub(crate) struct Sampling {
    pub times: Vec<f64>,
    pub zeros: Vec<LegZero>,
}

pub(crate) fn sample_path(geom: &RobotGeometry, path: &WorkspacePath, tol: &Tolerances) -> Sampling {
    let schedule = refined_schedule(geom, path, tol);
    let zeros = leg_zeros(geom, path, &schedule, tol);
    Sampling { times: full_schedule(&schedule, &zeros), zeros }
}

/// Step used to probe the leg direction on either side of a zero.
fn probe_step(path: &WorkspacePath) -> f64 {
    1e-3 / (path.segments() * path.samples_per_segment * REFINE_FACTOR) as f64
}

pub fn continue_joints(geom: &RobotGeometry, path: &WorkspacePath) -> Result<JointPath> {
    continue_joints_with(geom, path, &Tolerances::default())
}

pub fn continue_joints_with(geom: &RobotGeometry, path: &WorkspacePath, tol: &Tolerances) -> Result<JointPath> {
    let l = geom.characteristic_scale();
    path.validate(l)?;
    let sampling = sample_path(geom, path, tol);
    let h = probe_step(path);

    let mut flips: Vec<LegZero> = Vec::new();
    for z in &sampling.zeros {
        if z.t <= SAME_T || z.t >= 1.0 - SAME_T {
            continue;
        }
        let before = geom.leg_vectors(&path.pose_at((z.t - h).max(0.0)))[z.leg];
        let after = geom.leg_vectors(&path.pose_at((z.t + h).min(1.0)))[z.leg];
        let small = tol.leg_degenerate * l;
        if before.norm() <= small || after.norm() <= small || before.dot(&after) >= 0.0 {
            return Err(Error::AmbiguousContinuation { leg: z.leg as u8 + 1, t: z.t });
        }
        flips.push(*z);
    }

    let samples = sampling
        .times
        .iter()
        .map(|&t| {
            let pose = path.pose_at(t);
            let d = geom.leg_vectors(&pose);
            let rho = [0, 1, 2].map(|i| {
                if flips.iter().any(|z| z.leg == i && z.t == t) {
                    return 0.0;
                }
                let n = flips.iter().filter(|z| z.leg == i && z.t < t).count();
                if n % 2 == 0 {
                    d[i].norm()
                } else {
                    -d[i].norm()
                }
            });
            JointSample { t, pose, joints: JointVector::new(rho) }
        })
        .collect();
    Ok(JointPath { samples, flips: flips.iter().map(|z| (z.leg as u8 + 1, z.t)).collect() })
}
