//! Inverse and forward kinematics.
//!
//! Each leg imposes `F_i = |B_i(pose) - a_i|^2 - rho_i^2 = 0`. Forward kinematics
//! eliminates the position through the two affine differences `F_k - F_j`, then
//! the orientation through the tangent half-angle, leaving a univariate
//! polynomial of degree at most six whose real roots are the assembly modes.

mod elimination;
mod oracle;
mod solve;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::{JointVector, Pose, RobotGeometry, Vec2};

pub use elimination::{build_fk_polynomial, UnivariateFkPolynomial};
pub use oracle::oracle_fk;
pub use solve::{fk_root_multiplicity, solve_fk};

/// Constraint residual accepted for a forward solution (×L²).
pub const FK_RESIDUAL_TOL: f64 = 1e-9;
/// Two solutions closer than this are the same (×L, pose distance).
pub const FK_DEDUP_TOL: f64 = 1e-6;
/// Relative threshold for dropping leading polynomial coefficients.
pub const TRIM_TOL: f64 = 1e-12;
/// Roots of the univariate polynomial closer than this in t are clustered.
pub const ROOT_CLUSTER_RADIUS: f64 = 1e-6;
pub const NEWTON_MAX_ITER: usize = 50;
/// A leg at most this long (×L) is treated as having zero length.
pub const ZERO_LEG_TOL: f64 = 1e-9;

/// Directed leg lengths for `pose`. Without a hint all signs are positive; a
/// hint entry `< 0` makes that leg negative. A zero-length leg yields `0`.
pub fn inverse_kinematics(geom: &RobotGeometry, pose: &Pose, sign_hint: Option<[f64; 3]>) -> JointVector {
    let d = geom.leg_vectors(pose);
    let mut rho = d.map(|v| v.norm());
    if let Some(h) = sign_hint {
        for i in 0..3 {
            if h[i] < 0.0 {
                rho[i] = -rho[i];
            }
        }
    }
    JointVector::new(rho)
}

/// One assembly mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FkSolution {
    #[serde(flatten)]
    pub pose: Pose,
    /// Largest `|F_i|` at the pose.
    pub residual: f64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FkSolutionSet {
    pub solutions: Vec<FkSolution>,
}

impl FkSolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.solutions.iter().map(|s| s.multiplicity).sum()
    }

    pub fn poses(&self) -> Vec<Pose> {
        self.solutions.iter().map(|s| s.pose).collect()
    }

    /// Index of the solution nearest to `pose`, if within `tol` pose distance.
    pub fn find(&self, pose: &Pose, scale: f64, tol: f64) -> Option<usize> {
        self.solutions
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.pose.distance(pose, scale)))
            .filter(|(_, d)| *d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    pub fn contains(&self, pose: &Pose, scale: f64, tol: f64) -> bool {
        self.find(pose, scale, tol).is_some()
    }

    /// Hausdorff distance between the two pose sets (0 when both are empty,
    /// infinite when exactly one is).
    pub fn hausdorff(&self, other: &FkSolutionSet, scale: f64) -> f64 {
        if self.is_empty() && other.is_empty() {
            return 0.0;
        }
        if self.is_empty() || other.is_empty() {
            return f64::INFINITY;
        }
        let one_way = |a: &FkSolutionSet, b: &FkSolutionSet| {
            a.solutions
                .iter()
                .map(|s| b.solutions.iter().map(|t| s.pose.distance(&t.pose, scale)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        one_way(self, other).max(one_way(other, self))
    }

    fn finish(mut self) -> Self {
        for s in &mut self.solutions {
            s.pose = s.pose.wrapped();
        }
        self.solutions.sort_by(|a, b| {
            a.pose
                .phi
                .total_cmp(&b.pose.phi)
                .then(a.pose.x.total_cmp(&b.pose.x))
                .then(a.pose.y.total_cmp(&b.pose.y))
        });
        self
    }

    /// Adds a solution, or folds it into an existing one within the dedup radius.
    /// `merge_multiplicity` controls whether the multiplicities add up.
    fn insert(&mut self, cand: FkSolution, scale: f64, merge_multiplicity: bool) {
        match self.find(&cand.pose, scale, FK_DEDUP_TOL * scale) {
            Some(i) => {
                let s = &mut self.solutions[i];
                if merge_multiplicity {
                    s.multiplicity += cand.multiplicity;
                }
                if cand.residual < s.residual {
                    s.pose = cand.pose;
                    s.residual = cand.residual;
                }
            }
            None => self.solutions.push(cand),
        }
    }
}

pub(crate) fn constraint_residuals(geom: &RobotGeometry, rho_sq: &[f64; 3], pose: &Pose) -> [f64; 3] {
    let d = geom.leg_vectors(pose);
    [0, 1, 2].map(|i| d[i].norm_squared() - rho_sq[i])
}

pub(crate) fn max_abs(v: &[f64; 3]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton iteration on `(F_1, F_2, F_3)` over `(x, y, phi)`. Returns the best
/// pose seen and its residual.
pub(crate) fn refine_newton(geom: &RobotGeometry, rho_sq: &[f64; 3], start: Pose) -> (Pose, f64) {
    let l2 = geom.characteristic_scale().powi(2);
    let mut pose = start;
    let mut best = (pose, max_abs(&constraint_residuals(geom, rho_sq, &pose)));
    let mut stalled = 0;
    for _ in 0..NEWTON_MAX_ITER {
        let f = constraint_residuals(geom, rho_sq, &pose);
        let r = max_abs(&f);
        if r < best.1 {
            best = (pose, r);
            stalled = 0;
        } else if pose != start {
            stalled += 1;
            if stalled >= 4 {
                break;
            }
        }
        if r <= 1e-15 * l2 {
            break;
        }
        let d = geom.leg_vectors(&pose);
        let (s, c) = pose.phi.sin_cos();
        let mut jac = Matrix3::zeros();
        for i in 0..3 {
            let b = geom.platform()[i];
            let db = Vec2::new(-s * b.x - c * b.y, c * b.x - s * b.y);
            jac[(i, 0)] = 2.0 * d[i].x;
            jac[(i, 1)] = 2.0 * d[i].y;
            jac[(i, 2)] = 2.0 * d[i].dot(&db);
        }
        let Some(step) = jac.lu().solve(&Vector3::new(-f[0], -f[1], -f[2])) else {
            break;
        };
        if !step.iter().all(|v| v.is_finite()) {
            break;
        }
        pose = Pose::new(pose.x + step[0], pose.y + step[1], pose.phi + step[2]);
    }
    let r = max_abs(&constraint_residuals(geom, rho_sq, &pose));
    if r < best.1 {
        best = (pose, r);
    }
    best
}
