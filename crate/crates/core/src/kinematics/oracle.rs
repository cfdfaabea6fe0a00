//! Brute-force forward kinematics by sweeping the orientation.
//!
//! At each orientation the two affine differences `F_2 - F_1`, `F_3 - F_1` are
//! solved for the position with trigonometric coefficients (no polynomial), and
//! the remaining constraint `g(phi) = F_1` is tracked for sign changes and for
//! near-zero local minima. Used to cross-check [`super::solve_fk`].

use std::f64::consts::TAU;

use super::{
    constraint_residuals, max_abs, refine_newton, FkSolution, FkSolutionSet, FK_RESIDUAL_TOL, ZERO_LEG_TOL,
};
use crate::error::Result;
use crate::geometry::{JointVector, Pose, RobotGeometry, Vec2};

struct Sweep<'a> {
    geom: &'a RobotGeometry,
    rho_sq: [f64; 3],
    l2: f64,
}

impl Sweep<'_> {
    /// Position and `F_1` at orientation `phi`, if the linear system is well conditioned.
    fn eval(&self, phi: f64) -> Option<(Vec2, f64)> {
        let (s, c) = phi.sin_cos();
        let a = self.geom.base();
        let b = self.geom.platform();
        let u = [0, 1, 2].map(|i| Vec2::new(c * b[i].x - s * b[i].y - a[i].x, s * b[i].x + c * b[i].y - a[i].y));
        let e = [0, 1, 2].map(|i| u[i].norm_squared() - self.rho_sq[i]);
        // |p|² + 2 p.u_i + e_i = 0 for each leg; subtract leg 1
        let (m11, m12, r1) = (2.0 * (u[1].x - u[0].x), 2.0 * (u[1].y - u[0].y), e[0] - e[1]);
        let (m21, m22, r2) = (2.0 * (u[2].x - u[0].x), 2.0 * (u[2].y - u[0].y), e[0] - e[2]);
        let det = m11 * m22 - m12 * m21;
        if det.abs() <= 1e-10 * self.l2 {
            return None;
        }
        let p = Vec2::new((r1 * m22 - m12 * r2) / det, (m11 * r2 - r1 * m21) / det);
        let g = p.norm_squared() + 2.0 * p.dot(&u[0]) + e[0];
        Some((p, g))
    }

    fn g_abs(&self, phi: f64) -> f64 {
        self.eval(phi).map_or(f64::INFINITY, |(_, g)| g.abs())
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, g_lo: f64) -> Option<f64> {
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            let (_, gm) = self.eval(mid)?;
            if gm == 0.0 {
                return Some(mid);
            }
            if (gm < 0.0) == (g_lo < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    fn golden_min(&self, mut lo: f64, mut hi: f64) -> f64 {
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - r * (hi - lo);
        let mut x2 = lo + r * (hi - lo);
        let (mut f1, mut f2) = (self.g_abs(x1), self.g_abs(x2));
        for _ in 0..200 {
            if hi - lo <= 1e-13 {
                break;
            }
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = self.g_abs(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = self.g_abs(x2);
            }
        }
        if f1 <= f2 {
            x1
        } else {
            x2
        }
    }

    fn accept(&self, phi: f64) -> Option<(Pose, f64)> {
        let (p, _) = self.eval(phi)?;
        let lifted = Pose::new(p.x, p.y, phi);
        let r0 = max_abs(&constraint_residuals(self.geom, &self.rho_sq, &lifted));
        let (pose, r) = refine_newton(self.geom, &self.rho_sq, lifted);
        let best = if r < r0 { (pose, r) } else { (lifted, r0) };
        (best.1 <= FK_RESIDUAL_TOL * self.l2).then_some(best)
    }
}

/// Forward kinematics by a uniform sweep of `grid` orientations over `[0, 2pi)`.
pub fn oracle_fk(geom: &RobotGeometry, joints: &JointVector, grid: usize) -> Result<FkSolutionSet> {
    let scale = geom.characteristic_scale();
    let sweep = Sweep { geom, rho_sq: joints.squared(), l2: scale * scale };
    let zero_leg = joints.rho.iter().any(|r| r.abs() <= ZERO_LEG_TOL * scale);
    let n = grid.max(8);
    let phis: Vec<f64> = (0..=n).map(|k| TAU * k as f64 / n as f64).collect();
    let vals: Vec<Option<f64>> = phis.iter().map(|&p| sweep.eval(p).map(|(_, g)| g)).collect();

    let sign_change = |k: usize| match (vals[k], vals[k + 1]) {
        (Some(a), Some(b)) => a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0),
        _ => false,
    };

    let mut set = FkSolutionSet::default();
    for k in 0..n {
        if let (Some(g0), true) = (vals[k], sign_change(k)) {
            if let Some(phi) = sweep.bisect(phis[k], phis[k + 1], g0) {
                if let Some((pose, residual)) = sweep.accept(phi) {
                    set.insert(FkSolution { pose, residual, multiplicity: 1 }, scale, true);
                }
            }
        }
        if vals[k] == Some(0.0) {
            if let Some((pose, residual)) = sweep.accept(phis[k]) {
                set.insert(FkSolution { pose, residual, multiplicity: 1 }, scale, false);
            }
        }
    }

    // tangential zeros: local minima of |g| without a neighbouring sign change
    let touch_multiplicity = if zero_leg { 1 } else { 2 };
    for k in 0..n {
        let prev = if k == 0 { n - 1 } else { k - 1 };
        let (Some(gp), Some(gk), Some(gn)) = (vals[prev], vals[k], vals[k + 1]) else {
            continue;
        };
        let prev_change = if k == 0 { sign_change(n - 1) } else { sign_change(k - 1) };
        if gk.abs() > gp.abs() || gk.abs() > gn.abs() || prev_change || sign_change(k) {
            continue;
        }
        let lo = phis[k] - (phis[1] - phis[0]);
        let phi = sweep.golden_min(lo, phis[k + 1]);
        if sweep.g_abs(phi) > FK_RESIDUAL_TOL * sweep.l2 {
            continue;
        }
        if let Some((pose, residual)) = sweep.accept(phi) {
            if !set.contains(&pose, scale, super::FK_DEDUP_TOL * scale) {
                set.insert(FkSolution { pose, residual, multiplicity: touch_multiplicity }, scale, false);
            }
        }
    }
    Ok(set.finish())
}
