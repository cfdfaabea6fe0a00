use std::f64::consts::PI;

use log::warn;

use super::elimination::lift_position;
use super::{
    build_fk_polynomial, constraint_residuals, max_abs, refine_newton, FkSolution, FkSolutionSet,
    FK_RESIDUAL_TOL, ROOT_CLUSTER_RADIUS, ZERO_LEG_TOL,
};
use crate::error::{Error, Result};
use crate::geometry::{cross, JointVector, Pose, RobotGeometry};

/// All assembly modes for the given leg lengths.
///
/// Only `rho_i²` enters the constraints, so the result does not depend on the
/// signs of the joints. When one leg has zero length its circle collapses to a
/// point and the solutions are found directly (at most two).
pub fn solve_fk(geom: &RobotGeometry, joints: &JointVector) -> Result<FkSolutionSet> {
    let scale = geom.characteristic_scale();
    if let Some(leg) = (0..3).find(|&i| joints.rho[i].abs() <= ZERO_LEG_TOL * scale) {
        return solve_with_zero_leg(geom, joints, leg);
    }

    let fkp = build_fk_polynomial(geom, joints)?;
    if fkp.degenerate {
        return Err(Error::DegenerateElimination);
    }
    let rho_sq = joints.squared();
    let tol = FK_RESIDUAL_TOL * scale * scale;
    let mut set = FkSolutionSet::default();

    for root in fkp.poly.real_roots(ROOT_CLUSTER_RADIUS) {
        let phi = 2.0 * root.value.atan();
        let Some(p) = lift_position(geom, &rho_sq, fkp.pivot, phi) else {
            warn!("root t = {} falls on a singular linear system; dropped", root.value);
            continue;
        };
        let (pose, residual) = refine_newton(geom, &rho_sq, Pose::new(p.x, p.y, phi));
        if residual > tol {
            warn!("Newton refinement stalled at residual {residual:e} for t = {}; dropped", root.value);
            continue;
        }
        set.insert(FkSolution { pose, residual, multiplicity: root.multiplicity }, scale, true);
    }

    // t = tan(phi/2) cannot represent phi = pi; probe it directly
    if let Some(p) = lift_position(geom, &rho_sq, fkp.pivot, PI) {
        let start = Pose::new(p.x, p.y, PI);
        let r0 = max_abs(&constraint_residuals(geom, &rho_sq, &start));
        let probe = if fkp.check_half_turn { 1e-3 } else { 1e-6 };
        if r0 <= probe * scale * scale {
            let (pose, residual) = refine_newton(geom, &rho_sq, start);
            if residual <= tol {
                set.insert(FkSolution { pose, residual, multiplicity: 1 }, scale, false);
            }
        }
    }
    Ok(set.finish())
}

/// Forward kinematics with leg `zero` collapsed: B_zero = a_zero pins C to the
/// circle `a - R(phi) b`, and each other leg cuts it in at most two orientations.
fn solve_with_zero_leg(geom: &RobotGeometry, joints: &JointVector, zero: usize) -> Result<FkSolutionSet> {
    let scale = geom.characteristic_scale();
    let rho_sq = joints.squared();
    let tol = FK_RESIDUAL_TOL * scale * scale;
    let others: Vec<usize> = (0..3).filter(|&i| i != zero).collect();

    for &leg in &others {
        let alpha = geom.base()[leg] - geom.base()[zero];
        let beta = geom.platform()[leg] - geom.platform()[zero];
        // alpha . R beta = A cos + B sin
        let a = alpha.dot(&beta);
        let b = -cross(&alpha, &beta);
        let r = a.hypot(b);
        if r <= 1e-12 * scale * scale {
            continue;
        }
        let k = 0.5 * (alpha.norm_squared() + beta.norm_squared() - rho_sq[leg]);
        let ratio = k / r;
        if ratio.abs() > 1.0 + 1e-9 {
            return Ok(FkSolutionSet::default());
        }
        let base_angle = b.atan2(a);
        let spread = ratio.clamp(-1.0, 1.0).acos();
        let candidates: Vec<(f64, u32)> = if spread <= 1e-7 {
            vec![(base_angle, 2)]
        } else if PI - spread <= 1e-7 {
            vec![(base_angle + PI, 2)]
        } else {
            vec![(base_angle + spread, 1), (base_angle - spread, 1)]
        };

        let mut set = FkSolutionSet::default();
        for (phi, multiplicity) in candidates {
            let c = geom.serial_point(zero, phi);
            let pose = Pose::new(c.x, c.y, phi);
            let residual = max_abs(&constraint_residuals(geom, &rho_sq, &pose));
            if residual <= tol {
                set.insert(FkSolution { pose, residual, multiplicity }, scale, false);
            }
        }
        return Ok(set.finish());
    }
    Err(Error::DegenerateElimination)
}

/// Forward solutions with their root multiplicities. Multiplicity 2 marks a
/// tangency (the joint-space singularity boundary), 3 a triple coincidence.
pub fn fk_root_multiplicity(geom: &RobotGeometry, joints: &JointVector) -> Result<Vec<(Pose, u32)>> {
    Ok(solve_fk(geom, joints)?.solutions.into_iter().map(|s| (s.pose, s.multiplicity)).collect())
}
