use std::f64::consts::TAU;

use log::warn;

use super::TRIM_TOL;
use crate::error::{Error, Result};
use crate::geometry::{cross, rotate, JointVector, RobotGeometry, Vec2};
use crate::poly::Poly;

/// Forward-kinematics polynomial in `t = tan(phi / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateFkPolynomial {
    pub poly: Poly,
    /// Leg whose constraint receives the eliminated position (0-based).
    pub pivot: usize,
    /// Legs whose differences with the pivot give the linear system (0-based).
    pub pair: [usize; 2],
    /// Leading terms were trimmed, so `phi = pi` (t at infinity) may be a root.
    pub check_half_turn: bool,
    /// The polynomial vanished identically: the joints admit a continuum of poses.
    pub degenerate: bool,
}

/// Orientation samples used to score the pivot choice.
const PIVOT_SAMPLES: usize = 64;

fn other_legs(pivot: usize) -> [usize; 2] {
    match pivot {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// `w_i(phi) = R(phi) b_i - a_i`.
fn w(geom: &RobotGeometry, i: usize, phi: f64) -> Vec2 {
    rotate(phi, &geom.platform()[i]) - geom.base()[i]
}

/// Determinant of the affine system `2 (w_k - w_j) . p = ...` at one orientation.
pub(super) fn linear_det(geom: &RobotGeometry, pivot: usize, phi: f64) -> f64 {
    let [k, l] = other_legs(pivot);
    let wj = w(geom, pivot, phi);
    let m1 = 2.0 * (w(geom, k, phi) - wj);
    let m2 = 2.0 * (w(geom, l, phi) - wj);
    cross(&m1, &m2)
}

/// Position of C solving `F_k - F_j = 0` and `F_l - F_j = 0` at orientation `phi`.
pub(super) fn lift_position(geom: &RobotGeometry, rho_sq: &[f64; 3], pivot: usize, phi: f64) -> Option<Vec2> {
    let [k, l] = other_legs(pivot);
    let e = |i: usize| {
        let wi = w(geom, i, phi);
        (wi, wi.norm_squared() - rho_sq[i])
    };
    let (wj, ej) = e(pivot);
    let (wk, ek) = e(k);
    let (wl, el) = e(l);
    let m1 = 2.0 * (wk - wj);
    let m2 = 2.0 * (wl - wj);
    let r1 = -(ek - ej);
    let r2 = -(el - ej);
    let det = cross(&m1, &m2);
    let l2 = geom.characteristic_scale().powi(2);
    if det.abs() <= 1e-12 * l2 {
        return None;
    }
    Some(Vec2::new((r1 * m2.y - m1.y * r2) / det, (m1.x * r2 - r1 * m2.x) / det))
}

/// Picks the pivot leg maximizing the smallest `|det|` over a coarse orientation grid.
fn choose_pivot(geom: &RobotGeometry) -> Result<usize> {
    let l2 = geom.characteristic_scale().powi(2);
    let mut best: Option<(usize, f64)> = None;
    let mut any_conditioned = false;
    for pivot in 0..3 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for s in 0..PIVOT_SAMPLES {
            let d = linear_det(geom, pivot, TAU * s as f64 / PIVOT_SAMPLES as f64).abs();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if hi > 1e-9 * l2 {
            any_conditioned = true;
        }
        // the determinant is the same for every pivot up to rounding, so only a
        // clear improvement moves the choice away from the lowest index
        match best {
            Some((_, score)) if lo <= score * (1.0 + 1e-9) => {}
            _ => best = Some((pivot, lo)),
        }
    }
    if !any_conditioned {
        return Err(Error::DegenerateElimination);
    }
    Ok(best.map(|b| b.0).unwrap_or(0))
}

/// Builds the forward-kinematics polynomial of degree at most six in `t = tan(phi/2)`.
///
/// With `c~ = 1 - t²`, `s~ = 2t`, `h = 1 + t²` every trigonometric quantity
/// becomes a polynomial after scaling by `h`. Cramer's rule on the 2×2 system
/// gives `p = N / det`; substituting into the pivot constraint and clearing
/// denominators yields a degree-10 polynomial carrying the factor `h²`, which
/// is divided out exactly.
pub fn build_fk_polynomial(geom: &RobotGeometry, joints: &JointVector) -> Result<UnivariateFkPolynomial> {
    let pivot = choose_pivot(geom)?;
    let [k, l] = other_legs(pivot);
    let rho_sq = joints.squared();

    let h = Poly::new(vec![1.0, 0.0, 1.0]);
    let ct = Poly::new(vec![1.0, 0.0, -1.0]);
    let st = Poly::new(vec![0.0, 2.0, 0.0]);

    let scaled_w = |i: usize| -> [Poly; 2] {
        let a = geom.base()[i];
        let b = geom.platform()[i];
        [
            &(&ct.scale(b.x) - &st.scale(b.y)) - &h.scale(a.x),
            &(&st.scale(b.x) + &ct.scale(b.y)) - &h.scale(a.y),
        ]
    };
    let scaled_e = |i: usize| -> Poly {
        let a = geom.base()[i];
        let b = geom.platform()[i];
        let k0 = b.norm_squared() + a.norm_squared() - rho_sq[i];
        &h.scale(k0) - &(&ct.scale(2.0 * a.dot(&b)) - &st.scale(2.0 * cross(&a, &b)))
    };

    let wj = scaled_w(pivot);
    let wk = scaled_w(k);
    let wl = scaled_w(l);
    let ej = scaled_e(pivot);
    let m11 = (&wk[0] - &wj[0]).scale(2.0);
    let m12 = (&wk[1] - &wj[1]).scale(2.0);
    let m21 = (&wl[0] - &wj[0]).scale(2.0);
    let m22 = (&wl[1] - &wj[1]).scale(2.0);
    let r1 = (&scaled_e(k) - &ej).scale(-1.0);
    let r2 = (&scaled_e(l) - &ej).scale(-1.0);

    let det = &(&m11 * &m22) - &(&m12 * &m21);
    let nx = &(&r1 * &m22) - &(&m12 * &r2);
    let ny = &(&m11 * &r2) - &(&r1 * &m21);
    let (d1, _) = det.div_rem(&h);

    let n_sq = &(&nx * &nx) + &(&ny * &ny);
    let n_dot_w = &(&nx * &wj[0]) + &(&ny * &wj[1]);
    let p8 = &(&n_sq + &(&d1 * &n_dot_w).scale(2.0)) + &(&h * &(&ej * &(&d1 * &d1)));
    let (mut p6, rem) = p8.div_rem(&h);
    if rem.max_abs_coeff() > 1e-8 * p8.max_abs_coeff() {
        warn!("sextic reduction left a remainder of {:e}", rem.max_abs_coeff());
    }

    let scale6 = geom.characteristic_scale().powi(6);
    let degenerate = p6.max_abs_coeff() <= 1e-12 * scale6;
    let nominal = p6.degree();
    let dropped = if degenerate { 0 } else { p6.trim_relative(TRIM_TOL) };
    Ok(UnivariateFkPolynomial {
        check_half_turn: dropped > 0 || nominal < 6,
        poly: p6,
        pivot,
        pair: [k, l],
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fixtures::reference, Pose};
    use crate::kinematics::inverse_kinematics;

    #[test]
    fn reference_polynomial_is_a_sextic_with_root_at_zero() {
        let g = reference();
        let j = inverse_kinematics(&g, &Pose::new(0.0, 0.0, 0.0), None);
        let p = build_fk_polynomial(&g, &j).unwrap();
        assert_eq!(p.poly.degree(), 6);
        assert!(!p.degenerate);
        assert!(p.poly.eval(0.0).abs() <= 1e-12 * p.poly.max_abs_coeff());
    }

    #[test]
    fn polynomial_vanishes_at_every_known_pose() {
        let g = reference();
        let truth = Pose::new(1.3, -0.4, 0.9);
        let j = inverse_kinematics(&g, &truth, None);
        let p = build_fk_polynomial(&g, &j).unwrap();
        let t = (truth.phi / 2.0).tan();
        assert!(p.poly.eval(t).abs() <= 1e-10 * p.poly.eval_magnitude(t));
    }

    #[test]
    fn linear_det_is_pivot_invariant() {
        let g = reference();
        for s in 0..16 {
            let phi = s as f64 * 0.37;
            let d0 = linear_det(&g, 0, phi);
            // twice the signed area of the triangle R b_i - a_i, up to vertex order
            assert!((linear_det(&g, 1, phi).abs() - d0.abs()).abs() < 1e-9);
            assert!((linear_det(&g, 2, phi).abs() - d0.abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn identical_joint_triangles_are_degenerate() {
        // all platform and base points on one line with matching spacing:
        // R b_i - a_i stays collinear at every orientation
        let g = RobotGeometry::from_arrays(
            [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
            [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
        )
        .unwrap();
        let r = build_fk_polynomial(&g, &JointVector::new([1.0, 1.0, 1.0]));
        assert_eq!(r, Err(Error::DegenerateElimination));
    }
}
