//! Robot description and rigid-body evaluation.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec2 = nalgebra::Vector2<f64>;

/// Scalar cross product `a.x * b.y - a.y * b.x`.
#[inline]
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

#[inline]
pub fn rotate(phi: f64, v: &Vec2) -> Vec2 {
    let (s, c) = phi.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(TAU);
    if w > PI {
        w -= TAU;
    }
    w
}

/// A general 3-RPR robot: leg `i` joins base joint `base[i]` to platform joint
/// `platform[i]`, the latter expressed in the platform frame whose origin is the
/// reference point C.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotGeometry {
    base: [Vec2; 3],
    platform: [Vec2; 3],
    name: Option<String>,
    scale: f64,
}

fn max_pairwise(points: &[Vec2; 3]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            m = m.max((points[i] - points[j]).norm());
        }
    }
    m
}

impl RobotGeometry {
    pub fn new(base: [Vec2; 3], platform: [Vec2; 3]) -> Result<Self> {
        if base.iter().chain(platform.iter()).any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite coordinate".into()));
        }
        let scale = max_pairwise(&base);
        if scale <= 0.0 {
            return Err(Error::InvalidGeometry("base points are all coincident".into()));
        }
        if max_pairwise(&platform) <= 0.0 {
            return Err(Error::InvalidGeometry("platform points are all coincident".into()));
        }
        Ok(Self { base, platform, name: None, scale })
    }

    pub fn from_arrays(base: [[f64; 2]; 3], platform: [[f64; 2]; 3]) -> Result<Self> {
        let v = |p: [f64; 2]| Vec2::new(p[0], p[1]);
        Self::new(base.map(v), platform.map(v))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn base(&self) -> &[Vec2; 3] {
        &self.base
    }

    pub fn platform(&self) -> &[Vec2; 3] {
        &self.platform
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Characteristic length L: the largest distance between two base joints.
    /// Every length tolerance in the crate is expressed relative to it.
    pub fn characteristic_scale(&self) -> f64 {
        self.scale
    }

    /// World coordinates of the platform joints B1, B2, B3.
    pub fn platform_points(&self, pose: &Pose) -> [Vec2; 3] {
        let c = pose.position();
        let (s, co) = pose.phi.sin_cos();
        self.platform.map(|b| c + Vec2::new(co * b.x - s * b.y, s * b.x + co * b.y))
    }

    /// Leg vectors `B_i - a_i`.
    pub fn leg_vectors(&self, pose: &Pose) -> [Vec2; 3] {
        let b = self.platform_points(pose);
        [b[0] - self.base[0], b[1] - self.base[1], b[2] - self.base[2]]
    }

    /// Position of C at which leg `leg` (0-based) has coinciding joints for orientation `phi`.
    pub fn serial_point(&self, leg: usize, phi: f64) -> Vec2 {
        self.base[leg] - rotate(phi, &self.platform[leg])
    }

    /// The same robot with legs relabelled: new leg `k` is old leg `perm[k]`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self {
            base: perm.map(|i| self.base[i]),
            platform: perm.map(|i| self.platform[i]),
            name: self.name.clone(),
            scale: self.scale,
        }
    }
}

/// Platform pose: position of C and orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
}

impl Pose {
    pub const fn new(x: f64, y: f64, phi: f64) -> Self {
        Self { x, y, phi }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// `max(|dp|, scale * |wrapped dphi|)`.
    pub fn distance(&self, other: &Pose, scale: f64) -> f64 {
        let dp = (self.position() - other.position()).norm();
        dp.max(scale * wrap_angle(self.phi - other.phi).abs())
    }

    /// Same pose with `phi` wrapped to `(-pi, pi]`.
    pub fn wrapped(&self) -> Pose {
        Pose::new(self.x, self.y, wrap_angle(self.phi))
    }

    /// Left-composes a rigid motion (rotation `theta` about the origin, then translation).
    pub fn transformed(&self, theta: f64, translation: Vec2) -> Pose {
        let p = rotate(theta, &self.position()) + translation;
        Pose::new(p.x, p.y, self.phi + theta)
    }
}

/// Directed leg lengths. The sign is a working-mode label carried by continuity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointVector {
    pub rho: [f64; 3],
}

impl JointVector {
    pub const fn new(rho: [f64; 3]) -> Self {
        Self { rho }
    }

    pub fn squared(&self) -> [f64; 3] {
        self.rho.map(|r| r * r)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn reference() -> RobotGeometry {
        RobotGeometry::from_arrays(
            [[0.0, 0.0], [10.0, 0.0], [4.0, 8.0]],
            [[-2.0, -1.0], [2.0, -1.0], [0.0, 2.0]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::reference;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_pose_returns_platform_frame_points() {
        let g = reference();
        let b = g.platform_points(&Pose::new(0.0, 0.0, 0.0));
        assert_eq!(b[0], Vec2::new(-2.0, -1.0));
        assert_eq!(b[1], Vec2::new(2.0, -1.0));
        assert_eq!(b[2], Vec2::new(0.0, 2.0));
    }

    #[test]
    fn translation_moves_first_joint_onto_base() {
        let g = reference();
        let b = g.platform_points(&Pose::new(2.0, 1.0, 0.0));
        assert_eq!(b[0], Vec2::new(0.0, 0.0));
    }

    #[test]
    fn half_turn_negates_platform_points() {
        let g = reference();
        let b = g.platform_points(&Pose::new(0.0, 0.0, PI));
        assert_abs_diff_eq!(b[0].x, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[0].y, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn scale_is_max_base_distance() {
        let g = reference();
        assert_eq!(g.characteristic_scale(), 10.0);
        let doubled = RobotGeometry::from_arrays(
            [[0.0, 0.0], [20.0, 0.0], [8.0, 16.0]],
            [[-2.0, -1.0], [2.0, -1.0], [0.0, 2.0]],
        )
        .unwrap();
        assert_eq!(doubled.characteristic_scale(), 20.0);
    }

    #[test]
    fn coincident_points_are_rejected() {
        let err = RobotGeometry::from_arrays([[1.0, 1.0]; 3], [[-2.0, -1.0], [2.0, -1.0], [0.0, 2.0]]);
        assert!(matches!(err, Err(Error::InvalidGeometry(_))));
        let err = RobotGeometry::from_arrays([[0.0, 0.0], [10.0, 0.0], [4.0, 8.0]], [[0.5, 0.5]; 3]);
        assert!(matches!(err, Err(Error::InvalidGeometry(_))));
        let err = RobotGeometry::from_arrays(
            [[0.0, f64::NAN], [10.0, 0.0], [4.0, 8.0]],
            [[-2.0, -1.0], [2.0, -1.0], [0.0, 2.0]],
        );
        assert!(matches!(err, Err(Error::InvalidGeometry(_))));
    }

    #[test]
    fn serial_points_at_zero_orientation() {
        let g = reference();
        assert_eq!(g.serial_point(0, 0.0), Vec2::new(2.0, 1.0));
        assert_eq!(g.serial_point(1, 0.0), Vec2::new(8.0, 1.0));
        assert_eq!(g.serial_point(2, 0.0), Vec2::new(4.0, 6.0));
    }

    #[test]
    fn wrap_angle_range() {
        assert_abs_diff_eq!(wrap_angle(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(-PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(TAU + 0.25), 0.25, epsilon = 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn platform_points_are_rigid_equivariant(
                x in -10.0..20.0f64, y in -10.0..20.0f64, phi in 0.0..TAU,
                theta in -PI..PI, tx in -5.0..5.0f64, ty in -5.0..5.0f64,
            ) {
                let g = reference();
                let pose = Pose::new(x, y, phi);
                let t = Vec2::new(tx, ty);
                let moved = g.platform_points(&pose.transformed(theta, t));
                let orig = g.platform_points(&pose);
                for i in 0..3 {
                    let expect = rotate(theta, &orig[i]) + t;
                    prop_assert!((moved[i] - expect).norm() <= 1e-12 * g.characteristic_scale());
                }
            }

            #[test]
            fn platform_points_are_two_pi_periodic(
                x in -10.0..20.0f64, y in -10.0..20.0f64, phi in 0.0..TAU,
            ) {
                let g = reference();
                let a = g.platform_points(&Pose::new(x, y, phi));
                let b = g.platform_points(&Pose::new(x, y, phi + TAU));
                for i in 0..3 {
                    prop_assert!((a[i] - b[i]).norm() <= 1e-12 * g.characteristic_scale());
                }
            }
        }
    }
}
