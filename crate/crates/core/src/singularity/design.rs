//! Design-level checks: similar base and platform triangles, and which serial
//! points can double as parallel singularities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{cross, RobotGeometry, Vec2};

const SIMILARITY_TOL: f64 = 1e-9;
const ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Similarity {
    Direct,
    Reflected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchitecturalCheck {
    pub singular: bool,
    pub similarity: Option<Similarity>,
    /// Base-to-platform side ratio when similar.
    pub ratio: Option<f64>,
    pub detail: String,
}

fn sides(p: &[Vec2; 3]) -> [f64; 3] {
    [(p[1] - p[0]).norm(), (p[2] - p[1]).norm(), (p[0] - p[2]).norm()]
}

fn signed_area(p: &[Vec2; 3]) -> f64 {
    0.5 * cross(&(p[1] - p[0]), &(p[2] - p[0]))
}

/// Base and platform triangles similar with leg `i` mapped to leg `i`.
pub fn is_architecturally_singular(geom: &RobotGeometry) -> ArchitecturalCheck {
    let sa = sides(geom.base());
    let sb = sides(geom.platform());
    let total_b: f64 = sb.iter().sum();
    let ratio = sa.iter().sum::<f64>() / total_b;
    let max_a = sa.iter().fold(0.0f64, |m, v| m.max(*v));
    let similar = sa.iter().zip(&sb).all(|(a, b)| (a - ratio * b).abs() <= SIMILARITY_TOL * max_a);
    if !similar {
        return ArchitecturalCheck {
            singular: false,
            similarity: None,
            ratio: None,
            detail: format!(
                "base sides {:.6}, {:.6}, {:.6} and platform sides {:.6}, {:.6}, {:.6} are not proportional",
                sa[0], sa[1], sa[2], sb[0], sb[1], sb[2]
            ),
        };
    }
    let area_a = signed_area(geom.base());
    let area_b = signed_area(geom.platform());
    let similarity = if area_a * area_b < 0.0 { Similarity::Reflected } else { Similarity::Direct };
    let kind = match similarity {
        Similarity::Direct => "direct",
        Similarity::Reflected => "reflected",
    };
    ArchitecturalCheck {
        singular: true,
        similarity: Some(similarity),
        ratio: Some(ratio),
        detail: format!("base and platform triangles are {kind}ly similar with ratio {ratio:.9}"),
    }
}

/// Signed angle at vertex `i` from the edge towards the next vertex to the edge
/// towards the one after, in `(-pi, pi]`.
fn signed_angle(p: &[Vec2; 3], i: usize) -> f64 {
    let u = p[(i + 1) % 3] - p[i];
    let v = p[(i + 2) % 3] - p[i];
    cross(&u, &v).atan2(u.dot(&v))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassageSafety {
    pub safe: [bool; 3],
    /// Interior angles of the base triangle at a1, a2, a3 (radians).
    pub base_angles: [f64; 3],
    /// Interior angles of the platform triangle at b1, b2, b3 (radians).
    pub platform_angles: [f64; 3],
}

/// Leg `i` is unsafe when some orientation turns both platform edges at `b_i`
/// onto the lines of the base edges at `a_i`: then at the serial point the other
/// two legs meet at `a_i`. That happens iff the signed angles agree modulo pi,
/// i.e. equal interior angles for like-oriented triangles and supplementary
/// ones for oppositely oriented triangles.
pub fn passage_safety(geom: &RobotGeometry) -> PassageSafety {
    let (a, b) = (geom.base(), geom.platform());
    let safe = [0, 1, 2].map(|i| {
        let d = (signed_angle(a, i) - signed_angle(b, i)).rem_euclid(PI);
        d.min(PI - d) > ANGLE_TOL
    });
    PassageSafety {
        safe,
        base_angles: [0, 1, 2].map(|i| signed_angle(a, i).abs()),
        platform_angles: [0, 1, 2].map(|i| signed_angle(b, i).abs()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fixtures::reference, Pose};
    use crate::singularity::classify::serial_clearance;

    fn half_scaled_base(g: &RobotGeometry) -> [Vec2; 3] {
        let b = g.base();
        let c = (b[0] + b[1] + b[2]) / 3.0;
        b.map(|a| 0.5 * (a - c))
    }

    #[test]
    fn reference_is_not_similar() {
        let r = is_architecturally_singular(&reference());
        assert!(!r.singular);
        assert_eq!(r.similarity, None);
    }

    #[test]
    fn scaled_copy_is_directly_similar() {
        let g = reference();
        let s = RobotGeometry::new(*g.base(), half_scaled_base(&g)).unwrap();
        let r = is_architecturally_singular(&s);
        assert!(r.singular);
        assert_eq!(r.similarity, Some(Similarity::Direct));
        assert!((r.ratio.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reflected_copy_is_similar() {
        let g = reference();
        let p = half_scaled_base(&g).map(|v| Vec2::new(-v.x, v.y));
        let r = is_architecturally_singular(&RobotGeometry::new(*g.base(), p).unwrap());
        assert!(r.singular);
        assert_eq!(r.similarity, Some(Similarity::Reflected));
    }

    #[test]
    fn relabelled_similar_triangle_is_not_flagged() {
        // same shape, but leg indexing does not follow the correspondence
        let g = reference();
        let p = half_scaled_base(&g);
        let r = is_architecturally_singular(&RobotGeometry::new(*g.base(), [p[1], p[2], p[0]]).unwrap());
        assert!(!r.singular);
    }

    #[test]
    fn reference_legs_are_all_safe() {
        let s = passage_safety(&reference());
        assert_eq!(s.safe, [true; 3]);
        let sum: f64 = s.base_angles.iter().sum();
        assert!((sum - PI).abs() < 1e-12);
    }

    #[test]
    fn equilateral_pair_is_unsafe_everywhere() {
        let h = 3f64.sqrt() / 2.0;
        let g = RobotGeometry::from_arrays(
            [[0.0, 0.0], [1.0, 0.0], [0.5, h]],
            [[0.0, 0.0], [0.3, 0.0], [0.15, 0.3 * h]],
        )
        .unwrap();
        assert_eq!(passage_safety(&g).safe, [false; 3]);
        assert!(is_architecturally_singular(&g).singular);
    }

    /// Smallest serial clearance of leg `leg` over a sweep of orientations.
    fn min_clearance(g: &RobotGeometry, leg: usize) -> f64 {
        (0..20000)
            .map(|k| {
                let phi = -PI + 2.0 * PI * k as f64 / 20000.0;
                let s = g.serial_point(leg, phi);
                serial_clearance(g, &Pose::new(s.x, s.y, phi), &[leg])
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn matched_angle_reaches_zero_clearance() {
        // platform angle at b1 equals the base angle at a1 (pi/2), other angles differ
        let base = RobotGeometry::from_arrays([[0.0, 0.0], [10.0, 0.0], [0.0, 8.0]], [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
            .unwrap();
        let safety = passage_safety(&base);
        assert_eq!(safety.safe, [false, true, true]);
        assert!(min_clearance(&base, 0) < 1e-2);
        assert!(min_clearance(&base, 1) > 0.1);
    }

    #[test]
    fn supplementary_angle_with_opposite_orientation_is_unsafe() {
        // base angle at a1 is pi/3; the platform is clockwise with angle 2pi/3 at b1
        let h = 3f64.sqrt() / 2.0;
        let a = [[0.0, 0.0], [10.0, 0.0], [5.0, 10.0 * h]];
        let p = [[0.0, 0.0], [2.0, 0.0], [-1.0, -2.0 * h]];
        let g = RobotGeometry::from_arrays(a, p).unwrap();
        assert!(!passage_safety(&g).safe[0]);
        assert!(min_clearance(&g, 0) < 1e-2);
    }
}
