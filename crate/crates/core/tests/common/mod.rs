#![allow(dead_code)]

use proptest::prelude::*;
use rpr_core::geometry::cross;
use rpr_core::{Pose, RobotGeometry, Vec2};

pub fn reference() -> RobotGeometry {
    RobotGeometry::from_arrays([[0.0, 0.0], [10.0, 0.0], [4.0, 8.0]], [[-2.0, -1.0], [2.0, -1.0], [0.0, 2.0]]).unwrap()
}

fn area(p: &[[f64; 2]; 3]) -> f64 {
    let v = p.map(|q| Vec2::new(q[0], q[1]));
    0.5 * cross(&(v[1] - v[0]), &(v[2] - v[0]))
}

fn triangle(r: f64) -> impl Strategy<Value = [[f64; 2]; 3]> {
    prop::array::uniform3(prop::array::uniform2(-r..r)).prop_filter("well-shaped triangle", move |p| {
        let v = p.map(|q| Vec2::new(q[0], q[1]));
        let longest = (0..3).map(|i| (v[(i + 1) % 3] - v[i]).norm()).fold(0.0, f64::max);
        area(p).abs() >= 0.1 * longest * longest && longest >= 0.2 * r
    })
}

/// Random non-degenerate designs with base triangles of size ~10 and platforms ~3.
pub fn design() -> impl Strategy<Value = RobotGeometry> {
    (triangle(10.0), triangle(3.0)).prop_filter_map("not similar", |(a, b)| {
        let g = RobotGeometry::from_arrays(a, b).ok()?;
        (!rpr_core::is_architecturally_singular(&g).singular).then_some(g)
    })
}

pub fn pose() -> impl Strategy<Value = Pose> {
    (-8.0..12.0, -8.0..12.0, -3.1..3.1).prop_map(|(x, y, phi)| Pose::new(x, y, phi))
}
