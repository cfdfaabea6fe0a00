//! Marching-squares extraction of `Q = 0` inside an axis-aligned window.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::conic::SingularityConic;
use crate::error::{Error, Result};
use crate::geometry::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) || x1 <= x0 || y1 <= y0 {
            return Err(Error::Validation(format!("invalid window [{x0}, {x1}] x [{y0}, {y1}]")));
        }
        Ok(Self { x0, y0, x1, y1 })
    }
}

const EDGE_BISECTIONS: usize = 60;

/// Zero of `q` on the segment `p0 -> p1`, given values of opposite sign (or a zero) at the ends.
fn edge_zero(q: &SingularityConic, p0: Vec2, p1: Vec2, v0: f64, v1: f64) -> Vec2 {
    if v0 == 0.0 {
        return p0;
    }
    if v1 == 0.0 {
        return p1;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..EDGE_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let vm = q.eval(&(p0 + mid * (p1 - p0)));
        if vm == 0.0 {
            return p0 + mid * (p1 - p0);
        }
        if (vm > 0.0) == (v0 > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    p0 + 0.5 * (lo + hi) * (p1 - p0)
}

/// Contour of the conic as polylines, open chains first then closed loops
/// (a closed loop repeats its first point at the end). Vertices lie on the
/// grid edges of spacing `step`, so consecutive points are at most `√2·step` apart.
pub fn sample_conic_polyline(conic: &SingularityConic, window: &Window, step: f64) -> Result<Vec<Vec<Vec2>>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Validation(format!("step must be positive, got {step}")));
    }
    let nx = ((window.x1 - window.x0) / step).ceil().max(1.0) as usize;
    let ny = ((window.y1 - window.y0) / step).ceil().max(1.0) as usize;
    if (nx + 1).saturating_mul(ny + 1) > 50_000_000 {
        return Err(Error::Validation("window too large for the requested step".into()));
    }
    let node = |i: usize, j: usize| {
        Vec2::new(
            (window.x0 + i as f64 * step).min(window.x1),
            (window.y0 + j as f64 * step).min(window.y1),
        )
    };
    let vals: Vec<f64> = (0..=ny).flat_map(|j| (0..=nx).map(move |i| (i, j))).map(|(i, j)| conic.eval(&node(i, j))).collect();
    let val = |i: usize, j: usize| vals[j * (nx + 1) + i];
    let pos = |v: f64| v > 0.0;

    // edge ids: horizontal (i,j)-(i+1,j) even, vertical (i,j)-(i,j+1) odd
    let h_id = |i: usize, j: usize| (j * (nx + 1) + i) * 2;
    let v_id = |i: usize, j: usize| (j * (nx + 1) + i) * 2 + 1;
    let mut points: BTreeMap<usize, Vec2> = BTreeMap::new();
    let mut crossing = |id: usize, a: (usize, usize), b: (usize, usize)| -> Option<usize> {
        let (va, vb) = (val(a.0, a.1), val(b.0, b.1));
        if pos(va) == pos(vb) {
            return None;
        }
        points.entry(id).or_insert_with(|| edge_zero(conic, node(a.0, a.1), node(b.0, b.1), va, vb));
        Some(id)
    };

    let mut links: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..ny {
        for i in 0..nx {
            // edges in cyclic order: bottom, right, top, left
            let e = [
                crossing(h_id(i, j), (i, j), (i + 1, j)),
                crossing(v_id(i + 1, j), (i + 1, j), (i + 1, j + 1)),
                crossing(h_id(i, j + 1), (i, j + 1), (i + 1, j + 1)),
                crossing(v_id(i, j), (i, j), (i, j + 1)),
            ];
            let present: Vec<usize> = e.iter().flatten().copied().collect();
            let pairs: Vec<(usize, usize)> = match present.len() {
                2 => vec![(present[0], present[1])],
                4 => {
                    let e = e.map(|x| x.unwrap());
                    let center = conic.eval(&(0.5 * (node(i, j) + node(i + 1, j + 1))));
                    if pos(center) == pos(val(i, j)) {
                        vec![(e[0], e[1]), (e[2], e[3])]
                    } else {
                        vec![(e[3], e[0]), (e[1], e[2])]
                    }
                }
                _ => vec![],
            };
            for (a, b) in pairs {
                links.entry(a).or_default().push(b);
                links.entry(b).or_default().push(a);
            }
        }
    }

    let mut visited: BTreeMap<usize, bool> = links.keys().map(|&k| (k, false)).collect();
    let walk = |start: usize, visited: &mut BTreeMap<usize, bool>| -> Vec<usize> {
        let mut chain = vec![start];
        visited.insert(start, true);
        let mut cur = start;
        loop {
            let next = links[&cur].iter().copied().find(|n| !visited[n]);
            match next {
                Some(n) => {
                    visited.insert(n, true);
                    chain.push(n);
                    cur = n;
                }
                None => {
                    if chain.len() > 2 && links[&cur].contains(&start) {
                        chain.push(start);
                    }
                    return chain;
                }
            }
        }
    };

    let mut out = Vec::new();
    let ends: Vec<usize> = links.iter().filter(|(_, n)| n.len() == 1).map(|(&k, _)| k).collect();
    for s in ends {
        if !visited[&s] {
            out.push(walk(s, &mut visited));
        }
    }
    let rest: Vec<usize> = links.keys().copied().collect();
    for s in rest {
        if !visited[&s] {
            out.push(walk(s, &mut visited));
        }
    }
    Ok(out.into_iter().map(|c| c.iter().map(|id| points[id]).collect()).collect())
}
