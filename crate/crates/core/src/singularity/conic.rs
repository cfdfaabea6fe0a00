//! Fixed-orientation singularity locus.
//!
//! At fixed orientation the unnormalized determinant is a quadratic in the
//! position of C (the cubic terms cancel because the position enters every
//! row through the same `(x, y, a_i × p)` pattern). The six coefficients are
//! recovered by least squares on a fixed schedule of sample points and checked
//! at fresh points.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::design::is_architecturally_singular;
use super::lines::unnormalized_determinant;
use crate::config::DEFAULT_SEED;
use crate::error::{Error, Result};
use crate::geometry::{Pose, RobotGeometry, Vec2};

const FIT_SAMPLES: usize = 24;
const CHECK_SAMPLES: usize = 100;
/// Sample points cover the centroid of the base ± this many L.
const SAMPLE_HALF_WIDTH: f64 = 1.5;
const FIT_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicClass {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

/// `Q(x, y) = q20 x² + q11 xy + q02 y² + q10 x + q01 y + q00`, in length⁴ units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityConic {
    /// `[q20, q11, q02, q10, q01, q00]`.
    pub coefficients: [f64; 6],
    pub phi: f64,
    /// Positions of C at which each leg has coinciding joints.
    pub serial_points: [Vec2; 3],
    pub conic_class: ConicClass,
    /// Characteristic length of the robot the conic belongs to.
    pub scale: f64,
}

impl SingularityConic {
    pub fn eval(&self, p: &Vec2) -> f64 {
        let [a, b, c, d, e, f] = self.coefficients;
        a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + f
    }

    pub fn gradient(&self, p: &Vec2) -> Vec2 {
        let [a, b, c, d, e, _] = self.coefficients;
        Vec2::new(2.0 * a * p.x + b * p.y + d, b * p.x + 2.0 * c * p.y + e)
    }

    /// Magnitude of the coefficients in length⁴ units (`q2· L²`, `q1· L³`... scaled to match `q00`).
    pub fn coefficient_scale(&self) -> f64 {
        let [a, b, c, d, e, f] = self.coefficients;
        let l = self.scale;
        (a.abs().max(b.abs()).max(c.abs()) * l * l).max(d.abs().max(e.abs()) * l).max(f.abs())
    }
}

/// Sampling frame: points are `center + L (u, v)`, fits are done in `(u, v)`.
struct Frame {
    center: Vec2,
    l: f64,
}

impl Frame {
    fn new(geom: &RobotGeometry) -> Self {
        let b = geom.base();
        Self { center: (b[0] + b[1] + b[2]) / 3.0, l: geom.characteristic_scale() }
    }

    fn world(&self, u: f64, v: f64) -> Vec2 {
        self.center + self.l * Vec2::new(u, v)
    }

    fn det(&self, geom: &RobotGeometry, phi: f64, u: f64, v: f64) -> f64 {
        let p = self.world(u, v);
        unnormalized_determinant(geom, &Pose::new(p.x, p.y, phi)) / self.l.powi(4)
    }
}

/// Monomials of total degree ≤ `degree` in `(u, v)`, ordered by degree then by
/// descending power of u: `1, u, v, u², uv, v², u³, ...`.
fn monomials(u: f64, v: f64, degree: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for d in 0..=degree {
        for i in (0..=d).rev() {
            out.push(u.powi(i as i32) * v.powi((d - i) as i32));
        }
    }
    out
}

fn sample_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| {
            (
                rng.gen_range(-SAMPLE_HALF_WIDTH..SAMPLE_HALF_WIDTH),
                rng.gen_range(-SAMPLE_HALF_WIDTH..SAMPLE_HALF_WIDTH),
            )
        })
        .collect()
}

fn least_squares(points: &[(f64, f64)], values: &[f64], degree: usize) -> Vec<f64> {
    let cols = monomials(0.0, 0.0, degree).len();
    let a = DMatrix::from_fn(points.len(), cols, |r, c| monomials(points[r].0, points[r].1, degree)[c]);
    let b = DVector::from_column_slice(values);
    let svd = a.svd(true, true);
    svd.solve(&b, 1e-14).expect("SVD with both factors").iter().copied().collect()
}

fn classify(n: &[f64]) -> ConicClass {
    // normalized basis order: 1, u, v, u², uv, v²
    let (f, d, e, a, b, c) = (n[0], n[1], n[2], n[3], n[4], n[5]);
    let all = n.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let quad = a.abs().max(b.abs()).max(c.abs());
    if all == 0.0 || quad <= 1e-9 * all {
        return ConicClass::Degenerate;
    }
    let det3 = nalgebra::Matrix3::new(a, b / 2.0, d / 2.0, b / 2.0, c, e / 2.0, d / 2.0, e / 2.0, f).determinant();
    if det3.abs() <= 1e-9 * all.powi(3) {
        return ConicClass::Degenerate;
    }
    let disc = b * b - 4.0 * a * c;
    if disc.abs() <= 1e-9 * (b * b + 4.0 * (a * c).abs()) {
        ConicClass::Parabola
    } else if disc < 0.0 {
        ConicClass::Ellipse
    } else {
        ConicClass::Hyperbola
    }
}

pub fn singularity_conic(geom: &RobotGeometry, phi: f64) -> Result<SingularityConic> {
    singularity_conic_seeded(geom, phi, DEFAULT_SEED)
}

/// Fits the singularity conic at orientation `phi` using the sample schedule drawn from `seed`.
pub fn singularity_conic_seeded(geom: &RobotGeometry, phi: f64, seed: u64) -> Result<SingularityConic> {
    let arch = is_architecturally_singular(geom);
    if arch.singular {
        return Err(Error::ArchitecturalSingularity(arch.detail));
    }
    let frame = Frame::new(geom);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(&mut rng, FIT_SAMPLES);
    let vals: Vec<f64> = pts.iter().map(|&(u, v)| frame.det(geom, phi, u, v)).collect();
    let max_val = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_val <= 1e-12 {
        return Err(Error::ArchitecturalSingularity(format!(
            "every sampled position is singular at phi = {phi}"
        )));
    }
    let n = least_squares(&pts, &vals, 2);

    let check = sample_points(&mut rng, CHECK_SAMPLES);
    let mut worst = 0.0f64;
    let mut check_scale = max_val;
    for &(u, v) in &check {
        let exact = frame.det(geom, phi, u, v);
        let model: f64 = monomials(u, v, 2).iter().zip(&n).map(|(m, c)| m * c).sum();
        worst = worst.max((exact - model).abs());
        check_scale = check_scale.max(exact.abs());
    }
    if worst > FIT_RESIDUAL_TOL * check_scale {
        return Err(Error::ArchitecturalSingularity(format!(
            "quadratic model residual {worst:e} at phi = {phi}"
        )));
    }

    // back to world coordinates: u = (x - cx)/L, v = (y - cy)/L, value × L⁴
    let (l, cx, cy) = (frame.l, frame.center.x, frame.center.y);
    let (f, d, e, a, b, c) = (n[0], n[1], n[2], n[3], n[4], n[5]);
    let l4 = l.powi(4);
    let q20 = a / (l * l);
    let q11 = b / (l * l);
    let q02 = c / (l * l);
    let q10 = (-2.0 * a * cx - b * cy) / (l * l) + d / l;
    let q01 = (-2.0 * c * cy - b * cx) / (l * l) + e / l;
    let q00 = (a * cx * cx + b * cx * cy + c * cy * cy) / (l * l) - (d * cx + e * cy) / l + f;

    Ok(SingularityConic {
        coefficients: [q20 * l4, q11 * l4, q02 * l4, q10 * l4, q01 * l4, q00 * l4],
        phi,
        serial_points: [0, 1, 2].map(|i| geom.serial_point(i, phi)),
        conic_class: classify(&n),
        scale: l,
    })
}

/// Result of fitting the determinant with a full cubic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicFit {
    /// Largest |coefficient| among the degree-2 terms (normalized coordinates).
    pub quadratic_scale: f64,
    /// Largest |coefficient| among the degree-3 terms.
    pub cubic_max: f64,
}

/// Fits the determinant at orientation `phi` with all ten monomials up to
/// degree three in normalized coordinates. For a genuine conic the cubic part
/// vanishes to rounding level.
pub fn fit_cubic_model(geom: &RobotGeometry, phi: f64, seed: u64) -> CubicFit {
    let frame = Frame::new(geom);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_points(&mut rng, 3 * FIT_SAMPLES);
    let vals: Vec<f64> = pts.iter().map(|&(u, v)| frame.det(geom, phi, u, v)).collect();
    let c = least_squares(&pts, &vals, 3);
    let max_abs = |s: &[f64]| s.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    CubicFit { quadratic_scale: max_abs(&c[3..6]), cubic_max: max_abs(&c[6..10]) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures::reference;

    #[test]
    fn serial_points_at_zero_orientation_lie_on_conic() {
        let g = reference();
        let q = singularity_conic(&g, 0.0).unwrap();
        let expect = [Vec2::new(2.0, 1.0), Vec2::new(8.0, 1.0), Vec2::new(4.0, 6.0)];
        for (s, e) in q.serial_points.iter().zip(expect) {
            assert_eq!(*s, e);
            assert!(q.eval(s).abs() <= 1e-9 * q.coefficient_scale());
        }
    }

    #[test]
    fn conic_matches_determinant_at_random_points() {
        let g = reference();
        for k in 0..5 {
            let phi = 0.4 + 1.1 * k as f64;
            let q = singularity_conic(&g, phi).unwrap();
            for (x, y) in [(0.3, -4.0), (12.0, 7.5), (-6.0, 15.0)] {
                let p = Vec2::new(x, y);
                let d = unnormalized_determinant(&g, &Pose::new(x, y, phi));
                assert!((q.eval(&p) - d).abs() <= 1e-9 * q.coefficient_scale().max(d.abs()));
            }
        }
    }

    #[test]
    fn reference_conic_golden_coefficients() {
        // exact expansion of det [d_i, a_i × d_i] at phi = 0 for the reference robot:
        // 2xy + 4y² - 2x - 36y + 32 = 2 (y - 1)(x + 2y - 16), a line pair
        let g = reference();
        let q = singularity_conic(&g, 0.0).unwrap();
        let expect = [0.0, 2.0, 4.0, -2.0, -36.0, 32.0];
        for (c, e) in q.coefficients.iter().zip(expect) {
            assert!((c - e).abs() < 1e-9, "{:?}", q.coefficients);
        }
        assert_eq!(q.conic_class, ConicClass::Degenerate);
    }

    #[test]
    fn similar_triangles_are_rejected() {
        let g = reference();
        let b = g.base();
        let c = (b[0] + b[1] + b[2]) / 3.0;
        let plat = b.map(|a| 0.5 * (a - c));
        let sim = RobotGeometry::new(*b, plat).unwrap();
        assert!(matches!(singularity_conic(&sim, 0.3), Err(Error::ArchitecturalSingularity(_))));
    }

    #[test]
    fn cubic_terms_vanish() {
        let g = reference();
        let fit = fit_cubic_model(&g, 1.234, DEFAULT_SEED);
        assert!(fit.cubic_max <= 1e-10 * fit.quadratic_scale, "{fit:?}");
    }

    #[test]
    fn fit_is_deterministic_for_a_seed() {
        let g = reference();
        assert_eq!(singularity_conic_seeded(&g, 0.5, 7).unwrap(), singularity_conic_seeded(&g, 0.5, 7).unwrap());
    }
}
