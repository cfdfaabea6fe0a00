//! Dense univariate polynomials over `f64` and real-root isolation.
//!
//! Real roots are isolated by recursion on the derivative: between consecutive
//! real critical points the polynomial is monotone, so each sign change there
//! brackets exactly one root, which is then bisected to full precision. A
//! critical point where the value vanishes to rounding level is reported as a
//! root of even multiplicity.

use std::ops::{Add, Mul, Sub};

/// Coefficients in ascending order: `c[0] + c[1] t + ...`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

/// A real root with the multiplicity the isolator could resolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: u32,
}

/// Relative size of `|p(c)|` against the evaluation magnitude below which a
/// critical point is taken to touch zero.
const TOUCH_TOLERANCE: f64 = 1e-13;

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.strip_zeros();
        p
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn strip_zeros(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0.0 {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(0.0);
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// `sum |c_i| |t|^i`, the scale of rounding error in [`Poly::eval`].
    pub fn eval_magnitude(&self, t: f64) -> f64 {
        let at = t.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * at + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::constant(0.0);
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect())
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Drops leading coefficients whose magnitude is at most `rel` times the
    /// largest coefficient magnitude. Returns the number of dropped terms.
    pub fn trim_relative(&mut self, rel: f64) -> usize {
        let max = self.max_abs_coeff();
        let mut dropped = 0;
        while self.coeffs.len() > 1 && self.leading().abs() <= rel * max {
            self.coeffs.pop();
            dropped += 1;
        }
        dropped
    }

    /// Polynomial long division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree();
        if self.degree() < dd {
            return (Poly::constant(0.0), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let lead = divisor.leading();
        let mut quot = vec![0.0; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
        }
        rem.truncate(dd.max(1));
        (Poly::new(quot), Poly::new(rem))
    }

    /// Cauchy bound: every root satisfies `|t| <= 1 + max |c_i / c_n|`.
    pub fn root_bound(&self) -> f64 {
        let lead = self.leading().abs();
        let m = self.coeffs[..self.degree()].iter().fold(0.0, |m: f64, c| m.max(c.abs()));
        1.0 + m / lead
    }

    /// All real roots, ascending, with multiplicities. Roots closer than
    /// `cluster_radius` are merged and their multiplicities summed.
    pub fn real_roots(&self, cluster_radius: f64) -> Vec<RealRoot> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let bound = self.root_bound();
        let raw = roots_in(self, -bound, bound);
        cluster(raw, cluster_radius)
    }
}

fn cluster(mut raw: Vec<RealRoot>, radius: f64) -> Vec<RealRoot> {
    raw.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut out: Vec<(f64, u32, Vec<f64>)> = Vec::new();
    for r in raw {
        match out.last_mut() {
            Some((last, m, members)) if (r.value - *last).abs() <= radius => {
                *m += r.multiplicity;
                members.push(r.value);
                *last = r.value;
            }
            _ => out.push((r.value, r.multiplicity, vec![r.value])),
        }
    }
    out.into_iter()
        .map(|(_, m, members)| RealRoot {
            value: members.iter().sum::<f64>() / members.len() as f64,
            multiplicity: m,
        })
        .collect()
}

/// Real roots of `p` in `[lo, hi]`.
fn roots_in(p: &Poly, lo: f64, hi: f64) -> Vec<RealRoot> {
    match p.degree() {
        0 => return Vec::new(),
        1 => {
            let r = -p.coeffs[0] / p.coeffs[1];
            return if (lo..=hi).contains(&r) {
                vec![RealRoot { value: r, multiplicity: 1 }]
            } else {
                Vec::new()
            };
        }
        _ => {}
    }
    let critical = roots_in(&p.derivative(), lo, hi);

    // knots: (position, value, multiplicity of the derivative root or 0 for the interval ends)
    let mut knots: Vec<(f64, f64, u32)> = Vec::with_capacity(critical.len() + 2);
    knots.push((lo, p.eval(lo), 0));
    for c in &critical {
        if c.value <= lo || c.value >= hi {
            continue;
        }
        let mut v = p.eval(c.value);
        if v.abs() <= TOUCH_TOLERANCE * p.eval_magnitude(c.value) {
            v = 0.0;
        }
        knots.push((c.value, v, c.multiplicity));
    }
    knots.push((hi, p.eval(hi), 0));

    let mut roots = Vec::new();
    for (i, &(x, v, m)) in knots.iter().enumerate() {
        if v == 0.0 {
            roots.push(RealRoot { value: x, multiplicity: m + 1 });
        }
        if let Some(&(x2, v2, _)) = knots.get(i + 1) {
            if v != 0.0 && v2 != 0.0 && (v < 0.0) != (v2 < 0.0) {
                roots.push(RealRoot { value: bisect(p, x, x2, v), multiplicity: 1 });
            }
        }
    }
    roots
}

fn bisect(p: &Poly, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let neg_at_a = fa < 0.0;
    for _ in 0..2000 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        Poly::new((0..n).map(|i| get(self, i) + get(rhs, i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}
