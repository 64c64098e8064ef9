#![allow(dead_code)]

use lspline_core::{Complex64, FrequencyVector, KnotVector, StepBound};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

pub fn min_separation(v: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.min((v[i] - v[j]).norm());
        }
    }
    best
}

pub fn real_vector<R: Rng>(rng: &mut R, bound: f64) -> FrequencyVector {
    let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-bound..bound)).collect();
    FrequencyVector::from_reals(&v).unwrap()
}

/// `(a ± ib, c ± id)`: conjugation invariant pair by pair.
pub fn conjugate_pairs<R: Rng>(rng: &mut R, bound: f64) -> FrequencyVector {
    let (a, b) = (rng.gen_range(-bound..bound), rng.gen_range(0.1..bound));
    let (x, y) = (rng.gen_range(-bound..bound), rng.gen_range(0.1..bound));
    FrequencyVector::new(vec![c(a, b), c(a, -b), c(x, y), c(x, -y)]).unwrap()
}

pub fn complex_vector<R: Rng>(rng: &mut R, bound: f64) -> FrequencyVector {
    let v = (0..4).map(|_| c(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound))).collect();
    FrequencyVector::new(v).unwrap()
}

/// Redraw until all frequencies are at least `sep` apart.
pub fn separated<R: Rng>(
    rng: &mut R,
    sep: f64,
    mut draw: impl FnMut(&mut R) -> FrequencyVector,
) -> FrequencyVector {
    loop {
        let lam = draw(rng);
        if min_separation(lam.as_slice()) >= sep {
            return lam;
        }
    }
}

/// `n` knots from 0 with steps uniform in `[lo, hi]`, capped below the step bound.
pub fn random_knots<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64, delta: StepBound) -> KnotVector {
    let cap = delta.finite().map_or(f64::INFINITY, |d| 0.95 * d);
    let hi = hi.min(cap);
    let lo = lo.min(0.5 * hi);
    let steps: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(lo..=hi)).collect();
    KnotVector::from_steps(rng.gen_range(-2.0..2.0), &steps).unwrap()
}

pub fn random_values<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Textbook natural cubic spline (second-derivative form with a forward
/// sweep), applied to real data.
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    y2: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut y2 = vec![0.0; n];
        let mut u = vec![0.0; n];
        for i in 1..n - 1 {
            let sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
            let p = sig * y2[i - 1] + 2.0;
            y2[i] = (sig - 1.0) / p;
            let d = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
            u[i] = (6.0 * d / (x[i + 1] - x[i - 1]) - sig * u[i - 1]) / p;
        }
        y2[n - 1] = 0.0;
        for k in (0..n - 1).rev() {
            y2[k] = y2[k] * y2[k + 1] + u[k];
        }
        CubicSpline { x: x.to_vec(), y: y.to_vec(), y2 }
    }

    pub fn second_derivatives(&self) -> &[f64] {
        &self.y2
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let (mut lo, mut hi) = (0, n - 1);
        while hi - lo > 1 {
            let k = (hi + lo) / 2;
            if self.x[k] > t {
                hi = k;
            } else {
                lo = k;
            }
        }
        let h = self.x[hi] - self.x[lo];
        let a = (self.x[hi] - t) / h;
        let b = (t - self.x[lo]) / h;
        a * self.y[lo]
            + b * self.y[hi]
            + ((a * a * a - a) * self.y2[lo] + (b * b * b - b) * self.y2[hi]) * h * h / 6.0
    }
}

/// Relative sup-norm distance of two sample vectors.
pub fn rel_sup(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
