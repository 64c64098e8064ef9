//! Fixtures shared by the benchmarks.

use lspline_core::{FrequencyVector, KnotVector};
use num_complex::Complex64;

/// Named frequency vectors covering the real, oscillating and general complex cases.
pub fn presets() -> Vec<(&'static str, FrequencyVector)> {
    let c = Complex64::new;
    vec![
        ("polynomial", FrequencyVector::zeros(4).unwrap()),
        ("hyperbolic", FrequencyVector::from_reals(&[1.0, -1.0, -2.0, 2.0]).unwrap()),
        (
            "oscillating",
            FrequencyVector::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]).unwrap(),
        ),
        (
            "complex",
            FrequencyVector::new(vec![c(0.3, 0.7), c(-0.2, 0.1), c(0.5, -0.4), c(-0.6, 0.2)]).unwrap(),
        ),
    ]
}

/// `n` knots on `[0, (n−1)h]` with a deterministic, bounded perturbation of the steps.
pub fn knots(n: usize, h: f64) -> KnotVector {
    let steps: Vec<f64> = (0..n - 1).map(|j| h * (1.0 + 0.4 * (1.7 * j as f64).sin())).collect();
    KnotVector::from_steps(0.0, &steps).expect("steps are positive")
}

pub fn samples(knots: &KnotVector) -> Vec<Complex64> {
    knots
        .as_slice()
        .iter()
        .map(|&t| Complex64::new(t.sin() + 0.3 * (2.0 * t).cos(), 0.1 * t.cos()))
        .collect()
}
