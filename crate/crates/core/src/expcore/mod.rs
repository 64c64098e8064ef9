//! Exponential polynomials and the fundamental function of
//! `L = ∏ (d/dx − λⱼ)`.

mod exppoly;
mod frequency;
mod fundamental;
pub mod series;

pub use exppoly::{ExpPoly, Term, DROP_TOL};
pub use frequency::{
    Classification, FrequencyVector, StepBound, TaylorCoeffs, CLUSTER_TOL, MAX_FREQUENCIES,
};
pub use fundamental::{
    complete_homogeneous, phi_eval, phi_expand, phi_taylor_series, Fundamental, SERIES_SWITCH,
    SERIES_TERMS,
};

pub(crate) use fundamental::expand_slice;

use num_complex::Complex64;

use crate::error::Result;

pub fn ep_eval(p: &ExpPoly, x: f64) -> Complex64 {
    p.eval(x)
}

pub fn ep_derivative(p: &ExpPoly) -> ExpPoly {
    p.derivative()
}

pub fn ep_mul(p: &ExpPoly, q: &ExpPoly) -> ExpPoly {
    p.mul(q)
}

pub fn ep_shift_op(p: &ExpPoly, lambda: Complex64) -> ExpPoly {
    p.shift_op(lambda)
}

pub fn phi_taylor(lam: &FrequencyVector) -> Result<TaylorCoeffs> {
    lam.taylor()
}

pub fn max_step_delta(lam: &FrequencyVector) -> Result<StepBound> {
    lam.max_step_delta()
}

pub fn classify(lam: &FrequencyVector) -> Classification {
    lam.classify()
}
