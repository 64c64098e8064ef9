//! Natural L-spline interpolation for differential operators
//! `L = (D − λ₀)(D − λ₁)(D − λ₂)(D − λ₃)` with constant complex coefficients.
//!
//! The interpolant is found in `O(n)` operations: the values `L₁g(tⱼ)` at the
//! interior knots solve a tridiagonal system `Rγ = Qᵀg`, where the entries of
//! `R` and `Q` are built from the fundamental functions of the operator.
//!
//! * [`expcore`]: exponential polynomials and the fundamental function `Φ_Λ`.
//! * [`kernel`]: the scalar kernels `ρ`, `σ`, `τ` and dominance diagnostics.
//! * [`assembly`]: knot vectors, the matrices `R` and `Q`, per-interval bases.
//! * [`splinefit`]: the tridiagonal solver, the interpolant, and a dense oracle.

// `!(a > b)` is used deliberately so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod error;
pub mod expcore;
pub mod kernel;
pub mod splinefit;

pub use num_complex::Complex64;

pub use assembly::{BandedQ, BasisKind, KnotVector, TridiagonalR};
pub use error::{Error, Result};
pub use expcore::{Classification, ExpPoly, FrequencyVector, Fundamental, StepBound, TaylorCoeffs};
pub use kernel::{DominanceReport, KernelContext};
pub use splinefit::{NaturalLSpline, SolverPath};
