//! Natural L-spline interpolation in `O(n)`:
//!
//! 1. put `x = Qᵀg`;
//! 2. solve `Rγ = x` for the interior values `γⱼ = L₁g(tⱼ)`, with `γ₁ = γₙ = 0`;
//!
//! then on `[tⱼ, t_{j+1}]` the spline is `γⱼA¹ + γ_{j+1}B¹ + gⱼA² + g_{j+1}B²`.

mod oracle;
mod solve;

pub use oracle::{oracle_interpolate, ORACLE_MAX_KNOTS};
pub use solve::{pivoted_solve, solve_tridiagonal, thomas_solve, SolverPath, PIVOT_TOL};

use num_complex::Complex64;

use crate::assembly::{build_q, build_r, IntervalBasis, KnotVector};
use crate::error::{Error, Result};
use crate::expcore::{ExpPoly, FrequencyVector, Fundamental};
use crate::kernel::KernelContext;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
enum Pieces {
    /// Cached basis constants per interval.
    Cardinal { ctx: Box<KernelContext>, bases: Vec<IntervalBasis> },
    /// Coefficients in the chain `Φ_(λ₀)`, `Φ_(λ₀,λ₁)`, `Φ_(λ₀,λ₁,λ₂)`, `Φ_(λ₀..λ₃)`
    /// of the local variable `t − tⱼ`.
    Newton { chain: Box<[Fundamental; 4]>, coeffs: Vec<[Complex64; 4]> },
}

/// An interpolating natural L-spline. Immutable; evaluation is thread-safe.
#[derive(Debug, Clone)]
pub struct NaturalLSpline {
    lam: FrequencyVector,
    knots: KnotVector,
    g: Vec<Complex64>,
    gamma: Vec<Complex64>,
    path: SolverPath,
    pieces: Pieces,
}

fn check_values(knots: &KnotVector, values: &[Complex64], what: &str) -> Result<()> {
    if values.len() != knots.len() {
        return Err(Error::InvalidInput(format!(
            "{what} has {} entries for {} knots",
            values.len(),
            knots.len()
        )));
    }
    if let Some(i) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput(format!("{what}[{i}] is not finite")));
    }
    Ok(())
}

impl NaturalLSpline {
    /// Rebuild a spline from its knot data and `γ`, e.g. after serialization.
    pub fn from_parts(
        lam: &FrequencyVector,
        knots: &KnotVector,
        g: Vec<Complex64>,
        gamma: Vec<Complex64>,
    ) -> Result<Self> {
        let ctx = KernelContext::new(lam)?;
        Self::cardinal(ctx, knots.clone(), g, gamma, SolverPath::Thomas)
    }

    fn cardinal(
        ctx: KernelContext,
        knots: KnotVector,
        g: Vec<Complex64>,
        gamma: Vec<Complex64>,
        path: SolverPath,
    ) -> Result<Self> {
        check_values(&knots, &g, "g")?;
        check_values(&knots, &gamma, "gamma")?;
        if gamma[0] != ZERO || gamma[gamma.len() - 1] != ZERO {
            return Err(Error::InvalidInput("a natural spline has gamma = 0 at both ends".into()));
        }
        knots.check_steps(ctx.delta())?;
        let t = knots.as_slice();
        let bases = t
            .windows(2)
            .map(|w| IntervalBasis::new(&ctx, w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        Ok(NaturalLSpline {
            lam: ctx.lam().clone(),
            knots,
            g,
            gamma,
            path,
            pieces: Pieces::Cardinal { ctx: Box::new(ctx), bases },
        })
    }

    pub fn lam(&self) -> &FrequencyVector {
        &self.lam
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    /// Values at the knots.
    pub fn g(&self) -> &[Complex64] {
        &self.g
    }

    /// `L₁` of the spline at the knots; zero at both ends.
    pub fn gamma(&self) -> &[Complex64] {
        &self.gamma
    }

    pub fn solver_path(&self) -> SolverPath {
        self.path
    }

    pub fn eval(&self, t: f64) -> Result<Complex64> {
        let j = self.knots.locate(t)?;
        match &self.pieces {
            Pieces::Cardinal { ctx, bases } => {
                let v = bases[j].values(ctx, t)?;
                Ok(self.gamma[j] * v.a1 + self.gamma[j + 1] * v.b1 + self.g[j] * v.a2 + self.g[j + 1] * v.b2)
            }
            Pieces::Newton { chain, coeffs } => {
                let s = t - self.knots.as_slice()[j];
                Ok(chain.iter().zip(&coeffs[j]).map(|(b, c)| c * b.eval(s)).sum())
            }
        }
    }

    /// `L₁s(t)` with `L₁ = (D − λ₀)(D − λ₁)`.
    pub fn eval_l1(&self, t: f64) -> Result<Complex64> {
        let j = self.knots.locate(t)?;
        match &self.pieces {
            Pieces::Cardinal { ctx, bases } => {
                let v = bases[j].l1_values(ctx, t)?;
                Ok(self.gamma[j] * v.a1 + self.gamma[j + 1] * v.b1)
            }
            Pieces::Newton { chain, coeffs } => {
                let s = t - self.knots.as_slice()[j];
                Ok(oracle::l1_chain(&self.lam, chain, &coeffs[j], s))
            }
        }
    }

    /// The restriction to `[tⱼ, t_{j+1}]` as an exponential polynomial in `s = t − tⱼ`.
    pub fn local_piece(&self, j: usize) -> Result<ExpPoly> {
        if j + 1 >= self.knots.len() {
            return Err(Error::Domain(format!("interval index {j} out of range")));
        }
        match &self.pieces {
            Pieces::Cardinal { ctx, bases } => {
                let [a1, b1, a2, b2] = bases[j].local_pieces(ctx);
                Ok(a1
                    .scale(self.gamma[j])
                    .add(&b1.scale(self.gamma[j + 1]))
                    .add(&a2.scale(self.g[j]))
                    .add(&b2.scale(self.g[j + 1])))
            }
            Pieces::Newton { coeffs, .. } => {
                let l = self.lam.as_slice();
                Ok((0..4).fold(ExpPoly::zero(), |acc, k| {
                    acc.add(&crate::expcore::expand_slice(&l[..=k]).scale(coeffs[j][k]))
                }))
            }
        }
    }

    /// `‖Qᵀg − Rγ‖∞ / ‖Rγ‖∞` (absolute when `Rγ = 0`).
    pub fn identity_residual(&self) -> Result<f64> {
        let ctx = KernelContext::new(&self.lam)?;
        let r = build_r(&ctx, &self.knots)?;
        let q = build_q(&ctx, &self.knots)?;
        let interior = &self.gamma[1..self.gamma.len() - 1];
        let rg = r.mul_vec(interior);
        let qg = q.transpose_mul(&self.g);
        let diff = rg.iter().zip(&qg).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let scale = rg.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(if scale > 0.0 { diff / scale } else { diff })
    }
}

/// Fit the natural L-spline through `(tⱼ, values[j])`.
pub fn interpolate(lam: &FrequencyVector, knots: &KnotVector, values: &[Complex64]) -> Result<NaturalLSpline> {
    let ctx = KernelContext::new(lam)?;
    interpolate_with(ctx, knots, values)
}

/// As [`interpolate`], reusing a prepared kernel context.
pub fn interpolate_with(ctx: KernelContext, knots: &KnotVector, values: &[Complex64]) -> Result<NaturalLSpline> {
    check_values(knots, values, "values")?;
    knots.check_steps(ctx.delta())?;
    let r = build_r(&ctx, knots)?;
    let q = build_q(&ctx, knots)?;
    let rhs = q.transpose_mul(values);
    let (interior, path) = solve_tridiagonal(&r, &rhs)?;
    let mut gamma = Vec::with_capacity(knots.len());
    gamma.push(ZERO);
    gamma.extend(interior);
    gamma.push(ZERO);
    NaturalLSpline::cardinal(ctx, knots.clone(), values.to_vec(), gamma, path)
}

pub fn spline_eval(s: &NaturalLSpline, t: f64) -> Result<Complex64> {
    s.eval(t)
}

#[allow(non_snake_case)]
pub fn spline_eval_L1(s: &NaturalLSpline, t: f64) -> Result<Complex64> {
    s.eval_l1(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn poly() -> FrequencyVector {
        FrequencyVector::zeros(4).unwrap()
    }

    #[test]
    fn three_point_hat() {
        let knots = KnotVector::new(vec![0.0, 1.0, 2.0]).unwrap();
        let s = interpolate(&poly(), &knots, &[r(0.0), r(1.0), r(0.0)]).unwrap();
        assert!((s.gamma()[1] - r(-3.0)).norm() < 1e-14);
        assert_eq!(s.gamma()[0], r(0.0));
        assert_eq!(s.gamma()[2], r(0.0));
        assert_eq!(s.solver_path(), SolverPath::Thomas);
    }

    #[test]
    fn knots_are_interpolated() {
        let lam = FrequencyVector::new(vec![r(0.5), r(-0.5), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)])
            .unwrap();
        let knots = KnotVector::new(vec![0.0, 0.7, 1.1, 2.0, 3.5, 4.0]).unwrap();
        let g: Vec<_> = [1.0, -0.3, 2.0, 0.1, 0.0, 5.0].iter().map(|&v| r(v)).collect();
        let s = interpolate(&lam, &knots, &g).unwrap();
        for (t, v) in knots.as_slice().iter().zip(&g) {
            assert!((s.eval(*t).unwrap() - v).norm() < 1e-12 * (1.0 + v.norm()));
        }
        assert!(s.eval_l1(0.0).unwrap().norm() < 1e-12);
        assert!(s.eval_l1(4.0).unwrap().norm() < 1e-12);
        assert!(s.identity_residual().unwrap() < 1e-12);
        assert!(matches!(s.eval(4.0001), Err(Error::Domain(_))));
        assert!(matches!(s.eval(-1e-9), Err(Error::Domain(_))));
    }

    #[test]
    fn l1_continuous_at_interior_knots() {
        let lam = FrequencyVector::from_reals(&[1.0, -0.5, 2.0, 0.3]).unwrap();
        let knots = KnotVector::new(vec![0.0, 0.4, 1.0, 1.9, 2.2]).unwrap();
        let g: Vec<_> = [0.2, 1.0, -1.0, 0.5, 0.0].iter().map(|&v| r(v)).collect();
        let s = interpolate(&lam, &knots, &g).unwrap();
        for j in 1..4 {
            let t = knots.as_slice()[j];
            let left = s.local_piece(j - 1).unwrap();
            let right = s.local_piece(j).unwrap();
            let h = knots.step(j - 1);
            for d in 0..3 {
                let a = left.derivative_at(h, d);
                let b = right.derivative_at(0.0, d);
                assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()), "j={j} d={d}: {a} vs {b}");
            }
            assert!((s.eval_l1(t).unwrap() - s.gamma()[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn from_parts_round_trip() {
        let lam = FrequencyVector::from_reals(&[1.0, -1.0, -2.0, 2.0]).unwrap();
        let knots = KnotVector::new(vec![0.0, 0.5, 1.5, 2.0]).unwrap();
        let g: Vec<_> = [1.0, 2.0, 0.0, -1.0].iter().map(|&v| r(v)).collect();
        let s = interpolate(&lam, &knots, &g).unwrap();
        let back = NaturalLSpline::from_parts(&lam, &knots, s.g().to_vec(), s.gamma().to_vec()).unwrap();
        for t in [0.0, 0.3, 1.0, 1.77, 2.0] {
            assert_eq!(back.eval(t).unwrap(), s.eval(t).unwrap());
        }
        let bad = vec![r(1.0), r(0.0), r(0.0), r(0.0)];
        assert!(NaturalLSpline::from_parts(&lam, &knots, g.clone(), bad).is_err());
    }

    #[test]
    fn value_length_is_checked() {
        let knots = KnotVector::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(interpolate(&poly(), &knots, &[r(0.0)]), Err(Error::InvalidInput(_))));
    }
}
