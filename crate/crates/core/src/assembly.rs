//! Knot vectors, the tridiagonal matrix `R`, the banded matrix `Q` and the
//! per-interval basis `A¹, B¹, A², B²` from which the spline is assembled.
//!
//! Row and column `j` of `R` and `Q` correspond to the interior knot `t_{j+1}`
//! (zero-based), so `R` is `(n−2)×(n−2)` and `Q` is `n×(n−2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expcore::{ExpPoly, FrequencyVector, StepBound};
use crate::kernel::KernelContext;

/// Imaginary parts up to this fraction of an entry's modulus are treated as
/// round-off when the entry is known to be real.
pub const REAL_TRUNCATION_TOL: f64 = 1e-12;

/// Strictly increasing knots `t₁ < … < tₙ` with `n ≥ 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    knots: Vec<f64>,
}

impl KnotVector {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 knots, got {}", knots.len())));
        }
        if let Some(i) = knots.iter().position(|t| !t.is_finite()) {
            return Err(Error::InvalidInput(format!("knot {i} is not finite")));
        }
        if let Some(i) = knots.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(format!(
                "knots must be strictly increasing: t[{}] = {} >= t[{}] = {}",
                i,
                knots[i],
                i + 1,
                knots[i + 1]
            )));
        }
        Ok(KnotVector { knots })
    }

    /// Knots `t₀, t₀+h, …` for the given steps.
    pub fn from_steps(start: f64, steps: &[f64]) -> Result<Self> {
        let mut knots = Vec::with_capacity(steps.len() + 1);
        knots.push(start);
        let mut t = start;
        for h in steps {
            t += h;
            knots.push(t);
        }
        KnotVector::new(knots)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> f64 {
        self.knots[0]
    }

    pub fn last(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    pub fn step(&self, j: usize) -> f64 {
        self.knots[j + 1] - self.knots[j]
    }

    pub fn steps(&self) -> Vec<f64> {
        self.knots.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_step(&self) -> f64 {
        self.knots.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Condition 1: every step is below the step bound.
    pub fn check_steps(&self, delta: StepBound) -> Result<()> {
        for j in 0..self.len() - 1 {
            let h = self.step(j);
            if !delta.admits_step(h) {
                return Err(Error::StepTooLarge {
                    index: j,
                    step: h,
                    delta: delta.finite().unwrap_or(f64::INFINITY),
                });
            }
        }
        Ok(())
    }

    /// Index `j` of the interval `[t_j, t_{j+1}]` containing `t`.
    pub fn locate(&self, t: f64) -> Result<usize> {
        if !(t >= self.first() && t <= self.last()) {
            return Err(Error::Domain(format!(
                "t = {t} lies outside [{}, {}]",
                self.first(),
                self.last()
            )));
        }
        let j = self.knots.partition_point(|&k| k <= t);
        Ok(j.saturating_sub(1).min(self.len() - 2))
    }
}

/// Tridiagonal matrix stored by bands: `sub[i] = R[i+1][i]`, `sup[i] = R[i][i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalR {
    sub: Vec<Complex64>,
    diag: Vec<Complex64>,
    sup: Vec<Complex64>,
}

impl TridiagonalR {
    pub fn new(sub: Vec<Complex64>, diag: Vec<Complex64>, sup: Vec<Complex64>) -> Result<Self> {
        if diag.is_empty() || sub.len() + 1 != diag.len() || sup.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "band lengths (sub {}, diag {}, sup {}) do not form a tridiagonal matrix",
                sub.len(),
                diag.len(),
                sup.len()
            )));
        }
        let all = sub.iter().chain(&diag).chain(&sup);
        if all.clone().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("tridiagonal entry is not finite".into()));
        }
        Ok(TridiagonalR { sub, diag, sup })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[Complex64] {
        &self.sub
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn sup(&self) -> &[Complex64] {
        &self.sup
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        assert_eq!(x.len(), n, "dimension mismatch in TridiagonalR::mul_vec");
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.sup[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.size();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].norm();
                if i > 0 {
                    s += self.sub[i - 1].norm();
                }
                if i + 1 < n {
                    s += self.sup[i].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.sub.iter().zip(&self.sup).all(|(a, b)| (a - b).norm() <= tol * (a.norm() + b.norm()))
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.size();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.sup[i];
                m[i + 1][i] = self.sub[i];
            }
        }
        m
    }
}

/// The `n×(n−2)` matrix `Q`, three entries per column.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedQ {
    /// `columns[c] = (q[c][c], q[c+1][c], q[c+2][c])` in row order.
    columns: Vec<[Complex64; 3]>,
}

impl BandedQ {
    pub fn columns(&self) -> &[[Complex64; 3]] {
        &self.columns
    }

    /// Number of rows, i.e. knots.
    pub fn rows(&self) -> usize {
        self.columns.len() + 2
    }

    /// `Qᵀg`.
    pub fn transpose_mul(&self, g: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(g.len(), self.rows(), "dimension mismatch in BandedQ::transpose_mul");
        self.columns
            .iter()
            .enumerate()
            .map(|(c, q)| q[0] * g[c] + q[1] * g[c + 1] + q[2] * g[c + 2])
            .collect()
    }
}

fn to_real_if(z: Complex64, real: bool) -> Result<Complex64> {
    if !real {
        return Ok(z);
    }
    if z.im.abs() > REAL_TRUNCATION_TOL * z.norm() {
        return Err(Error::Numerical(format!(
            "entry {z} should be real but its imaginary part exceeds the round-off threshold"
        )));
    }
    Ok(Complex64::new(z.re, 0.0))
}

pub fn build_r(ctx: &KernelContext, knots: &KnotVector) -> Result<TridiagonalR> {
    knots.check_steps(ctx.delta())?;
    let real = ctx.lam().classify().is_conjugation_invariant;
    let n = knots.len();
    let m = n - 2;
    let mut diag = Vec::with_capacity(m);
    let mut sub = Vec::with_capacity(m.saturating_sub(1));
    let mut sup = Vec::with_capacity(m.saturating_sub(1));
    // rho(h) for the previous step carries over to the next row.
    let mut rho_prev = ctx.rho(knots.step(0))?;
    for j in 1..n - 1 {
        let h = knots.step(j);
        diag.push(to_real_if(rho_prev - ctx.rho(-h)?, real)?);
        if j < n - 2 {
            sup.push(to_real_if(ctx.sigma(h)?, real)?);
            sub.push(to_real_if(-ctx.sigma(-h)?, real)?);
            rho_prev = ctx.rho(h)?;
        }
    }
    TridiagonalR::new(sub, diag, sup)
}

pub fn build_q(ctx: &KernelContext, knots: &KnotVector) -> Result<BandedQ> {
    knots.check_steps(ctx.delta())?;
    let l = ctx.lam().as_slice();
    let real = FrequencyVector::new(l[..2].to_vec())?.classify().is_conjugation_invariant;
    let phi01 = ctx.phi01_eval();
    let n = knots.len();
    let columns = (1..n - 1)
        .map(|j| {
            let (hp, hn) = (knots.step(j - 1), knots.step(j));
            let left = phi01.eval(-hp);
            let right = phi01.eval(hn);
            let [at_minus, d_minus, _] = phi01.jet(-hn);
            let [at_plus, d_plus, _] = phi01.jet(hp);
            let q = [-1.0 / left, d_minus / at_minus - d_plus / at_plus, 1.0 / right];
            let mut out = [Complex64::new(0.0, 0.0); 3];
            for (o, v) in out.iter_mut().zip(q) {
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Numerical(format!("Q column {} is not finite", j - 1)));
                }
                *o = to_real_if(v, real)?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandedQ { columns })
}

/// Per-row ratios `(|sub| + |sup|)/|diag|`.
pub fn row_dominance(r: &TridiagonalR) -> Result<Vec<f64>> {
    let n = r.size();
    (0..n)
        .map(|i| {
            let d = r.diag[i].norm();
            if d == 0.0 {
                return Err(Error::ZeroDiagonal { row: i });
            }
            let mut off = 0.0;
            if i > 0 {
                off += r.sub[i - 1].norm();
            }
            if i + 1 < n {
                off += r.sup[i].norm();
            }
            Ok(off / d)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    A2,
    B2,
    A1,
    B1,
}

/// Values of `(A¹, B¹, A², B²)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisValues {
    pub a1: Complex64,
    pub b1: Complex64,
    pub a2: Complex64,
    pub b2: Complex64,
}

impl BasisValues {
    pub fn get(&self, kind: BasisKind) -> Complex64 {
        match kind {
            BasisKind::A1 => self.a1,
            BasisKind::B1 => self.b1,
            BasisKind::A2 => self.a2,
            BasisKind::B2 => self.b2,
        }
    }
}

/// Constants of the basis on `[t_j, t_{j+1}]`:
///
/// ```text
/// A²(t) = Φ₀₁(t − t_{j+1}) / Φ₀₁(−h)       B²(t) = Φ₀₁(t − t_j) / Φ₀₁(h)
/// A¹(t) = [Φ(t − t_{j+1}) − A²(t)Φ(−h)] / Φ₂₃(−h)
/// B¹(t) = [Φ(t − t_j)     − B²(t)Φ(h)]  / Φ₂₃(h)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalBasis {
    t0: f64,
    t1: f64,
    inv01_minus: Complex64,
    inv01_plus: Complex64,
    inv23_minus: Complex64,
    inv23_plus: Complex64,
    phi_minus: Complex64,
    phi_plus: Complex64,
}

impl IntervalBasis {
    pub fn new(ctx: &KernelContext, t0: f64, t1: f64) -> Result<Self> {
        if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::Domain(format!("interval [{t0}, {t1}] is empty or not finite")));
        }
        let h = t1 - t0;
        if !ctx.delta().admits_step(h) {
            return Err(Error::Domain(format!(
                "interval length {h} violates the step bound {}",
                ctx.delta()
            )));
        }
        let basis = IntervalBasis {
            t0,
            t1,
            inv01_minus: 1.0 / ctx.phi01_eval().eval(-h),
            inv01_plus: 1.0 / ctx.phi01_eval().eval(h),
            inv23_minus: 1.0 / ctx.phi23_eval().eval(-h),
            inv23_plus: 1.0 / ctx.phi23_eval().eval(h),
            phi_minus: ctx.phi().eval(-h),
            phi_plus: ctx.phi().eval(h),
        };
        let consts = [basis.inv01_minus, basis.inv01_plus, basis.inv23_minus, basis.inv23_plus];
        if consts.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical(format!("basis on [{t0}, {t1}] has a vanishing denominator")));
        }
        Ok(basis)
    }

    pub fn start(&self) -> f64 {
        self.t0
    }

    pub fn end(&self) -> f64 {
        self.t1
    }

    fn check(&self, t: f64) -> Result<()> {
        if t >= self.t0 && t <= self.t1 {
            Ok(())
        } else {
            Err(Error::Domain(format!("t = {t} lies outside [{}, {}]", self.t0, self.t1)))
        }
    }

    pub fn values(&self, ctx: &KernelContext, t: f64) -> Result<BasisValues> {
        self.check(t)?;
        let (l, r) = (t - self.t0, t - self.t1);
        let a2 = ctx.phi01_eval().eval(r) * self.inv01_minus;
        let b2 = ctx.phi01_eval().eval(l) * self.inv01_plus;
        let a1 = (ctx.phi().eval(r) - a2 * self.phi_minus) * self.inv23_minus;
        let b1 = (ctx.phi().eval(l) - b2 * self.phi_plus) * self.inv23_plus;
        Ok(BasisValues { a1, b1, a2, b2 })
    }

    /// `(A¹, B¹, A², B²)` as exponential polynomials in the local variable `s = t − t_j`.
    pub fn local_pieces(&self, ctx: &KernelContext) -> [ExpPoly; 4] {
        let h = self.t1 - self.t0;
        let a2 = ctx.phi01().translate(h).scale(self.inv01_minus);
        let b2 = ctx.phi01().scale(self.inv01_plus);
        let a1 = ctx.sigma0().translate(h).sub(&a2.scale(self.phi_minus)).scale(self.inv23_minus);
        let b1 = ctx.sigma0().sub(&b2.scale(self.phi_plus)).scale(self.inv23_plus);
        [a1, b1, a2, b2]
    }

    /// `L₁` applied to the basis: `L₁A¹ = Φ₂₃(t − t_{j+1})/Φ₂₃(−h)`, `L₁A² = 0`.
    pub fn l1_values(&self, ctx: &KernelContext, t: f64) -> Result<BasisValues> {
        self.check(t)?;
        let zero = Complex64::new(0.0, 0.0);
        Ok(BasisValues {
            a1: ctx.phi23_eval().eval(t - self.t1) * self.inv23_minus,
            b1: ctx.phi23_eval().eval(t - self.t0) * self.inv23_plus,
            a2: zero,
            b2: zero,
        })
    }
}

pub fn basis_eval(lam: &FrequencyVector, tj: f64, tj1: f64, kind: BasisKind, t: f64) -> Result<Complex64> {
    let ctx = KernelContext::new(lam)?;
    Ok(IntervalBasis::new(&ctx, tj, tj1)?.values(&ctx, t)?.get(kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(v: f64) -> Complex64 {
        c(v, 0.0)
    }

    fn ctx_real(v: &[f64]) -> KernelContext {
        KernelContext::new(&FrequencyVector::from_reals(v).unwrap()).unwrap()
    }

    fn knots(v: &[f64]) -> KnotVector {
        KnotVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn knot_validation() {
        assert!(matches!(KnotVector::new(vec![0.0, 1.0]), Err(Error::InvalidInput(_))));
        assert!(matches!(KnotVector::new(vec![0.0, 1.0, 1.0]), Err(Error::InvalidInput(_))));
        assert!(matches!(KnotVector::new(vec![0.0, f64::NAN, 1.0]), Err(Error::InvalidInput(_))));
        let k = knots(&[0.0, 0.5, 2.0]);
        assert_eq!(k.steps(), vec![0.5, 1.5]);
        assert_eq!(k.locate(0.0).unwrap(), 0);
        assert_eq!(k.locate(0.5).unwrap(), 1);
        assert_eq!(k.locate(2.0).unwrap(), 1);
        assert!(matches!(k.locate(2.1), Err(Error::Domain(_))));
    }

    #[test]
    fn step_bound_is_enforced() {
        let ctx = KernelContext::new(
            &FrequencyVector::new(vec![r(0.0), r(0.0), c(0., 1.), c(0., -1.)]).unwrap(),
        )
        .unwrap();
        let bad = KnotVector::from_steps(0.0, &[1.0, PI]).unwrap();
        match build_r(&ctx, &bad) {
            Err(Error::StepTooLarge { index, step, delta }) => {
                assert_eq!(index, 1);
                assert_eq!(step, PI);
                assert_eq!(delta, PI);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(build_q(&ctx, &bad).is_err());
        let ok = KnotVector::from_steps(0.0, &[1.0, PI - 1e-3]).unwrap();
        assert!(build_r(&ctx, &ok).is_ok());
    }

    #[test]
    fn polynomial_matrices() {
        let ctx = ctx_real(&[0., 0., 0., 0.]);
        let rr = build_r(&ctx, &knots(&[0., 1., 2., 3.])).unwrap();
        assert_eq!(rr.diag().len(), 2);
        for d in rr.diag() {
            assert!((d - r(2.0 / 3.0)).norm() < 1e-15);
        }
        assert!((rr.sub()[0] - r(1.0 / 6.0)).norm() < 1e-15);
        assert!((rr.sup()[0] - r(1.0 / 6.0)).norm() < 1e-15);

        let q = build_q(&ctx, &knots(&[0., 1., 2., 3.])).unwrap();
        assert_eq!(q.columns()[0], [r(1.0), r(-2.0), r(1.0)]);
        let q = build_q(&ctx, &knots(&[0., 0.5, 2.5])).unwrap();
        let [a, b, cc] = q.columns()[0];
        assert!((a - r(2.0)).norm() < 1e-14);
        assert!((b - r(-2.5)).norm() < 1e-14);
        assert!((cc - r(0.5)).norm() < 1e-14);
    }

    #[test]
    fn row_dominance_examples() {
        let ctx = ctx_real(&[0., 0., 0., 0.]);
        let rr = build_r(&ctx, &knots(&[0., 1., 2., 3., 4.])).unwrap();
        // Boundary rows carry a single off-diagonal entry.
        let ratios = row_dominance(&rr).unwrap();
        assert!((ratios[0] - 0.25).abs() < 1e-15);
        assert!((ratios[1] - 0.5).abs() < 1e-15);
        assert!((ratios[2] - 0.25).abs() < 1e-15);
        let rr = build_r(&ctx, &knots(&[0., 1., 2.])).unwrap();
        assert_eq!(row_dominance(&rr).unwrap(), vec![0.0]);
        let zero = TridiagonalR::new(vec![r(1.0)], vec![r(1.0), r(0.0)], vec![r(1.0)]).unwrap();
        assert_eq!(row_dominance(&zero), Err(Error::ZeroDiagonal { row: 1 }));
    }

    #[test]
    fn symmetric_vector_gives_symmetric_r() {
        let ctx = ctx_real(&[1., -1., -2., 2.]);
        let rr = build_r(&ctx, &knots(&[0., 0.3, 1.1, 1.5, 2.9, 3.0])).unwrap();
        assert!(rr.is_symmetric(1e-13));
        for v in row_dominance(&rr).unwrap() {
            assert!(v <= 0.5 + 1e-12);
        }
        let ctx = ctx_real(&[3., 3., -1., -1.]);
        let rr = build_r(&ctx, &knots(&[0., 0.3, 1.1, 1.5, 2.9, 3.0])).unwrap();
        assert!(!rr.is_symmetric(1e-6));
        assert!(rr.sub().iter().chain(rr.diag()).chain(rr.sup()).all(|z| z.re > 0.0 && z.im == 0.0));
    }

    #[test]
    fn entries_depend_only_on_steps() {
        let ctx = ctx_real(&[0.5, -1.5, 2.0, 0.25]);
        let a = build_r(&ctx, &knots(&[0., 0.4, 1.0, 1.7])).unwrap();
        let b = build_r(&ctx, &knots(&[10., 10.4, 11.0, 11.7])).unwrap();
        for (x, y) in a.diag().iter().zip(b.diag()) {
            assert!((x - y).norm() < 1e-12 * x.norm());
        }
    }

    #[test]
    fn basis_interpolation_conditions() {
        let lam = FrequencyVector::new(vec![c(0.3, 0.8), c(0.3, -0.8), r(-1.0), r(0.5)]).unwrap();
        let (a, b) = (1.0, 2.2);
        let at = |kind, t| basis_eval(&lam, a, b, kind, t).unwrap();
        assert!((at(BasisKind::A2, a) - r(1.0)).norm() < 1e-14);
        assert!(at(BasisKind::A2, b).norm() < 1e-14);
        assert!(at(BasisKind::B2, a).norm() < 1e-14);
        assert!((at(BasisKind::B2, b) - r(1.0)).norm() < 1e-14);
        for kind in [BasisKind::A1, BasisKind::B1] {
            assert!(at(kind, a).norm() < 1e-14);
            assert!(at(kind, b).norm() < 1e-14);
        }
        assert!(matches!(basis_eval(&lam, a, b, BasisKind::A1, 2.3), Err(Error::Domain(_))));
    }

    #[test]
    fn l1_of_a1_via_exppoly() {
        // Build A¹ as an exponential polynomial and apply L₁ = (D − λ₀)(D − λ₁).
        let lam = FrequencyVector::new(vec![r(0.4), r(-1.2), c(0.0, 1.5), c(0.0, -1.5)]).unwrap();
        let ctx = KernelContext::new(&lam).unwrap();
        let (t0, t1) = (0.0, 1.3);
        let h = t1 - t0;
        let a2 = ctx.phi01().translate(t1).scale(1.0 / ctx.phi01().eval(-h));
        let a1 = ctx
            .sigma0()
            .translate(t1)
            .sub(&a2.scale(ctx.sigma0().eval(-h)))
            .scale(1.0 / ctx.phi23().eval(-h));
        let l = lam.as_slice();
        let l1a1: ExpPoly = a1.shift_op(l[0]).shift_op(l[1]);
        assert!((l1a1.eval(t0) - r(1.0)).norm() < 1e-12);
        assert!(l1a1.eval(t1).norm() < 1e-12);
        let basis = IntervalBasis::new(&ctx, t0, t1).unwrap();
        for t in [0.0, 0.4, 0.9, 1.3] {
            let direct = basis.values(&ctx, t).unwrap().a1;
            assert!((direct - a1.eval(t)).norm() < 1e-12);
            let l1 = basis.l1_values(&ctx, t).unwrap().a1;
            assert!((l1 - l1a1.eval(t)).norm() < 1e-12);
        }
    }
}
