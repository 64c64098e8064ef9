//! The scalar kernels behind the matrix `R`:
//!
//! ```text
//! ρ(x) = ρ₀(x) / (Φ₀₁(x)Φ₂₃(x)),   ρ₀ = Φ′Φ₀₁ − ΦΦ₀₁′
//! σ(x) = Φ(x)  / (Φ₀₁(x)Φ₂₃(x))
//! τ(x) = −σ(−x)/ρ(x) = Φ_(A−λ₀,…,A−λ₃)(x) / ρ₀(x)
//! ```
//!
//! with `Φ = Φ_(λ₀..λ₃)`, `Φ₀₁ = Φ_(λ₀,λ₁)`, `Φ₂₃ = Φ_(λ₂,λ₃)` and `A = Σλⱼ`.
//! Near the origin every kernel has a removable singularity, so for
//! `|x|·(1 + max|λ|) < 0.5` they are evaluated from Taylor quotients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expcore::series::Series;
use crate::expcore::{
    expand_slice, phi_taylor_series, ExpPoly, FrequencyVector, Fundamental, StepBound,
};

const QUOTIENT_TERMS: usize = 32;
const KERNEL_SERIES_SWITCH: f64 = 0.5;
/// Default grid size for [`dominance_bound`].
pub const DEFAULT_SAMPLES: usize = 2048;
/// Tolerance on `λ₀+λ₁ = −3(λ₂+λ₃)` in [`local_max_at_zero`].
pub const CRITICAL_POINT_TOL: f64 = 1e-9;

/// Everything needed to evaluate `ρ`, `σ` and `τ` for one frequency vector.
#[derive(Debug, Clone)]
pub struct KernelContext {
    lam: FrequencyVector,
    delta: StepBound,
    rho0: ExpPoly,
    sigma0: ExpPoly,
    phi01: ExpPoly,
    phi23: ExpPoly,
    phi_f: Fundamental,
    phi01_f: Fundamental,
    phi23_f: Fundamental,
    reflected_f: Fundamental,
    series_limit: f64,
    /// `ρ(x) = x·rho_q(x)`, `σ(x) = x·sigma_q(x)`, `τ(x) = tau_q(x)` near 0.
    rho_q: Series,
    sigma_q: Series,
    tau_q: Series,
}

impl KernelContext {
    pub fn new(lam: &FrequencyVector) -> Result<Self> {
        let delta = lam.max_step_delta()?;
        let l = lam.as_slice();
        let pair01 = &l[..2];
        let pair23 = &l[2..];
        let reflected = lam.reflect_about(lam.sum());

        let sigma0 = expand_slice(l);
        let phi01 = expand_slice(pair01);
        let phi23 = expand_slice(pair23);
        let rho0 = sigma0.derivative().mul(&phi01).sub(&sigma0.mul(&phi01.derivative()));

        let k = QUOTIENT_TERMS;
        let phi_s = phi_taylor_series(l, k);
        let phi01_s = phi_taylor_series(pair01, k);
        let phi23_s = phi_taylor_series(pair23, k);
        let refl_s = phi_taylor_series(reflected.as_slice(), k);
        let rho0_s = phi_s.derivative().mul(&phi01_s).sub(&phi_s.mul(&phi01_s.derivative()));
        let den_s = phi01_s.mul(&phi23_s).shift_down(2);
        let rho0_over_x3 = rho0_s.shift_down(3);

        Ok(KernelContext {
            delta,
            rho0,
            sigma0,
            phi01,
            phi23,
            phi_f: Fundamental::from_slice(l),
            phi01_f: Fundamental::from_slice(pair01),
            phi23_f: Fundamental::from_slice(pair23),
            reflected_f: Fundamental::new(&reflected),
            series_limit: KERNEL_SERIES_SWITCH / (1.0 + lam.max_abs()),
            rho_q: rho0_over_x3.div(&den_s),
            sigma_q: phi_s.shift_down(3).div(&den_s),
            tau_q: refl_s.shift_down(3).div(&rho0_over_x3),
            lam: lam.clone(),
        })
    }

    pub fn lam(&self) -> &FrequencyVector {
        &self.lam
    }

    pub fn delta(&self) -> StepBound {
        self.delta
    }

    /// `ρ₀` as an exponential polynomial.
    pub fn rho0(&self) -> &ExpPoly {
        &self.rho0
    }

    /// `σ₀ = Φ_(λ₀..λ₃)`.
    pub fn sigma0(&self) -> &ExpPoly {
        &self.sigma0
    }

    pub fn phi01(&self) -> &ExpPoly {
        &self.phi01
    }

    pub fn phi23(&self) -> &ExpPoly {
        &self.phi23
    }

    /// Evaluator for `Φ_(λ₀..λ₃)`.
    pub fn phi(&self) -> &Fundamental {
        &self.phi_f
    }

    pub fn phi01_eval(&self) -> &Fundamental {
        &self.phi01_f
    }

    pub fn phi23_eval(&self) -> &Fundamental {
        &self.phi23_f
    }

    /// Taylor coefficients of `ρ(x)/x` at the origin.
    pub fn rho_series(&self) -> &Series {
        &self.rho_q
    }

    /// Taylor coefficients of `τ` at the origin.
    pub fn tau_series(&self) -> &Series {
        &self.tau_q
    }

    fn near_origin(&self, x: f64) -> bool {
        x.abs() < self.series_limit
    }

    pub fn rho0_eval(&self, x: f64) -> Complex64 {
        let [p, dp, _] = self.phi_f.jet(x);
        let [q, dq, _] = self.phi01_f.jet(x);
        dp * q - p * dq
    }

    fn check_window(&self, x: f64) -> Result<()> {
        if !x.is_finite() || !self.delta.contains(x) {
            return Err(Error::Domain(format!(
                "|x| = {} is outside the window |x| < delta = {}",
                x.abs(),
                self.delta
            )));
        }
        Ok(())
    }

    fn denominator(&self, x: f64) -> Result<Complex64> {
        let den = self.phi01_f.eval(x) * self.phi23_f.eval(x);
        if !(den.norm() >= f64::MIN_POSITIVE) || !den.re.is_finite() || !den.im.is_finite() {
            return Err(Error::Numerical(format!(
                "kernel denominator Φ₀₁Φ₂₃ = {den} is not representable at x = {x}"
            )));
        }
        Ok(den)
    }

    pub fn rho(&self, x: f64) -> Result<Complex64> {
        self.check_window(x)?;
        if self.near_origin(x) {
            return Ok(self.rho_q.eval(x) * x);
        }
        finite(self.rho0_eval(x) / self.denominator(x)?, "ρ", x)
    }

    pub fn sigma(&self, x: f64) -> Result<Complex64> {
        self.check_window(x)?;
        if self.near_origin(x) {
            return Ok(self.sigma_q.eval(x) * x);
        }
        finite(self.phi_f.eval(x) / self.denominator(x)?, "σ", x)
    }

    /// `τ(x) = −σ(−x)/ρ(x)`, computed as a ratio of entire functions so it is
    /// defined past the step bound as long as `ρ₀(x) ≠ 0`.
    pub fn tau(&self, x: f64) -> Result<Complex64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("τ evaluated at non-finite x = {x}")));
        }
        if x == 0.0 {
            return Ok(Complex64::new(0.5, 0.0));
        }
        if self.near_origin(x) {
            return Ok(self.tau_q.eval(x));
        }
        let den = self.rho0_eval(x);
        if !(den.norm() >= f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!("ρ₀({x}) = {den} underflows")));
        }
        finite(self.reflected_f.eval(x) / den, "τ", x)
    }

    /// Degree-2 Taylor polynomial `(c₀, c₁, c₂)` of `τ` from the closed formulas
    /// in `A`, `B`, `C`.
    pub fn tau_taylor2(&self) -> (Complex64, Complex64, Complex64) {
        let t = self.lam.taylor().expect("kernel contexts hold four frequencies");
        let (a, b, c) = (t.a, t.b, t.c);
        let c0 = Complex64::new(0.5, 0.0);
        let c1 = (1.5 * a - c) / 8.0;
        let c2 = (7.0 * a * a / 16.0 - a * c / 2.0 + c * c / 4.0 - b / 5.0) / 8.0;
        (c0, c1, c2)
    }
}

fn finite(v: Complex64, what: &str, x: f64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("{what}({x}) overflowed")))
    }
}

pub fn kernel_build(lam: &FrequencyVector) -> Result<KernelContext> {
    KernelContext::new(lam)
}

pub fn rho_eval(ctx: &KernelContext, x: f64) -> Result<Complex64> {
    ctx.rho(x)
}

pub fn sigma_eval(ctx: &KernelContext, x: f64) -> Result<Complex64> {
    ctx.sigma(x)
}

pub fn tau_eval(ctx: &KernelContext, x: f64) -> Result<Complex64> {
    ctx.tau(x)
}

pub fn tau_taylor2(ctx: &KernelContext) -> (Complex64, Complex64, Complex64) {
    ctx.tau_taylor2()
}

/// Whether `τ` has a local maximum at the origin for a real frequency vector:
/// `λ₀+λ₁ = −3(λ₂+λ₃)` and `λ₀² − 4λ₀λ₁ + λ₁² + 3(λ₂²+λ₃²) > 0`.
pub fn local_max_at_zero(lam: &FrequencyVector) -> Result<bool> {
    if lam.len() != 4 {
        return Err(Error::InvalidInput("local_max_at_zero needs four frequencies".into()));
    }
    if !lam.classify().is_real {
        return Err(Error::Domain(format!("frequency vector {lam} is not real")));
    }
    let l: Vec<f64> = lam.as_slice().iter().map(|z| z.re).collect();
    let critical = ((l[0] + l[1]) + 3.0 * (l[2] + l[3])).abs() <= CRITICAL_POINT_TOL;
    let m = l[0] * l[0] - 4.0 * l[0] * l[1] + l[1] * l[1] + 3.0 * (l[2] * l[2] + l[3] * l[3]);
    Ok(critical && m > 0.0)
}

/// Empirical estimate of the dominance constant `M_δ` over a sample grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub delta: f64,
    /// `max |τ(±x)|` over the grid, including the limit `1/2` at the origin.
    pub m_delta_estimate: f64,
    pub grid_points: usize,
    /// `(|R_{j,j−1}| + |R_{j,j+1}|)/|R_{j,j}|` for the attached knot vector
    /// (by default a probe partition whose steps run through the grid).
    pub per_row_ratios: Vec<f64>,
    pub is_strictly_dominant: bool,
    /// `ρ(x) > 0` and `−ρ(−x) > 0` held at every sample inside the step window.
    pub hypothesis_checked: bool,
}

impl DominanceReport {
    /// Replace the probe rows by the rows of an actual matrix.
    pub fn with_row_ratios(mut self, ratios: Vec<f64>) -> Self {
        self.is_strictly_dominant = !ratios.is_empty() && ratios.iter().all(|r| *r < 1.0);
        self.per_row_ratios = ratios;
        self
    }

    /// Strict dominance is guaranteed on every partition with steps `≤ delta`.
    pub fn dominance_guaranteed(&self) -> bool {
        self.hypothesis_checked && self.m_delta_estimate < 1.0
    }
}

/// Sample grid on `(0, delta]`: half uniform, half logarithmic towards 0.
pub fn dominance_grid(delta: f64, samples: usize) -> Vec<f64> {
    let uniform = samples.div_ceil(2);
    let log = samples - uniform;
    let mut grid: Vec<f64> = (1..=uniform).map(|k| delta * k as f64 / uniform as f64).collect();
    for k in 0..log {
        let e = -6.0 + 6.0 * k as f64 / log.max(2) as f64;
        grid.push(delta * 10f64.powf(e));
    }
    grid.sort_by(f64::total_cmp);
    grid
}

pub fn dominance_bound(ctx: &KernelContext, delta: f64, samples: usize) -> Result<DominanceReport> {
    if samples < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {samples}")));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("delta must be positive and finite, got {delta}")));
    }
    if !ctx.delta.at_least(delta) {
        return Err(Error::Domain(format!(
            "delta = {delta} exceeds the step bound {}",
            ctx.delta
        )));
    }
    let grid = dominance_grid(delta, samples);

    let mut m = 0.5f64;
    for &x in &grid {
        m = m.max(ctx.tau(x)?.norm()).max(ctx.tau(-x)?.norm());
    }

    let conj_inv = ctx.lam.classify().is_conjugation_invariant;
    let inside: Vec<f64> = grid.iter().copied().filter(|&x| ctx.delta.admits_step(x)).collect();
    let real_positive = |v: Result<Complex64>| {
        v.map(|z| z.re > 0.0 && z.im.abs() <= 1e-10 * z.re).unwrap_or(false)
    };
    let hypothesis_checked = conj_inv
        && inside.iter().all(|&x| real_positive(ctx.rho(x)) && real_positive(ctx.rho(-x).map(|v| -v)));

    let row = |prev: f64, next: f64| -> Result<f64> {
        let diag = ctx.rho(prev)? - ctx.rho(-next)?;
        let off = ctx.sigma(-prev)?.norm() + ctx.sigma(next)?.norm();
        Ok(off / diag.norm())
    };
    let per_row_ratios = inside
        .windows(2)
        .map(|w| row(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;

    let report = DominanceReport {
        delta,
        m_delta_estimate: m,
        grid_points: grid.len(),
        per_row_ratios: Vec::new(),
        is_strictly_dominant: false,
        hypothesis_checked,
    };
    Ok(report.with_row_ratios(per_row_ratios))
}
