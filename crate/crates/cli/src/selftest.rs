//! Built-in checks that need no input files.

use std::f64::consts::PI;

use lspline_core::assembly::{build_q, build_r, row_dominance};
use lspline_core::kernel::dominance_bound;
use lspline_core::splinefit::{interpolate, oracle_interpolate};
use lspline_core::{Complex64, Error, FrequencyVector, KernelContext, KnotVector};

use crate::error::{CliError, CliResult};

type Check = fn() -> Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn reals(v: &[f64]) -> Result<FrequencyVector, String> {
    FrequencyVector::from_reals(v).map_err(fail)
}

fn knots() -> KnotVector {
    KnotVector::new(vec![0.0, 0.4, 1.1, 1.5, 2.3, 2.6, 3.4]).expect("increasing knots")
}

fn cubic_reduction() -> Result<String, String> {
    let ctx = KernelContext::new(&FrequencyVector::zeros(4).map_err(fail)?).map_err(fail)?;
    let r = build_r(&ctx, &KnotVector::new(vec![0.0, 1.0, 2.0, 3.0]).map_err(fail)?).map_err(fail)?;
    let dev = r
        .diag()
        .iter()
        .map(|d| (d - 2.0 / 3.0).norm())
        .chain(r.sub().iter().chain(r.sup()).map(|o| (o - 1.0 / 6.0).norm()))
        .fold(0.0, f64::max);
    if dev < 1e-12 {
        Ok(format!("diag 2/3, off-diagonal 1/6 (dev {dev:.1e})"))
    } else {
        Err(format!("deviation {dev:e}"))
    }
}

fn positivity() -> Result<String, String> {
    for v in [[1.0, -1.0, -2.0, 2.0], [3.0, 3.0, -1.0, -1.0], [-1.0, 4.0, -2.0, 1.0]] {
        let ctx = KernelContext::new(&reals(&v)?).map_err(fail)?;
        let r = build_r(&ctx, &knots()).map_err(fail)?;
        let all = r.sub().iter().chain(r.diag()).chain(r.sup());
        if let Some(bad) = all.clone().find(|z| !(z.re > 0.0 && z.im == 0.0)) {
            return Err(format!("{v:?}: entry {bad}"));
        }
    }
    Ok("all entries real and positive for 3 real vectors".into())
}

fn half_dominance() -> Result<String, String> {
    let ctx = KernelContext::new(&reals(&[1.0, -1.0, -2.0, 2.0])?).map_err(fail)?;
    let worst = row_dominance(&build_r(&ctx, &knots()).map_err(fail)?)
        .map_err(fail)?
        .into_iter()
        .fold(0.0, f64::max);
    if worst <= 0.5 {
        Ok(format!("max row ratio {worst:.6}"))
    } else {
        Err(format!("row ratio {worst}"))
    }
}

fn imaginary_pair_bound() -> Result<String, String> {
    let lam = FrequencyVector::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0)]).map_err(fail)?;
    let ctx = KernelContext::new(&lam).map_err(fail)?;
    let rep = dominance_bound(&ctx, PI, 2048).map_err(fail)?;
    if (rep.m_delta_estimate - 1.0).abs() < 1e-6 && ctx.delta().finite() == Some(PI) {
        Ok(format!("delta = pi, M_pi = {:.9}", rep.m_delta_estimate))
    } else {
        Err(format!("delta {}, M {}", ctx.delta(), rep.m_delta_estimate))
    }
}

fn tau_taylor() -> Result<String, String> {
    let ctx = KernelContext::new(&reals(&[1.0, -1.0, -2.0, 2.0])?).map_err(fail)?;
    let (t0, c1, c2) = ctx.tau_taylor2();
    let dev = (t0 - 0.5).norm().max(c1.norm()).max((c2 + 0.125).norm());
    if dev < 1e-12 {
        Ok("tau = 1/2 - x^2/8 + O(x^3)".into())
    } else {
        Err(format!("({t0}, {c1}, {c2})"))
    }
}

fn unbounded_tau() -> Result<String, String> {
    let ctx = KernelContext::new(&reals(&[3.0, 3.0, -1.0, -1.0])?).map_err(fail)?;
    let far = ctx.tau(-12.0).map_err(fail)?.norm();
    if far > 1.0 {
        Ok(format!("|tau(-12)| = {far:.3e}"))
    } else {
        Err(format!("|tau(-12)| = {far}"))
    }
}

fn symmetry() -> Result<String, String> {
    let cases = [
        (vec![c(1.0, 0.5), c(-1.0, -0.5), c(0.3, -2.0), c(-0.3, 2.0)], true),
        (vec![c(1.0, 0.0), c(-1.0, 0.0), c(-2.0, 0.0), c(2.0, 0.0)], true),
        (vec![c(3.0, 0.0), c(3.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)], false),
        (vec![c(0.4, 1.0), c(0.4, -1.0), c(-0.2, 0.3), c(0.1, 0.0)], false),
    ];
    for (v, want) in cases {
        let lam = FrequencyVector::new(v).map_err(fail)?;
        let ctx = KernelContext::new(&lam).map_err(fail)?;
        let r_sym = build_r(&ctx, &knots()).map_err(fail)?.is_symmetric(1e-9);
        if lam.classify().is_symmetric != want || r_sym != want {
            return Err(format!("{lam}: classified {}, R symmetric {r_sym}", lam.classify().is_symmetric));
        }
    }
    Ok("R symmetric exactly for the 2 symmetric vectors of 4".into())
}

fn reproduction() -> Result<String, String> {
    let lam = reals(&[1.0, -1.0, -2.0, 2.0])?;
    let k = knots();
    let g: Vec<Complex64> = k.as_slice().iter().map(|t| c(t.exp(), 0.0)).collect();
    let s = interpolate(&lam, &k, &g).map_err(fail)?;
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let t = (k.first() + (k.last() - k.first()) * i as f64 / 100.0).min(k.last());
        worst = worst.max((s.eval(t).map_err(fail)? - t.exp()).norm() / t.exp());
    }
    if worst < 1e-9 {
        Ok(format!("e^t reproduced, rel error {worst:.1e}"))
    } else {
        Err(format!("rel error {worst:e}"))
    }
}

fn oracle_agreement() -> Result<String, String> {
    let lam = FrequencyVector::new(vec![c(0.3, 0.7), c(-0.2, 0.1), c(0.5, -0.4), c(-0.6, 0.2)]).map_err(fail)?;
    let k = knots();
    let g: Vec<Complex64> = k.as_slice().iter().map(|t| c(t.sin(), (2.0 * t).cos())).collect();
    let fast = interpolate(&lam, &k, &g).map_err(fail)?;
    let slow = oracle_interpolate(&lam, &k, &g).map_err(fail)?;
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let t = (k.first() + (k.last() - k.first()) * i as f64 / 100.0).min(k.last());
        worst = worst.max((fast.eval(t).map_err(fail)? - slow.eval(t).map_err(fail)?).norm());
    }
    if worst < 1e-9 {
        Ok(format!("max deviation {worst:.1e}"))
    } else {
        Err(format!("deviation {worst:e}"))
    }
}

fn identity() -> Result<String, String> {
    let lam = FrequencyVector::new(vec![c(1.0, 1.0), c(1.0, -1.0), c(-0.5, 0.0), c(0.7, 0.0)]).map_err(fail)?;
    let k = knots();
    let ctx = KernelContext::new(&lam).map_err(fail)?;
    let g: Vec<Complex64> = k.as_slice().iter().map(|t| c((3.0 * t).cos(), 0.0)).collect();
    let s = interpolate(&lam, &k, &g).map_err(fail)?;
    let res = s.identity_residual().map_err(fail)?;
    let q = build_q(&ctx, &k).map_err(fail)?;
    if res < 1e-10 && q.rows() == k.len() {
        Ok(format!("relative residual {res:.1e}"))
    } else {
        Err(format!("residual {res:e}"))
    }
}

fn step_bound() -> Result<String, String> {
    let lam = FrequencyVector::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]).map_err(fail)?;
    let g = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
    let bad = KnotVector::new(vec![0.0, 1.0, 1.0 + PI]).map_err(fail)?;
    let ok = KnotVector::new(vec![0.0, 1.0, 1.0 + PI - 1e-3]).map_err(fail)?;
    match (interpolate(&lam, &bad, &g), interpolate(&lam, &ok, &g)) {
        (Err(Error::StepTooLarge { .. }), Ok(_)) => Ok("step pi rejected, pi - 1e-3 accepted".into()),
        (a, b) => Err(format!("step pi: {:?}, pi - 1e-3: {:?}", a.err(), b.err())),
    }
}

pub const CHECKS: &[(&str, Check)] = &[
    ("cubic spline reduction", cubic_reduction),
    ("positivity of R for real frequencies", positivity),
    ("half dominance, symmetric real vectors", half_dominance),
    ("dominance bound M_pi = 1 for (0,0,i,-i)", imaginary_pair_bound),
    ("Taylor expansion of tau", tau_taylor),
    ("unbounded tau for (3,3,-1,-1)", unbounded_tau),
    ("symmetric vectors give symmetric R", symmetry),
    ("reproduction of exponentials", reproduction),
    ("fast path agrees with dense collocation", oracle_agreement),
    ("Q^T g = R gamma", identity),
    ("knot step bound", step_bound),
];

/// Outcome of every check: `(name, passed, detail)`.
pub fn selftest_results() -> Vec<(&'static str, bool, String)> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok(detail) => (*name, true, detail),
            Err(detail) => (*name, false, detail),
        })
        .collect()
}

pub fn run_selftest() -> CliResult<()> {
    let results = selftest_results();
    let width = results.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (name, ok, detail) in &results {
        println!("{:<width$}  {}  {detail}", name, if *ok { "PASS" } else { "FAIL" });
    }
    let failed = results.iter().filter(|r| !r.1).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Selftest { failed })
    }
}
