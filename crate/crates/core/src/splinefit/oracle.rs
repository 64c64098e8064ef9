//! Dense reference solver. On each interval the spline is written in the
//! chain `Φ_(λ₀)`, `Φ_(λ₀,λ₁)`, `Φ_(λ₀,λ₁,λ₂)`, `Φ_(λ₀..λ₃)` of `s = t − tⱼ`, and
//! the `4(n−1)` coefficients are fixed by interpolation at both ends of every
//! interval, continuity of the first two derivatives at interior knots and
//! `L₁s = 0` at the end knots.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{check_values, NaturalLSpline, Pieces, SolverPath, ZERO};
use crate::assembly::KnotVector;
use crate::error::{Error, Result};
use crate::expcore::{FrequencyVector, Fundamental};

/// The dense system has `4(n−1)` unknowns, so the oracle is limited to small `n`.
pub const ORACLE_MAX_KNOTS: usize = 200;

const RANK_TOL: f64 = 1e-14;

fn l1_row(lam: &FrequencyVector, chain: &[Fundamental; 4], s: f64) -> [Complex64; 4] {
    let l = lam.as_slice();
    let (p, q) = (l[0] + l[1], l[0] * l[1]);
    std::array::from_fn(|k| {
        let [v, d1, d2] = chain[k].jet(s);
        d2 - p * d1 + q * v
    })
}

pub(super) fn l1_chain(lam: &FrequencyVector, chain: &[Fundamental; 4], c: &[Complex64; 4], s: f64) -> Complex64 {
    l1_row(lam, chain, s).iter().zip(c).map(|(a, b)| a * b).sum()
}

fn derivative_row(chain: &[Fundamental; 4], s: f64, d: usize) -> [Complex64; 4] {
    std::array::from_fn(|k| chain[k].derivative(s, d))
}

pub fn oracle_interpolate(lam: &FrequencyVector, knots: &KnotVector, values: &[Complex64]) -> Result<NaturalLSpline> {
    if lam.len() != 4 {
        return Err(Error::InvalidInput("the oracle needs four frequencies".into()));
    }
    if knots.len() > ORACLE_MAX_KNOTS {
        return Err(Error::InvalidInput(format!(
            "the dense oracle accepts at most {ORACLE_MAX_KNOTS} knots, got {}",
            knots.len()
        )));
    }
    check_values(knots, values, "values")?;
    knots.check_steps(lam.max_step_delta()?)?;

    let l = lam.as_slice();
    let chain: [Fundamental; 4] = std::array::from_fn(|k| Fundamental::from_slice(&l[..=k]));
    let n = knots.len();
    let m = 4 * (n - 1);
    let mut a = DMatrix::<Complex64>::zeros(m, m);
    let mut rhs = DVector::<Complex64>::zeros(m);
    let mut row = 0;
    let put = |a: &mut DMatrix<Complex64>, row: usize, interval: usize, v: [Complex64; 4], sign: f64| {
        for (k, x) in v.into_iter().enumerate() {
            a[(row, 4 * interval + k)] += x * sign;
        }
    };

    for j in 0..n - 1 {
        let h = knots.step(j);
        put(&mut a, row, j, derivative_row(&chain, 0.0, 0), 1.0);
        rhs[row] = values[j];
        row += 1;
        put(&mut a, row, j, derivative_row(&chain, h, 0), 1.0);
        rhs[row] = values[j + 1];
        row += 1;
    }
    for j in 1..n - 1 {
        let h = knots.step(j - 1);
        for d in 1..=2 {
            put(&mut a, row, j - 1, derivative_row(&chain, h, d), 1.0);
            put(&mut a, row, j, derivative_row(&chain, 0.0, d), -1.0);
            row += 1;
        }
    }
    put(&mut a, row, 0, l1_row(lam, &chain, 0.0), 1.0);
    row += 1;
    put(&mut a, row, n - 2, l1_row(lam, &chain, knots.step(n - 2)), 1.0);
    row += 1;
    debug_assert_eq!(row, m);

    // Equilibrate rows so the rank test is scale-free.
    for i in 0..m {
        let s = a.row(i).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if s == 0.0 {
            return Err(Error::SingularSystem);
        }
        a.row_mut(i).scale_mut(1.0 / s);
        rhs[i] /= s;
    }

    let lu = a.lu();
    let u = lu.u();
    let diag: Vec<f64> = (0..m).map(|i| u[(i, i)].norm()).collect();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &d| (lo.min(d), hi.max(d)));
    if !(lo > RANK_TOL * hi) {
        return Err(Error::SingularSystem);
    }
    let x = lu.solve(&rhs).ok_or(Error::SingularSystem)?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularSystem);
    }

    let coeffs: Vec<[Complex64; 4]> = (0..n - 1).map(|j| std::array::from_fn(|k| x[4 * j + k])).collect();
    let mut gamma = vec![ZERO; n];
    for j in 1..n - 1 {
        gamma[j] = l1_chain(lam, &chain, &coeffs[j], 0.0);
    }

    Ok(NaturalLSpline {
        lam: lam.clone(),
        knots: knots.clone(),
        g: values.to_vec(),
        gamma,
        path: SolverPath::DenseOracle,
        pieces: Pieces::Newton { chain: Box::new(chain), coeffs },
    })
}

#[cfg(test)]
mod tests {
    use super::super::interpolate;
    use super::*;

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn agrees_with_fast_path() {
        let lam = FrequencyVector::new(vec![
            Complex64::new(0.3, 1.0),
            Complex64::new(0.3, -1.0),
            r(-0.8),
            r(0.4),
        ])
        .unwrap();
        let knots = KnotVector::new(vec![0.0, 0.5, 1.2, 1.4, 2.6, 3.0, 4.1]).unwrap();
        let g: Vec<_> = [0.0, 1.0, -2.0, 0.5, 3.0, 1.0, -1.0].iter().map(|&v| r(v)).collect();
        let fast = interpolate(&lam, &knots, &g).unwrap();
        let slow = oracle_interpolate(&lam, &knots, &g).unwrap();
        assert_eq!(slow.solver_path(), SolverPath::DenseOracle);
        for i in 0..=40 {
            let t = 4.1 * i as f64 / 40.0;
            let (a, b) = (fast.eval(t).unwrap(), slow.eval(t).unwrap());
            assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()), "t={t}: {a} vs {b}");
            let (a, b) = (fast.eval_l1(t).unwrap(), slow.eval_l1(t).unwrap());
            assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()), "L1 t={t}: {a} vs {b}");
        }
        for (a, b) in fast.gamma().iter().zip(slow.gamma()) {
            assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn size_limit() {
        let knots = KnotVector::new((0..=ORACLE_MAX_KNOTS).map(|i| i as f64).collect()).unwrap();
        let g = vec![r(0.0); knots.len()];
        let lam = FrequencyVector::zeros(4).unwrap();
        assert!(matches!(oracle_interpolate(&lam, &knots, &g), Err(Error::InvalidInput(_))));
    }
}
