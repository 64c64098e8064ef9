//! Tridiagonal solvers: unpivoted elimination for the dominant case and a
//! row-interchanging variant as the fallback.

use num_complex::Complex64;

use crate::assembly::{row_dominance, TridiagonalR};
use crate::error::{Error, Result};

/// Relative pivot threshold of [`thomas_solve`].
pub const PIVOT_TOL: f64 = 1e-13;

/// How the system `Rγ = Qᵀg` was solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    /// Unpivoted elimination on a strictly diagonally dominant matrix.
    Thomas,
    /// Elimination with row interchanges, used when dominance fails.
    Pivoted,
    /// The dense collocation system of [`oracle_interpolate`](super::oracle_interpolate).
    DenseOracle,
}

impl std::fmt::Display for SolverPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverPath::Thomas => "thomas",
            SolverPath::Pivoted => "pivoted",
            SolverPath::DenseOracle => "dense-oracle",
        })
    }
}

fn check_rhs(r: &TridiagonalR, rhs: &[Complex64]) -> Result<()> {
    if rhs.len() != r.size() {
        return Err(Error::InvalidInput(format!(
            "right-hand side has length {}, matrix has size {}",
            rhs.len(),
            r.size()
        )));
    }
    Ok(())
}

/// Forward elimination and back substitution without pivoting.
pub fn thomas_solve(r: &TridiagonalR, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    check_rhs(r, rhs)?;
    let (sub, diag, sup) = (r.sub(), r.diag(), r.sup());
    let n = diag.len();
    let mut cp = vec![Complex64::new(0.0, 0.0); n];
    let mut dp = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let (mut pivot, mut d) = (diag[i], rhs[i]);
        let mut scale = diag[i].norm();
        if i > 0 {
            pivot -= sub[i - 1] * cp[i - 1];
            d -= sub[i - 1] * dp[i - 1];
            scale += sub[i - 1].norm();
        }
        if i + 1 < n {
            scale += sup[i].norm();
        }
        if !(pivot.norm() >= PIVOT_TOL * scale) || scale == 0.0 {
            return Err(Error::SingularPivot { row: i, pivot: pivot.norm() });
        }
        if i + 1 < n {
            cp[i] = sup[i] / pivot;
        }
        dp[i] = d / pivot;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        let next = dp[i + 1];
        dp[i] -= cp[i] * next;
    }
    Ok(dp)
}

/// Gaussian elimination with partial pivoting on the bands; fill-in is
/// confined to a second superdiagonal, so the cost stays linear.
pub fn pivoted_solve(r: &TridiagonalR, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    check_rhs(r, rhs)?;
    let n = r.size();
    let zero = Complex64::new(0.0, 0.0);
    let dl = r.sub().to_vec();
    let mut d = r.diag().to_vec();
    let mut du = r.sup().to_vec();
    let mut du2 = vec![zero; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    let tiny = f64::EPSILON * r.norm_inf();

    for i in 0..n.saturating_sub(1) {
        if d[i].norm() >= dl[i].norm() {
            if !(d[i].norm() > tiny) {
                return Err(Error::SingularSystem);
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            let bi = b[i];
            b[i + 1] -= fact * bi;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            b.swap(i, i + 1);
            let bi = b[i];
            b[i + 1] -= fact * bi;
        }
    }
    if !(d[n - 1].norm() > tiny) {
        return Err(Error::SingularSystem);
    }
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= du[i] * b[i + 1];
        }
        if i + 2 < n {
            acc -= du2[i] * b[i + 2];
        }
        b[i] = acc / d[i];
    }
    Ok(b)
}

/// Unpivoted elimination when every row is strictly dominant, the pivoted
/// solver otherwise or when a pivot degenerates.
pub fn solve_tridiagonal(r: &TridiagonalR, rhs: &[Complex64]) -> Result<(Vec<Complex64>, SolverPath)> {
    let dominant = row_dominance(r).map(|v| v.iter().all(|x| *x < 1.0)).unwrap_or(false);
    if dominant {
        match thomas_solve(r, rhs) {
            Ok(x) => return Ok((x, SolverPath::Thomas)),
            Err(Error::SingularPivot { row, pivot }) => {
                log::debug!("pivot {pivot:e} in row {row}; switching to pivoted elimination")
            }
            Err(e) => return Err(e),
        }
    } else {
        log::debug!("R is not strictly diagonally dominant; using pivoted elimination");
    }
    Ok((pivoted_solve(r, rhs)?, SolverPath::Pivoted))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn rv(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| r(x)).collect()
    }

    #[test]
    fn row_sum_example() {
        let m = TridiagonalR::new(rv(&[1., 1.]), rv(&[2., 2., 2.]), rv(&[1., 1.])).unwrap();
        let x = thomas_solve(&m, &rv(&[3., 4., 3.])).unwrap();
        for v in &x {
            assert!((v - r(1.0)).norm() < 1e-15);
        }
        let y = pivoted_solve(&m, &rv(&[3., 4., 3.])).unwrap();
        for v in &y {
            assert!((v - r(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn scalar_system() {
        let c = Complex64::new(2.0, -1.0);
        let b = Complex64::new(0.5, 3.0);
        let m = TridiagonalR::new(vec![], vec![c], vec![]).unwrap();
        assert!((thomas_solve(&m, &[b]).unwrap()[0] - b / c).norm() < 1e-15);
        assert!((pivoted_solve(&m, &[b]).unwrap()[0] - b / c).norm() < 1e-15);
    }

    #[test]
    fn zero_pivot_falls_back() {
        // [[0, 1], [1, 0]] needs a row swap.
        let m = TridiagonalR::new(rv(&[1.]), rv(&[0., 0.]), rv(&[1.])).unwrap();
        assert!(matches!(thomas_solve(&m, &rv(&[2., 3.])), Err(Error::SingularPivot { row: 0, .. })));
        let (x, path) = solve_tridiagonal(&m, &rv(&[2., 3.])).unwrap();
        assert_eq!(path, SolverPath::Pivoted);
        assert_eq!(x, rv(&[3., 2.]));
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = TridiagonalR::new(rv(&[1.]), rv(&[1., 1.]), rv(&[1.])).unwrap();
        assert_eq!(pivoted_solve(&m, &rv(&[1., 1.])), Err(Error::SingularSystem));
    }

    #[test]
    fn dimension_mismatch() {
        let m = TridiagonalR::new(rv(&[1.]), rv(&[3., 3.]), rv(&[1.])).unwrap();
        assert!(matches!(thomas_solve(&m, &rv(&[1.])), Err(Error::InvalidInput(_))));
    }
}
