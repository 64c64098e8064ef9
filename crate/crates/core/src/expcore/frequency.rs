use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported number of frequencies (operator order).
pub const MAX_FREQUENCIES: usize = 8;

/// Relative tolerance under which two frequencies are treated as one repeated root.
pub const CLUSTER_TOL: f64 = 1e-9;

/// Ordered list of complex frequencies `(λ₀, …, λ_N)`.
///
/// The order matters for the natural boundary operator: the first pair
/// `(λ₀, λ₁)` defines `L₁ = (D − λ₀)(D − λ₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector {
    lambdas: Vec<Complex64>,
}

impl FrequencyVector {
    pub fn new(lambdas: Vec<Complex64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidInput("frequency vector is empty".into()));
        }
        if lambdas.len() > MAX_FREQUENCIES {
            return Err(Error::InvalidInput(format!(
                "at most {MAX_FREQUENCIES} frequencies are supported, got {}",
                lambdas.len()
            )));
        }
        if let Some(bad) = lambdas.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite frequency {bad}")));
        }
        Ok(FrequencyVector { lambdas })
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// The polynomial case `(0, …, 0)` of the given length.
    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.lambdas[i]
    }

    /// `N` in `Λ_N = (λ₀, …, λ_N)`.
    pub fn order(&self) -> usize {
        self.lambdas.len() - 1
    }

    pub fn max_abs(&self) -> f64 {
        self.lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.lambdas.iter().sum()
    }

    /// Sub-vector of the given positions, in that order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        Self::new(idx.iter().map(|&i| self.lambdas[i]).collect())
    }

    /// First `k` entries.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        Self::new(self.lambdas[..k].to_vec())
    }

    pub fn neg(&self) -> Self {
        FrequencyVector { lambdas: self.lambdas.iter().map(|z| -z).collect() }
    }

    pub fn conj(&self) -> Self {
        FrequencyVector { lambdas: self.lambdas.iter().map(|z| z.conj()).collect() }
    }

    /// `(c − λ₀, …, c − λ_N)`.
    pub fn reflect_about(&self, c: Complex64) -> Self {
        FrequencyVector { lambdas: self.lambdas.iter().map(|z| c - z).collect() }
    }

    fn tol(&self) -> f64 {
        CLUSTER_TOL * (1.0 + self.max_abs())
    }

    fn require_four(&self, what: &str) -> Result<()> {
        if self.len() != 4 {
            return Err(Error::InvalidInput(format!(
                "{what} needs exactly four frequencies, got {}",
                self.len()
            )));
        }
        Ok(())
    }

    pub fn classify(&self) -> Classification {
        let tol = self.tol();
        let is_real = self.lambdas.iter().all(|z| z.im.abs() <= tol);
        let conj_inv = |s: &[Complex64]| {
            let c: Vec<_> = s.iter().map(|z| z.conj()).collect();
            multiset_eq(s, &c, tol)
        };
        let is_conjugation_invariant = if self.len() == 4 {
            conj_inv(&self.lambdas[..2]) && conj_inv(&self.lambdas[2..])
        } else {
            conj_inv(&self.lambdas)
        };
        let neg: Vec<_> = self.lambdas.iter().map(|z| -z).collect();
        let is_symmetric = multiset_eq(&self.lambdas, &neg, tol);
        Classification { is_real, is_conjugation_invariant, is_symmetric }
    }

    /// True when `λ₀ + λ₁ = λ₂ + λ₃`, the condition for `ρ` to be odd.
    pub fn has_balanced_pairs(&self) -> bool {
        self.len() == 4 && {
            let l = &self.lambdas;
            ((l[0] + l[1]) - (l[2] + l[3])).norm() <= self.tol()
        }
    }

    /// Maximal admissible knot spacing.
    ///
    /// `δ = min{2π/|Im(λ₁−λ₀)|, 2π/|Im(λ₃−λ₂)|}`, infinite when both
    /// imaginary differences vanish.
    pub fn max_step_delta(&self) -> Result<StepBound> {
        self.require_four("the step bound")?;
        let l = &self.lambdas;
        let tol = self.tol();
        let bound = [(l[1] - l[0]).im.abs(), (l[3] - l[2]).im.abs()]
            .into_iter()
            .filter(|d| *d > tol)
            .map(|d| 2.0 * PI / d)
            .fold(f64::INFINITY, f64::min);
        Ok(if bound.is_finite() { StepBound::Finite(bound) } else { StepBound::Infinite })
    }

    pub fn taylor(&self) -> Result<TaylorCoeffs> {
        self.require_four("the Taylor coefficients")?;
        let l = &self.lambdas;
        let a = self.sum();
        let squares: Complex64 = l.iter().map(|z| z * z).sum();
        Ok(TaylorCoeffs {
            a,
            b: 0.5 * a * a + 0.5 * squares,
            c: l[0] + l[1],
            d: l[0] * l[0] + l[0] * l[1] + l[1] * l[1],
        })
    }
}

impl fmt::Display for FrequencyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.lambdas.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{z}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub is_real: bool,
    pub is_conjugation_invariant: bool,
    pub is_symmetric: bool,
}

/// Step bound `δ` of the knot-spacing condition; `Infinite` for real-type pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepBound {
    Finite(f64),
    Infinite,
}

impl StepBound {
    /// Relative margin applied when checking knot steps against a finite bound.
    pub const MARGIN: f64 = 1e-12;

    pub fn is_finite(&self) -> bool {
        matches!(self, StepBound::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            StepBound::Finite(d) => Some(d),
            StepBound::Infinite => None,
        }
    }

    /// Strict check `|x| < δ`.
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            StepBound::Finite(d) => x.abs() < d,
            StepBound::Infinite => x.is_finite(),
        }
    }

    /// Knot-step check `h < δ·(1 − MARGIN)`.
    pub fn admits_step(&self, h: f64) -> bool {
        match *self {
            StepBound::Finite(d) => h < d * (1.0 - Self::MARGIN),
            StepBound::Infinite => h.is_finite(),
        }
    }

    /// Closed comparison `x ≤ δ`.
    pub fn at_least(&self, x: f64) -> bool {
        match *self {
            StepBound::Finite(d) => x <= d,
            StepBound::Infinite => true,
        }
    }
}

impl fmt::Display for StepBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepBound::Finite(d) => write!(f, "{d}"),
            StepBound::Infinite => write!(f, "inf"),
        }
    }
}

/// Low-order Taylor data of `Φ_(λ₀..λ₃)` and `Φ_(λ₀,λ₁)`:
///
/// `Φ(x) = x³/3! + A x⁴/4! + B x⁵/5! + …`, `Φ₀₁(x) = x + C x²/2 + D x³/3! + …`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoeffs {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

/// Multiset equality up to `tol`, by backtracking over assignments.
pub(crate) fn multiset_eq(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    fn go(a: &[Complex64], b: &[Complex64], used: &mut [bool], tol: f64) -> bool {
        let Some((first, rest)) = a.split_first() else {
            return true;
        };
        for j in 0..b.len() {
            if !used[j] && (first - b[j]).norm() <= tol {
                used[j] = true;
                if go(rest, b, used, tol) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    a.len() == b.len() && go(a, b, &mut vec![false; b.len()], tol)
}

/// Group frequencies closer than the cluster tolerance into repeated roots.
///
/// Returns `(representative, multiplicity)` pairs; the representative is the
/// cluster mean.
pub(crate) fn cluster(lambdas: &[Complex64]) -> Vec<(Complex64, usize)> {
    let scale = lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = CLUSTER_TOL * (1.0 + scale);
    let mut groups: Vec<(Complex64, Complex64, usize)> = Vec::new(); // (first, sum, count)
    for &z in lambdas {
        match groups.iter_mut().find(|(first, _, _)| (z - first).norm() <= tol) {
            Some(g) => {
                g.1 += z;
                g.2 += 1;
            }
            None => groups.push((z, z, 1)),
        }
    }
    groups.into_iter().map(|(_, s, m)| (s / m as f64, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fv(v: &[Complex64]) -> FrequencyVector {
        FrequencyVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(FrequencyVector::new(vec![]).is_err());
        assert!(FrequencyVector::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(FrequencyVector::new(vec![c(0.0, 0.0); 9]).is_err());
    }

    #[test]
    fn step_bound_examples() {
        let v = fv(&[c(0., 0.), c(0., 0.), c(0., 1.), c(0., -1.)]);
        assert_eq!(v.max_step_delta().unwrap(), StepBound::Finite(PI));
        let v = FrequencyVector::from_reals(&[3.0, -2.0, 0.5, 7.0]).unwrap();
        assert_eq!(v.max_step_delta().unwrap(), StepBound::Infinite);
        let v = fv(&[c(0., 1.), c(0., -1.), c(0., 2.), c(0., -2.)]);
        let d = v.max_step_delta().unwrap().finite().unwrap();
        assert!((d - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn step_bound_comparisons() {
        let b = StepBound::Finite(PI);
        assert!(!b.admits_step(PI));
        assert!(b.admits_step(PI - 1e-3));
        assert!(!b.contains(PI));
        assert!(b.at_least(PI));
        assert!(StepBound::Infinite.admits_step(1e300));
    }

    #[test]
    fn classify_examples() {
        let k = FrequencyVector::from_reals(&[1., -1., -2., 2.]).unwrap().classify();
        assert_eq!(
            k,
            Classification { is_real: true, is_conjugation_invariant: true, is_symmetric: true }
        );
        let k = FrequencyVector::from_reals(&[3., 3., -1., -1.]).unwrap().classify();
        assert!(k.is_real && k.is_conjugation_invariant && !k.is_symmetric);
        let k = FrequencyVector::from_reals(&[-1., 4., -2., 1.]).unwrap().classify();
        assert!(k.is_real && k.is_conjugation_invariant && !k.is_symmetric);
    }

    #[test]
    fn conjugation_invariance_is_pairwise_for_four() {
        // Whole multiset is conjugation invariant, but the split pairs are not.
        let v = fv(&[c(1., 1.), c(2., 0.), c(1., -1.), c(2., 0.)]);
        assert!(!v.classify().is_conjugation_invariant);
        let v = fv(&[c(1., 1.), c(1., -1.), c(0., 2.), c(0., -2.)]);
        let k = v.classify();
        assert!(k.is_conjugation_invariant && !k.is_real && !k.is_symmetric);
        let v = fv(&[c(0., 1.), c(0., -1.), c(2., 0.), c(-2., 0.)]);
        assert!(v.classify().is_symmetric);
    }

    #[test]
    fn taylor_examples() {
        let t = FrequencyVector::zeros(4).unwrap().taylor().unwrap();
        assert_eq!(t.a, c(0., 0.));
        assert_eq!(t.b, c(0., 0.));
        let t = FrequencyVector::from_reals(&[1., -1., -2., 2.]).unwrap().taylor().unwrap();
        assert_eq!(t.a, c(0., 0.));
        assert_eq!(t.c, c(0., 0.));
        assert_eq!(t.b, c(5., 0.));
        // Φ = x − sin x = x³/6 − x⁵/120 + … so B = −1.
        let t = fv(&[c(0., 0.), c(0., 0.), c(0., 1.), c(0., -1.)]).taylor().unwrap();
        assert_eq!(t.a, c(0., 0.));
        assert_eq!(t.c, c(0., 0.));
        assert!((t.b - c(-1., 0.)).norm() < 1e-15);
    }

    #[test]
    fn clustering_merges_near_roots() {
        let g = cluster(&[c(1.0, 0.0), c(1.0 + 1e-12, 0.0), c(2.0, 0.0)]);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].1, 2);
        let g = cluster(&[c(1.0, 0.0), c(1.0 + 1e-6, 0.0)]);
        assert_eq!(g.len(), 2);
    }
}
