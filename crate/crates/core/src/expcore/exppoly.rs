use std::fmt;

use num_complex::Complex64;

use super::frequency::CLUSTER_TOL;

/// Coefficients below this fraction of the operand scale are dropped after arithmetic.
pub const DROP_TOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One summand `P(x)·e^{μx}`; `coeffs` are ascending powers of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub mu: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl Term {
    pub fn new(mu: Complex64, coeffs: Vec<Complex64>) -> Self {
        Term { mu, coeffs }
    }

    fn poly_eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Exponential polynomial `Σₖ Pₖ(x)·e^{μₖx}` with pairwise distinct frequencies.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    /// Builds a normalized exponential polynomial from possibly repeated terms.
    pub fn new(terms: Vec<Term>) -> Self {
        Self::from_raw(terms)
    }

    /// `c·x^k·e^{μx}`.
    pub fn monomial(mu: Complex64, k: usize, c: Complex64) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::new(vec![Term::new(mu, coeffs)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn frequencies(&self) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.mu).collect()
    }

    /// Dimension of the smallest exponential space containing `self`.
    pub fn dimension(&self) -> usize {
        self.terms.iter().map(|t| t.coeffs.len()).sum()
    }

    /// Largest coefficient modulus.
    pub fn norm(&self) -> f64 {
        self.terms.iter().map(Term::max_coeff).fold(0.0, f64::max)
    }

    /// Coefficients of the term at frequency `mu`, if present.
    pub fn coeffs_at(&self, mu: Complex64) -> Option<&[Complex64]> {
        let tol = self.freq_tol_with(mu);
        self.terms.iter().find(|t| (t.mu - mu).norm() <= tol).map(|t| t.coeffs.as_slice())
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let xc = Complex64::new(x, 0.0);
        self.terms.iter().map(|t| t.poly_eval(xc) * (t.mu * x).exp()).sum()
    }

    /// `(P e^{μx})′ = (P′ + μP) e^{μx}` termwise.
    pub fn derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut d: Vec<Complex64> = t.coeffs.iter().map(|c| c * t.mu).collect();
                for (k, c) in t.coeffs.iter().enumerate().skip(1) {
                    d[k - 1] += c * k as f64;
                }
                Term::new(t.mu, d)
            })
            .collect();
        Self::from_raw(terms)
    }

    /// `k`-th derivative evaluated at `x`.
    pub fn derivative_at(&self, x: f64, k: usize) -> Complex64 {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p.eval(x)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut conv = vec![ZERO; a.coeffs.len() + b.coeffs.len() - 1];
                for (i, ca) in a.coeffs.iter().enumerate() {
                    for (j, cb) in b.coeffs.iter().enumerate() {
                        conv[i + j] += ca * cb;
                    }
                }
                terms.push(Term::new(a.mu + b.mu, conv));
            }
        }
        Self::from_raw(terms)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_raw(terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.mu, t.coeffs.iter().map(|v| v * c).collect()))
            .collect();
        Self::from_raw(terms)
    }

    /// `D_λ p = p′ − λp`.
    pub fn shift_op(&self, lambda: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut d: Vec<Complex64> = t.coeffs.iter().map(|c| c * (t.mu - lambda)).collect();
                for (k, c) in t.coeffs.iter().enumerate().skip(1) {
                    d[k - 1] += c * k as f64;
                }
                Term::new(t.mu, d)
            })
            .collect();
        // Cancellation happens inside the single term, so scale against the input.
        Self::normalize(terms, self.norm() * (1.0 + lambda.norm()))
    }

    /// `x ↦ p(x − s)`.
    pub fn translate(&self, s: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                // Taylor shift of P by −s, then absorb e^{−μs}.
                let mut c = t.coeffs.clone();
                let n = c.len();
                for i in 0..n {
                    for k in (i..n - 1).rev() {
                        let next = c[k + 1];
                        c[k] -= next * s;
                    }
                }
                let w = (-t.mu * s).exp();
                Term::new(t.mu, c.into_iter().map(|v| v * w).collect())
            })
            .collect();
        Self::from_raw(terms)
    }

    /// Largest coefficient difference after aligning frequencies, relative to
    /// the larger of the two norms.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let diff = self.sub_exact(other);
        let scale = self.norm().max(other.norm());
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.relative_distance(other) <= tol
    }

    /// Max coefficient modulus of `self − other` without dropping small terms.
    fn sub_exact(&self, other: &Self) -> f64 {
        let mut merged: Vec<Term> = self.terms.clone();
        let tol = CLUSTER_TOL * (1.0 + self.max_freq().max(other.max_freq()));
        for t in &other.terms {
            let neg: Vec<Complex64> = t.coeffs.iter().map(|c| -c).collect();
            match merged.iter_mut().find(|m| (m.mu - t.mu).norm() <= tol) {
                Some(m) => add_into(&mut m.coeffs, &neg),
                None => merged.push(Term::new(t.mu, neg)),
            }
        }
        merged.iter().map(Term::max_coeff).fold(0.0, f64::max)
    }

    fn max_freq(&self) -> f64 {
        self.terms.iter().map(|t| t.mu.norm()).fold(0.0, f64::max)
    }

    fn freq_tol_with(&self, mu: Complex64) -> f64 {
        CLUSTER_TOL * (1.0 + self.max_freq().max(mu.norm()))
    }

    fn from_raw(terms: Vec<Term>) -> Self {
        let scale = terms.iter().map(Term::max_coeff).fold(0.0, f64::max);
        Self::normalize(terms, scale)
    }

    /// Merge near-equal frequencies, then drop coefficients below `DROP_TOL·scale`.
    fn normalize(terms: Vec<Term>, scale: f64) -> Self {
        let max_mu = terms.iter().map(|t| t.mu.norm()).fold(0.0, f64::max);
        let tol = CLUSTER_TOL * (1.0 + max_mu);
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.iter_mut().find(|m| (m.mu - t.mu).norm() <= tol) {
                Some(m) => add_into(&mut m.coeffs, &t.coeffs),
                None => merged.push(t),
            }
        }
        let cut = DROP_TOL * scale;
        for t in &mut merged {
            for c in &mut t.coeffs {
                if c.norm() <= cut {
                    *c = ZERO;
                }
            }
            while t.coeffs.last().is_some_and(|c| *c == ZERO) {
                t.coeffs.pop();
            }
        }
        merged.retain(|t| !t.coeffs.is_empty());
        ExpPoly { terms: merged }
    }
}

fn add_into(acc: &mut Vec<Complex64>, other: &[Complex64]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), ZERO);
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[")?;
            for (k, c) in t.coeffs.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]·e^({}x)", t.mu)?;
        }
        Ok(())
    }
}
