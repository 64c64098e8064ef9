//! The fundamental function `Φ_Λ`: the element of `E(Λ)` with
//! `Φ(0) = … = Φ^{(N−1)}(0) = 0` and `Φ^{(N)}(0) = 1`.
//!
//! `Φ_Λ(x)` is the divided difference of `z ↦ e^{xz}` over the multiset `Λ`.
//! Two independent routes are provided: [`Fundamental`] evaluates the
//! divided difference numerically (matrix exponential by scaling and
//! squaring, or a power series near the origin), while [`phi_expand`] produces the closed exponential-polynomial
//! form by partial fractions.

use num_complex::Complex64;

use super::exppoly::{ExpPoly, Term};
use super::frequency::{cluster, FrequencyVector, MAX_FREQUENCIES};
use super::series::Series;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `|x|·max|λ − c|` below which the centred power series is used.
pub const SERIES_SWITCH: f64 = 0.5;
/// Hard cap on series terms.
pub const SERIES_TERMS: usize = 40;
const SERIES_REL_STOP: f64 = 1e-17;

/// Complete homogeneous symmetric polynomials `h_0, …, h_{count−1}` of `nodes`.
///
/// `h_m` is the divided difference of `z^{m+N}` over the nodes, so these are
/// the Taylor data of `Φ`: `Φ(x) = Σ_m h_m x^{m+N}/(m+N)!`.
pub fn complete_homogeneous(nodes: &[Complex64], count: usize) -> Vec<Complex64> {
    let mut h = vec![ZERO; count];
    if count == 0 {
        return h;
    }
    h[0] = ONE;
    for &z in nodes {
        for m in 1..count {
            let prev = h[m - 1];
            h[m] += z * prev;
        }
    }
    h
}

/// Taylor coefficients `a_k = Φ^{(k)}(0)/k!`, `k < count`.
pub fn phi_taylor_series(lam: &[Complex64], count: usize) -> Series {
    let n = lam.len() - 1;
    let h = complete_homogeneous(lam, count.saturating_sub(n));
    let mut coeffs = vec![ZERO; count];
    let mut fact = 1.0;
    for k in 0..count {
        if k > 0 {
            fact *= k as f64;
        }
        if k >= n {
            coeffs[k] = h[k - n] / fact;
        }
    }
    Series(coeffs)
}

/// Prepared evaluator for `Φ_Λ` and its derivatives.
#[derive(Debug, Clone)]
pub struct Fundamental {
    order: usize,
    /// Clustered nodes, repeats contiguous.
    nodes: [Complex64; MAX_FREQUENCIES],
    clusters: Vec<(Complex64, usize)>,
    center: Complex64,
    radius: f64,
    /// `h_m` of the centred nodes `λ − center`.
    centred_h: Vec<Complex64>,
}

impl Fundamental {
    pub fn new(lam: &FrequencyVector) -> Self {
        Self::from_slice(lam.as_slice())
    }

    pub fn from_slice(lam: &[Complex64]) -> Self {
        assert!(
            !lam.is_empty() && lam.len() <= MAX_FREQUENCIES,
            "frequency count out of range"
        );
        let clusters = cluster(lam);
        let mut nodes = [ZERO; MAX_FREQUENCIES];
        let mut i = 0;
        for &(mu, m) in clusters.iter() {
            for _ in 0..m {
                nodes[i] = mu;
                i += 1;
            }
        }
        let center = lam.iter().sum::<Complex64>() / lam.len() as f64;
        let centred: Vec<Complex64> = nodes[..lam.len()].iter().map(|z| z - center).collect();
        let radius = centred.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Fundamental {
            order: lam.len() - 1,
            nodes,
            clusters,
            center,
            radius,
            centred_h: complete_homogeneous(&centred, SERIES_TERMS),
        }
    }

    /// `N` for `Λ_N`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn clusters(&self) -> &[(Complex64, usize)] {
        &self.clusters
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.derivative(x, 0)
    }

    /// `Φ^{(k)}(x)`.
    pub fn derivative(&self, x: f64, k: usize) -> Complex64 {
        if x.abs() * self.radius < SERIES_SWITCH {
            self.series_derivative(x, k)
        } else {
            self.squaring_derivative(x, k)
        }
    }

    /// `Φ_Λ(x) = e^{cx} Ψ(x)` with `Ψ = Φ_{Λ−c}` summed as a power series;
    /// derivatives by Leibniz.
    fn series_derivative(&self, x: f64, k: usize) -> Complex64 {
        let c = self.center;
        let mut binom = 1.0;
        let mut c_pow = ONE;
        let mut acc = ZERO;
        // Σ_i C(k,i) c^{k−i} Ψ^{(i)}; accumulate from i = k downwards.
        for j in 0..=k {
            let i = k - j;
            acc += binom * c_pow * self.psi_derivative(x, i);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
            c_pow *= c;
        }
        acc * (c * x).exp()
    }

    /// `Ψ^{(i)}(x) = Σ_m h_m x^{m+N−i}/(m+N−i)!`.
    fn psi_derivative(&self, x: f64, i: usize) -> Complex64 {
        let n = self.order;
        let m0 = i.saturating_sub(n);
        let mut p = m0 + n - i;
        let mut xp = pow_over_factorial(x, p);
        // |h_m| ≤ C(m+N, N)·radius^m
        let mut binom = (1..=n).fold(1.0, |b, j| b * (m0 + j) as f64 / j as f64);
        let mut rad_pow = self.radius.powi(m0 as i32);
        let mut sum = ZERO;
        for m in m0..SERIES_TERMS {
            sum += self.centred_h[m] * xp;
            let bound = binom * rad_pow * xp.abs();
            if m > m0 && (bound == 0.0 || bound <= SERIES_REL_STOP * sum.l1_norm()) {
                break;
            }
            p += 1;
            xp *= x / p as f64;
            binom = binom * (m + 1 + n) as f64 / (m + 1) as f64;
            rad_pow *= self.radius;
        }
        sum
    }

    /// Divided difference of `z^k e^{xz}` as the corner entry of `J^k e^{xJ}`,
    /// where `J` is lower bidiagonal with the nodes on its diagonal and ones
    /// below.
    fn squaring_derivative(&self, x: f64, k: usize) -> Complex64 {
        let mut v = self.exp_column(x);
        for _ in 0..k {
            self.apply_j(&mut v);
        }
        (self.center * x).exp() * v[self.order]
    }

    /// First column of `e^{x(J − c)}` by scaling and squaring; no division by
    /// node differences is involved.
    fn exp_column(&self, x: f64) -> [Complex64; MAX_FREQUENCIES] {
        let len = self.order + 1;
        let mut centred = [ZERO; MAX_FREQUENCIES];
        for (slot, z) in centred.iter_mut().zip(&self.nodes[..len]) {
            *slot = z - self.center;
        }
        let squarings = (x.abs() * self.radius / SERIES_SWITCH).log2().ceil().max(0.0) as i32;
        let y = x / 2f64.powi(squarings);

        let mut e = [[ZERO; MAX_FREQUENCIES]; MAX_FREQUENCIES];
        let mut term = [[ZERO; MAX_FREQUENCIES]; MAX_FREQUENCIES];
        for i in 0..len {
            e[i][i] = ONE;
            term[i][i] = ONE;
        }
        for m in 1..=SERIES_TERMS {
            // term ← term·(yJ_c)/m; (T·J)_{ij} = T_{ij}·d_j + T_{i,j+1}
            let f = y / m as f64;
            let mut biggest = 0.0f64;
            let mut scale = 0.0f64;
            for i in 0..len {
                for j in 0..=i {
                    let next = if j < i { term[i][j + 1] } else { ZERO };
                    term[i][j] = (term[i][j] * centred[j] + next) * f;
                    e[i][j] += term[i][j];
                    biggest = biggest.max(term[i][j].l1_norm());
                    scale = scale.max(e[i][j].l1_norm());
                }
            }
            if biggest <= SERIES_REL_STOP * scale {
                break;
            }
        }
        for _ in 0..squarings {
            let mut sq = [[ZERO; MAX_FREQUENCIES]; MAX_FREQUENCIES];
            for i in 0..len {
                for j in 0..=i {
                    sq[i][j] = (j..=i).map(|l| e[i][l] * e[l][j]).sum();
                }
            }
            e = sq;
        }
        let mut col = [ZERO; MAX_FREQUENCIES];
        for (i, slot) in col.iter_mut().enumerate().take(len) {
            *slot = e[i][0];
        }
        col
    }

    /// `v ← J·v` with the uncentred nodes: `(Jv)_i = z_i v_i + v_{i−1}`.
    fn apply_j(&self, v: &mut [Complex64; MAX_FREQUENCIES]) {
        for i in (0..=self.order).rev() {
            let below = if i > 0 { v[i - 1] } else { ZERO };
            v[i] = self.nodes[i] * v[i] + below;
        }
    }

    /// `(Φ(x), Φ′(x), Φ″(x))` sharing one matrix exponential.
    pub fn jet(&self, x: f64) -> [Complex64; 3] {
        if x.abs() * self.radius < SERIES_SWITCH {
            return [0, 1, 2].map(|k| self.series_derivative(x, k));
        }
        let w = (self.center * x).exp();
        let mut v = self.exp_column(x);
        let mut out = [ZERO; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                self.apply_j(&mut v);
            }
            *slot = w * v[self.order];
        }
        out
    }
}

fn pow_over_factorial(x: f64, p: usize) -> f64 {
    let mut v = 1.0;
    for j in 1..=p {
        v *= x / j as f64;
    }
    v
}

/// `Φ_Λ(x)`.
pub fn phi_eval(lam: &FrequencyVector, x: f64) -> Complex64 {
    Fundamental::new(lam).eval(x)
}

/// Closed form of `Φ_Λ` as an exponential polynomial, via the partial-fraction
/// expansion of `1/∏(z − λⱼ)` over the clustered roots.
pub fn phi_expand(lam: &FrequencyVector) -> ExpPoly {
    expand_slice(lam.as_slice())
}

pub(crate) fn expand_slice(lam: &[Complex64]) -> ExpPoly {
    let clusters = cluster(lam);
    let mut terms = Vec::with_capacity(clusters.len());
    for (k, &(mu, mult)) in clusters.iter().enumerate() {
        // g(w) = ∏_{j≠k} (μ_k − μ_j + w)^{−m_j}, Taylor to order mult − 1.
        let mut g = vec![ZERO; mult];
        g[0] = ONE;
        for (j, &(nu, mj)) in clusters.iter().enumerate() {
            if j == k {
                continue;
            }
            let d = mu - nu;
            let inv = d.inv();
            // (d + w)^{−m} = d^{−m} Σ_r (−1)^r C(m+r−1, r) (w/d)^r
            let lead = inv.powu(mj as u32);
            let mut factor = vec![ZERO; mult];
            let mut coef = 1.0;
            let mut w_pow = ONE;
            for (r, f) in factor.iter_mut().enumerate() {
                if r > 0 {
                    coef = -coef * (mj + r - 1) as f64 / r as f64;
                    w_pow *= inv;
                }
                *f = lead * coef * w_pow;
            }
            let mut prod = vec![ZERO; mult];
            for (a, ga) in g.iter().enumerate() {
                for (b, fb) in factor.iter().take(mult - a).enumerate() {
                    prod[a + b] += ga * fb;
                }
            }
            g = prod;
        }
        let mut coeffs = vec![ZERO; mult];
        let mut fact = 1.0;
        for (s, c) in coeffs.iter_mut().enumerate() {
            if s > 0 {
                fact *= s as f64;
            }
            *c = g[mult - 1 - s] / fact;
        }
        terms.push(Term::new(mu, coeffs));
    }
    ExpPoly::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fv(v: &[Complex64]) -> FrequencyVector {
        FrequencyVector::new(v.to_vec()).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn nearly_confluent_nodes_approach_the_confluent_limit() {
        let eps = 1e-8;
        let near = Fundamental::from_slice(&[c(1.0, 0.0), c(1.0 + eps, 0.0), c(-1.0, 0.5), c(2.0, 0.0)]);
        let exact = Fundamental::from_slice(&[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.5), c(2.0, 0.0)]);
        for x in [-4.0, -1.5, 2.0, 6.0] {
            for k in 0..3 {
                let (a, b) = (near.derivative(x, k), exact.derivative(x, k));
                assert!((a - b).norm() <= 1e-6 * b.norm(), "x={x} k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn polynomial_case() {
        let lam = FrequencyVector::zeros(4).unwrap();
        let p = phi_expand(&lam);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.coeffs_at(ZERO).unwrap().len(), 4);
        assert!(close(p.coeffs_at(ZERO).unwrap()[3], c(1.0 / 6.0, 0.0), 1e-15));
        assert!(close(phi_eval(&lam, 2.0), c(4.0 / 3.0, 0.0), 1e-15));
    }

    #[test]
    fn oscillating_pair_with_double_zero() {
        // Φ = x − sin x
        let lam = fv(&[c(0., 0.), c(0., 0.), c(0., 1.), c(0., -1.)]);
        assert!(close(phi_eval(&lam, PI), c(PI, 0.0), 1e-14));
        let p = phi_expand(&lam);
        let expected = ExpPoly::new(vec![
            Term::new(ZERO, vec![ZERO, c(1.0, 0.0)]),
            Term::new(c(0.0, 1.0), vec![c(0.0, 0.5)]),
            Term::new(c(0.0, -1.0), vec![c(0.0, -0.5)]),
        ]);
        assert!(p.approx_eq(&expected, 1e-14), "{p}");
    }

    #[test]
    fn exponential_and_oscillating_example() {
        let (g, w) = (1.0f64, 1.0f64);
        let lam = fv(&[c(0., 0.), c(g, 0.), c(0., w), c(0., -w)]);
        let p = phi_expand(&lam);
        for t in [0.3, 1.0, 2.7] {
            let exact = (g * g * ((w * t).cos() - 1.0) - w * g * (w * t).sin()
                + w * w * ((g * t).exp() - 1.0))
                / (w * w * g * (w * w + g * g));
            assert!(close(p.eval(t), c(exact, 0.0), 1e-13));
            assert!(close(phi_eval(&lam, t), c(exact, 0.0), 1e-13));
        }
    }

    #[test]
    fn hyperbolic_example() {
        // Φ_(a,−a,b,−b)(x) = (sinh bx / b − sinh ax / a)/(b² − a²), a=1, b=2
        let lam = FrequencyVector::from_reals(&[1., -1., -2., 2.]).unwrap();
        let expected = (2f64.sinh() / 2.0 - 1f64.sinh()) / 3.0;
        assert!((expected - 0.2127).abs() < 1e-4);
        assert!(close(phi_eval(&lam, 1.0), c(expected, 0.0), 1e-14));
        assert!(close(phi_expand(&lam).eval(1.0), c(expected, 0.0), 1e-14));
    }

    #[test]
    fn series_and_squaring_agree_at_switch() {
        let lam = fv(&[c(0.7, 0.2), c(-1.1, 0.0), c(0.4, -0.9), c(1.5, 0.3)]);
        let f = Fundamental::new(&lam);
        let x = SERIES_SWITCH / f.radius;
        for k in 0..3 {
            let a = f.series_derivative(x * 1.000001, k);
            let b = f.squaring_derivative(x * 1.000001, k);
            assert!(close(a, b, 1e-12), "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn jet_matches_single_derivatives() {
        let f = Fundamental::from_slice(&[c(0.3, 0.1), c(-1.0, 2.0), c(0.2, -0.7), c(1.1, 0.0)]);
        for x in [-3.0, -0.1, 0.05, 0.9, 4.0] {
            let jet = f.jet(x);
            for (k, v) in jet.iter().enumerate() {
                assert!(close(*v, f.derivative(x, k), 1e-14));
            }
        }
    }

    #[test]
    fn derivatives_match_expansion() {
        let lam = fv(&[c(0.3, 0.0), c(0.3, 0.0), c(-1.0, 2.0), c(-1.0, -2.0), c(0.5, 0.0)]);
        let f = Fundamental::new(&lam);
        let p = phi_expand(&lam);
        for x in [-2.0, -0.05, 0.0, 0.6, 3.0] {
            for k in 0..4 {
                let want = p.derivative_at(x, k);
                assert!(close(f.derivative(x, k), want, 1e-11), "x={x} k={k}");
            }
        }
    }

    #[test]
    fn taylor_series_head() {
        let lam = FrequencyVector::from_reals(&[1., -1., -2., 2.]).unwrap();
        let s = phi_taylor_series(lam.as_slice(), 8);
        assert_eq!(s.coeff(2), ZERO);
        assert!(close(s.coeff(3), c(1.0 / 6.0, 0.0), 1e-15));
        assert!(close(s.coeff(4), ZERO, 1e-15));
        assert!(close(s.coeff(5), c(5.0 / 120.0, 0.0), 1e-15));
    }

    #[test]
    fn single_frequency() {
        let lam = fv(&[c(0.5, 1.0)]);
        assert!(close(phi_eval(&lam, 2.0), (c(0.5, 1.0) * 2.0).exp(), 1e-14));
    }
}
