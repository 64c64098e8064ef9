//! Truncated power series around the origin.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Series(pub Vec<Complex64>);

impl Series {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.0.get(k).copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.0.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        let mut out = vec![ZERO; n];
        for (i, a) in self.0.iter().take(n).enumerate() {
            for (j, b) in other.0.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.len().min(other.len());
        Series((0..n).map(|k| self.0[k] - other.0[k]).collect())
    }

    pub fn derivative(&self) -> Series {
        Series(self.0.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    /// Divide by `x^k`, discarding the (assumed vanishing) low coefficients.
    pub fn shift_down(&self, k: usize) -> Series {
        Series(self.0.iter().skip(k).copied().collect())
    }

    /// Quotient series; the divisor must have a nonzero constant term.
    pub fn div(&self, den: &Series) -> Series {
        let n = self.len().min(den.len());
        let d0 = den.0[0];
        let mut q = vec![ZERO; n];
        for k in 0..n {
            let mut acc = self.0[k];
            for j in 1..=k {
                acc -= den.0[j] * q[k - j];
            }
            q[k] = acc / d0;
        }
        Series(q)
    }
}
