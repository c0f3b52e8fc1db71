//! Finite complex power series centered at the origin.

use num_complex::Complex64;

/// Taylor polynomial `a_0 + a_1 z + ... + a_M z^M` with nominal radius 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; n + 1];
        coeffs[n] = Complex64::ONE;
        Self::new(coeffs)
    }

    /// Truncated geometric series `1 + z + ... + z^M`, the first `M + 1`
    /// Taylor coefficients of `1/(1-z)`.
    pub fn truncated_geometric(m: usize) -> Self {
        Self::new(vec![Complex64::ONE; m + 1])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation; exact finite sum, no convergence question.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::ZERO, |acc, &a| acc * z + a)
    }

    /// Termwise derivative: coefficients `(n+1) a_{n+1}`.
    pub fn derivative(&self) -> PowerSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &a)| a * n as f64)
            .collect();
        PowerSeries::new(coeffs)
    }

    /// The antiderivative with `F(0) = 0`: coefficients `F_{n+1} = a_n/(n+1)`.
    pub fn antiderivative(&self) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::ZERO);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &a)| a / (n as f64 + 1.0)),
        );
        PowerSeries::new(coeffs)
    }

    pub fn scale(&self, c: Complex64) -> PowerSeries {
        PowerSeries::new(self.coeffs.iter().map(|&a| a * c).collect())
    }
}
