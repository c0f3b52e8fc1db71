//! Analytic functions given by evaluation closures with known derivatives.

use crate::series::PowerSeries;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// Where a function lives: the open unit disk, or the Jordan domain carried
/// by a conformal map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Disk,
    Jordan,
}

type EvalFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// An analytic function packaged with its derivative.
///
/// Evaluation is pointwise exact up to the closure's own accuracy; derivative
/// closures are analytic derivatives, never finite differences.
#[derive(Clone)]
pub struct AnalyticFunction {
    eval: EvalFn,
    deriv: EvalFn,
    domain: Domain,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl AnalyticFunction {
    pub fn new<F, D>(eval: F, deriv: D, domain: Domain) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        D: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            domain,
        }
    }

    pub fn from_series(series: PowerSeries, domain: Domain) -> Self {
        let d = series.derivative();
        Self::new(move |z| series.eval(z), move |z| d.eval(z), domain)
    }

    pub fn constant(c: Complex64, domain: Domain) -> Self {
        Self::new(move |_| c, |_| Complex64::ZERO, domain)
    }

    pub fn identity(domain: Domain) -> Self {
        Self::new(|z| z, |_| Complex64::ONE, domain)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        (self.deriv)(z)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Pointwise scaling `c * f`.
    pub fn scale(&self, c: Complex64) -> AnalyticFunction {
        let f = self.clone();
        let g = self.clone();
        Self::new(
            move |z| c * f.eval(z),
            move |z| c * g.deriv(z),
            self.domain,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_function_evaluates_and_differentiates() {
        let f = AnalyticFunction::from_series(
            PowerSeries::from_real(&[1.0, 0.0, 3.0]),
            Domain::Disk,
        );
        let z = Complex64::new(0.5, -0.25);
        assert!((f.eval(z) - (Complex64::ONE + 3.0 * z * z)).norm() < 1e-15);
        assert!((f.deriv(z) - 6.0 * z).norm() < 1e-15);
        assert_eq!(f.domain(), Domain::Disk);
    }

    #[test]
    fn constant_has_zero_derivative() {
        let c = Complex64::new(2.0, 1.0);
        let f = AnalyticFunction::constant(c, Domain::Jordan);
        assert_eq!(f.eval(Complex64::new(0.1, 0.9)), c);
        assert_eq!(f.deriv(Complex64::ONE), Complex64::ZERO);
    }

    #[test]
    fn scale_scales_both_value_and_derivative() {
        let f = AnalyticFunction::identity(Domain::Disk).scale(Complex64::new(0.0, 2.0));
        let z = Complex64::new(0.3, 0.0);
        assert!((f.eval(z) - Complex64::new(0.0, 0.6)).norm() < 1e-15);
        assert!((f.deriv(z) - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn declared_derivative_matches_finite_difference() {
        let f = AnalyticFunction::new(
            |z| (z * z - Complex64::new(0.5, 0.0)).exp(),
            |z| 2.0 * z * (z * z - Complex64::new(0.5, 0.0)).exp(),
            Domain::Disk,
        );
        let h = 1e-6;
        for z in [
            Complex64::new(0.2, 0.1),
            Complex64::new(-0.4, 0.3),
            Complex64::new(0.0, -0.7),
        ] {
            let fd = (f.eval(z + Complex64::new(h, 0.0)) - f.eval(z - Complex64::new(h, 0.0)))
                / Complex64::new(2.0 * h, 0.0);
            assert!((f.deriv(z) - fd).norm() < 1e-8, "at {z}");
        }
    }
}
