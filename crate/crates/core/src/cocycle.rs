//! Cocycle weights along a semiflow: exponential integrals, coboundaries,
//! and the derivative cocycle.

use crate::error::{Error, Result};
use crate::function::{AnalyticFunction, Domain};
use crate::ode::{dopri5, State};
use crate::semiflow::{flow_integrate, flow_integrate_weighted};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Magnitudes of a coboundary symbol below this are degenerate.
const WEIGHT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub enum CocycleKind {
    /// `m_t(z) = exp(int_0^t g(phi_s(z)) ds)`.
    Exponential(AnalyticFunction),
    /// `m_t(z) = omega(phi_t(z)) / omega(z)`.
    Coboundary(AnalyticFunction),
    /// `m_t(z) = phi_t'(z)`.
    Derivative,
}

/// A cocycle kind bound to the semiflow generator it rides on.
#[derive(Debug, Clone)]
pub struct CocycleSpec {
    kind: CocycleKind,
    generator: AnalyticFunction,
    sup_re_weight: Option<f64>,
}

impl CocycleSpec {
    /// Exponential cocycle. Records the admissibility bound
    /// `sup Re g` over 500 interior samples; a non-finite sample is an
    /// error.
    pub fn exponential(weight: AnalyticFunction, generator: AnalyticFunction) -> Result<Self> {
        let mut sup = f64::NEG_INFINITY;
        for i in 1..=20 {
            let r = 0.95 * i as f64 / 20.0;
            for j in 0..25 {
                let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 25.0);
                let v = weight.eval(z);
                if !v.is_finite() {
                    return Err(Error::ProbeFailure(z));
                }
                sup = sup.max(v.re);
            }
        }
        Ok(Self {
            kind: CocycleKind::Exponential(weight),
            generator,
            sup_re_weight: Some(sup),
        })
    }

    pub fn coboundary(omega: AnalyticFunction, generator: AnalyticFunction) -> Self {
        Self {
            kind: CocycleKind::Coboundary(omega),
            generator,
            sup_re_weight: None,
        }
    }

    pub fn derivative(generator: AnalyticFunction) -> Self {
        Self {
            kind: CocycleKind::Derivative,
            generator,
            sup_re_weight: None,
        }
    }

    pub fn kind(&self) -> &CocycleKind {
        &self.kind
    }

    pub fn generator(&self) -> &AnalyticFunction {
        &self.generator
    }

    /// `sup Re g` recorded at construction (exponential kind only).
    pub fn sup_re_weight(&self) -> Option<f64> {
        self.sup_re_weight
    }
}

/// Evaluate `m_t(z)`. All kinds are computed in log-space where possible
/// and exponentiated once; `m_0 = 1` exactly.
pub fn cocycle_eval(spec: &CocycleSpec, z: Complex64, t: f64, tol: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(Complex64::ONE);
    }
    match &spec.kind {
        CocycleKind::Exponential(g) => {
            let flow = flow_integrate_weighted(&spec.generator, Some(g), z, t, tol)?;
            Ok(flow.weight_integral.exp())
        }
        CocycleKind::Coboundary(omega) => {
            let denom = omega.eval(z);
            if denom.norm() < WEIGHT_FLOOR {
                return Err(Error::DegenerateWeight(z));
            }
            let flow = flow_integrate(&spec.generator, z, t, tol)?;
            let numer = omega.eval(flow.endpoint);
            if !numer.is_finite() {
                return Err(Error::ProbeFailure(flow.endpoint));
            }
            Ok(numer / denom)
        }
        CocycleKind::Derivative => Ok(flow_integrate(&spec.generator, z, t, tol)?.derivative),
    }
}

/// Max over `points` of `|m_{s+t}(z) - m_s(phi_t(z)) m_t(z)|`.
pub fn cocycle_identity_residual(
    spec: &CocycleSpec,
    s: f64,
    t: f64,
    points: &[Complex64],
    tol: f64,
) -> Result<f64> {
    let mut max = 0.0f64;
    for &z in points {
        let joint = cocycle_eval(spec, z, s + t, tol)?;
        let m_t = cocycle_eval(spec, z, t, tol)?;
        let mid = flow_integrate(&spec.generator, z, t, tol)?.endpoint;
        let m_s = cocycle_eval(spec, mid, s, tol)?;
        max = max.max((joint - m_s * m_t).norm());
    }
    Ok(max)
}

/// `|phi_t'(z) - exp(int_0^t G'(phi_s(z)) ds)|`: the variational equation
/// against an independent quadrature of `G'` along the same orbit.
pub fn derivative_vs_exponential_check(
    g: &AnalyticFunction,
    z: Complex64,
    t: f64,
    tol: f64,
) -> Result<f64> {
    let variational = flow_integrate(g, z, t, tol)?.derivative;
    if t == 0.0 {
        return Ok((variational - Complex64::ONE).norm());
    }
    // Accumulate int G'(phi_s) ds in the third slot without touching the
    // variational machinery.
    let rhs = |y: &State| [g.eval(y[0]), Complex64::ZERO, g.deriv(y[0])];
    let clip = g.domain() == Domain::Disk;
    let project = move |y: &mut State, t_now: f64| -> Result<()> {
        let r = y[0].norm();
        if clip && r > 1.0 {
            if r > 1.0 + 1e-9 {
                return Err(Error::InvarianceViolation { t: t_now, radius: r });
            }
            y[0] /= r;
        }
        Ok(())
    };
    let out = dopri5(rhs, [z, Complex64::ZERO, Complex64::ZERO], t, tol, project)?;
    if !out.completed {
        return Err(Error::StepUnderflow {
            t_reached: out.t_reached,
            partial: Box::new(crate::semiflow::FlowResult {
                endpoint: out.y[0],
                derivative: Complex64::ONE,
                weight_integral: out.y[2],
                steps_taken: out.steps,
                est_error: out.est_error,
            }),
        });
    }
    Ok((variational - out.y[2].exp()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dilation() -> AnalyticFunction {
        AnalyticFunction::new(|z| -z, |_| -Complex64::ONE, Domain::Disk)
    }

    fn parabolic() -> AnalyticFunction {
        AnalyticFunction::new(
            |z| (z - Complex64::ONE).powu(2),
            |z| 2.0 * (z - Complex64::ONE),
            Domain::Disk,
        )
    }

    fn sample_points() -> Vec<Complex64> {
        (0..10)
            .map(|i| Complex64::from_polar(0.6, 0.628 * i as f64))
            .collect()
    }

    #[test]
    fn constant_weight_integrates_exactly() {
        let spec = CocycleSpec::exponential(
            AnalyticFunction::constant(-Complex64::ONE, Domain::Disk),
            dilation(),
        )
        .unwrap();
        let m = cocycle_eval(&spec, Complex64::new(0.3, 0.1), 1.0, 1e-10).unwrap();
        assert!((m - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-10);
        assert_eq!(spec.sup_re_weight(), Some(-1.0));
    }

    #[test]
    fn linear_weight_along_dilation_flow() {
        // int_0^t e^{-s} z ds = z (1 - e^{-t}); at z = 1, t = ln 2 this is 1/2.
        let spec = CocycleSpec::exponential(AnalyticFunction::identity(Domain::Disk), dilation())
            .unwrap();
        let m = cocycle_eval(&spec, Complex64::ONE, 2.0f64.ln(), 1e-10).unwrap();
        assert!((m - Complex64::new(0.5f64.exp(), 0.0)).norm() < 1e-9);
    }

    #[test]
    fn derivative_cocycle_of_dilation_is_uniform() {
        let spec = CocycleSpec::derivative(dilation());
        for z in sample_points() {
            let m = cocycle_eval(&spec, z, 1.0, 1e-10).unwrap();
            assert!((m - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn all_kinds_are_one_at_time_zero() {
        let z = Complex64::new(0.4, -0.2);
        let exp = CocycleSpec::exponential(AnalyticFunction::identity(Domain::Disk), dilation())
            .unwrap();
        let cob = CocycleSpec::coboundary(
            AnalyticFunction::new(|z| z.exp(), |z| z.exp(), Domain::Disk),
            dilation(),
        );
        let der = CocycleSpec::derivative(dilation());
        for spec in [exp, cob, der] {
            assert_eq!(cocycle_eval(&spec, z, 0.0, 1e-10).unwrap(), Complex64::ONE);
        }
    }

    #[test]
    fn identity_residual_constant_weight() {
        let spec = CocycleSpec::exponential(
            AnalyticFunction::constant(Complex64::new(0.7, 0.0), Domain::Disk),
            dilation(),
        )
        .unwrap();
        let r = cocycle_identity_residual(&spec, 0.5, 0.5, &sample_points(), 1e-10).unwrap();
        assert!(r <= 1e-10, "residual {r}");
    }

    #[test]
    fn identity_residual_linear_weight() {
        let spec = CocycleSpec::exponential(AnalyticFunction::identity(Domain::Disk), dilation())
            .unwrap();
        let r = cocycle_identity_residual(&spec, 0.5, 0.5, &sample_points(), 1e-10).unwrap();
        assert!(r <= 1e-8, "residual {r}");
    }

    #[test]
    fn identity_residual_derivative_kind() {
        for g in [dilation(), parabolic()] {
            let spec = CocycleSpec::derivative(g);
            let r = cocycle_identity_residual(&spec, 0.3, 0.7, &sample_points(), 1e-10).unwrap();
            assert!(r <= 1e-8, "residual {r}");
        }
    }

    #[test]
    fn coboundary_requires_nonvanishing_symbol() {
        let spec = CocycleSpec::coboundary(AnalyticFunction::identity(Domain::Disk), dilation());
        assert!(matches!(
            cocycle_eval(&spec, Complex64::ZERO, 1.0, 1e-10),
            Err(Error::DegenerateWeight(_))
        ));
    }

    #[test]
    fn coboundary_matches_exponential_for_exp_symbol() {
        // omega = e^z and g = G * 1 agree: both give exp(h(phi_t) - h(z)).
        let omega = AnalyticFunction::new(|z| z.exp(), |z| z.exp(), Domain::Disk);
        let cob = CocycleSpec::coboundary(omega, dilation());
        let exp = CocycleSpec::exponential(dilation(), dilation()).unwrap();
        for z in sample_points() {
            let a = cocycle_eval(&cob, z, 0.8, 1e-11).unwrap();
            let b = cocycle_eval(&exp, z, 0.8, 1e-11).unwrap();
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn exponential_modulus_respects_recorded_sup() {
        let spec = CocycleSpec::exponential(AnalyticFunction::identity(Domain::Disk), dilation())
            .unwrap();
        let sigma = spec.sup_re_weight().unwrap();
        for z in sample_points() {
            for t in [0.1, 0.5, 1.0, 2.0] {
                let m = cocycle_eval(&spec, z, t, 1e-10).unwrap();
                assert!(m.norm() <= (sigma * t).exp() * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn variational_equals_log_quadrature() {
        assert!(
            derivative_vs_exponential_check(&dilation(), Complex64::new(0.3, 0.0), 1.0, 1e-10)
                .unwrap()
                <= 1e-9
        );
        assert_eq!(
            derivative_vs_exponential_check(&dilation(), Complex64::new(0.2, 0.1), 0.0, 1e-10)
                .unwrap(),
            0.0
        );
        assert!(
            derivative_vs_exponential_check(&parabolic(), Complex64::ZERO, 1.0, 1e-10).unwrap()
                <= 1e-8
        );
    }
}
