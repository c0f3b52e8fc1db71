//! Dirichlet-to-Robin evolution: the Lax semigroup and spectral oracle on
//! the disk, the weighted composition solver, generator application, and
//! the subordination bound.

use crate::boundary::trace;
use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::function::{AnalyticFunction, Domain};
use crate::grid::{poisson_extend, BoundarySignal};
use crate::norms::bergman_norm;
use crate::parallel::parallel_map;
use crate::semiflow::{
    angle_condition_check, boundary_angle_check_domain, compose_with_inverse,
    flow_integrate_weighted, push_to_disk,
};
use crate::series::PowerSeries;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Probe radius and ceiling for the construction-time angle check.
const ANGLE_PROBE_RADIUS: f64 = 0.999;
const ANGLE_TOL: f64 = 1e-3;
/// Negative disk-side modes above this are non-analytic data.
const ANALYTIC_TOL: f64 = 1e-10;
/// Ceiling for data in the top quarter of the spectrum when the generator
/// is applied (differentiation headroom).
const HEADROOM_TOL: f64 = 1e-8;

/// Where a Robin problem is posed.
#[derive(Debug, Clone)]
pub enum ProblemDomain {
    Disk,
    Mapped(ConformalMap),
}

/// Boundary evolution data: a semiflow generator, an optional Robin weight
/// (both living on the problem domain), and the initial boundary signal.
///
/// Construction certifies the sampled angle condition at radius 0.999 and
/// records whether the data is analytic-type (negative disk-side modes
/// below 1e-10) and the weight's interior `sup Re g`.
#[derive(Debug, Clone)]
pub struct RobinProblem {
    domain: ProblemDomain,
    generator: AnalyticFunction,
    weight: Option<AnalyticFunction>,
    u0: BoundarySignal,
    analytic_flag: bool,
    sup_re_weight: Option<f64>,
}

impl RobinProblem {
    pub fn new(
        domain: ProblemDomain,
        generator: AnalyticFunction,
        weight: Option<AnalyticFunction>,
        u0: BoundarySignal,
    ) -> Result<Self> {
        let max_re = match &domain {
            ProblemDomain::Disk => {
                angle_condition_check(&generator, &u0.grid(), ANGLE_PROBE_RADIUS)?
            }
            ProblemDomain::Mapped(k) => {
                if k.grid().n_points() != u0.grid().n_points() {
                    return Err(Error::SizeMismatch {
                        expected: k.grid().n_points(),
                        got: u0.grid().n_points(),
                    });
                }
                boundary_angle_check_domain(&generator, k, ANGLE_PROBE_RADIUS)?
            }
        };
        if max_re > ANGLE_TOL {
            return Err(Error::AngleConditionViolated { max_re });
        }
        let sup_re_weight = match &weight {
            None => None,
            Some(w) => {
                let disk_w = match &domain {
                    ProblemDomain::Disk => w.clone(),
                    ProblemDomain::Mapped(k) => compose_with_inverse(w, k),
                };
                let mut sup = f64::NEG_INFINITY;
                for i in 1..=20 {
                    let r = 0.95 * i as f64 / 20.0;
                    for j in 0..25 {
                        let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 25.0);
                        let v = disk_w.eval(z);
                        if !v.is_finite() {
                            return Err(Error::ProbeFailure(z));
                        }
                        sup = sup.max(v.re);
                    }
                }
                Some(sup)
            }
        };
        let analytic_flag = u0.negative_mode_magnitude() < ANALYTIC_TOL;
        Ok(Self {
            domain,
            generator,
            weight,
            u0,
            analytic_flag,
            sup_re_weight,
        })
    }

    /// Same domain, generator and weight over fresh initial data.
    pub fn with_initial_data(&self, u0: BoundarySignal) -> Result<Self> {
        Self::new(self.domain.clone(), self.generator.clone(), self.weight.clone(), u0)
    }

    pub fn domain(&self) -> &ProblemDomain {
        &self.domain
    }

    pub fn generator(&self) -> &AnalyticFunction {
        &self.generator
    }

    pub fn weight(&self) -> Option<&AnalyticFunction> {
        self.weight.as_ref()
    }

    pub fn initial_data(&self) -> &BoundarySignal {
        &self.u0
    }

    pub fn analytic_flag(&self) -> bool {
        self.analytic_flag
    }

    pub fn sup_re_weight(&self) -> Option<f64> {
        self.sup_re_weight
    }

    /// Generator seen from the disk side.
    fn disk_generator(&self) -> AnalyticFunction {
        match &self.domain {
            ProblemDomain::Disk => self.generator.clone(),
            ProblemDomain::Mapped(k) => push_to_disk(&self.generator, k),
        }
    }

    /// Weight seen from the disk side.
    fn disk_weight(&self) -> Option<AnalyticFunction> {
        self.weight.as_ref().map(|w| match &self.domain {
            ProblemDomain::Disk => w.clone(),
            ProblemDomain::Mapped(k) => compose_with_inverse(w, k),
        })
    }

    /// Holomorphic extension of the data from its nonnegative disk-side
    /// modes.
    fn holomorphic_extension(&self) -> Result<PowerSeries> {
        if !self.analytic_flag {
            return Err(Error::NonAnalyticData(self.u0.negative_mode_magnitude()));
        }
        let grid = self.u0.grid();
        let coeffs: Vec<Complex64> = (0..grid.max_mode_exclusive())
            .map(|n| self.u0.coeff(n))
            .collect();
        Ok(PowerSeries::new(coeffs))
    }

    fn check_headroom(&self) -> Result<()> {
        let grid = self.u0.grid();
        let cutoff = (3 * grid.n_points() as i64) / 8;
        let mut worst = 0.0f64;
        for n in grid.modes() {
            if n.abs() >= cutoff {
                worst = worst.max(self.u0.coeff(n).norm());
            }
        }
        if worst >= HEADROOM_TOL {
            return Err(Error::SpectralHeadroom(worst));
        }
        Ok(())
    }
}

/// Exact disk Dirichlet-to-Neumann semigroup: mode `n` decays by
/// `e^{-|n| t}`. Ground-truth oracle for the composition solvers.
pub fn dtn_multiplier_evolve(h: &BoundarySignal, t: f64) -> Result<BoundarySignal> {
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            constraint: "t >= 0",
        });
    }
    Ok(h.map_coeffs(|n, c| c * (-(n.abs() as f64) * t).exp()))
}

/// The composition form of the same semigroup: sample the harmonic
/// extension along the dilation flow, `T_t h = u(e^{-t} e^{i theta})`.
pub fn lax_evolve(h: &BoundarySignal, t: f64) -> Result<BoundarySignal> {
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            constraint: "t >= 0",
        });
    }
    if t == 0.0 {
        return Ok(h.clone());
    }
    let grid = h.grid();
    let r = (-t).exp();
    let samples: Result<Vec<Complex64>> = (0..grid.n_points())
        .map(|j| poisson_extend(h, r, grid.angle(j)))
        .collect();
    BoundarySignal::from_samples(grid, samples?)
}

/// Solve the Robin evolution by the weighted composition formula: extend
/// the data holomorphically, flow each boundary node for time `t` with the
/// accumulated weight integral, and assemble
/// `exp(int g) * u(phi_t)` back into a boundary signal.
///
/// Boundary nodes integrate independently; `STEKLOV_THREADS` controls the
/// worker count.
pub fn robin_evolve(prob: &RobinProblem, t: f64, tol: f64) -> Result<BoundarySignal> {
    let u = prob.holomorphic_extension()?;
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            constraint: "t >= 0",
        });
    }
    if t == 0.0 {
        return Ok(prob.u0.clone());
    }
    let gen = prob.disk_generator();
    let weight = prob.disk_weight();
    let grid = prob.u0.grid();
    let nodes: Vec<Complex64> = (0..grid.n_points()).map(|j| grid.point(j)).collect();
    let per_node = parallel_map(&nodes, |&w| -> Result<Complex64> {
        let flow = flow_integrate_weighted(&gen, weight.as_ref(), w, t, tol)?;
        Ok(flow.weight_integral.exp() * u.eval(flow.endpoint))
    });
    let mut samples = Vec::with_capacity(nodes.len());
    for (index, value) in per_node.into_iter().enumerate() {
        match value {
            Ok(v) => samples.push(v),
            Err(e) => {
                return Err(Error::NodeIntegration {
                    index,
                    source: Box::new(e),
                })
            }
        }
    }
    BoundarySignal::from_samples(grid, samples)
}

/// Apply the evolution generator to the data:
/// `Gamma u = Tr(g u + G u')` through the compensated radial trace.
/// This is `d/dt robin_evolve` at `t = 0`.
pub fn robin_generator_apply(prob: &RobinProblem) -> Result<BoundarySignal> {
    prob.check_headroom()?;
    let u = prob.holomorphic_extension()?;
    let du = u.derivative();
    let gen = prob.disk_generator();
    let weight = prob.disk_weight();
    let field = {
        let u2 = du.derivative();
        let gen_d = gen.clone();
        let weight_d = weight.clone();
        let (ue, ude) = (u.clone(), du.clone());
        let (uf, udf, u2f) = (u, du, u2);
        AnalyticFunction::new(
            move |z| {
                let gu = match &weight_d {
                    Some(w) => w.eval(z) * ue.eval(z),
                    None => Complex64::ZERO,
                };
                gu + gen_d.eval(z) * ude.eval(z)
            },
            move |z| {
                let gu = match &weight {
                    Some(w) => w.deriv(z) * uf.eval(z) + w.eval(z) * udf.eval(z),
                    None => Complex64::ZERO,
                };
                gu + gen.deriv(z) * udf.eval(z) + gen.eval(z) * u2f.eval(z)
            },
            Domain::Disk,
        )
    };
    // All spectral work is disk-side; the identity map realizes the trace
    // on the grid shared with the boundary table.
    let disk = ConformalMap::identity(prob.u0.grid());
    trace(&field, &disk)
}

/// Residual between two realizations of the Neumann trace on a mapped
/// domain: the disk multiplier transported by `|k'|` against the
/// directional-derivative form with `G = -k/k'`, which reduces to
/// `-(w du/dw + conj(w) dv/d(conj w)) |k'|` on the analytic and
/// anti-analytic halves of the extension.
pub fn dtn_domain_relation_residual(k: &ConformalMap, h: &BoundarySignal) -> Result<f64> {
    let grid = h.grid();
    if k.grid().n_points() != grid.n_points() {
        return Err(Error::SizeMismatch {
            expected: k.grid().n_points(),
            got: grid.n_points(),
        });
    }
    let cutoff = (3 * grid.n_points() as i64) / 8;
    for n in grid.modes() {
        if n.abs() >= cutoff && h.coeff(n).norm() >= HEADROOM_TOL {
            return Err(Error::SpectralHeadroom(h.coeff(n).norm()));
        }
    }
    // Spectral route: -|n| multiplier, then the conformal factor.
    let spectral = h.map_coeffs(|n, c| -(n.abs() as f64) * c);
    let spectral_samples = spectral.samples();
    // Derivative route: differentiate the analytic half in w and the
    // anti-analytic half in conj(w).
    let analytic = PowerSeries::new(
        (0..grid.max_mode_exclusive()).map(|n| h.coeff(n)).collect(),
    );
    let anti = PowerSeries::new(
        (0..=grid.min_mode().unsigned_abs() as usize)
            .map(|m| h.coeff(-(m as i64)))
            .collect(),
    );
    let d_analytic = analytic.derivative();
    let d_anti = anti.derivative();
    let mut worst = 0.0f64;
    for (j, &sv) in spectral_samples.iter().enumerate() {
        let w = grid.point(j);
        let d = k.inverse_deriv(w);
        if d.norm() < 1e-14 {
            return Err(Error::DegenerateMap(f64::INFINITY));
        }
        let kp_abs = 1.0 / d.norm();
        let side_a = sv * kp_abs;
        let wb = w.conj();
        let side_b = -(w * d_analytic.eval(w) + wb * d_anti.eval(wb)) * kp_abs;
        worst = worst.max((side_a - side_b).norm());
    }
    Ok(worst)
}

/// Residuals `||(S_t u0 - u0)/t - Gamma u0||` per probe time, with the
/// fitted log-log slope (first-order convergence gives slope close to 1).
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub slope: f64,
    pub residuals: Vec<(f64, f64)>,
}

pub fn generator_consistency_order(
    prob: &RobinProblem,
    t_list: &[f64],
    tol: f64,
) -> Result<ConsistencyReport> {
    if t_list.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "t_list",
            value: t_list.len() as f64,
            constraint: "at least 3 probe times",
        });
    }
    for pair in t_list.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::InvalidParameter {
                name: "t_list",
                value: pair[1],
                constraint: "strictly decreasing",
            });
        }
    }
    if t_list[0] > 0.1 || *t_list.last().expect("nonempty") <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "t_list",
            value: t_list[0],
            constraint: "times in (0, 0.1]",
        });
    }
    let gamma = robin_generator_apply(prob)?;
    let gamma_samples = gamma.samples();
    let u0_samples = prob.u0.samples().to_vec();
    let mut residuals = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let evolved = robin_evolve(prob, t, tol)?;
        let mut sup = 0.0f64;
        for (j, v) in evolved.samples().iter().enumerate() {
            let quotient = (v - u0_samples[j]) / t;
            sup = sup.max((quotient - gamma_samples[j]).norm());
        }
        residuals.push((t, sup));
    }
    let xs: Vec<f64> = residuals.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = residuals
        .iter()
        .map(|(_, d)| d.max(1e-300).ln())
        .collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xm) * (y - ym);
        den += (x - xm) * (x - xm);
    }
    Ok(ConsistencyReport {
        slope: num / den,
        residuals,
    })
}

/// Bergman norm of `S_t f = m_t (f . phi_t)` against the subordination
/// bound `(sup |m_t|)^{1/p} (1+|phi_t(0)|)/(1-|phi_t(0)|) ||f||_{A^p}`.
/// Returns `(norm, bound)`.
pub fn littlewood_bound_check(
    f: &PowerSeries,
    prob: &RobinProblem,
    t: f64,
    p: f64,
) -> Result<(f64, f64)> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            constraint: "p >= 1",
        });
    }
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            constraint: "t >= 0",
        });
    }
    let gen = prob.disk_generator();
    let weight = prob.disk_weight();
    let flow_tol = 1e-9;

    let f_fn = AnalyticFunction::from_series(f.clone(), Domain::Disk);
    let plain_norm = bergman_norm(&f_fn, p, 64, 64)?;

    let nan = Complex64::new(f64::NAN, f64::NAN);
    let weighted = {
        let (gen, weight, series) = (gen.clone(), weight.clone(), f.clone());
        AnalyticFunction::new(
            move |z| match flow_integrate_weighted(&gen, weight.as_ref(), z, t, flow_tol) {
                Ok(flow) => flow.weight_integral.exp() * series.eval(flow.endpoint),
                Err(_) => nan,
            },
            // Quadrature never differentiates this composite.
            move |_| nan,
            Domain::Disk,
        )
    };
    let norm = bergman_norm(&weighted, p, 64, 64)?;

    let mut sup_m = 0.0f64;
    for i in 1..=20 {
        let r = 0.95 * i as f64 / 20.0;
        for j in 0..25 {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 25.0);
            let flow = flow_integrate_weighted(&gen, weight.as_ref(), z, t, flow_tol)?;
            sup_m = sup_m.max(flow.weight_integral.exp().norm());
        }
    }
    let center = flow_integrate_weighted(&gen, None, Complex64::ZERO, t, flow_tol)?
        .endpoint
        .norm();
    let ratio = (1.0 + center) / (1.0 - center);
    Ok((norm, sup_m.powf(1.0 / p) * ratio * plain_norm))
}
