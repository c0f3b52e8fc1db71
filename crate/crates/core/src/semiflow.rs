//! Semiflow generators on the disk and on Jordan domains, flow integration
//! with the variational equation, and conformal transplantation.

use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::function::{AnalyticFunction, Domain};
use crate::grid::BoundaryGrid;
use crate::ode::{dopri5, State};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Accepted dip of Re F below zero in the positivity probe.
const POSITIVITY_TOL: f64 = 1e-10;
/// Accepted radial overshoot before a disk flow is declared escaped.
const OVERSHOOT_TOL: f64 = 1e-9;

/// Endpoint data of one flow integration.
///
/// `derivative` is `phi_t'(z)` from the variational equation
/// `v' = G'(phi) v`, `weight_integral` is `int_0^t g(phi_s(z)) ds` for the
/// attached weight (zero when none is attached).
#[derive(Debug, Clone)]
pub struct FlowResult {
    pub endpoint: Complex64,
    pub derivative: Complex64,
    pub weight_integral: Complex64,
    pub steps_taken: usize,
    pub est_error: f64,
}

/// Generator in Berkson-Porta form `G(z) = F(z)(conj(b) z - 1)(z - b)` with
/// `Re F >= 0` on the disk and Denjoy-Wolff point `|b| <= 1`.
#[derive(Debug, Clone)]
pub struct BPGenerator {
    f: AnalyticFunction,
    b: Complex64,
    func: AnalyticFunction,
}

impl BPGenerator {
    pub fn denjoy_wolff(&self) -> Complex64 {
        self.b
    }

    pub fn herglotz_part(&self) -> &AnalyticFunction {
        &self.f
    }

    /// The induced generator as a plain analytic function.
    pub fn function(&self) -> AnalyticFunction {
        self.func.clone()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.func.eval(z)
    }
}

/// Min of `Re f` over 200 interior samples (8 radii, 25 angles).
fn positivity_floor(f: &AnalyticFunction) -> f64 {
    let mut min = f64::INFINITY;
    for i in 1..=8 {
        let r = 0.1 * i as f64;
        for j in 0..25 {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 25.0);
            min = min.min(f.eval(z).re);
        }
    }
    min
}

/// Build the Berkson-Porta generator from a Herglotz-class `F` and a
/// Denjoy-Wolff point `b`. The factorization makes `G(b) = 0` exact for
/// interior `b`.
pub fn bp_generator(f: AnalyticFunction, b: Complex64) -> Result<BPGenerator> {
    if b.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter {
            name: "b",
            value: b.norm(),
            constraint: "|b| <= 1",
        });
    }
    let floor = positivity_floor(&f);
    if floor < -POSITIVITY_TOL {
        return Err(Error::InvalidGenerator { min_re: floor });
    }
    let bb = b.conj();
    let fe = f.clone();
    let fd = f.clone();
    let func = AnalyticFunction::new(
        move |z| fe.eval(z) * (bb * z - Complex64::ONE) * (z - b),
        move |z| {
            let lin = bb * z - Complex64::ONE;
            fd.deriv(z) * lin * (z - b) + fd.eval(z) * (bb * (z - b) + lin)
        },
        Domain::Disk,
    );
    Ok(BPGenerator { f, b, func })
}

/// Max over the probe circle `|z| = r_probe` of `Re(G(z) conj(z))`.
/// Nonpositive values certify that the flow points inward.
pub fn angle_condition_check(g: &AnalyticFunction, grid: &BoundaryGrid, r_probe: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r_probe) {
        return Err(Error::RadiusOutOfRange(r_probe));
    }
    let mut max = f64::NEG_INFINITY;
    for j in 0..grid.n_points() {
        let z = Complex64::from_polar(r_probe, grid.angle(j));
        let v = g.eval(z);
        if !v.is_finite() {
            return Err(Error::ProbeFailure(z));
        }
        max = max.max((v * z.conj()).re);
    }
    Ok(max)
}

/// Same check on a Jordan domain: samples `Re(G(x) conj(nu(x)))` at the
/// near-boundary points `x_j = k^{-1}(r_probe e^{i theta_j})` against the
/// tabulated outward normals.
pub fn boundary_angle_check_domain(
    g: &AnalyticFunction,
    k: &ConformalMap,
    r_probe: f64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&r_probe) {
        return Err(Error::RadiusOutOfRange(r_probe));
    }
    let grid = k.grid();
    let mut max = f64::NEG_INFINITY;
    for j in 0..grid.n_points() {
        let x = k.inverse(Complex64::from_polar(r_probe, grid.angle(j)));
        let v = g.eval(x);
        if !v.is_finite() {
            return Err(Error::ProbeFailure(x));
        }
        let nu = k.unit_normal(j)?;
        max = max.max((v * nu.conj()).re);
    }
    Ok(max)
}

/// Integrate `z' = G(z)` together with the variational factor
/// `v' = G'(z) v`, `v(0) = 1`, and (optionally) the weight accumulator
/// `w' = g(z)`, `w(0) = 0`, from `z0` over `[0, t]`.
///
/// Disk flows are pinned to the closed disk: a radial overshoot up to
/// `1e-9` after an accepted step is projected back, anything larger is an
/// invariance violation.
pub fn flow_integrate_weighted(
    g: &AnalyticFunction,
    weight: Option<&AnalyticFunction>,
    z0: Complex64,
    t: f64,
    tol: f64,
) -> Result<FlowResult> {
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            constraint: "t >= 0",
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            constraint: "tol > 0",
        });
    }
    let rhs = |y: &State| {
        let gz = g.eval(y[0]);
        let w = match weight {
            Some(w) => w.eval(y[0]),
            None => Complex64::ZERO,
        };
        [gz, g.deriv(y[0]) * y[1], w]
    };
    let clip_disk = g.domain() == Domain::Disk;
    let project = move |y: &mut State, t_now: f64| -> Result<()> {
        if !clip_disk {
            return Ok(());
        }
        let r = y[0].norm();
        if r > 1.0 {
            if r > 1.0 + OVERSHOOT_TOL {
                return Err(Error::InvarianceViolation {
                    t: t_now,
                    radius: r,
                });
            }
            y[0] /= r;
        }
        Ok(())
    };
    let y0 = [z0, Complex64::ONE, Complex64::ZERO];
    let out = dopri5(rhs, y0, t, tol, project)?;
    let result = FlowResult {
        endpoint: out.y[0],
        derivative: out.y[1],
        weight_integral: out.y[2],
        steps_taken: out.steps,
        est_error: out.est_error,
    };
    if !out.completed {
        return Err(Error::StepUnderflow {
            t_reached: out.t_reached,
            partial: Box::new(result),
        });
    }
    Ok(result)
}

/// `flow_integrate_weighted` without a weight.
pub fn flow_integrate(
    g: &AnalyticFunction,
    z0: Complex64,
    t: f64,
    tol: f64,
) -> Result<FlowResult> {
    flow_integrate_weighted(g, None, z0, t, tol)
}

/// Max over `points` of `|phi_{s+t}(z) - phi_s(phi_t(z))|`.
pub fn semigroup_residual(
    g: &AnalyticFunction,
    s: f64,
    t: f64,
    points: &[Complex64],
    tol: f64,
) -> Result<f64> {
    let mut max = 0.0f64;
    for &z in points {
        let direct = flow_integrate(g, z, s + t, tol)?.endpoint;
        let inner = flow_integrate(g, z, t, tol)?.endpoint;
        let composed = flow_integrate(g, inner, s, tol)?.endpoint;
        max = max.max((direct - composed).norm());
    }
    Ok(max)
}

/// Transplant a disk generator through `k: Omega -> D`:
/// `G_Omega(x) = G_disk(k(x)) / k'(x)`, which conjugates the flows,
/// `phi_t^Omega = k^{-1} . phi_t^D . k`.
///
/// Evaluation points where Newton inversion fails yield NaN, which the
/// integrator rejects as a failed step.
pub fn transplant_generator(g_disk: &AnalyticFunction, k: &ConformalMap) -> AnalyticFunction {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let ge = g_disk.clone();
    let ke = k.clone();
    let gd = g_disk.clone();
    let kd = k.clone();
    AnalyticFunction::new(
        move |x| match ke.forward_jet(x) {
            Ok((w, kp, _)) => ge.eval(w) / kp,
            Err(_) => nan,
        },
        move |x| match kd.forward_jet(x) {
            Ok((w, kp, kpp)) => gd.deriv(w) - gd.eval(w) * kpp / (kp * kp),
            Err(_) => nan,
        },
        Domain::Jordan,
    )
}

/// Inverse direction of `transplant_generator`: carry a generator on Omega
/// to the disk, `G_disk(w) = G_Omega(k^{-1}(w)) / (k^{-1})'(w)`. Needs no
/// Newton inversion.
pub fn push_to_disk(g_omega: &AnalyticFunction, k: &ConformalMap) -> AnalyticFunction {
    let ge = g_omega.clone();
    let ke = k.clone();
    let gd = g_omega.clone();
    let kd = k.clone();
    AnalyticFunction::new(
        move |w| ge.eval(ke.inverse(w)) / ke.inverse_deriv(w),
        move |w| {
            let x = kd.inverse(w);
            let d1 = kd.inverse_deriv(w);
            let d2 = kd.inverse_series().derivative().derivative().eval(w);
            gd.deriv(x) - gd.eval(x) * d2 / (d1 * d1)
        },
        Domain::Disk,
    )
}

/// Plain composition `f . k^{-1}`, the disk-side view of a scalar field on
/// Omega (used for cocycle weights, which transform without the `1/k'`
/// factor).
pub fn compose_with_inverse(f_omega: &AnalyticFunction, k: &ConformalMap) -> AnalyticFunction {
    let fe = f_omega.clone();
    let ke = k.clone();
    let fd = f_omega.clone();
    let kd = k.clone();
    AnalyticFunction::new(
        move |w| fe.eval(ke.inverse(w)),
        move |w| fd.deriv(kd.inverse(w)) * kd.inverse_deriv(w),
        Domain::Disk,
    )
}

/// Conformal Berkson-Porta generator on Omega:
/// `G(x) = F(k(x)) (conj(k(tau)) k(x) - 1)(k(x) - k(tau)) / k'(x)`,
/// the transplant of the disk generator with Denjoy-Wolff point `k(tau)`.
pub fn conformal_bp_generator(
    f: AnalyticFunction,
    tau: Complex64,
    k: &ConformalMap,
) -> Result<AnalyticFunction> {
    let c = k.forward(tau)?;
    if c.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter {
            name: "k(tau)",
            value: c.norm(),
            constraint: "|k(tau)| <= 1",
        });
    }
    let disk = bp_generator(f, c)?;
    Ok(transplant_generator(&disk.function(), k))
}

/// Estimate the Denjoy-Wolff point of the flow of `G` by integrating five
/// seeds over doubling horizons until their endpoints agree within
/// `agree_tol`. Boundary points are located to roughly `1/T_max ~ 4e-5`;
/// flows without a common limit (rotations) fail with a disagreement error.
pub fn estimate_denjoy_wolff(g: &AnalyticFunction, agree_tol: f64) -> Result<Complex64> {
    const HORIZONS: [f64; 4] = [50.0, 400.0, 3200.0, 25600.0];
    let mut seeds = [
        Complex64::ZERO,
        Complex64::new(0.3, 0.0),
        Complex64::new(0.0, -0.4),
        Complex64::new(0.2, 0.5),
        Complex64::new(-0.5, 0.0),
    ];
    let mut reached = 0.0;
    let mut spread = f64::INFINITY;
    for horizon in HORIZONS {
        let dt = horizon - reached;
        for z in &mut seeds {
            *z = flow_integrate(g, *z, dt, 1e-9)?.endpoint;
        }
        reached = horizon;
        spread = 0.0f64;
        for i in 0..seeds.len() {
            for j in i + 1..seeds.len() {
                spread = spread.max((seeds[i] - seeds[j]).norm());
            }
        }
        if spread <= agree_tol {
            let sum: Complex64 = seeds.iter().sum();
            return Ok(sum / seeds.len() as f64);
        }
    }
    Err(Error::DenjoyWolffDisagreement(spread))
}
