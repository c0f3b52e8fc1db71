//! Boundary spaces: radial boundary functions, interior-field traces, and
//! distributional boundary values of Bergman-class data.

use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use crate::grid::{BoundaryGrid, BoundarySignal};
use crate::norms::{bergman_norm, hardy_norm_mp};
use crate::series::PowerSeries;
use num_complex::Complex64;

/// Radius used to realize boundary traces of interior fields.
pub const TRACE_RADIUS: f64 = 1.0 - 1e-6;

/// Successive pairing values closer than this declare the radial limit.
pub const PAIRING_CONVERGENCE: f64 = 1e-8;

/// The default radius ladder `1 - 10^{-1-i}` approaching the boundary.
pub fn default_r_sequence() -> Vec<f64> {
    (0..10).map(|i| 1.0 - 10f64.powi(-1 - i)).collect()
}

/// `f_r(x_j) = f(k^{-1}(r k(x_j)))` sampled over the boundary table; at the
/// tabulated nodes `k(x_j) = e^{i theta_j}`, so the sample is
/// `f(k^{-1}(r e^{i theta_j}))`.
pub fn radial_boundary_function(
    f: &AnalyticFunction,
    k: &ConformalMap,
    r: f64,
) -> Result<BoundarySignal> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange(r));
    }
    let grid = *k.grid();
    let mut samples = Vec::with_capacity(grid.n_points());
    for j in 0..grid.n_points() {
        let x = k.inverse(Complex64::from_polar(r, grid.angle(j)));
        let v = f.eval(x);
        if !v.is_finite() {
            return Err(Error::ProbeFailure(x));
        }
        samples.push(v);
    }
    BoundarySignal::from_samples(grid, samples)
}

/// Boundary trace of an interior field: sample at radius `TRACE_RADIUS`
/// through `k`, then undo the radial attenuation mode by mode
/// (coefficient `n` is divided by `TRACE_RADIUS^{|n|}`, exact for
/// band-limited fields).
pub fn trace(field: &AnalyticFunction, k: &ConformalMap) -> Result<BoundarySignal> {
    let near = radial_boundary_function(field, k, TRACE_RADIUS)?;
    Ok(near.map_coeffs(|n, c| c / TRACE_RADIUS.powi(n.unsigned_abs() as i32)))
}

/// Bergman-class datum `f` with its antiderivative, the integrability
/// exponent, and the radius ladder along which the boundary pairing is
/// evaluated.
#[derive(Debug, Clone)]
pub struct BoundaryDistributionPairing {
    f: PowerSeries,
    antiderivative: PowerSeries,
    p: f64,
    r_sequence: Vec<f64>,
}

impl BoundaryDistributionPairing {
    pub fn new(f: PowerSeries, p: f64) -> Result<Self> {
        Self::with_r_sequence(f, p, default_r_sequence())
    }

    pub fn with_r_sequence(f: PowerSeries, p: f64, r_sequence: Vec<f64>) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                constraint: "p >= 1",
            });
        }
        if r_sequence.is_empty() {
            return Err(Error::InvalidParameter {
                name: "r_sequence",
                value: 0.0,
                constraint: "at least one radius",
            });
        }
        for pair in r_sequence.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidParameter {
                    name: "r_sequence",
                    value: pair[1],
                    constraint: "strictly increasing",
                });
            }
        }
        let top = *r_sequence.last().expect("nonempty");
        if !(0.0..1.0).contains(&top) {
            return Err(Error::RadiusOutOfRange(top));
        }
        let antiderivative = f.antiderivative();
        Ok(Self {
            f,
            antiderivative,
            p,
            r_sequence,
        })
    }

    pub fn datum(&self) -> &PowerSeries {
        &self.f
    }

    pub fn antiderivative(&self) -> &PowerSeries {
        &self.antiderivative
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    pub fn r_sequence(&self) -> &[f64] {
        &self.r_sequence
    }
}

/// One converged boundary pairing. `values` records, per visited radius,
/// the direct form `(1/2pi) int f(re^{it}) phi(e^{it}) dt` and the
/// integration-by-parts form `-(1/2pi) int F(re^{it}) psi(t) dt`.
#[derive(Debug, Clone)]
pub struct PairingOutcome {
    pub value: Complex64,
    pub r_stop: f64,
    pub max_form_disagreement: f64,
    pub values: Vec<(f64, Complex64, Complex64)>,
}

/// Trapezoid mean of `integrand` sampled on the grid circle of radius `r`.
fn circle_mean(
    grid: &BoundaryGrid,
    r: f64,
    series: &PowerSeries,
    weights: &[Complex64],
) -> Result<Complex64> {
    let mut acc = Complex64::ZERO;
    for (j, w) in weights.iter().enumerate() {
        let z = Complex64::from_polar(r, grid.angle(j));
        let v = series.eval(z);
        if !v.is_finite() {
            return Err(Error::Quadrature(z));
        }
        acc += v * w;
    }
    Ok(acc / grid.n_points() as f64)
}

/// Evaluate the pairing `lim_{r->1} (1/2pi) int f(re^{it}) phi(e^{it}) dt`
/// along the radius ladder.
///
/// Both integral forms are computed at each radius by the grid trapezoid
/// rule. The integration-by-parts form substitutes
/// `f(re^{it}) = (d/dt F(re^{it})) / (i r e^{it})`, so the differentiated
/// test factor is `psi(t) = (1/(ir)) d/dt [e^{-it} phi(e^{it})]`, realized
/// exactly on band-limited `phi` by the Fourier multiplier
/// `psi_hat_l = l phi_hat_{l+1} / r`.
///
/// Convergence is declared when successive integration-by-parts values
/// differ by less than `PAIRING_CONVERGENCE`; running out of radii first is
/// a divergence report.
pub fn distributional_pairing(
    pairing: &BoundaryDistributionPairing,
    phi: &BoundarySignal,
) -> Result<PairingOutcome> {
    let grid = phi.grid();
    let n = grid.n_points();
    let band = (n / 4) as i64;
    // The test function must be band-limited and the datum short enough
    // that no datum mode aliases into the test band on this grid.
    let mut spill = 0.0f64;
    for m in grid.min_mode()..grid.max_mode_exclusive() {
        if m.abs() > band {
            spill = spill.max(phi.coeff(m).norm());
        }
    }
    if spill > 1e-10 {
        return Err(Error::SpectralHeadroom(spill));
    }
    if pairing.f.degree() + 2 + band as usize > n {
        return Err(Error::SpectralHeadroom(pairing.f.degree() as f64));
    }

    let phi_samples: Vec<Complex64> = phi.samples().to_vec();
    let mut visited = Vec::with_capacity(pairing.r_sequence.len());
    let mut worst_gap = 0.0f64;
    let mut previous: Option<Complex64> = None;
    for &r in &pairing.r_sequence {
        let direct = circle_mean(&grid, r, &pairing.f, &phi_samples)?;
        // psi synthesized per radius (the 1/r factor depends on r).
        let psi = phi.map_coeffs(|l, _| {
            let source = l + 1;
            if source >= grid.min_mode() && source < grid.max_mode_exclusive() {
                l as f64 * phi.coeff(source) / r
            } else {
                Complex64::ZERO
            }
        });
        let ibp = -circle_mean(&grid, r, &pairing.antiderivative, psi.samples())?;
        worst_gap = worst_gap.max((direct - ibp).norm());
        visited.push((r, direct, ibp));
        if let Some(prev) = previous {
            if (ibp - prev).norm() < PAIRING_CONVERGENCE {
                return Ok(PairingOutcome {
                    value: ibp,
                    r_stop: r,
                    max_form_disagreement: worst_gap,
                    values: visited,
                });
            }
        }
        previous = Some(ibp);
    }
    let last_gap = match (&visited[..], previous) {
        ([.., (_, _, b2)], Some(_)) if visited.len() >= 2 => {
            (*b2 - visited[visited.len() - 2].2).norm()
        }
        _ => f64::INFINITY,
    };
    Err(Error::PairingDiverged(last_gap))
}

/// Hardy mean of the antiderivative against the Bergman-norm bound
/// `((r^p / eps)^{1/p} + eps r) ||f||_{A^p}`. Returns `(lhs, rhs)`.
pub fn antiderivative_bound_check(
    f: &PowerSeries,
    p: f64,
    eps: f64,
    r: f64,
) -> Result<(f64, f64)> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            constraint: "p >= 1",
        });
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            constraint: "0 < eps < 1",
        });
    }
    if !(0.0 < r && r < 1.0) {
        return Err(Error::RadiusOutOfRange(r));
    }
    let big_f = AnalyticFunction::from_series(f.antiderivative(), crate::function::Domain::Disk);
    let lhs = hardy_norm_mp(&big_f, p, r, 4096)?;
    let f_fn = AnalyticFunction::from_series(f.clone(), crate::function::Domain::Disk);
    let norm = bergman_norm(&f_fn, p, 128, 256)?;
    let rhs = ((r.powf(p) / eps).powf(1.0 / p) + eps * r) * norm;
    Ok((lhs, rhs))
}
