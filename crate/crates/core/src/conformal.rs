//! Conformal maps between Jordan domains and the disk: analytic inverse
//! series, Newton inversion, star-like boundary correspondence, unit normals.

use crate::error::{Error, Result};
use crate::grid::{fourier_analyze, fourier_synthesize, BoundaryGrid};
use crate::series::PowerSeries;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Magnitudes of `k'` below this are treated as a degenerate map.
const DERIV_FLOOR: f64 = 1e-10;
const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;

/// A conformal map `k: Omega -> D` carried by the Taylor series of its
/// inverse `k^{-1}: D -> Omega`, together with the boundary correspondence
/// table `theta_j -> x_j` on a grid.
///
/// Forward evaluation is Newton inversion of the series; all derivatives
/// come from exact series differentiation.
#[derive(Debug, Clone)]
pub struct ConformalMap {
    inverse: PowerSeries,
    inverse_d1: PowerSeries,
    inverse_d2: PowerSeries,
    grid: BoundaryGrid,
    boundary: Vec<Complex64>,
    sigma: Vec<f64>,
}

impl ConformalMap {
    /// Build from the Taylor series of `k^{-1}`; the boundary table is the
    /// series evaluated on the unit circle.
    pub fn from_inverse_series(inverse: PowerSeries, grid: BoundaryGrid) -> Result<Self> {
        let boundary: Vec<Complex64> = (0..grid.n_points())
            .map(|j| inverse.eval(Complex64::from_polar(1.0, grid.angle(j))))
            .collect();
        let sigma = boundary
            .iter()
            .map(|x| x.arg().rem_euclid(2.0 * PI))
            .collect();
        Self::assemble(inverse, grid, boundary, sigma)
    }

    /// Build from a converged boundary correspondence: `sigma[j]` is the
    /// polar angle of the boundary point `table[j]` reached from disk angle
    /// `theta_j`. The interior rule is the Fourier series of the table.
    pub fn from_boundary_table(
        sigma: Vec<f64>,
        table: Vec<Complex64>,
        grid: BoundaryGrid,
    ) -> Result<Self> {
        if table.len() != grid.n_points() || sigma.len() != grid.n_points() {
            return Err(Error::SizeMismatch {
                expected: grid.n_points(),
                got: table.len(),
            });
        }
        let coeffs = fourier_analyze(grid, &table)?;
        // Boundary values of a map holomorphic across the circle have
        // negligible negative modes; keep the analytic half as the series.
        let taylor: Vec<Complex64> = (0..grid.max_mode_exclusive())
            .map(|n| coeffs[grid.mode_index(n).expect("analytic half is stored")])
            .collect();
        Self::assemble(PowerSeries::new(taylor), grid, table, sigma)
    }

    pub fn identity(grid: BoundaryGrid) -> Self {
        Self::from_inverse_series(PowerSeries::monomial(1), grid)
            .expect("identity series is well formed")
    }

    fn assemble(
        inverse: PowerSeries,
        grid: BoundaryGrid,
        boundary: Vec<Complex64>,
        sigma: Vec<f64>,
    ) -> Result<Self> {
        let inverse_d1 = inverse.derivative();
        let inverse_d2 = inverse_d1.derivative();
        for (j, x) in boundary.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::ProbeFailure(*x));
            }
            let d = inverse_d1.eval(Complex64::from_polar(1.0, grid.angle(j)));
            // |k'(x_j)| = 1/|(k^{-1})'(w_j)| must stay above the floor.
            if d.norm() > 1.0 / DERIV_FLOOR {
                return Err(Error::DegenerateMap(1.0 / d.norm()));
            }
        }
        Ok(Self {
            inverse,
            inverse_d1,
            inverse_d2,
            grid,
            boundary,
            sigma,
        })
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn inverse_series(&self) -> &PowerSeries {
        &self.inverse
    }

    /// `k^{-1}(w)`.
    pub fn inverse(&self, w: Complex64) -> Complex64 {
        self.inverse.eval(w)
    }

    /// `(k^{-1})'(w)`.
    pub fn inverse_deriv(&self, w: Complex64) -> Complex64 {
        self.inverse_d1.eval(w)
    }

    /// `k(x)` by damped Newton iteration on `k^{-1}(w) = x`. The iterate
    /// is kept in the closed unit disk: the solution lives there, the
    /// truncated inverse series is only trustworthy there, and projection
    /// onto the disk is non-expansive.
    pub fn forward(&self, x: Complex64) -> Result<Complex64> {
        let clamp = |w: Complex64| {
            let r = w.norm();
            if r > 1.0 {
                w / r
            } else {
                w
            }
        };
        let mut w = clamp(x);
        let mut res = (self.inverse.eval(w) - x).norm();
        for _ in 0..NEWTON_MAX_ITER {
            if res < NEWTON_TOL {
                return Ok(w);
            }
            let d = self.inverse_d1.eval(w);
            if d.norm() < 1e-14 {
                break;
            }
            let full = (self.inverse.eval(w) - x) / d;
            // Damping: halve the step until the residual does not grow.
            let mut lambda = 1.0;
            loop {
                let trial = clamp(w - lambda * full);
                let trial_res = (self.inverse.eval(trial) - x).norm();
                if trial_res <= res || lambda < 1.0 / 1024.0 {
                    w = trial;
                    res = trial_res;
                    break;
                }
                lambda *= 0.5;
            }
        }
        if res < NEWTON_TOL {
            Ok(w)
        } else {
            Err(Error::InversionFailed {
                target: x,
                residual: res,
            })
        }
    }

    /// `(k(x), k'(x), k''(x))` in one inversion.
    ///
    /// From `k(k^{-1}(w)) = w`: `k' = 1/(k^{-1})'` and
    /// `k'' = -(k^{-1})'' * k'^3`, both evaluated at `w = k(x)`.
    pub fn forward_jet(&self, x: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
        let w = self.forward(x)?;
        let d1 = self.inverse_d1.eval(w);
        if d1.norm() < 1e-14 || d1.norm() > 1.0 / DERIV_FLOOR {
            return Err(Error::DegenerateMap(1.0 / d1.norm()));
        }
        let kp = d1.inv();
        let kpp = -self.inverse_d2.eval(w) * kp * kp * kp;
        Ok((w, kp, kpp))
    }

    pub fn forward_deriv(&self, x: Complex64) -> Result<Complex64> {
        self.forward_jet(x).map(|(_, kp, _)| kp)
    }

    pub fn boundary_points(&self) -> &[Complex64] {
        &self.boundary
    }

    pub fn boundary_point(&self, j: usize) -> Complex64 {
        self.boundary[j]
    }

    /// Boundary polar angle `sigma_j` of the point reached from `theta_j`.
    pub fn boundary_angle(&self, j: usize) -> f64 {
        self.sigma[j]
    }

    /// Outward unit normal at the tabulated boundary node `j`:
    /// `nu = (k/k')|k'|` evaluated through the inverse derivative, which
    /// gives `nu = w (k^{-1})'(w)/|(k^{-1})'(w)|` at `w = e^{i theta_j}`.
    pub fn unit_normal(&self, j: usize) -> Result<Complex64> {
        let w = Complex64::from_polar(1.0, self.grid.angle(j));
        let d = self.inverse_d1.eval(w);
        if d.norm() < 1e-14 || d.norm() > 1.0 / DERIV_FLOOR {
            return Err(Error::DegenerateMap(1.0 / d.norm()));
        }
        Ok(w * d / d.norm())
    }

    /// Max over the table of `|k(x_j) - e^{i theta_j}|`.
    pub fn boundary_round_trip_error(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (j, &x) in self.boundary.iter().enumerate() {
            let w = self.forward(x)?;
            let target = Complex64::from_polar(1.0, self.grid.angle(j));
            worst = worst.max((w - target).norm());
        }
        Ok(worst)
    }

    /// Max of `|k(k^{-1}(w)) - w|` over `n` spiral interior samples.
    pub fn interior_round_trip_error(&self, n: usize) -> Result<f64> {
        let mut worst = 0.0f64;
        for i in 0..n {
            let r = 0.95 * (i as f64 + 0.5) / n as f64;
            let w = Complex64::from_polar(r, 2.4 * i as f64);
            let back = self.forward(self.inverse(w))?;
            worst = worst.max((back - w).norm());
        }
        Ok(worst)
    }
}

/// Map with inverse `k^{-1}(w) = w + sum_{j>=2} c_j w^j`. The coefficient
/// slice starts at `c_2`. Univalence gate: `sum j |c_j| < 1`.
pub fn make_polynomial_map(higher: &[Complex64], grid: BoundaryGrid) -> Result<ConformalMap> {
    let mass: f64 = higher
        .iter()
        .enumerate()
        .map(|(i, c)| (i + 2) as f64 * c.norm())
        .sum();
    if mass >= 1.0 {
        return Err(Error::NotUnivalent(mass));
    }
    let mut coeffs = vec![Complex64::ZERO, Complex64::ONE];
    coeffs.extend_from_slice(higher);
    ConformalMap::from_inverse_series(PowerSeries::new(coeffs), grid)
}

/// Jordan domain `{ r e^{i theta} : r < rho(theta) }` given by a positive
/// smooth periodic radius function.
#[derive(Clone)]
pub struct StarLikeDomain {
    rho: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for StarLikeDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StarLikeDomain").finish_non_exhaustive()
    }
}

impl StarLikeDomain {
    pub fn from_fn<F>(rho: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let dom = Self { rho: Arc::new(rho) };
        dom.check_positive()?;
        Ok(dom)
    }

    /// `rho(theta) = a_0 + sum_m a_m cos(m theta)`.
    pub fn from_cosine_series(a: &[f64]) -> Result<Self> {
        let a = a.to_vec();
        Self::from_fn(move |theta| {
            a.iter()
                .enumerate()
                .map(|(m, &c)| c * (m as f64 * theta).cos())
                .sum()
        })
    }

    /// Radius samples at the angles of `grid`, extended everywhere by
    /// trigonometric interpolation (real part of the Fourier sum; the
    /// Nyquist mode contributes a pure cosine).
    pub fn from_samples(samples: &[f64], grid: BoundaryGrid) -> Result<Self> {
        let complex: Vec<Complex64> = samples
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        let coeffs = fourier_analyze(grid, &complex)?;
        let min_mode = grid.min_mode();
        Self::from_fn(move |theta| {
            let mut acc = 0.0;
            for (idx, c) in coeffs.iter().enumerate() {
                let mode = min_mode + idx as i64;
                if mode == min_mode {
                    acc += c.re * (min_mode.unsigned_abs() as f64 * theta).cos();
                } else {
                    acc += (c * Complex64::from_polar(1.0, mode as f64 * theta)).re;
                }
            }
            acc
        })
    }

    pub fn rho(&self, theta: f64) -> f64 {
        (self.rho)(theta)
    }

    fn check_positive(&self) -> Result<()> {
        let mut min = f64::INFINITY;
        for j in 0..1024 {
            min = min.min(self.rho(2.0 * PI * j as f64 / 1024.0));
        }
        if !min.is_finite() || min <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: min,
                constraint: "min rho > 0 on [0, 2pi)",
            });
        }
        Ok(())
    }
}

/// Periodic conjugation: Fourier multiplier `-i sgn(n)` on real samples.
/// Mean and Nyquist modes are annihilated, so the result has zero mean.
pub fn conjugate_function(grid: &BoundaryGrid, samples: &[f64]) -> Result<Vec<f64>> {
    let complex: Vec<Complex64> = samples
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let mut coeffs = fourier_analyze(*grid, &complex)?;
    for (idx, n) in grid.modes().enumerate() {
        coeffs[idx] = if n == 0 || n == grid.min_mode() {
            Complex64::ZERO
        } else if n > 0 {
            -Complex64::I * coeffs[idx]
        } else {
            Complex64::I * coeffs[idx]
        };
    }
    let out = fourier_synthesize(*grid, &coeffs)?;
    Ok(out.iter().map(|c| c.re).collect())
}

/// Boundary correspondence for a star-like domain by fixed-point iteration:
/// `sigma(theta) = theta + K[log rho(sigma(theta))]` with `K` the periodic
/// conjugation. Returns the map with table `x_j = rho(sigma_j) e^{i sigma_j}`
/// and the interior rule from the table's analytic Fourier half.
pub fn theodorsen_solve(
    dom: &StarLikeDomain,
    grid: BoundaryGrid,
    max_iter: usize,
    tol: f64,
) -> Result<ConformalMap> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            constraint: "tol > 0",
        });
    }
    let n = grid.n_points();
    let mut sigma: Vec<f64> = (0..n).map(|j| grid.angle(j)).collect();
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let log_rho: Vec<f64> = sigma.iter().map(|&s| dom.rho(s).ln()).collect();
        let conj = conjugate_function(&grid, &log_rho)?;
        residual = 0.0;
        for j in 0..n {
            let next = grid.angle(j) + conj[j];
            residual = residual.max((next - sigma[j]).abs());
            sigma[j] = next;
        }
        if residual < tol {
            let table: Vec<Complex64> = sigma
                .iter()
                .map(|&s| Complex64::from_polar(dom.rho(s), s))
                .collect();
            return ConformalMap::from_boundary_table(sigma, table, grid);
        }
    }
    Err(Error::MappingNotConverged {
        iters: max_iter,
        residual,
    })
}
