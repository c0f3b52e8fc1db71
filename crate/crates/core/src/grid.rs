//! Uniform boundary grids on the unit circle, the discrete Fourier pair,
//! boundary signals, and harmonic (Poisson) extension.
//!
//! A signal lives on the grid `theta_j = 2*pi*j/N` and carries Fourier
//! coefficients indexed by modes `n in [-N/2, N/2)`. Samples and
//! coefficients are two views of the same data; whichever is missing is
//! derived lazily and cached.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{num_complex::Complex as FftComplex, FftPlanner};

use crate::error::{Error, Result};

/// Uniform angular grid with `N` points on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryGrid {
    n_points: usize,
}

impl BoundaryGrid {
    /// `n_points` must be a power of two, at least 8.
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGridSize(n_points));
        }
        Ok(Self { n_points })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid angle `theta_j = 2*pi*j/N`.
    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * (j as f64) / (self.n_points as f64)
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.angle(j))
    }

    /// Boundary point `e^{i theta_j}`.
    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(j))
    }

    /// Lowest mode index, `-N/2`.
    pub fn min_mode(&self) -> i64 {
        -((self.n_points / 2) as i64)
    }

    /// One past the highest mode index, `N/2`.
    pub fn max_mode_exclusive(&self) -> i64 {
        (self.n_points / 2) as i64
    }

    /// Modes in storage order `-N/2, ..., N/2 - 1`.
    pub fn modes(&self) -> impl Iterator<Item = i64> + '_ {
        self.min_mode()..self.max_mode_exclusive()
    }

    /// Storage slot of mode `n`.
    pub fn mode_index(&self, n: i64) -> Option<usize> {
        if n < self.min_mode() || n >= self.max_mode_exclusive() {
            None
        } else {
            Some((n - self.min_mode()) as usize)
        }
    }
}

fn to_fft(v: &[Complex64]) -> Vec<FftComplex<f64>> {
    v.iter().map(|c| FftComplex::new(c.re, c.im)).collect()
}

fn from_fft(v: Vec<FftComplex<f64>>) -> Vec<Complex64> {
    v.into_iter().map(|c| Complex64::new(c.re, c.im)).collect()
}

/// Discrete Fourier coefficients `h_n = (1/N) sum_j h_j e^{-i n theta_j}`
/// for `n in [-N/2, N/2)`, returned in storage order.
pub fn fourier_analyze(grid: BoundaryGrid, samples: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = grid.len();
    if samples.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: samples.len(),
        });
    }
    let mut buf = to_fft(samples);
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bins = from_fft(buf);
    // FFT bin k holds mode k for k < N/2 and mode k - N for k >= N/2.
    let scale = 1.0 / n as f64;
    Ok(grid
        .modes()
        .map(|m| bins[m.rem_euclid(n as i64) as usize] * scale)
        .collect())
}

/// Inverse of [`fourier_analyze`]: `h_j = sum_n h_n e^{i n theta_j}`.
pub fn fourier_synthesize(grid: BoundaryGrid, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = grid.len();
    if coeffs.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: coeffs.len(),
        });
    }
    let mut bins = vec![FftComplex::new(0.0, 0.0); n];
    for (slot, m) in grid.modes().enumerate() {
        let c = coeffs[slot];
        bins[m.rem_euclid(n as i64) as usize] = FftComplex::new(c.re, c.im);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut bins);
    Ok(from_fft(bins))
}

/// Complex samples on a [`BoundaryGrid`] together with their Fourier
/// coefficients. Immutable; the derived representation is computed on
/// first use.
#[derive(Debug, Clone)]
pub struct BoundarySignal {
    grid: BoundaryGrid,
    samples: OnceLock<Arc<Vec<Complex64>>>,
    coeffs: OnceLock<Arc<Vec<Complex64>>>,
}

impl BoundarySignal {
    pub fn from_samples(grid: BoundaryGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        let cell = OnceLock::new();
        cell.set(Arc::new(samples)).ok();
        Ok(Self {
            grid,
            samples: cell,
            coeffs: OnceLock::new(),
        })
    }

    pub fn from_coeffs(grid: BoundaryGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        let cell = OnceLock::new();
        cell.set(Arc::new(coeffs)).ok();
        Ok(Self {
            grid,
            samples: OnceLock::new(),
            coeffs: cell,
        })
    }

    /// Signal with a single unit mode `e^{i n theta}`.
    pub fn mode(grid: BoundaryGrid, n: i64) -> Result<Self> {
        let slot = grid.mode_index(n).ok_or(Error::InvalidParameter {
            name: "mode",
            value: n as f64,
            constraint: "-N/2 <= n < N/2",
        })?;
        let mut coeffs = vec![Complex64::ZERO; grid.len()];
        coeffs[slot] = Complex64::ONE;
        Self::from_coeffs(grid, coeffs)
    }

    /// Signal with coefficient `f(n)` at each mode `n`.
    pub fn from_coeff_fn(grid: BoundaryGrid, mut f: impl FnMut(i64) -> Complex64) -> Result<Self> {
        let coeffs = grid.modes().map(&mut f).collect();
        Self::from_coeffs(grid, coeffs)
    }

    pub fn grid(&self) -> BoundaryGrid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        self.samples
            .get_or_init(|| {
                let coeffs = self.coeffs.get().expect("signal holds at least one view");
                Arc::new(fourier_synthesize(self.grid, coeffs).expect("sizes agree"))
            })
            .as_slice()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        self.coeffs
            .get_or_init(|| {
                let samples = self.samples.get().expect("signal holds at least one view");
                Arc::new(fourier_analyze(self.grid, samples).expect("sizes agree"))
            })
            .as_slice()
    }

    /// Coefficient of mode `n`, zero outside the stored band.
    pub fn coeff(&self, n: i64) -> Complex64 {
        match self.grid.mode_index(n) {
            Some(slot) => self.coeffs()[slot],
            None => Complex64::ZERO,
        }
    }

    /// New signal with coefficients `f(n, c_n)`.
    pub fn map_coeffs(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        let coeffs = self
            .grid
            .modes()
            .zip(self.coeffs())
            .map(|(n, &c)| f(n, c))
            .collect();
        Self::from_coeffs(self.grid, coeffs).expect("same grid")
    }

    /// Largest coefficient magnitude on negative modes.
    pub fn negative_mode_magnitude(&self) -> f64 {
        self.grid
            .modes()
            .zip(self.coeffs())
            .filter(|(n, _)| *n < 0)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest sample magnitude.
    pub fn sup_norm(&self) -> f64 {
        self.samples().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference against `other` (same grid).
    pub fn max_coeff_distance(&self, other: &BoundarySignal) -> f64 {
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Harmonic extension of `h` evaluated at `r e^{i theta}`:
/// `u(r e^{i theta}) = sum_n h_n r^{|n|} e^{i n theta}`.
///
/// Solves the Dirichlet problem for the Laplacian on the disk with
/// boundary data `h` (mode `n` extends to `r^{|n|} e^{i n theta}`).
pub fn poisson_extend(h: &BoundarySignal, r: f64, theta: f64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange(r));
    }
    let mut acc = Complex64::ZERO;
    for (n, &c) in h.grid().modes().zip(h.coeffs()) {
        if c == Complex64::ZERO {
            continue;
        }
        let radial = r.powi(n.unsigned_abs() as i32);
        acc += c * radial * Complex64::from_polar(1.0, n as f64 * theta);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(BoundaryGrid::new(0).is_err());
        assert!(BoundaryGrid::new(4).is_err());
        assert!(BoundaryGrid::new(100).is_err());
        assert!(BoundaryGrid::new(8).is_ok());
        assert!(BoundaryGrid::new(1024).is_ok());
    }

    #[test]
    fn angles_strictly_increasing_in_range() {
        let grid = BoundaryGrid::new(16).unwrap();
        let angles: Vec<f64> = grid.angles().collect();
        assert!(angles.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(angles[0], 0.0);
        assert!(*angles.last().unwrap() < 2.0 * PI);
    }

    #[test]
    fn constant_signal_has_only_mean_mode() {
        let grid = BoundaryGrid::new(8).unwrap();
        let coeffs = fourier_analyze(grid, &[Complex64::ONE; 8]).unwrap();
        for (n, c) in grid.modes().zip(&coeffs) {
            let expected = if n == 0 { 1.0 } else { 0.0 };
            assert!((c - expected).norm() < 1e-14, "mode {n}: {c}");
        }
    }

    #[test]
    fn pure_mode_one() {
        let grid = BoundaryGrid::new(8).unwrap();
        let samples: Vec<Complex64> = grid
            .angles()
            .map(|t| Complex64::from_polar(1.0, t))
            .collect();
        let coeffs = fourier_analyze(grid, &samples).unwrap();
        for (n, c) in grid.modes().zip(&coeffs) {
            let expected = if n == 1 { 1.0 } else { 0.0 };
            assert!((c - expected).norm() < 1e-14, "mode {n}: {c}");
        }
    }

    #[test]
    fn synthesize_single_coefficients() {
        let grid = BoundaryGrid::new(8).unwrap();
        let constant = BoundarySignal::mode(grid, 0).unwrap();
        for &s in constant.samples() {
            assert!((s - Complex64::ONE).norm() < 1e-14);
        }
        let one = BoundarySignal::mode(grid, 1).unwrap();
        for (j, &s) in one.samples().iter().enumerate() {
            assert!((s - grid.point(j)).norm() < 1e-14);
        }
    }

    #[test]
    fn analyze_length_mismatch_is_error() {
        let grid = BoundaryGrid::new(8).unwrap();
        assert!(matches!(
            fourier_analyze(grid, &[Complex64::ONE; 7]),
            Err(Error::SizeMismatch { expected: 8, got: 7 })
        ));
        assert!(fourier_synthesize(grid, &[Complex64::ONE; 9]).is_err());
    }

    #[test]
    fn poisson_mode_one_is_z() {
        let grid = BoundaryGrid::new(8).unwrap();
        let h = BoundarySignal::mode(grid, 1).unwrap();
        let u = poisson_extend(&h, 0.5, 0.0).unwrap();
        assert!((u - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn poisson_center_is_mean() {
        let grid = BoundaryGrid::new(32).unwrap();
        let samples: Vec<Complex64> = grid
            .angles()
            .map(|t| c(t.cos() + 0.25, 0.7 * (2.0 * t).sin()))
            .collect();
        let h = BoundarySignal::from_samples(grid, samples).unwrap();
        for theta in [0.0, 1.0, 2.5] {
            let u = poisson_extend(&h, 0.0, theta).unwrap();
            assert!((u - h.coeff(0)).norm() < 1e-14);
        }
    }

    #[test]
    fn poisson_cos_theta_closed_form() {
        // cos(theta) extends to r*cos(theta).
        let grid = BoundaryGrid::new(64).unwrap();
        let samples: Vec<Complex64> = grid.angles().map(|t| c(t.cos(), 0.0)).collect();
        let h = BoundarySignal::from_samples(grid, samples).unwrap();
        let u = poisson_extend(&h, 0.7, PI / 3.0).unwrap();
        assert!((u - c(0.35, 0.0)).norm() < 1e-12, "{u}");
    }

    #[test]
    fn poisson_rejects_radius_one() {
        let grid = BoundaryGrid::new(8).unwrap();
        let h = BoundarySignal::mode(grid, 0).unwrap();
        assert!(matches!(
            poisson_extend(&h, 1.0, 0.0),
            Err(Error::RadiusOutOfRange(_))
        ));
    }

    #[test]
    fn poisson_extension_is_discretely_harmonic() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let grid = BoundaryGrid::new(64).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        let h = BoundarySignal::from_coeff_fn(grid, |n| {
            if n.abs() <= 8 {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::ZERO
            }
        })
        .unwrap();
        let at = |z: Complex64| poisson_extend(&h, z.norm(), z.arg()).unwrap();
        let step = 1e-3;
        let sup = h.sup_norm();
        for z0 in [c(0.3, 0.1), c(-0.5, 0.4), c(0.0, -0.6)] {
            let stencil = at(z0 + step * Complex64::ONE)
                + at(z0 - step * Complex64::ONE)
                + at(z0 + step * Complex64::I)
                + at(z0 - step * Complex64::I)
                - 4.0 * at(z0);
            let laplacian = stencil / (step * step);
            assert!(
                laplacian.norm() <= 1e-4 * sup,
                "laplacian {} at {z0}",
                laplacian.norm()
            );
        }
    }

    proptest::proptest! {
        #[test]
        fn fourier_round_trip_over_all_grid_sizes(
            size_pow in 3u32..=10,
            seed in proptest::prelude::any::<u64>(),
        ) {
            use rand::rngs::StdRng;
            use rand::{Rng, SeedableRng};
            let grid = BoundaryGrid::new(1usize << size_pow).unwrap();
            let mut rng = StdRng::seed_from_u64(seed);
            let samples: Vec<Complex64> = (0..grid.n_points())
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let coeffs = fourier_analyze(grid, &samples).unwrap();
            let back = fourier_synthesize(grid, &coeffs).unwrap();
            let scale = samples.iter().map(|s| s.norm()).fold(1.0f64, f64::max);
            for (a, b) in samples.iter().zip(&back) {
                proptest::prop_assert!((a - b).norm() <= 1e-12 * scale);
            }
        }
    }
}
