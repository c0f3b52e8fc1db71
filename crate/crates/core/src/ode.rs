//! Adaptive Dormand-Prince 5(4) integrator on a three-component complex state.

use crate::error::Result;
use num_complex::Complex64;

/// State layout used by the flow integrators: `[z, v, w]` where `z` is the
/// orbit point, `v` the variational factor and `w` the accumulated weight
/// integral.
pub type State = [Complex64; 3];

/// Outcome of one integration. `completed` is false when the step size
/// underflowed or the step budget ran out before `t_end`; `t_reached` and
/// `y` then hold the last accepted point.
#[derive(Debug, Clone)]
pub struct OdeOutcome {
    pub y: State,
    pub t_reached: f64,
    pub steps: usize,
    pub est_error: f64,
    pub completed: bool,
}

const MAX_STEPS: usize = 1_000_000;

// Stage abscissae are not stored: the integrated systems are autonomous.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Difference between the fifth and the embedded fourth order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn axpy(y: &State, h: f64, coeffs: &[f64], k: &[State]) -> State {
    let mut out = *y;
    for (c, ki) in coeffs.iter().zip(k) {
        if *c == 0.0 {
            continue;
        }
        for i in 0..3 {
            out[i] += h * c * ki[i];
        }
    }
    out
}

/// Integrate the autonomous system `y' = rhs(y)` from `0` to `t_end >= 0`
/// with absolute and relative tolerance both equal to `tol`.
///
/// `project` runs after every accepted step and may adjust the state (or
/// reject it); the flow layer uses it to pin orbits inside the closed disk.
pub fn dopri5<F, P>(rhs: F, y0: State, t_end: f64, tol: f64, mut project: P) -> Result<OdeOutcome>
where
    F: Fn(&State) -> State,
    P: FnMut(&mut State, f64) -> Result<()>,
{
    if t_end == 0.0 {
        return Ok(OdeOutcome {
            y: y0,
            t_reached: 0.0,
            steps: 0,
            est_error: 0.0,
            completed: true,
        });
    }

    let scale = |y: &State, ynew: &State, i: usize| -> f64 {
        tol + tol * y[i].norm().max(ynew[i].norm())
    };

    let mut y = y0;
    let mut t = 0.0;
    let mut k1 = rhs(&y);
    // Crude first step from the ratio of state to slope magnitudes; the
    // controller corrects it within a step or two.
    let mut h = {
        let d0: f64 = y.iter().map(|c| c.norm()).sum::<f64>().max(1e-4);
        let d1: f64 = k1.iter().map(|c| c.norm()).sum::<f64>().max(1e-10);
        (0.01 * d0 / d1).min(t_end).max(1e-10)
    };
    let mut steps = 0;
    let mut est_error: f64 = 0.0;

    while t < t_end {
        if steps >= MAX_STEPS {
            return Ok(OdeOutcome {
                y,
                t_reached: t,
                steps,
                est_error,
                completed: false,
            });
        }
        if h < 1e-14 * t_end.max(1.0) {
            return Ok(OdeOutcome {
                y,
                t_reached: t,
                steps,
                est_error,
                completed: false,
            });
        }
        if t + h > t_end {
            h = t_end - t;
        }

        let mut k = [k1, [Complex64::ZERO; 3], [Complex64::ZERO; 3], [Complex64::ZERO; 3], [Complex64::ZERO; 3], [Complex64::ZERO; 3], [Complex64::ZERO; 3]];
        for s in 0..6 {
            let ys = axpy(&y, h, &A[s][..=s], &k[..=s]);
            k[s + 1] = rhs(&ys);
        }
        // FSAL: stage 7 state is the fifth order solution.
        let ynew = axpy(&y, h, &A[5], &k[..6]);

        let mut err_sq = 0.0;
        // Cross-indexing a fixed-size stage tensor; an iterator form would
        // obscure the stencil.
        #[allow(clippy::needless_range_loop)]
        for i in 0..3 {
            let mut e = Complex64::ZERO;
            for (s, es) in E.iter().enumerate() {
                e += *es * k[s][i];
            }
            let sc = scale(&y, &ynew, i);
            let r = (h * e).norm() / sc;
            err_sq += r * r;
        }
        let err = (err_sq / 3.0).sqrt();

        if err <= 1.0 {
            t += h;
            y = ynew;
            project(&mut y, t)?;
            k1 = rhs(&y);
            steps += 1;
            est_error = est_error.max(err * tol);
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }

    Ok(OdeOutcome {
        y,
        t_reached: t,
        steps,
        est_error,
        completed: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_project(_: &mut State, _: f64) -> Result<()> {
        Ok(())
    }

    #[test]
    fn exponential_decay_matches_closed_form() {
        let rhs = |y: &State| [-y[0], -y[1], -y[2]];
        let y0 = [Complex64::ONE, Complex64::ONE, Complex64::ONE];
        let out = dopri5(rhs, y0, 1.0, 1e-10, no_project).unwrap();
        assert!(out.completed);
        let exact = Complex64::new((-1.0f64).exp(), 0.0);
        for c in out.y {
            assert!((c - exact).norm() < 1e-9);
        }
        assert!(out.est_error <= 1e-10);
        assert!(out.steps > 0);
    }

    #[test]
    fn riccati_blowup_truncated_before_pole() {
        // y' = y^2, y(0) = 0.5 blows up at t = 2; at t = 1 the value is 1.
        let rhs = |y: &State| [y[0] * y[0], Complex64::ZERO, Complex64::ZERO];
        let y0 = [Complex64::new(0.5, 0.0), Complex64::ZERO, Complex64::ZERO];
        let out = dopri5(rhs, y0, 1.0, 1e-11, no_project).unwrap();
        assert!(out.completed);
        assert!((out.y[0] - Complex64::ONE).norm() < 1e-9);
    }

    #[test]
    fn rotation_preserves_modulus() {
        let rhs = |y: &State| [Complex64::I * y[0], Complex64::ZERO, Complex64::ZERO];
        let y0 = [Complex64::new(0.6, 0.3), Complex64::ZERO, Complex64::ZERO];
        let out = dopri5(rhs, y0, 10.0, 1e-10, no_project).unwrap();
        assert!((out.y[0].norm() - y0[0].norm()).abs() < 1e-8);
    }

    #[test]
    fn zero_horizon_is_exact() {
        let rhs = |y: &State| [y[0], y[1], y[2]];
        let y0 = [Complex64::new(0.1, 0.2), Complex64::ONE, Complex64::ZERO];
        let out = dopri5(rhs, y0, 0.0, 1e-10, no_project).unwrap();
        assert_eq!(out.steps, 0);
        assert_eq!(out.y[0], y0[0]);
    }

    #[test]
    fn projection_hook_can_fail() {
        let rhs = |y: &State| [y[0], Complex64::ZERO, Complex64::ZERO];
        let y0 = [Complex64::ONE, Complex64::ZERO, Complex64::ZERO];
        let res = dopri5(rhs, y0, 1.0, 1e-8, |_, _| {
            Err(crate::error::Error::RadiusOutOfRange(2.0))
        });
        assert!(res.is_err());
    }
}
