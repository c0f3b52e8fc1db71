//! The verification battery: every end-to-end invariant the `verify`
//! subcommand runs, each as a named check with a residual and a tolerance.

use crate::boundary::{antiderivative_bound_check, distributional_pairing, BoundaryDistributionPairing};
use crate::cocycle::{cocycle_identity_residual, CocycleSpec};
use crate::conformal::{make_polynomial_map, theodorsen_solve, ConformalMap, StarLikeDomain};
use crate::error::Result;
use crate::function::{AnalyticFunction, Domain};
use crate::grid::{BoundaryGrid, BoundarySignal};
use crate::robin::{
    dtn_multiplier_evolve, generator_consistency_order, lax_evolve, littlewood_bound_check,
    robin_evolve, ProblemDomain, RobinProblem,
};
use crate::semiflow::{
    angle_condition_check, boundary_angle_check_domain, bp_generator, flow_integrate,
    semigroup_residual, transplant_generator,
};
use crate::series::PowerSeries;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

/// One verification check: `pass` holds iff `residual <= tolerance`.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckOutcome {
    fn measure(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }
}

const GRID_N: usize = 256;
const FLOW_TOL: f64 = 1e-10;

fn grid() -> BoundaryGrid {
    BoundaryGrid::new(GRID_N).expect("power-of-two grid")
}

fn dilation() -> AnalyticFunction {
    AnalyticFunction::new(|z| -z, |_| -Complex64::ONE, Domain::Disk)
}

fn rotation() -> AnalyticFunction {
    AnalyticFunction::new(|z| Complex64::I * z, |_| Complex64::I, Domain::Disk)
}

fn parabolic() -> AnalyticFunction {
    AnalyticFunction::new(
        |z| (z - Complex64::ONE).powu(2),
        |z| 2.0 * (z - Complex64::ONE),
        Domain::Disk,
    )
}

fn quadratic_decay() -> AnalyticFunction {
    AnalyticFunction::new(
        |z| -z * (Complex64::ONE + z),
        |z| -Complex64::ONE - 2.0 * z,
        Domain::Disk,
    )
}

fn quadratic_domain() -> ConformalMap {
    make_polynomial_map(&[Complex64::new(0.3, 0.0)], grid()).expect("univalent coefficients")
}

/// Interior disk samples on a spiral, all inside radius `r_max`.
fn spiral_points(n: usize, r_max: f64) -> Vec<Complex64> {
    (0..n)
        .map(|i| Complex64::from_polar(r_max * (i as f64 + 0.5) / n as f64, 2.4 * i as f64))
        .collect()
}

fn monomial_problem(gen: AnalyticFunction, n: i64) -> Result<RobinProblem> {
    RobinProblem::new(
        ProblemDomain::Disk,
        gen,
        None,
        BoundarySignal::mode(grid(), n)?,
    )
}

/// Disk oracle equivalence: the weighted composition solver with the
/// radial flow must reproduce the exact `e^{-|n| t}` multiplier on every
/// resolvable data mode, within the stated runtime budget.
pub fn check_dtn_oracle_equivalence() -> Result<Vec<CheckOutcome>> {
    let started = Instant::now();
    let g = grid();
    // robin_evolve takes analytic-type data, so the probed modes are
    // 0..=32; the conjugate half is covered by lax_multiplier_agreement.
    let data = BoundarySignal::from_coeff_fn(g, |n| {
        if (0..=32).contains(&n) {
            Complex64::ONE
        } else {
            Complex64::ZERO
        }
    })?;
    let prob = RobinProblem::new(ProblemDomain::Disk, dilation(), None, data.clone())?;
    let mut worst = 0.0f64;
    for t in [0.1, 0.5, 1.0, 2.0] {
        let evolved = robin_evolve(&prob, t, FLOW_TOL)?;
        let oracle = dtn_multiplier_evolve(&data, t)?;
        worst = worst.max(evolved.max_coeff_distance(&oracle));
    }
    let elapsed = started.elapsed().as_secs_f64();
    Ok(vec![
        CheckOutcome::measure("disk_dtn_oracle_equivalence", worst, 1e-7),
        CheckOutcome::measure("disk_dtn_oracle_runtime_seconds", elapsed, 10.0),
    ])
}

/// Sampling the harmonic extension along the radial flow equals the
/// spectral multiplier on random band-limited signals.
pub fn check_lax_formula() -> Result<CheckOutcome> {
    let g = grid();
    let mut rng = StdRng::seed_from_u64(1729);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let h = BoundarySignal::from_coeff_fn(g, |n| {
            if n.abs() <= 64 {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::ZERO
            }
        })?;
        for t in [0.1, 0.5, 1.0, 2.0] {
            let a = lax_evolve(&h, t)?;
            let b = dtn_multiplier_evolve(&h, t)?;
            worst = worst.max(a.max_coeff_distance(&b));
        }
    }
    Ok(CheckOutcome::measure("lax_multiplier_agreement", worst, 1e-9))
}

/// A constant weight factors out of the evolution: coefficients follow
/// `e^{(c - n) t}` exactly.
pub fn check_constant_weight_shift() -> Result<CheckOutcome> {
    let t = 0.5;
    let mut worst = 0.0f64;
    for c in [-1.0, 0.5, 1.0] {
        let weight = AnalyticFunction::constant(Complex64::new(c, 0.0), Domain::Disk);
        for n in 0..=16i64 {
            let prob = RobinProblem::new(
                ProblemDomain::Disk,
                dilation(),
                Some(weight.clone()),
                BoundarySignal::mode(grid(), n)?,
            )?;
            let evolved = robin_evolve(&prob, t, FLOW_TOL)?;
            let expected = ((c - n as f64) * t).exp();
            worst = worst.max((evolved.coeff(n) - expected * Complex64::ONE).norm());
        }
    }
    Ok(CheckOutcome::measure("constant_weight_shift", worst, 1e-7))
}

/// Composition law of the integrated semiflows over the generator zoo,
/// including one generator transplanted to a Jordan domain.
pub fn check_semiflow_law() -> Result<CheckOutcome> {
    let k = quadratic_domain();
    let transplanted = transplant_generator(&dilation(), &k);
    let disk_points = spiral_points(20, 0.9);
    let domain_points: Vec<Complex64> = spiral_points(20, 0.9)
        .iter()
        .map(|&w| k.inverse(w))
        .collect();
    let zoo: Vec<(AnalyticFunction, &[Complex64])> = vec![
        (dilation(), &disk_points),
        (rotation(), &disk_points),
        (parabolic(), &disk_points),
        (quadratic_decay(), &disk_points),
        (transplanted, &domain_points),
    ];
    let mut worst = 0.0f64;
    for (gen, points) in &zoo {
        for s in [0.1, 0.5, 1.0] {
            for t in [0.1, 0.5, 1.0] {
                worst = worst.max(semigroup_residual(gen, s, t, points, FLOW_TOL)?);
            }
        }
    }
    Ok(CheckOutcome::measure("semiflow_composition_law", worst, 1e-7))
}

/// Multiplicative cocycle identity for the exponential, coboundary, and
/// derivative kinds over the generator zoo.
pub fn check_cocycle_law() -> Result<CheckOutcome> {
    let k = quadratic_domain();
    let transplanted = transplant_generator(&dilation(), &k);
    let disk_points = spiral_points(10, 0.8);
    let domain_points: Vec<Complex64> =
        disk_points.iter().map(|&w| k.inverse(w)).collect();
    let zoo: Vec<(AnalyticFunction, &[Complex64], Domain)> = vec![
        (dilation(), &disk_points, Domain::Disk),
        (rotation(), &disk_points, Domain::Disk),
        (parabolic(), &disk_points, Domain::Disk),
        (quadratic_decay(), &disk_points, Domain::Disk),
        (transplanted, &domain_points, Domain::Jordan),
    ];
    let mut worst = 0.0f64;
    for (gen, points, dom) in &zoo {
        let specs = vec![
            CocycleSpec::exponential(
                AnalyticFunction::constant(Complex64::new(0.7, 0.0), *dom),
                gen.clone(),
            )?,
            CocycleSpec::exponential(AnalyticFunction::identity(*dom), gen.clone())?,
            CocycleSpec::coboundary(
                AnalyticFunction::new(|z| z.exp(), |z| z.exp(), *dom),
                gen.clone(),
            ),
            CocycleSpec::derivative(gen.clone()),
        ];
        for spec in &specs {
            worst = worst.max(cocycle_identity_residual(spec, 0.5, 0.5, points, FLOW_TOL)?);
        }
    }
    Ok(CheckOutcome::measure("cocycle_identity", worst, 1e-7))
}

/// Inward-pointing boundary field for every Berkson-Porta construction,
/// on the disk and through the boundary table of a mapped domain.
pub fn check_angle_conditions() -> Result<CheckOutcome> {
    let g = grid();
    let r_probe = 0.999;
    let constructions = vec![
        bp_generator(
            AnalyticFunction::constant(Complex64::ONE, Domain::Disk),
            Complex64::ZERO,
        )?,
        bp_generator(
            AnalyticFunction::constant(Complex64::ONE, Domain::Disk),
            Complex64::ONE,
        )?,
        bp_generator(
            AnalyticFunction::constant(Complex64::ONE, Domain::Disk),
            Complex64::new(0.5, 0.0),
        )?,
        bp_generator(
            AnalyticFunction::new(
                |z| Complex64::ONE + z,
                |_| Complex64::ONE,
                Domain::Disk,
            ),
            Complex64::ZERO,
        )?,
        bp_generator(
            AnalyticFunction::constant(-Complex64::I, Domain::Disk),
            Complex64::ZERO,
        )?,
    ];
    let mut worst = f64::NEG_INFINITY;
    for bp in &constructions {
        worst = worst.max(angle_condition_check(&bp.function(), &g, r_probe)?);
    }
    let k = quadratic_domain();
    let transplanted = transplant_generator(&dilation(), &k);
    worst = worst.max(boundary_angle_check_domain(&transplanted, &k, r_probe)?);
    Ok(CheckOutcome::measure("angle_condition", worst, 1e-3))
}

/// Flow conjugacy through the map: integrating the transplanted generator
/// on the domain lands on `k^{-1}(e^{-t} k(x))`.
pub fn check_conformal_conjugacy() -> Result<CheckOutcome> {
    let star = StarLikeDomain::from_cosine_series(&[1.0, 0.2])?;
    let theodorsen = theodorsen_solve(&star, grid(), 200, 1e-13)?;
    let maps = [quadratic_domain(), theodorsen];
    let t = 1.0;
    let mut worst = 0.0f64;
    for k in &maps {
        let gen = transplant_generator(&dilation(), k);
        for &w in &spiral_points(12, 0.8) {
            let x = k.inverse(w);
            let flowed = flow_integrate(&gen, x, t, FLOW_TOL)?.endpoint;
            let expected = k.inverse((-t).exp() * w);
            worst = worst.max((flowed - expected).norm());
        }
    }
    Ok(CheckOutcome::measure("conformal_flow_conjugacy", worst, 1e-6))
}

/// Subordination bound on the weighted composition operator over a slate
/// of data, flows, horizons, and exponents; the residual is the worst
/// relative excess of the norm over the bound.
pub fn check_littlewood() -> Result<CheckOutcome> {
    let one = PowerSeries::constant(Complex64::ONE);
    let z = PowerSeries::monomial(1);
    let z2 = PowerSeries::monomial(2);
    let z3 = PowerSeries::monomial(3);
    let affine = PowerSeries::from_real(&[1.0, 1.0]);
    let even = PowerSeries::from_real(&[1.0, 0.0, 0.5]);
    let geometric: PowerSeries = PowerSeries::new(
        (0..40).map(|n| Complex64::new(0.5f64.powi(n), 0.0)).collect(),
    );
    let combos: Vec<(PowerSeries, AnalyticFunction, f64, f64)> = vec![
        (one.clone(), dilation(), 0.5, 2.0),
        (one, dilation(), 1.0, 1.0),
        (z.clone(), dilation(), 0.5, 2.0),
        (z.clone(), parabolic(), 1.0, 2.0),
        (z2.clone(), parabolic(), 0.5, 1.0),
        (affine, quadratic_decay(), 0.5, 2.0),
        (z, quadratic_decay(), 1.0, 4.0),
        (geometric, dilation(), 0.1, 2.0),
        (z3, parabolic(), 2.0, 2.0),
        (even, rotation(), 0.7, 2.0),
    ];
    let mut worst = f64::NEG_INFINITY;
    for (f, gen, t, p) in combos {
        let prob = monomial_problem(gen, 1)?;
        let (norm, bound) = littlewood_bound_check(&f, &prob, t, p)?;
        worst = worst.max(norm / bound - 1.0);
    }
    Ok(CheckOutcome::measure("littlewood_bound", worst, 1e-3))
}

/// Distributional boundary values of the Cauchy kernel: pairing against
/// `e^{-ik theta}` recovers the Taylor coefficient 1, and the direct and
/// integration-by-parts forms agree along the radius ladder.
pub fn check_distributional_pairing() -> Result<Vec<CheckOutcome>> {
    let g = grid();
    let pairing = BoundaryDistributionPairing::new(PowerSeries::truncated_geometric(180), 1.0)?;
    let mut value_worst = 0.0f64;
    let mut form_worst = 0.0f64;
    for kmode in 0..=8i64 {
        let phi = BoundarySignal::mode(g, -kmode)?;
        let outcome = distributional_pairing(&pairing, &phi)?;
        value_worst = value_worst.max((outcome.value - Complex64::ONE).norm());
        form_worst = form_worst.max(outcome.max_form_disagreement);
    }
    Ok(vec![
        CheckOutcome::measure("pairing_taylor_recovery", value_worst, 1e-6),
        CheckOutcome::measure("pairing_form_agreement", form_worst, 1e-8),
    ])
}

/// Hardy means of the antiderivative against the split Bergman bound over
/// a 20-tuple battery.
pub fn check_antiderivative_bound() -> Result<CheckOutcome> {
    let data = vec![
        PowerSeries::constant(Complex64::ONE),
        PowerSeries::monomial(1),
        PowerSeries::new(vec![
            Complex64::ZERO,
            Complex64::new(0.0, 1.0),
            Complex64::new(3.0, 0.0),
        ]),
        PowerSeries::from_real(&[1.0, 2.0, 3.0]),
        PowerSeries::truncated_geometric(60),
    ];
    let settings = [(1.0, 0.5, 0.9), (2.0, 0.5, 0.9), (1.0, 0.1, 0.99), (2.0, 0.9, 0.5)];
    let mut worst = f64::NEG_INFINITY;
    for f in &data {
        for &(p, eps, r) in &settings {
            let (lhs, rhs) = antiderivative_bound_check(f, p, eps, r)?;
            worst = worst.max(lhs - rhs);
        }
    }
    Ok(CheckOutcome::measure("antiderivative_bound", worst, 0.0))
}

/// First-order agreement between the difference quotient of the evolution
/// and the applied generator on three smooth problems.
pub fn check_generator_consistency() -> Result<CheckOutcome> {
    let t_list = [1e-2, 1e-3, 1e-4];
    let problems = vec![
        RobinProblem::new(
            ProblemDomain::Disk,
            dilation(),
            None,
            BoundarySignal::mode(grid(), 2)?,
        )?,
        RobinProblem::new(
            ProblemDomain::Disk,
            parabolic(),
            Some(AnalyticFunction::identity(Domain::Disk)),
            BoundarySignal::mode(grid(), 1)?,
        )?,
        RobinProblem::new(
            ProblemDomain::Disk,
            quadratic_decay(),
            Some(AnalyticFunction::constant(Complex64::new(0.5, 0.0), Domain::Disk)),
            BoundarySignal::mode(grid(), 1)?,
        )?,
    ];
    let mut worst = 0.0f64;
    for prob in &problems {
        let report = generator_consistency_order(prob, &t_list, FLOW_TOL)?;
        worst = worst.max((report.slope - 1.0).abs());
    }
    Ok(CheckOutcome::measure("generator_consistency_slope", worst, 0.3))
}

/// Boundary correspondence round trip for the cosine-perturbed star-like
/// domain.
pub fn check_theodorsen_round_trip() -> Result<CheckOutcome> {
    let star = StarLikeDomain::from_cosine_series(&[1.0, 0.2])?;
    let k = theodorsen_solve(&star, grid(), 200, 1e-13)?;
    let residual = k.boundary_round_trip_error()?;
    Ok(CheckOutcome::measure("theodorsen_round_trip", residual, 1e-6))
}

/// Run every check in a fixed order. Individual check failures surface in
/// the outcomes; hard errors (a solver refusing its input) abort.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    let mut outcomes = Vec::new();
    outcomes.extend(check_dtn_oracle_equivalence()?);
    outcomes.push(check_lax_formula()?);
    outcomes.push(check_constant_weight_shift()?);
    outcomes.push(check_semiflow_law()?);
    outcomes.push(check_cocycle_law()?);
    outcomes.push(check_angle_conditions()?);
    outcomes.push(check_conformal_conjugacy()?);
    outcomes.push(check_littlewood()?);
    outcomes.extend(check_distributional_pairing()?);
    outcomes.push(check_antiderivative_bound()?);
    outcomes.push(check_generator_consistency()?);
    outcomes.push(check_theodorsen_round_trip()?);
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_comparison_is_inclusive() {
        let c = CheckOutcome::measure("x", 1e-7, 1e-7);
        assert!(c.pass);
        let c = CheckOutcome::measure("x", 1.0000001e-7, 1e-7);
        assert!(!c.pass);
        let c = CheckOutcome::measure("x", f64::NAN, 1e-7);
        assert!(!c.pass);
    }

    #[test]
    fn spiral_points_stay_interior() {
        for z in spiral_points(20, 0.9) {
            assert!(z.norm() < 0.9);
        }
    }
}
