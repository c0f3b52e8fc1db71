//! Orchestration: build library objects from a parsed config, run the
//! requested operation, and write deterministic CSV artifacts.

use crate::config::{
    ConfigError, DataSpec, DomainSpec, GeneratorSpec, RunConfig, Subcommand, WeightSpec,
};
use num_complex::Complex64;
use std::fmt;
use std::path::{Path, PathBuf};
use steklov::boundary::{distributional_pairing, BoundaryDistributionPairing};
use steklov::conformal::{make_polynomial_map, theodorsen_solve, ConformalMap, StarLikeDomain};
use steklov::robin::{robin_evolve, ProblemDomain, RobinProblem};
use steklov::semiflow::{bp_generator, flow_integrate, transplant_generator};
use steklov::verify;
use steklov::{AnalyticFunction, BoundaryGrid, BoundarySignal, Domain, Error, PowerSeries};

pub enum CliError {
    Config(ConfigError),
    Core(Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Exit codes: 1 for configuration problems, 2 for numerical failures,
/// 3 for violated mathematical invariants.
pub fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Config(_) => 1,
        CliError::Io(_) => 2,
        CliError::Core(core) => core_exit_code(core),
    }
}

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidGenerator { .. }
        | Error::AngleConditionViolated { .. }
        | Error::InvarianceViolation { .. }
        | Error::NotUnivalent(_)
        | Error::NonAnalyticData(_)
        | Error::SpectralHeadroom(_)
        | Error::PairingDiverged(_)
        | Error::DenjoyWolffDisagreement(_) => 3,
        Error::NodeIntegration { source, .. } => core_exit_code(source),
        _ => 2,
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn build_generator(spec: &GeneratorSpec) -> Result<AnalyticFunction, Error> {
    match spec {
        GeneratorSpec::Dilation => Ok(AnalyticFunction::new(
            |z| -z,
            |_| -Complex64::ONE,
            Domain::Disk,
        )),
        GeneratorSpec::Rotation => Ok(AnalyticFunction::new(
            |z| Complex64::I * z,
            |_| Complex64::I,
            Domain::Disk,
        )),
        GeneratorSpec::Parabolic => Ok(AnalyticFunction::new(
            |z| (z - Complex64::ONE).powu(2),
            |z| 2.0 * (z - Complex64::ONE),
            Domain::Disk,
        )),
        GeneratorSpec::Bp { f, b } => {
            let herglotz = AnalyticFunction::constant(*f, Domain::Disk);
            Ok(bp_generator(herglotz, *b)?.function())
        }
        GeneratorSpec::Custom(coeffs) => Ok(AnalyticFunction::from_series(
            PowerSeries::new(coeffs.clone()),
            Domain::Disk,
        )),
    }
}

fn build_weight(spec: &WeightSpec) -> Option<AnalyticFunction> {
    match spec {
        WeightSpec::Zero => None,
        WeightSpec::Constant(c) => Some(AnalyticFunction::constant(*c, Domain::Disk)),
        WeightSpec::Series(coeffs) => Some(AnalyticFunction::from_series(
            PowerSeries::new(coeffs.clone()),
            Domain::Disk,
        )),
    }
}

fn build_data(spec: &DataSpec, grid: BoundaryGrid) -> Result<BoundarySignal, Error> {
    match spec {
        DataSpec::Monomial(n) => BoundarySignal::mode(grid, *n),
        DataSpec::Coeffs(coeffs) => {
            let list = coeffs.clone();
            BoundarySignal::from_coeff_fn(grid, |n| {
                if n >= 0 && (n as usize) < list.len() {
                    list[n as usize]
                } else {
                    Complex64::ZERO
                }
            })
        }
        DataSpec::NamedDecay => BoundarySignal::from_coeff_fn(grid, |n| {
            if (0..=12).contains(&n) {
                Complex64::new(0.5f64.powi(n as i32), 0.0)
            } else {
                Complex64::ZERO
            }
        }),
    }
}

fn build_map(spec: &DomainSpec, grid: BoundaryGrid) -> Result<Option<ConformalMap>, Error> {
    match spec {
        DomainSpec::Disk => Ok(None),
        DomainSpec::Poly(higher) => Ok(Some(make_polynomial_map(higher, grid)?)),
        DomainSpec::StarCos(a) => {
            let dom = StarLikeDomain::from_cosine_series(a)?;
            Ok(Some(theodorsen_solve(&dom, grid, 200, 1e-13)?))
        }
    }
}

/// Compose a disk-side weight with the forward map so it lives on the
/// domain; inversion failures surface as NaN and fail the integrator step.
fn lift_weight(weight: AnalyticFunction, k: &ConformalMap) -> AnalyticFunction {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let (we, ke) = (weight.clone(), k.clone());
    let (wd, kd) = (weight, k.clone());
    AnalyticFunction::new(
        move |x| match ke.forward(x) {
            Ok(w) => we.eval(w),
            Err(_) => nan,
        },
        move |x| match kd.forward_jet(x) {
            Ok((w, kp, _)) => wd.deriv(w) * kp,
            Err(_) => nan,
        },
        Domain::Jordan,
    )
}

fn artifact_path(out_dir: &Path, cfg: &RunConfig, default: &str) -> PathBuf {
    out_dir.join(cfg.out.as_deref().unwrap_or(default))
}

fn run_flow(cfg: &RunConfig, out_dir: &Path) -> Result<i32, CliError> {
    let grid = BoundaryGrid::new(cfg.n)?;
    let gen = build_generator(cfg.generator.as_ref().expect("validated"))?;
    let gen = match build_map(&cfg.domain, grid)? {
        None => gen,
        Some(k) => transplant_generator(&gen, &k),
    };
    let z0 = cfg.z0.expect("validated");
    let mut csv = String::from("t,re_z,im_z,re_dz,im_dz\n");
    for &t in &cfg.times {
        let flow = flow_integrate(&gen, z0, t, cfg.tol)?;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            num(t),
            num(flow.endpoint.re),
            num(flow.endpoint.im),
            num(flow.derivative.re),
            num(flow.derivative.im),
        ));
    }
    std::fs::write(artifact_path(out_dir, cfg, "flow.csv"), csv)?;
    Ok(0)
}

fn run_evolve(cfg: &RunConfig, out_dir: &Path) -> Result<i32, CliError> {
    let grid = BoundaryGrid::new(cfg.n)?;
    let data = build_data(cfg.data.as_ref().expect("validated"), grid)?;
    let gen = build_generator(cfg.generator.as_ref().expect("validated"))?;
    let weight = build_weight(&cfg.weight);
    let prob = match build_map(&cfg.domain, grid)? {
        None => RobinProblem::new(ProblemDomain::Disk, gen, weight, data)?,
        Some(k) => {
            let gen_domain = transplant_generator(&gen, &k);
            let weight_domain = weight.map(|w| lift_weight(w, &k));
            RobinProblem::new(ProblemDomain::Mapped(k), gen_domain, weight_domain, data)?
        }
    };
    let mut csv = String::from("t,theta,re_u,im_u\n");
    for &t in &cfg.times {
        let signal = robin_evolve(&prob, t, cfg.tol)?;
        for (j, u) in signal.samples().iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                num(t),
                num(grid.angle(j)),
                num(u.re),
                num(u.im),
            ));
        }
    }
    std::fs::write(artifact_path(out_dir, cfg, "evolve.csv"), csv)?;
    Ok(0)
}

fn run_map(cfg: &RunConfig, out_dir: &Path) -> Result<i32, CliError> {
    let grid = BoundaryGrid::new(cfg.n)?;
    let k = build_map(&cfg.domain, grid)?.unwrap_or_else(|| ConformalMap::identity(grid));
    let mut csv = String::from("theta,sigma,re_x,im_x,re_nu,im_nu\n");
    for j in 0..grid.n_points() {
        let x = k.boundary_point(j);
        let nu = k.unit_normal(j)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(grid.angle(j)),
            num(k.boundary_angle(j)),
            num(x.re),
            num(x.im),
            num(nu.re),
            num(nu.im),
        ));
    }
    std::fs::write(artifact_path(out_dir, cfg, "map.csv"), csv)?;
    Ok(0)
}

/// Pairing battery rows for the verification artifact: Cauchy-kernel data
/// against the first nine conjugate test modes.
fn pairing_rows() -> Result<String, Error> {
    let grid = BoundaryGrid::new(256)?;
    let pairing = BoundaryDistributionPairing::new(PowerSeries::truncated_geometric(180), 1.0)?;
    let mut csv = String::from("test_mode_index,re_pairing,im_pairing,converged_flag\n");
    for k in 0..=8i64 {
        let phi = BoundarySignal::mode(grid, -k)?;
        match distributional_pairing(&pairing, &phi) {
            Ok(outcome) => csv.push_str(&format!(
                "{k},{},{},1\n",
                num(outcome.value.re),
                num(outcome.value.im),
            )),
            Err(Error::PairingDiverged(_)) => {
                csv.push_str(&format!("{k},{},{},0\n", num(f64::NAN), num(f64::NAN)))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(csv)
}

fn run_verify(cfg: &RunConfig, out_dir: &Path) -> Result<i32, CliError> {
    let outcomes = verify::run_all()?;
    let mut csv = String::from("check_name,residual,tolerance,pass_flag\n");
    let mut failures = 0usize;
    for c in &outcomes {
        println!(
            "{} {}: residual {:.3e} vs tolerance {:.3e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        );
        csv.push_str(&format!(
            "{},{},{},{}\n",
            c.name,
            num(c.residual),
            num(c.tolerance),
            u8::from(c.pass),
        ));
        failures += usize::from(!c.pass);
    }
    std::fs::write(artifact_path(out_dir, cfg, "verify.csv"), csv)?;
    std::fs::write(out_dir.join("pairing.csv"), pairing_rows()?)?;
    if failures > 0 {
        eprintln!("{failures} verification check(s) failed");
        return Ok(3);
    }
    Ok(0)
}

pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<i32, CliError> {
    match cfg.subcommand {
        Subcommand::Flow => run_flow(cfg, out_dir),
        Subcommand::Evolve => run_evolve(cfg, out_dir),
        Subcommand::Map => run_map(cfg, out_dir),
        Subcommand::Verify => run_verify(cfg, out_dir),
    }
}
