//! The operations behind the command-line subcommands.

use crate::algebra::rng::trial_stream;
use crate::algebra::{Field, FieldKind, P1Point, PrimeField, RationalField, Scalar, TruncatedSeries};
use crate::geometry::{
    c_h, check_main_hypotheses, expected_dim_mor, expected_fiber_dim, strict_from_total,
};
use crate::incidence::{
    sample_fiber_member, sigma_fiber, tau_fiber, FiberDescription, IncidenceDatum, IncidenceError, JetPrescription,
    LocalJet,
};
use crate::morphism::MorphismP1;

use super::config::{DatumConfig, Exact, JetConfig, Problem, SCHEMA_VERSION};
use super::report::{CheckReport, DimsReport, FiberKind, SampleOutput, SolveReport, VerifyReport};
use super::suites::{expand, random_sigma_fiber, run_suite};
use super::VerifyError;

/// Calls `$body` with `$f` bound to the configured field.
macro_rules! with_field {
    ($cfg:expr, |$f:ident| $body:expr) => {{
        let cfg = $cfg;
        match cfg.kind {
            FieldKind::Rationals => {
                let $f = RationalField { seed: cfg.seed };
                $body
            }
            FieldKind::PrimeField => {
                let $f = PrimeField::new(cfg.prime, cfg.seed).map_err(VerifyError::from)?;
                $body
            }
        }
    }};
}

pub fn check(problem: &Problem) -> Result<CheckReport, VerifyError> {
    let beta = problem.beta()?;
    Ok(CheckReport {
        schema: SCHEMA_VERSION,
        degrees: beta.degrees.clone(),
        e_total: beta.e_total.clone(),
        e_strict: strict_from_total(&problem.tower, beta),
        hypotheses: check_main_hypotheses(&problem.tower, beta),
        c_h: c_h(&problem.tower, beta).ok(),
    })
}

pub fn dims(problem: &Problem) -> Result<DimsReport, VerifyError> {
    let beta = problem.beta()?;
    let tower = &problem.tower;
    let ambient = tower.ambient();
    let coefficient_space_dim = ambient
        .factor_dims()
        .iter()
        .zip(&beta.degrees)
        .map(|(&n, &d)| (n + 1) * (d as usize + 1))
        .sum();
    Ok(DimsReport {
        schema: SCHEMA_VERSION,
        ambient_dim: ambient.dim(),
        center_codims: (0..tower.len()).map(|i| tower.center_codim(i)).collect(),
        coefficient_space_dim,
        expected_dim_mor: expected_dim_mor(tower, beta),
        expected_fiber_dim: expected_fiber_dim(tower, beta),
    })
}

fn elem<F: Field>(field: &F, x: &Exact, path: &str) -> Result<F::Elem, VerifyError> {
    field.from_rational(&x.0).map_err(|e| VerifyError::Config { path: path.into(), message: e.to_string() })
}

fn domain_point<F: Field>(field: &F, p: &[Exact], path: &str) -> Result<P1Point<F::Elem>, VerifyError> {
    let (s, t) = (elem(field, &p[0], path)?, elem(field, &p[1], path)?);
    P1Point::new(s, t).map_err(|e| VerifyError::Config { path: path.into(), message: e.to_string() })
}

fn datum<F: Field>(field: &F, d: &DatumConfig, a: usize) -> Result<IncidenceDatum<F::Elem>, VerifyError> {
    let target = match &d.q {
        Some(q) => Some(
            q.iter()
                .map(|f| f.iter().map(|x| elem(field, x, &format!("/data/{a}/q"))).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?,
        ),
        None => None,
    };
    Ok(IncidenceDatum {
        point: domain_point(field, &d.p, &format!("/data/{a}/p"))?,
        center: d.center,
        target,
        mult: d.mult,
    })
}

fn jet<F: Field>(field: &F, j: &JetConfig, a: usize) -> Result<JetPrescription<F::Elem>, VerifyError> {
    let path = format!("/jets/{a}");
    let base = j
        .base
        .iter()
        .map(|f| f.iter().map(|x| elem(field, x, &format!("{path}/base"))).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    let coords = j
        .values
        .iter()
        .map(|s| s.iter().map(|x| elem(field, x, &format!("{path}/values"))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let order = coords.first().map_or(0, Vec::len);
    if order == 0 || coords.iter().any(|c| c.len() != order) {
        return Err(VerifyError::Config {
            path: format!("{path}/values"),
            message: "every coordinate needs the same positive number of coefficients".into(),
        });
    }
    Ok(JetPrescription {
        point: domain_point(field, &j.p, &format!("{path}/p"))?,
        base,
        values: LocalJet::new(coords.into_iter().map(TruncatedSeries::new).collect()),
    })
}

fn config_data<F: Field>(field: &F, problem: &Problem) -> Result<Vec<IncidenceDatum<F::Elem>>, VerifyError> {
    problem.config.data.iter().enumerate().map(|(a, d)| datum(field, d, a)).collect()
}

fn as_strings<S: Scalar>(f: &MorphismP1<S>) -> Vec<Vec<Vec<String>>> {
    f.factors()
        .iter()
        .map(|comps| comps.iter().map(|c| c.coeffs().iter().map(|x| x.to_string()).collect()).collect())
        .collect()
}

fn solve_in<F: Field>(field: &F, problem: &Problem) -> Result<SolveReport, VerifyError> {
    let beta = problem.beta()?;
    let tower = &problem.tower;
    let degrees: Vec<usize> = beta.degrees.iter().map(|&d| d as usize).collect();
    let (kind, fiber): (FiberKind, FiberDescription<F::Elem>) = if !problem.config.jets.is_empty() {
        let jets = problem.config.jets.iter().enumerate().map(|(a, j)| jet(field, j, a)).collect::<Result<Vec<_>, _>>()?;
        (FiberKind::Tau, tau_fiber(tower.ambient().factor_dims(), &degrees, &jets)?)
    } else if problem.config.data.is_empty() {
        // same stream as trial 0 of the suites
        let mut rng = trial_stream(field.config().seed, 0);
        (FiberKind::Sigma, random_sigma_fiber(field, tower, beta, &mut rng)?.1)
    } else {
        let data = config_data(field, problem)?;
        let mut rng = trial_stream(field.config().seed, 0);
        (FiberKind::Sigma, sigma_fiber(field, tower, beta, &data, &mut rng)?)
    };
    let layout = fiber.layout().clone();
    let kernel = fiber.kernel.iter().map(|v| as_strings(&MorphismP1::from_coefficients(&layout, v))).collect();
    Ok(SolveReport {
        schema: SCHEMA_VERSION,
        seed: field.config().seed,
        field: field.config(),
        kind,
        hypotheses: (kind == FiberKind::Sigma).then(|| check_main_hypotheses(tower, beta)),
        rows: fiber.system.num_rows(),
        rank: fiber.system.rank(),
        affine_dim: fiber.affine_dim,
        projective_dim: fiber.projective_dim,
        expected: fiber.expected,
        matches_expected: fiber.matches_expected,
        degenerate: fiber.degenerate,
        passed: fiber.splitting_bounds_ok,
        kp_splitting: fiber.kp_splitting,
        splitting_bounds: fiber.splitting_bounds,
        splitting_bounds_ok: fiber.splitting_bounds_ok,
        kernel,
    })
}

/// One σ-fiber (from the config's data, or random data drawn like trial 0 of
/// `verify`), or one τ-fiber when the config has jets.
pub fn solve(problem: &Problem) -> Result<SolveReport, VerifyError> {
    with_field!(&problem.field, |f| solve_in(&f, problem))
}

fn sample_in<F: Field>(field: &F, problem: &Problem) -> Result<SampleOutput, VerifyError> {
    let beta = problem.beta()?;
    let tower = &problem.tower;
    let hypotheses = check_main_hypotheses(tower, beta);
    let mut rng = trial_stream(field.config().seed, 0);
    let (data, fiber) = if problem.config.data.is_empty() {
        random_sigma_fiber(field, tower, beta, &mut rng)?
    } else {
        let data = config_data(field, problem)?;
        let fiber = sigma_fiber(field, tower, beta, &data, &mut rng)?;
        (data, fiber)
    };
    let mut out = SampleOutput {
        schema: SCHEMA_VERSION,
        seed: field.config().seed,
        field: field.config(),
        passed: false,
        hypotheses,
        found: false,
        attempts: 0,
        morphism: None,
        splitting: Vec::new(),
        twist: None,
        twist_vanishing: None,
        free: None,
    };
    match sample_fiber_member(field, &fiber, tower, beta, &data, &mut rng, problem.retries()) {
        Ok(s) => {
            let asserted = out.hypotheses.pass;
            out.passed = !asserted || (s.free && s.twist_vanishing.overall);
            out.found = true;
            out.attempts = s.attempts;
            out.morphism = Some(as_strings(&s.morphism));
            out.splitting = s.splitting;
            out.twist = Some(s.twist);
            out.twist_vanishing = Some(s.twist_vanishing);
            out.free = Some(s.free);
        }
        Err(IncidenceError::GenericSampleNotFound { attempts }) => out.attempts = attempts,
        Err(IncidenceError::EmptyFiber) => {}
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

/// One fiber member with exact contacts and its freeness diagnostics.
pub fn sample(problem: &Problem) -> Result<SampleOutput, VerifyError> {
    with_field!(&problem.field, |f| sample_in(&f, problem))
}

fn verify_in<F: Field>(field: &F, problem: &Problem, stable: bool) -> Result<VerifyReport, VerifyError> {
    let experiment = problem
        .experiment
        .as_ref()
        .ok_or_else(|| VerifyError::Config { path: "/experiment".into(), message: "no experiment configured".into() })?;
    let suites = expand(experiment.kind, problem.beta.is_some())
        .into_iter()
        .map(|k| run_suite(field, problem, k, experiment.trials, stable))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport {
        schema: SCHEMA_VERSION,
        seed: field.config().seed,
        field: field.config(),
        hypotheses: problem.beta.as_ref().map(|b| check_main_hypotheses(&problem.tower, b)),
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

/// Runs the configured experiment; `stable` omits wall-clock times.
pub fn verify(problem: &Problem, stable: bool) -> Result<VerifyReport, VerifyError> {
    with_field!(&problem.field, |f| verify_in(&f, problem, stable))
}
