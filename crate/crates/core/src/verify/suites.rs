//! Monte Carlo and exact-law suites. Trial `i` always draws from
//! `trial_stream(seed, i)`, so results do not depend on scheduling.

use std::time::Instant;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use crate::algebra::matrix::same_span;
use crate::algebra::rng::{trial_stream, TrialRng};
use crate::algebra::{Field, Rational, TruncatedSeries};
use crate::geometry::{build_tower, check_main_hypotheses, BlowupTower, CenterSpec, CurveClass, TowerSpec};
use crate::incidence::{
    blowdown, compile_incidence, compile_infinitesimal, compile_jets, fresh_point, lift_jet, random_data,
    sample_fiber_member, sigma_fiber, ConstraintSystem, FiberDescription, IncidenceDatum, IncidenceError, JetChart,
    JetPrescription, LocalJet,
};
use crate::morphism::CoefficientLayout;

use super::config::{ExperimentKind, Problem};
use super::report::{SuiteReport, TrialRecord};
use super::VerifyError;

/// Pass-rate threshold of the genericity-dependent suites.
pub const GENERIC_THRESHOLD: f64 = 0.99;
/// Threshold of the exact-law suites.
pub const EXACT_THRESHOLD: f64 = 1.0;

/// Random incidence data for `beta` and the σ-fiber over them, from one stream.
pub fn random_sigma_fiber<F: Field>(
    field: &F,
    tower: &BlowupTower,
    beta: &CurveClass,
    rng: &mut TrialRng,
) -> Result<(Vec<IncidenceDatum<F::Elem>>, FiberDescription<F::Elem>), IncidenceError> {
    let data = random_data(field, tower, beta, rng)?;
    let fiber = sigma_fiber(field, tower, beta, &data, rng)?;
    Ok((data, fiber))
}

fn fiber_dimension_trial<F: Field>(field: &F, tower: &BlowupTower, beta: &CurveClass, rng: &mut TrialRng, i: usize) -> TrialRecord {
    let mut rec = TrialRecord::new(i);
    match random_sigma_fiber(field, tower, beta, rng) {
        Ok((_, fiber)) => {
            rec.expected = fiber.expected.map(|e| e.value);
            rec.observed = Some(fiber.projective_dim.map_or(-1, |d| d as i64));
            rec.pass = fiber.matches_expected == Some(true);
            rec.degenerate = fiber.degenerate;
            rec.splitting_bounds_ok = Some(fiber.splitting_bounds_ok);
            rec.kp_splitting = fiber.kp_splitting;
        }
        Err(e) => rec.note = Some(e.to_string()),
    }
    rec
}

fn freeness_trial<F: Field>(
    field: &F,
    tower: &BlowupTower,
    beta: &CurveClass,
    retries: usize,
    rng: &mut TrialRng,
    i: usize,
) -> TrialRecord {
    let mut rec = TrialRecord::new(i);
    let outcome = random_sigma_fiber(field, tower, beta, rng).and_then(|(data, fiber)| {
        rec.splitting_bounds_ok = Some(fiber.splitting_bounds_ok);
        sample_fiber_member(field, &fiber, tower, beta, &data, rng, retries)
    });
    match outcome {
        Ok(s) => {
            rec.attempts = Some(s.attempts);
            rec.pass = s.free && s.twist_vanishing.overall;
            rec.tangent_splitting = s.splitting;
        }
        Err(IncidenceError::GenericSampleNotFound { attempts }) => {
            rec.attempts = Some(attempts);
            rec.note = Some("no generic member".into());
        }
        Err(e) => rec.note = Some(e.to_string()),
    }
    rec
}

fn census_trial<F: Field>(
    field: &F,
    tower: &BlowupTower,
    beta: &CurveClass,
    retries: usize,
    rng: &mut TrialRng,
    i: usize,
) -> TrialRecord {
    let mut rec = TrialRecord::new(i);
    match random_sigma_fiber(field, tower, beta, rng) {
        Ok((data, fiber)) => {
            rec.pass = fiber.splitting_bounds_ok;
            rec.splitting_bounds_ok = Some(fiber.splitting_bounds_ok);
            rec.observed = Some(fiber.projective_dim.map_or(-1, |d| d as i64));
            if let Ok(s) = sample_fiber_member(field, &fiber, tower, beta, &data, rng, retries) {
                rec.attempts = Some(s.attempts);
                rec.tangent_splitting = s.splitting;
            }
            rec.kp_splitting = fiber.kp_splitting;
        }
        Err(e) => rec.note = Some(e.to_string()),
    }
    rec
}

fn census_key(rec: &TrialRecord) -> String {
    let fmt = |xs: &[crate::morphism::SplittingType]| {
        xs.iter().map(|s| format!("{:?}", s.entries())).collect::<Vec<_>>().join(" ")
    };
    let tangent = if rec.tangent_splitting.is_empty() { "-".to_string() } else { fmt(&rec.tangent_splitting) };
    format!("K_P {} | f*T {}", fmt(&rec.kp_splitting), tangent)
}

/// Random transversal `k`-jet for `chart` in `dim` coordinates.
fn random_jet<F: Field>(field: &F, dim: usize, chart: &JetChart, k: usize, rng: &mut TrialRng) -> LocalJet<F::Elem> {
    let coords = (0..dim)
        .map(|j| {
            let mut c: Vec<F::Elem> = (0..=k).map(|_| field.random(rng)).collect();
            if j == chart.divisor {
                c[0] = F::Elem::zero();
                c[1] = field.random_nonzero(rng);
            } else if chart.divided.contains(&j) {
                c[0] = F::Elem::zero();
            }
            TruncatedSeries::new(c)
        })
        .collect();
    LocalJet::new(coords)
}

/// Lifts through `depth` blowups of the same chart shape and blows back down;
/// checks agreement with the original jet modulo `t^(k + 1 - depth)`.
pub fn jet_roundtrip<F: Field>(field: &F, dim: usize, depth: usize, rng: &mut TrialRng) -> Result<bool, IncidenceError> {
    let divisor = rng.gen_range(0..dim);
    let divided: Vec<usize> = (0..dim).filter(|&j| j != divisor && (dim == 2 || rng.gen_bool(0.7))).collect();
    let chart = JetChart { divisor, divided };
    let k = depth + rng.gen_range(1..=3);
    let jet = random_jet(field, dim, &chart, k, rng);

    let mut current = jet.clone();
    let mut shifts = Vec::new();
    for _ in 0..depth {
        let up = lift_jet(&current, &chart)?;
        // move the next center to the origin: the divided coordinates' values
        let shift: Vec<F::Elem> = up
            .origin()
            .into_iter()
            .enumerate()
            .map(|(j, x)| if chart.divided.contains(&j) { x } else { F::Elem::zero() })
            .collect();
        current = up.recenter(&shift);
        shifts.push(shift);
    }
    for shift in shifts.iter().rev() {
        let neg: Vec<F::Elem> = shift.iter().map(|x| -x.clone()).collect();
        current = blowdown(&current.recenter(&neg), &chart);
    }
    Ok(current == jet.truncate(k - depth))
}

fn jet_trial<F: Field>(field: &F, dims: &[usize], rng: &mut TrialRng, i: usize) -> TrialRecord {
    let mut rec = TrialRecord::new(i);
    // P^2, P^3 and the ambient of the run
    let ambient: usize = dims.iter().sum();
    let dim = [2, 3, ambient.max(2)][i % 3];
    let depth = 1 + rng.gen_range(0..2);
    match jet_roundtrip(field, dim, depth, rng) {
        Ok(ok) => rec.pass = ok,
        Err(e) => rec.note = Some(e.to_string()),
    }
    rec
}

fn random_jets<F: Field>(field: &F, dims: &[usize], rng: &mut TrialRng) -> Vec<JetPrescription<F::Elem>> {
    let count = rng.gen_range(1..=2);
    let mut used = Vec::new();
    (0..count)
        .map(|_| {
            let point = fresh_point(field, rng, &used);
            used.push(point.clone());
            let base: Vec<Vec<F::Elem>> = dims
                .iter()
                .map(|&n| {
                    let mut q: Vec<F::Elem> = (0..=n).map(|_| field.random(rng)).collect();
                    q[0] = field.random_nonzero(rng);
                    q
                })
                .collect();
            let order = rng.gen_range(0..=1);
            let values = LocalJet::new(
                (0..dims.iter().sum::<usize>())
                    .map(|_| {
                        let mut c: Vec<F::Elem> = (0..=order).map(|_| field.random(rng)).collect();
                        c[0] = F::Elem::zero();
                        TruncatedSeries::new(c)
                    })
                    .collect(),
            );
            JetPrescription { point, base, values }
        })
        .collect()
}

/// `mu f + lambda g` for random kernel members `f`, `g` lies in the system.
pub fn pencil_closed<F: Field>(field: &F, sys: &ConstraintSystem<F::Elem>, rng: &mut TrialRng) -> bool {
    let kernel = sys.kernel_basis();
    let n = sys.layout().len();
    let member = |rng: &mut TrialRng| {
        let mut v = vec![F::Elem::zero(); n];
        for b in &kernel {
            let c = field.random(rng);
            for (x, y) in v.iter_mut().zip(b) {
                *x = x.clone() + c.clone() * y.clone();
            }
        }
        v
    };
    let (f, g) = (member(rng), member(rng));
    let (mu, la) = (field.random(rng), field.random(rng));
    let w: Vec<F::Elem> = f.iter().zip(&g).map(|(x, y)| mu.clone() * x.clone() + la.clone() * y.clone()).collect();
    sys.contains(&w) && sys.contains(&f) && sys.contains(&g)
}

fn pencil_trial<F: Field>(field: &F, tower: &BlowupTower, beta: &CurveClass, rng: &mut TrialRng, i: usize) -> TrialRecord {
    let mut rec = TrialRecord::new(i);
    let degrees: Vec<usize> = beta.degrees.iter().map(|&d| d as usize).collect();
    let dims = tower.ambient().factor_dims().to_vec();
    let sigma = random_data(field, tower, beta, rng).and_then(|data| compile_incidence(field, tower, &degrees, &data));
    let tau = compile_jets(&CoefficientLayout::new(&dims, &degrees), &random_jets(field, &dims, rng));
    match (sigma, tau) {
        (Ok(s), Ok(t)) => rec.pass = pencil_closed(field, &s, rng) && pencil_closed(field, &t, rng),
        (Err(e), _) | (_, Err(e)) => rec.note = Some(e.to_string()),
    }
    rec
}

/// A random point blowup of a random product, with its rational center point.
fn random_point_tower(rng: &mut TrialRng) -> (BlowupTower, Vec<usize>) {
    let factors = rng.gen_range(1..=2);
    let dims: Vec<usize> = (0..factors).map(|_| rng.gen_range(1..=3)).collect();
    let coords: Vec<Vec<Rational>> = dims
        .iter()
        .map(|&n| loop {
            let q: Vec<Rational> = (0..=n).map(|_| Rational::from_integer(rng.gen_range(-20i64..=20).into())).collect();
            if q.iter().any(|x| *x != Rational::from_integer(0.into())) {
                break q;
            }
        })
        .collect();
    let mut degrees: Vec<usize> = dims.iter().map(|_| rng.gen_range(0..=3)).collect();
    if degrees.iter().all(|&d| d == 0) {
        degrees[0] = 1;
    }
    let tower = build_tower(&TowerSpec { ambient: dims, centers: vec![CenterSpec::Point { coords }] })
        .expect("random point tower");
    (tower, degrees)
}

/// Depth-0 infinitesimal compilation and plain incidence give the same kernel.
pub fn consistency_check<F: Field>(field: &F, rng: &mut TrialRng) -> Result<bool, IncidenceError> {
    let (tower, degrees) = random_point_tower(rng);
    let p = fresh_point(field, rng, &[]);
    let a = compile_infinitesimal(field, &tower, &degrees, 0, &p)?;
    let b = compile_incidence(field, &tower, &degrees, &[IncidenceDatum::simple(p, 0)])?;
    Ok(same_span(a.layout().len(), &a.kernel_basis(), &b.kernel_basis()))
}

fn consistency_trial<F: Field>(field: &F, rng: &mut TrialRng, i: usize) -> TrialRecord {
    let mut rec = TrialRecord::new(i);
    match consistency_check(field, rng) {
        Ok(ok) => rec.pass = ok,
        Err(e) => rec.note = Some(e.to_string()),
    }
    rec
}

fn run_trials(trials: usize, seed: u64, f: impl Fn(&mut TrialRng, usize) -> TrialRecord + Sync) -> Vec<TrialRecord> {
    (0..trials)
        .into_par_iter()
        .map(|i| f(&mut trial_stream(seed, i as u64), i))
        .collect()
}

/// Runs one suite (not `Properties`) over `trials` trials.
pub fn run_suite<F: Field>(
    field: &F,
    problem: &Problem,
    kind: ExperimentKind,
    trials: usize,
    stable: bool,
) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let seed = field.config().seed;
    let tower = &problem.tower;
    let retries = problem.retries();
    let exploratory = problem.experiment.as_ref().is_some_and(|e| e.exploratory);
    let dims = tower.ambient().factor_dims().to_vec();

    let mut report = match kind {
        ExperimentKind::FiberDimension => {
            let beta = problem.beta()?;
            let records = run_trials(trials, seed, |rng, i| fiber_dimension_trial(field, tower, beta, rng, i));
            SuiteReport::from_records(kind, GENERIC_THRESHOLD, !exploratory, records)
        }
        ExperimentKind::Freeness => {
            let beta = problem.beta()?;
            let asserted = !exploratory && check_main_hypotheses(tower, beta).pass;
            let records = run_trials(trials, seed, |rng, i| freeness_trial(field, tower, beta, retries, rng, i));
            SuiteReport::from_records(kind, GENERIC_THRESHOLD, asserted, records)
        }
        ExperimentKind::SplittingCensus => {
            let beta = problem.beta()?;
            let records = run_trials(trials, seed, |rng, i| census_trial(field, tower, beta, retries, rng, i));
            let mut r = SuiteReport::from_records(kind, EXACT_THRESHOLD, !exploratory, records);
            for rec in &r.records {
                if rec.note.is_none() {
                    *r.census.entry(census_key(rec)).or_default() += 1;
                }
            }
            r
        }
        ExperimentKind::JetRoundtrip => {
            let records = run_trials(trials, seed, |rng, i| jet_trial(field, &dims, rng, i));
            SuiteReport::from_records(kind, EXACT_THRESHOLD, !exploratory, records)
        }
        ExperimentKind::PencilClosure => {
            let beta = problem.beta()?;
            let records = run_trials(trials, seed, |rng, i| pencil_trial(field, tower, beta, rng, i));
            SuiteReport::from_records(kind, EXACT_THRESHOLD, !exploratory, records)
        }
        ExperimentKind::Consistency => {
            let records = run_trials(trials, seed, |rng, i| consistency_trial(field, rng, i));
            SuiteReport::from_records(kind, EXACT_THRESHOLD, !exploratory, records)
        }
        ExperimentKind::Properties => unreachable!("expanded by the caller"),
    };
    if !stable {
        report.wall_clock_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// The suites an experiment kind stands for.
pub fn expand(kind: ExperimentKind, has_class: bool) -> Vec<ExperimentKind> {
    match kind {
        ExperimentKind::Properties => {
            let mut v = vec![ExperimentKind::JetRoundtrip, ExperimentKind::Consistency];
            if has_class {
                v.push(ExperimentKind::PencilClosure);
                v.push(ExperimentKind::SplittingCensus);
            }
            v
        }
        k => vec![k],
    }
}
