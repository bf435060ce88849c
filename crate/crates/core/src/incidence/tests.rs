use std::collections::BTreeMap;

use num_traits::Zero;

use super::*;
use crate::algebra::field::parse_rational;
use crate::algebra::matrix::same_span;
use crate::algebra::rng::trial_stream;
use crate::algebra::{Field, P1Point, PrimeField, Rational, RationalField, TruncatedSeries};
use crate::geometry::{build_tower, BlowupTower, CenterSpec, CurveClass, TowerSpec};
use crate::morphism::{splitting_from_twist_profile, CoefficientLayout, MorphismP1, SplittingType};

const Q: RationalField = RationalField { seed: 0 };

fn q(x: i64) -> Rational {
    Q.from_i64(x)
}

fn pt(c: &[i64]) -> CenterSpec {
    CenterSpec::Point { coords: vec![c.iter().map(|&x| q(x)).collect()] }
}

fn inf(parent: usize, chart: usize, dir: &[&str]) -> CenterSpec {
    CenterSpec::Infinitesimal {
        parent,
        chart,
        direction: dir.iter().map(|s| parse_rational(s).unwrap()).collect(),
    }
}

fn tower(ambient: &[usize], centers: Vec<CenterSpec>) -> BlowupTower {
    build_tower(&TowerSpec { ambient: ambient.to_vec(), centers }).unwrap()
}

fn at(a: i64) -> P1Point<Rational> {
    P1Point::affine(q(a))
}

/// `[1:0]`.
fn zero_pt() -> P1Point<Rational> {
    P1Point::affine(q(0))
}

#[test]
fn compile_incidence_examples() {
    let t = tower(&[2], vec![pt(&[1, 0, 0])]);
    let sys = compile_incidence(&Q, &t, &[1], &[IncidenceDatum::simple(zero_pt(), 0)]).unwrap();
    assert_eq!((sys.num_rows(), sys.rank(), sys.affine_kernel_dim()), (2, 2, 4));

    let double = IncidenceDatum { mult: 2, ..IncidenceDatum::simple(zero_pt(), 0) };
    let sys = compile_incidence(&Q, &t, &[2], &[double]).unwrap();
    assert_eq!((sys.num_rows(), sys.affine_kernel_dim()), (4, 5));

    let sys = compile_incidence::<RationalField>(&Q, &t, &[3], &[]).unwrap();
    assert_eq!((sys.num_rows(), sys.affine_kernel_dim()), (0, 12));
}

#[test]
fn compile_incidence_errors() {
    let t = tower(&[2], vec![pt(&[1, 0, 0]), pt(&[0, 1, 0])]);
    let data = [IncidenceDatum::simple(at(3), 0), IncidenceDatum::simple(at(3), 1)];
    assert_eq!(compile_incidence(&Q, &t, &[3], &data).unwrap_err(), IncidenceError::RepeatedPoint(0, 1));

    let line = CenterSpec::Linear { equations: vec![vec![vec![q(0), q(0), q(1)]]] };
    let t = tower(&[2], vec![line]);
    let zero = IncidenceDatum { target: Some(vec![vec![q(0), q(0), q(0)]]), ..IncidenceDatum::simple(at(1), 0) };
    assert_eq!(
        compile_incidence(&Q, &t, &[2], &[zero]).unwrap_err(),
        IncidenceError::ZeroTarget { datum: 0, factor: 0 }
    );
    let off = IncidenceDatum { target: Some(vec![vec![q(0), q(0), q(1)]]), ..IncidenceDatum::simple(at(1), 0) };
    assert_eq!(compile_incidence(&Q, &t, &[2], &[off]).unwrap_err(), IncidenceError::TargetOffCenter(0));
    let double = IncidenceDatum { target: Some(vec![vec![q(1), q(1), q(0)]]), mult: 2, ..IncidenceDatum::simple(at(1), 0) };
    assert_eq!(compile_incidence(&Q, &t, &[2], &[double]).unwrap_err(), IncidenceError::BadMultiplicity(0));
}

#[test]
fn compile_infinitesimal_example() {
    let t = tower(&[2], vec![pt(&[1, 0, 0]), inf(0, 0, &["0"])]);
    let sys = compile_infinitesimal(&Q, &t, &[2], 1, &zero_pt()).unwrap();
    assert_eq!((sys.num_rows(), sys.affine_kernel_dim()), (3, 6));
    // f_1(p) = 0, f_2(p) = 0, [t] f_2 = 0 with coefficients (f_0 | f_1 | f_2)
    let mut expected = vec![vec![q(0); 9]; 3];
    expected[0][3] = q(1);
    expected[1][6] = q(1);
    expected[2][7] = q(1);
    let rows: Vec<Vec<Rational>> = (0..3).map(|r| sys.matrix().row(r).to_vec()).collect();
    assert!(same_span(9, &rows, &expected));
}

#[test]
fn compile_infinitesimal_depth_zero_matches_incidence() {
    let t = build_tower(&TowerSpec {
        ambient: vec![1, 2],
        centers: vec![CenterSpec::Point { coords: vec![vec![q(1), q(3)], vec![q(0), q(2), q(1)]] }],
    })
    .unwrap();
    let p = at(5);
    let a = compile_infinitesimal(&Q, &t, &[2, 3], 0, &p).unwrap();
    let b = compile_incidence(&Q, &t, &[2, 3], &[IncidenceDatum::simple(p, 0)]).unwrap();
    assert!(same_span(a.layout().len(), &a.kernel_basis(), &b.kernel_basis()));
}

#[test]
fn compile_infinitesimal_rejects_lines_and_bent_paths() {
    let line = CenterSpec::Linear { equations: vec![vec![vec![q(0), q(0), q(1)]]] };
    let t = tower(&[2], vec![line]);
    assert_eq!(compile_infinitesimal(&Q, &t, &[2], 0, &zero_pt()).unwrap_err(), IncidenceError::NotPointLike(0));

    let t = tower(&[2], vec![pt(&[1, 0, 0]), inf(0, 0, &["1"]), inf(1, 0, &["2"])]);
    assert_eq!(compile_infinitesimal(&Q, &t, &[4], 2, &zero_pt()).unwrap_err(), IncidenceError::NonlinearPath(2));
    let t = tower(&[1, 1], vec![CenterSpec::Point { coords: vec![vec![q(1), q(0)], vec![q(1), q(0)]] }, inf(0, 0, &["1"])]);
    assert_eq!(compile_infinitesimal(&Q, &t, &[2, 2], 1, &zero_pt()).unwrap_err(), IncidenceError::NonlinearPath(1));
}

#[test]
fn straight_chain_row_count() {
    // N + (N - 1) m rows for depth m
    let t = tower(&[3], vec![pt(&[1, 0, 0, 0]), inf(0, 1, &["2", "-1"]), inf(1, 1, &["0", "0"]), inf(2, 1, &["0", "0"])]);
    for (center, depth) in [(0, 0), (1, 1), (2, 2), (3, 3)] {
        let sys = compile_infinitesimal(&Q, &t, &[6], center, &at(2)).unwrap();
        assert_eq!(sys.num_rows(), 3 + 2 * depth);
        assert_eq!(sys.rank(), 3 + 2 * depth);
    }
}

#[test]
fn sigma_fiber_examples() {
    let mut rng = trial_stream(42, 0);
    let t = tower(&[2], vec![pt(&[1, 0, 0])]);
    let beta = CurveClass::new(vec![3], vec![2]);
    let data = [IncidenceDatum::simple(at(0), 0), IncidenceDatum::simple(at(1), 0)];
    let fiber = sigma_fiber(&Q, &t, &beta, &data, &mut rng).unwrap();
    assert_eq!(fiber.projective_dim, Some(7));
    assert_eq!(fiber.matches_expected, Some(true));
    assert!(fiber.splitting_bounds_ok);

    let beta = CurveClass::new(vec![1], vec![1]);
    let fiber = sigma_fiber(&Q, &t, &beta, &[IncidenceDatum::simple(zero_pt(), 0)], &mut rng).unwrap();
    assert_eq!(fiber.kp_splitting, vec![SplittingType::new(vec![1, 0, 0])]);

    // a line meeting the point with multiplicity 3 is constant there
    let beta = CurveClass::new(vec![1], vec![3]);
    let triple = IncidenceDatum { mult: 3, ..IncidenceDatum::simple(zero_pt(), 0) };
    let fiber = sigma_fiber(&Q, &t, &beta, std::slice::from_ref(&triple), &mut rng).unwrap();
    assert!(fiber.degenerate);
    assert!(fiber.splitting_bounds_ok);
    assert!(matches!(
        sample_fiber_member(&Q, &fiber, &t, &beta, &[triple], &mut rng, DEFAULT_RETRIES),
        Err(IncidenceError::GenericSampleNotFound { .. })
    ));

    let wrong = CurveClass::new(vec![3], vec![3]);
    assert_eq!(
        sigma_fiber(&Q, &t, &wrong, &data, &mut rng).unwrap_err(),
        IncidenceError::ClassMismatch { center: 0, expected: 3, got: 2 }
    );
}

/// Twist profile through forms of lower degree instead of an auxiliary point.
fn kp_by_degree_shift(t: &BlowupTower, degrees: &[usize], data: &[IncidenceDatum<Rational>], k: usize) -> SplittingType {
    let d = degrees[k] as i64;
    let n = t.ambient().factor_dims()[k];
    let base = compile_incidence(&Q, t, degrees, data).unwrap();
    let lo = -(data.len() as i64) * 4;
    let profile: BTreeMap<i64, usize> = (lo..=d + 1)
        .map(|s| {
            if d - s < 0 {
                return (s, 0);
            }
            let mut shifted = degrees.to_vec();
            shifted[k] = (d - s) as usize;
            let block = compile_incidence(&Q, t, &shifted, data).unwrap().factor_block(k);
            (s, block.cols() - block.rank())
        })
        .collect();
    let degree = (n as i64 + 1) * d - base.factor_rows(k) as i64;
    splitting_from_twist_profile(&profile, n + 1, degree).unwrap()
}

#[test]
fn kp_splitting_routes_agree() {
    let mut rng = trial_stream(42, 1);
    let t = tower(&[2], vec![pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])]);
    let beta = CurveClass::new(vec![3], vec![1, 1, 1]);
    let data = [
        IncidenceDatum::simple(at(0), 0),
        IncidenceDatum::simple(at(1), 1),
        IncidenceDatum::simple(P1Point::infinity(), 2),
    ];
    let fiber = sigma_fiber(&Q, &t, &beta, &data, &mut rng).unwrap();
    assert_eq!(fiber.kp_splitting[0], kp_by_degree_shift(&t, &[3], &data, 0));

    let t = tower(&[3], vec![pt(&[1, 0, 0, 0]), inf(0, 0, &["1", "2"])]);
    let beta = CurveClass::new(vec![4], vec![2, 1]);
    let data = [IncidenceDatum::simple(at(3), 0), IncidenceDatum::simple(at(-1), 1)];
    let fiber = sigma_fiber(&Q, &t, &beta, &data, &mut rng).unwrap();
    assert_eq!(fiber.projective_dim, Some(11));
    assert_eq!(fiber.matches_expected, Some(true));
    assert_eq!(fiber.kp_splitting[0], kp_by_degree_shift(&t, &[4], &data, 0));
}

#[test]
fn tau_fiber_examples() {
    let layout_dims = [1usize];
    let jet = JetPrescription {
        point: zero_pt(),
        base: vec![vec![q(1), q(0)]],
        values: LocalJet::new(vec![TruncatedSeries::new(vec![q(0), q(1)])]),
    };
    let fiber = tau_fiber(&layout_dims, &[1], std::slice::from_ref(&jet)).unwrap();
    assert_eq!(fiber.affine_dim, 2);
    assert_eq!(fiber.system.num_rows(), 2);
    assert!(fiber.system.contains(&[q(1), q(0), q(0), q(1)]));

    let empty = tau_fiber::<Rational>(&layout_dims, &[1], &[]).unwrap();
    assert_eq!(empty.affine_dim, 4);

    assert_eq!(
        tau_fiber(&layout_dims, &[1], &[jet.clone(), jet]).unwrap_err(),
        IncidenceError::DiagonalViolation(1)
    );
}

#[test]
fn sampled_cubics_are_free_with_exact_contacts() {
    let f = PrimeField::default();
    let t = tower(&[2], vec![pt(&[1, 0, 0])]);
    let beta = CurveClass::new(vec![3], vec![2]);
    let mut good = 0;
    for trial in 0..50 {
        let mut rng = trial_stream(42, trial);
        let data = random_data(&f, &t, &beta, &mut rng).unwrap();
        let fiber = sigma_fiber(&f, &t, &beta, &data, &mut rng).unwrap();
        if let Ok(s) = sample_fiber_member(&f, &fiber, &t, &beta, &data, &mut rng, DEFAULT_RETRIES) {
            good += usize::from(s.free && s.twist_vanishing.overall && s.attempts == 1);
        }
    }
    assert!(good >= 49, "{good}/50");
}

#[test]
fn empty_system_gives_degree_one_maps() {
    let f = PrimeField::default();
    let t = tower(&[1], vec![]);
    let beta = CurveClass::new(vec![1], vec![]);
    let mut rng = trial_stream(42, 7);
    let fiber = sigma_fiber(&f, &t, &beta, &[], &mut rng).unwrap();
    let s = sample_fiber_member(&f, &fiber, &t, &beta, &[], &mut rng, DEFAULT_RETRIES).unwrap();
    assert!(s.morphism.is_valid());
    assert_eq!(s.morphism.degrees(), vec![1]);
}

#[test]
fn jet_round_trip_through_two_levels() {
    let f = PrimeField::default();
    let mut rng = trial_stream(42, 99);
    for _ in 0..50 {
        let k = 4;
        let coords = (0..3)
            .map(|j| {
                let mut c: Vec<_> = (0..=k).map(|_| f.random(&mut rng)).collect();
                c[0] = Zero::zero();
                if j == 0 {
                    c[1] = f.random_nonzero(&mut rng);
                }
                TruncatedSeries::new(c)
            })
            .collect();
        let jet = LocalJet::new(coords);
        let chart = JetChart::point(3, 0);
        let up = lift_jet(&jet, &chart).unwrap();
        let origin = up.origin();
        let shift: Vec<_> = origin.iter().enumerate().map(|(j, &x)| if j == 0 { Zero::zero() } else { x }).collect();
        let up2 = lift_jet(&up.recenter(&shift), &chart).unwrap();
        let neg: Vec<_> = shift.iter().map(|&x| -x).collect();
        let back = blowdown(&blowdown(&up2, &chart).recenter(&neg), &chart);
        assert_eq!(back, jet.truncate(k - 2));
    }
}

#[test]
fn pencils_stay_in_the_fiber() {
    let f = PrimeField::default();
    let t = tower(&[1, 1], vec![
        CenterSpec::Point { coords: vec![vec![q(1), q(0)], vec![q(1), q(0)]] },
        CenterSpec::Point { coords: vec![vec![q(0), q(1)], vec![q(0), q(1)]] },
        CenterSpec::Point { coords: vec![vec![q(1), q(1)], vec![q(1), q(1)]] },
    ]);
    let beta = CurveClass::new(vec![3, 3], vec![1, 1, 1]);
    let mut rng = trial_stream(42, 3);
    let data = random_data(&f, &t, &beta, &mut rng).unwrap();
    let fiber = sigma_fiber(&f, &t, &beta, &data, &mut rng).unwrap();
    assert_eq!(fiber.projective_dim, Some(9));
    for _ in 0..20 {
        let a: Vec<_> = (0..fiber.kernel.len()).map(|_| f.random(&mut rng)).collect();
        let b: Vec<_> = (0..fiber.kernel.len()).map(|_| f.random(&mut rng)).collect();
        let (mu, la) = (f.random(&mut rng), f.random(&mut rng));
        let u = fiber.combine(&a);
        let v = fiber.combine(&b);
        let w: Vec<_> = u.iter().zip(&v).map(|(x, y)| mu * *x + la * *y).collect();
        assert!(fiber.system.contains(&w));
    }
    let f0 = MorphismP1::from_coefficients(&CoefficientLayout::new(&[1, 1], &[3, 3]), &fiber.kernel[0]);
    assert_eq!(f0.degrees(), vec![3, 3]);
}
