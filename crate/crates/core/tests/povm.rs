use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

use approx::assert_abs_diff_eq;
use qudit_discriminator::harness::{haar_pair, haar_state};
use qudit_discriminator::jordan::build_gh_bases;
use qudit_discriminator::povm::*;
use qudit_discriminator::spaces::{mean_density_operators, SpaceSpec, StateVector};
use qudit_discriminator::Error;

const EPS: f64 = 1e-12;

fn x2() -> f64 {
    omega1_from_x(2.0).unwrap()
}

#[test]
fn reciprocal_states() {
    for n in 2..=3 {
        let set = build_gh_bases(n).unwrap();
        for (g, h) in set.g.iter().zip(&set.h) {
            let (gp, hp) = reciprocal_pair(g, h).unwrap();
            assert!(gp.inner(h).unwrap().norm() < EPS);
            assert!(hp.inner(g).unwrap().norm() < EPS);
            assert_abs_diff_eq!(g.inner(&gp).unwrap().norm_sqr(), 0.75, epsilon = EPS);
            assert_abs_diff_eq!(gp.norm(), 1.0, epsilon = EPS);
        }
    }
    let a = haar_state(3, 1).unwrap();
    let b = haar_state(3, 2).unwrap();
    assert!(matches!(reciprocal_pair(&a, &b), Err(Error::Contract(_))));
}

#[test]
fn block_povm_endpoints() {
    let set = build_gh_bases(2).unwrap();
    let (g, h) = (&set.g[0], &set.h[0]);
    let (gp, hp) = reciprocal_pair(g, h).unwrap();

    let low = subspace_povm(g, h, 0.0).unwrap();
    assert!(low.pi1.matrix().iter().all(|z| z.norm() < EPS));
    assert!(low.pi2.max_abs_diff(&hp.projector()).unwrap() < EPS);

    let high = subspace_povm(g, h, FRAC_PI_2).unwrap();
    assert!(high.pi2.matrix().iter().all(|z| z.norm() < EPS));
    assert!(high.pi1.max_abs_diff(&gp.projector()).unwrap() < EPS);

    let mid = subspace_povm(g, h, x2()).unwrap();
    assert_abs_diff_eq!(mid.pi1.expectation(g).unwrap(), 0.5, epsilon = EPS);
    assert_abs_diff_eq!(mid.pi2.expectation(h).unwrap(), 0.5, epsilon = EPS);
    mid.validate(1e-10).unwrap();
    assert!(subspace_povm(g, h, 2.0).is_err());
}

#[test]
fn full_povm() {
    let (r1, r2) = mean_density_operators(2).unwrap();
    for k in 0..=10 {
        let w = FRAC_PI_2 * k as f64 / 10.0;
        let p = total_povm(2, w).unwrap();
        assert!(p.pi1.trace_product(&r2).unwrap().abs() < EPS);
        assert!(p.pi2.trace_product(&r1).unwrap().abs() < EPS);
    }
    let p = total_povm(2, FRAC_PI_2).unwrap();
    assert!(p.pi2.matrix().iter().all(|z| z.norm() < EPS));
    let p = total_povm(3, x2()).unwrap();
    assert!(p.pi0.min_eigenvalue() >= -1e-10);
    p.validate(1e-10).unwrap();
}

#[test]
fn success_curve() {
    let eq = Priors::equal();
    assert_abs_diff_eq!(success_curve_x(4.0, eq).unwrap(), 0.375, epsilon = EPS);
    assert_abs_diff_eq!(success_curve_x(1.0, eq).unwrap(), 0.375, epsilon = EPS);
    assert_abs_diff_eq!(success_curve_x(2.0, eq).unwrap(), 0.5, epsilon = EPS);
    assert!(success_curve_x(0.5, eq).is_err());
    for k in 0..=20 {
        let w = FRAC_PI_2 * k as f64 / 20.0;
        let x = x_from_omega1(w).unwrap();
        assert_abs_diff_eq!(subspace_success(w, eq).unwrap(), success_curve_x(x, eq).unwrap(), epsilon = EPS);
    }
}

#[test]
fn subspace_optima() {
    let r = optimal_subspace(Priors::from_eta1(0.1).unwrap()).unwrap();
    assert_eq!(r.regime, Regime::Low);
    assert_abs_diff_eq!(r.value, 0.675, epsilon = EPS);
    let r = optimal_subspace(Priors::equal()).unwrap();
    assert_eq!(r.regime, Regime::Middle);
    assert_abs_diff_eq!(r.value, 0.5, epsilon = EPS);
    assert_abs_diff_eq!(r.x_star, 2.0, epsilon = EPS);
    let p = Priors::from_eta1(0.2).unwrap();
    assert_abs_diff_eq!(optimal_subspace(p).unwrap().value, 0.6, epsilon = EPS);
    assert_abs_diff_eq!(0.75 * p.eta2, 1.0 - (p.eta1 * p.eta2).sqrt(), epsilon = EPS);
    let r = optimal_subspace(Priors::from_eta1(0.9).unwrap()).unwrap();
    assert_eq!(r.regime, Regime::High);
    assert_abs_diff_eq!(r.omega1_star, FRAC_PI_2, epsilon = EPS);
}

#[test]
fn averaged_success() {
    assert_abs_diff_eq!(average_success(2, x2(), Priors::equal()).unwrap(), 1.0 / 6.0, epsilon = EPS);
    for n in 2..=5 {
        assert_eq!(average_success(n, 0.0, Priors::from_eta1(1.0).unwrap()).unwrap(), 0.0);
    }
    let p = total_povm(3, x2()).unwrap();
    let (r1, r2) = mean_density_operators(3).unwrap();
    let direct = success_from_operators(&p, &r1, &r2, Priors::equal()).unwrap();
    assert_abs_diff_eq!(direct, average_success(3, x2(), Priors::equal()).unwrap(), epsilon = 1e-10);

    assert_abs_diff_eq!(optimal_average(2, Priors::equal()).unwrap().value, 1.0 / 6.0, epsilon = EPS);
    assert_abs_diff_eq!(optimal_average(3, Priors::equal()).unwrap().value, 2.0 / 9.0, epsilon = EPS);
    assert_abs_diff_eq!(optimal_average(2, Priors::from_eta1(0.1).unwrap()).unwrap().value, 0.225, epsilon = EPS);
}

#[test]
fn pure_state_success() {
    let sp = SpaceSpec::single(2).unwrap();
    let e1 = StateVector::basis(sp, &[1]).unwrap();
    let e2 = StateVector::basis(sp, &[2]).unwrap();
    for k in 0..=5 {
        let w = FRAC_PI_2 * k as f64 / 5.0;
        assert_eq!(pure_success(&e1, &e1, w, Priors::equal(), 2).unwrap(), 0.0);
    }
    assert_abs_diff_eq!(pure_success(&e1, &e2, x2(), Priors::equal(), 2).unwrap(), 1.0 / 3.0, epsilon = EPS);
    let p = total_povm(2, x2()).unwrap();
    assert_abs_diff_eq!(
        pure_success_from_operators(&p, &e1, &e2, Priors::equal()).unwrap(),
        1.0 / 3.0,
        epsilon = 1e-10
    );

    let p3 = total_povm(3, 0.8).unwrap();
    let (a, b) = haar_pair(3, 5, 0).unwrap();
    let priors = Priors::from_eta1(0.35).unwrap();
    assert_abs_diff_eq!(
        pure_success(&a, &b, 0.8, priors, 3).unwrap(),
        pure_success_from_operators(&p3, &a, &b, priors).unwrap(),
        epsilon = 1e-10
    );
    assert!(pure_success(&a, &b, 0.8, priors, 2).is_err());
}

#[test]
fn pure_optima() {
    assert_abs_diff_eq!(optimal_pure(0.0, Priors::equal()).unwrap().value, 1.0 / 3.0, epsilon = EPS);
    for eta1 in [0.1, 0.5, 0.9] {
        assert_eq!(optimal_pure(1.0, Priors::from_eta1(eta1).unwrap()).unwrap().value, 0.0);
    }
    assert_abs_diff_eq!(optimal_pure(0.5, Priors::from_eta1(0.1).unwrap()).unwrap().value, 0.225, epsilon = EPS);
    assert!(optimal_pure(1.5, Priors::equal()).is_err());
}

#[test]
fn second_angle() {
    assert_abs_diff_eq!(omega2_constraint(FRAC_PI_2).unwrap(), 0.0, epsilon = EPS);
    assert_abs_diff_eq!(omega2_constraint(0.0).unwrap(), FRAC_PI_3, epsilon = EPS);
    assert_abs_diff_eq!(omega2_constraint(x2()).unwrap(), FRAC_PI_4, epsilon = EPS);
    assert!(omega2_constraint(-0.1).is_err());
}

#[test]
fn priors_validation() {
    assert!(Priors::new(0.4, 0.6).is_ok());
    assert!(Priors::new(0.4, 0.5).is_err());
    for eta1 in [0.0, 1.0] {
        let p = Priors::from_eta1(eta1).unwrap();
        assert!(matches!(optimal_subspace(p), Err(Error::DegeneratePriors { .. })));
    }
}
