use std::f64::consts::TAU;

use hydrogreen::prime::{log_abs_prime, prime_eval, PrimeFunction, DEFAULT_TOL};
use hydrogreen::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn moduli() -> [f64; 3] {
    [0.1, 0.5, (-TAU).exp()]
}

#[test]
fn trivial_modulus_reduces_to_one_minus_z() {
    let p = PrimeFunction::new(0.0, DEFAULT_TOL).unwrap();
    assert_eq!(prime_eval(&p, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    assert_eq!(prime_eval(&p, c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
    assert!((log_abs_prime(&p, c(2.0, 0.0)).unwrap()).abs() < 1e-15);
    assert!((log_abs_prime(&p, c(0.0, 1.0)).unwrap() - 0.5 * 2f64.ln()).abs() < 1e-15);
}

#[test]
fn modulus_shift_on_the_unit_circle() {
    for rho in moduli() {
        let p = PrimeFunction::new(rho, DEFAULT_TOL).unwrap();
        for k in 0..100 {
            let z = Complex64::from_polar(1.0, TAU * (k as f64 + 0.5) / 100.0);
            let lhs = p.eval(z * rho).unwrap().norm() * z.norm();
            let rhs = p.eval(z).unwrap().norm();
            assert!((lhs - rhs).abs() < 1e-10, "rho = {rho}, k = {k}");
        }
    }
}

#[test]
fn product_then_log_matches_summed_logs() {
    let p = PrimeFunction::new(0.5, DEFAULT_TOL).unwrap();
    let z = c(-1.0, 0.0);
    let product_then_log = p.eval(z).unwrap().norm().ln();
    let summed = p.log_abs(z).unwrap();
    assert!((product_then_log - summed).abs() < 1e-12);
    let oracle = 2f64.ln() + (1..=200).map(|n| 2.0 * 0.5f64.powi(n).ln_1p()).sum::<f64>();
    assert!((summed - oracle).abs() < 1e-12, "{summed} {oracle}");
}

#[test]
fn reduction_agrees_with_the_plain_product() {
    let p = PrimeFunction::new(0.5, DEFAULT_TOL).unwrap();
    for z in [c(0.05, 0.11), c(-3.0, 1.5), c(0.2, -0.3)] {
        let a = p.log_abs(z).unwrap();
        let b = p.log_abs_direct(z, 400).unwrap();
        assert!((a - b).abs() < 1e-10, "{z}: {a} {b}");
    }
}

#[test]
fn functional_equations_hold_for_several_shifts() {
    for rho in moduli() {
        let p = PrimeFunction::new(rho, DEFAULT_TOL).unwrap();
        for z in [c(0.7, 0.2), c(-0.4, 0.9), c(1.0, 0.0) * 0.93, c(0.31, -0.74)] {
            let base = p.log_abs(z).unwrap();
            let mut shifted = z;
            let mut expect = base;
            for _ in 1..=3 {
                // P(ρz) = -P(z)/z
                expect -= shifted.norm().ln();
                shifted *= rho;
                assert!((p.log_abs(shifted).unwrap() - expect).abs() < 1e-10 * (1.0 + expect.abs()), "rho = {rho}");
            }
            // P(1/z) = -P(z)/z
            let inv = p.log_abs(1.0 / z).unwrap();
            assert!((inv - (base - z.norm().ln())).abs() < 1e-12, "rho = {rho}");
        }
    }
}

#[test]
fn doubling_the_truncation_changes_little() {
    for rho in moduli() {
        let p = PrimeFunction::new(rho, DEFAULT_TOL).unwrap();
        let n = p.terms();
        for k in 0..64 {
            let r = rho + (1.0 - rho) * (k as f64 + 0.5) / 64.0;
            let z = Complex64::from_polar(r, 0.37 + 0.9 * k as f64);
            let a = p.log_abs_direct(z, n).unwrap();
            let b = p.log_abs_direct(z, 2 * n).unwrap();
            assert!((a - b).abs() < p.tol(), "rho = {rho}, k = {k}");
        }
    }
}

#[test]
fn lattice_points_are_zeros() {
    let p = PrimeFunction::new(0.5, DEFAULT_TOL).unwrap();
    for z in [c(1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0), c(0.125, 0.0)] {
        assert!(matches!(p.log_abs(z), Err(Error::AtZeroOfPrime { .. })), "{z}");
    }
    assert_eq!(p.eval(c(0.0, 0.0)), Err(Error::ZeroArgument));
}

#[test]
fn sheared_product_is_quasi_periodic() {
    let theta = 0.8;
    let p = PrimeFunction::sheared(0.2, theta, DEFAULT_TOL).unwrap();
    let q = p.multiplier();
    assert!((q - Complex64::from_polar(0.2, -theta)).norm() < 1e-15);
    let z = c(0.6, 0.5);
    let lhs = p.log_abs(q * z).unwrap();
    assert!((lhs - (p.log_abs(z).unwrap() - z.norm().ln())).abs() < 1e-12);
}

proptest! {
    #[test]
    fn conjugate_argument_gives_conjugate_value(
        rho in 0.01f64..0.9,
        r in 0.05f64..3.0,
        angle in 0.01f64..6.27,
    ) {
        let p = PrimeFunction::new(rho, DEFAULT_TOL).unwrap();
        let z = Complex64::from_polar(r, angle);
        prop_assume!(p.log_abs(z).is_ok());
        let a = p.eval(z).unwrap();
        let b = p.eval(z.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-14 * a.norm().max(1.0));
    }

    #[test]
    fn log_abs_is_the_log_of_the_value(
        rho in 0.01f64..0.9,
        r in 0.1f64..2.0,
        angle in 0.05f64..6.2,
    ) {
        let p = PrimeFunction::new(rho, DEFAULT_TOL).unwrap();
        let z = Complex64::from_polar(r, angle);
        let v = p.eval(z).unwrap().norm();
        prop_assume!(v > 1e-6);
        prop_assert!((p.log_abs(z).unwrap() - v.ln()).abs() < 1e-10);
    }
}
