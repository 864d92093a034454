use std::f64::consts::PI;

use elmono::specfun::{bessel_jy, hankel1, modbessel_k};
use elmono::validation::oracle::{bessel_jy_reference, hankel1_imag_axis_reference};
use num_complex::Complex64;

fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a * (b / a).powf(k as f64 / (n - 1) as f64)).collect()
}

#[test]
fn reference_values_at_one() {
    let (j0, y0) = bessel_jy(0, 1.0).unwrap();
    assert!((j0 - 0.765_197_686_6).abs() < 1e-10);
    assert!((y0 - 0.088_256_964_2).abs() < 1e-10);
    let h = hankel1(0, 1.0).unwrap();
    assert!((h - Complex64::new(0.765_197_686_6, 0.088_256_964_2)).norm() < 1e-10);
    assert!((modbessel_k(0, 1.0).unwrap() - 0.421_024_438_2).abs() < 1e-10);
    assert!((modbessel_k(1, 1.0).unwrap() - 0.601_907_230_2).abs() < 1e-10);
}

#[test]
fn bessel_matches_series_oracle_on_both_branches() {
    for order in [0, 1] {
        for x in log_space(2e-3, 95.0, 40) {
            let (j, y) = bessel_jy(order, x).unwrap();
            let (jr, yr) = bessel_jy_reference(order, x);
            assert!((j - jr).abs() <= 1e-10, "J{order}({x}): {j} vs {jr}");
            assert!((y - yr).abs() <= 1e-10, "Y{order}({x}): {y} vs {yr}");
        }
    }
}

#[test]
fn hankel_imaginary_part_is_y() {
    for x in log_space(1e-3, 100.0, 50) {
        for order in [0, 1] {
            let h = hankel1(order, x).unwrap();
            let (j, y) = bessel_jy(order, x).unwrap();
            assert_eq!(h.im, y);
            assert_eq!(h.re, j);
        }
    }
}

#[test]
fn hankel_modulus_follows_large_argument_asymptote() {
    let z = 50.0;
    let asym = (2.0 / (PI * z)).sqrt();
    let rel = (hankel1(0, z).unwrap().norm() - asym).abs() / asym;
    assert!(rel < 0.01, "relative deviation {rel}");
}

#[test]
fn connection_formula_on_imaginary_axis() {
    let factor = Complex64::new(0.0, -2.0 / PI);
    for x in log_space(0.1, 20.0, 25) {
        let lhs = hankel1_imag_axis_reference(0, x);
        let rhs = factor * modbessel_k(0, x).unwrap();
        let rel = (lhs - rhs).norm() / rhs.norm();
        assert!(rel <= 1e-9, "x = {x}: relative mismatch {rel}");
    }
}

#[test]
fn wronskian_over_log_grid() {
    for z in log_space(1e-3, 100.0, 1000) {
        let (j0, y0) = bessel_jy(0, z).unwrap();
        let (j1, y1) = bessel_jy(1, z).unwrap();
        let target = 2.0 / (PI * z);
        let defect = (j0 * y1 - j1 * y0 + target).abs();
        assert!(defect <= 1e-10 * target, "z = {z}: defect {defect}");
    }
}

#[test]
fn derivative_relations_by_central_differences() {
    let h = 1e-5;
    for z in [0.3, 1.0, 4.0, 11.0, 13.0, 40.0] {
        let (jp, yp) = bessel_jy(0, z + h).unwrap();
        let (jm, ym) = bessel_jy(0, z - h).unwrap();
        let (j1, y1) = bessel_jy(1, z).unwrap();
        assert!(((jp - jm) / (2.0 * h) + j1).abs() <= 1e-6 * j1.abs().max(1e-3));
        assert!(((yp - ym) / (2.0 * h) + y1).abs() <= 1e-6 * y1.abs().max(1e-3));
    }
}

#[test]
fn k_is_positive_and_decreasing() {
    let xs = log_space(1e-3, 50.0, 200);
    for order in [0, 1] {
        let vals: Vec<f64> = xs.iter().map(|&x| modbessel_k(order, x).unwrap()).collect();
        assert!(vals.iter().all(|&v| v > 0.0));
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn domain_errors() {
    assert!(bessel_jy(0, 0.0).is_err());
    assert!(bessel_jy(1, -1.0).is_err());
    assert!(bessel_jy(0, f64::NAN).is_err());
    assert!(bessel_jy(2, 1.0).is_err());
    assert!(modbessel_k(0, 0.0).is_err());
    assert!(hankel1(0, f64::INFINITY).is_err());
}
